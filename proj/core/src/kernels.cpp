#include "lrcurves/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "lrcurves/angular.hpp"

namespace lrc {
namespace {

double fact(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

CgTable& cgc() {
  thread_local CgTable table;
  return table;
}

// (1+M)!(1-M)! for M in {-1,0,1}
double f11(int mm) { return fact(1 + mm) * fact(1 - mm); }

bool selection_ok(const BasisState& a, const BasisState& b) {
  return a.m + a.lambda == b.m + b.lambda && std::abs(a.n - b.n) <= 2 &&
         (a.n - b.n) % 2 == 0;
}

}  // namespace

double f_prefactor(int la, int lb, int mm) {
  const double sign = (lb % 2 == 0) ? 1.0 : -1.0;
  return sign * fact(la + lb) /
         std::sqrt(fact(la + mm) * fact(la - mm) * fact(lb + mm) *
                   fact(lb - mm));
}

double vqq_kernel(const BasisState& s1, const BasisState& s2,
                  const SpeciesData& species) {
  if (!selection_ok(s1, s2)) return 0.0;
  auto& cg = cgc();
  const int l = species.atom.l;
  const int n1 = s1.n, n2 = s2.n;
  // The sqrt((2N2+1)/(2N1+1)) factor comes with the dimer quadrupole matrix
  // element; dropping it breaks hermiticity.
  const double pref = -24.0 * cg(n2, 0, 2, 0, n1, 0) * cg(l, 0, 2, 0, l, 0) *
                      species.dimer.q20 * species.atom.r2_expect *
                      std::sqrt((2.0 * n2 + 1.0) / (2.0 * n1 + 1.0));
  if (pref == 0.0) return 0.0;
  double sum = 0.0;
  for (int mm = -2; mm <= 2; ++mm)
    sum += cg(n2, s2.m, 2, mm, n1, s1.m) *
           cg(1, s2.lambda, 2, -mm, 1, s1.lambda) /
           (fact(2 + mm) * fact(2 - mm));
  return pref * sum;
}

double vdd2_kernel(const BasisState& s1, const BasisState& s2,
                   const SpeciesData& species, const QuadratureRule& rule,
                   int nmax) {
  if (!selection_ok(s1, s2)) return 0.0;
  auto& cg = cgc();
  const int l = species.atom.l;
  const int n1 = s1.n, m1 = s1.m, l1 = s1.lambda;
  const int n2 = s2.n, m2 = s2.m, l2 = s2.lambda;

  const std::size_t nq = rule.nodes.size();
  std::vector<double> apar(nq), aperp(nq), acore(nq);
  for (std::size_t i = 0; i < nq; ++i) {
    const ImagFreq w{rule.nodes[i]};
    apar[i] = dimer_polarizability(species.dimer, Polarization::kParallel, w);
    aperp[i] =
        dimer_polarizability(species.dimer, Polarization::kPerpendicular, w);
    acore[i] = core_polarizability(species.atom, w);
  }

  const int np_lo = std::max(std::abs(n1 - 1), std::abs(n2 - 1));
  const int np_hi = std::min({n1, n2, nmax}) + 1;
  const double nfac = std::sqrt((2.0 * n1 + 1.0) * (2.0 * n2 + 1.0));
  const double two_over_pi = 2.0 / std::numbers::pi;

  double tot = 0.0;
  for (int ma = -1; ma <= 1; ++ma) {
    for (int mb = -1; mb <= 1; ++mb) {
      const int mp = m1 - ma;
      if (m2 - mb != mp) continue;
      const int lp_proj = l1 + ma;
      if (l2 + mb != lp_proj) continue;
      for (int np = np_lo; np <= np_hi; ++np) {
        if (std::abs(mp) > np) continue;
        const double rc =
            cg(n1, m1, 1, -ma, np, mp) * cg(n2, m2, 1, -mb, np, mp);
        if (rc == 0.0) continue;
        const double dpar = cg(n1, 0, 1, 0, np, 0) * cg(n2, 0, 1, 0, np, 0);
        const double dperp =
            2.0 * cg(n1, 0, 1, 1, np, 1) * cg(n2, 0, 1, 1, np, 1);
        const double geom =
            3.0 / (f11(ma) * f11(mb)) * nfac / (2.0 * np + 1.0) * rc;
        for (const auto& ch : species.atom.channels) {
          if (std::abs(lp_proj) > ch.target_l) continue;
          const double acg = (2.0 * l + 1.0) / (2.0 * ch.target_l + 1.0) *
                             cg(l, l1, 1, ma, ch.target_l, lp_proj) *
                             cg(l, l2, 1, mb, ch.target_l, lp_proj);
          if (acg == 0.0) continue;
          const double mu = ch.dipole *
                            cg(l, 0, 1, 0, ch.target_l, 0) / std::sqrt(3.0);
          double integ = 0.0;
          for (std::size_t i = 0; i < nq; ++i) {
            const double om = rule.nodes[i];
            integ += rule.weights[i] * (dpar * apar[i] + dperp * aperp[i]) *
                     (2.0 * ch.delta_e * mu * mu /
                      (ch.delta_e * ch.delta_e + om * om));
          }
          double term = two_over_pi * integ;
          if (ch.delta_e < 0.0) {
            // Downward channel: pole term with the dimer polarizability
            // evaluated at the real transition energy.
            const RealFreq z{ch.delta_e};
            term += 4.0 *
                    (dpar * dimer_polarizability(species.dimer,
                                                 Polarization::kParallel, z) +
                     dperp * dimer_polarizability(
                                 species.dimer, Polarization::kPerpendicular,
                                 z)) *
                    mu * mu;
          }
          tot -= geom * acg * term;
        }
      }
    }
  }

  if (m1 == m2 && l1 == l2 && !species.atom.core_channels.empty()) {
    for (int ma = -1; ma <= 1; ++ma) {
      const int mp = m1 + ma;
      for (int np = np_lo; np <= np_hi; ++np) {
        if (std::abs(mp) > np) continue;
        const double rc =
            cg(n1, m1, 1, ma, np, mp) * cg(n2, m2, 1, ma, np, mp);
        if (rc == 0.0) continue;
        const double dpar = cg(n1, 0, 1, 0, np, 0) * cg(n2, 0, 1, 0, np, 0);
        const double dperp =
            2.0 * cg(n1, 0, 1, 1, np, 1) * cg(n2, 0, 1, 1, np, 1);
        double integ = 0.0;
        for (std::size_t i = 0; i < nq; ++i)
          integ += rule.weights[i] * (dpar * apar[i] + dperp * aperp[i]) *
                   acore[i];
        tot -= two_over_pi / (f11(ma) * f11(ma)) * nfac / (2.0 * np + 1.0) *
               rc * integ;
      }
    }
  }
  return tot;
}

}  // namespace lrc
