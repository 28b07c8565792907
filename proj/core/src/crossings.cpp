#include "lrcurves/crossings.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "lrcurves/constants.hpp"

namespace lrc {
namespace {

constexpr double kBisectTol = 1e-3;  // bohr
constexpr double kClamp = 1e6;
constexpr double kIndeterminate = 1e-12;  // hartree

double diag_diff(const DiabaticBasis& basis, int i, int j, double r) {
  return basis.diagonal_energy(i, r) - basis.diagonal_energy(j, r);
}

template <class F>
double bisect(F&& f, double lo, double hi) {
  double flo = f(lo);
  while (hi - lo > kBisectTol) {
    const double mid = 0.5 * (lo + hi);
    const double fmid = f(mid);
    if ((flo < 0) == (fmid < 0)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

std::vector<CrossingEvent> find_crossings(const DiabaticBasis& basis,
                                          double r_lo, double r_hi,
                                          int scan_points) {
  if (r_lo < 40.0 || r_hi > 500.0 || r_lo >= r_hi)
    throw std::invalid_argument("find_crossings: range must lie in [40,500]");
  const std::vector<double> grid = log_grid(r_lo, r_hi, scan_points);

  std::vector<CrossingEvent> events;
  const int n = static_cast<int>(basis.states.size());
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const auto& si = basis.states[i];
      const auto& sj = basis.states[j];
      if (basis.asymptote(i) == basis.asymptote(j) && si.c5 == sj.c5 &&
          si.c6 == sj.c6)
        continue;  // identical diagonal laws never cross
      for (std::size_t t = 1; t < grid.size(); ++t) {
        const double fa = diag_diff(basis, i, j, grid[t - 1]);
        const double fb = diag_diff(basis, i, j, grid[t]);
        if (fa == 0.0 || (fa < 0) == (fb < 0)) continue;
        CrossingEvent ev;
        ev.p = si.p;
        ev.r = sj.p;
        ev.r0 = bisect([&](double r) { return diag_diff(basis, i, j, r); },
                       grid[t], grid[t - 1]);
        const double r5 = std::pow(ev.r0, 5);
        ev.c5_prime = basis.c5_matrix(i, j);
        ev.c6_prime = basis.c6_matrix(i, j);
        ev.w_pr = ev.c5_prime / r5 + ev.c6_prime / (r5 * ev.r0);
        const double dc5 = si.c5 - sj.c5;
        const double dc6 = si.c6 - sj.c6;
        // dW_pp/dR = -5 C5/R^6 - 6 C6/R^7
        ev.slope_diff = std::abs(-5.0 * dc5 / (r5 * ev.r0) -
                                 6.0 * dc6 / (r5 * ev.r0 * ev.r0));
        events.push_back(ev);
      }
    }
  }
  std::sort(events.begin(), events.end(),
            [](const CrossingEvent& a, const CrossingEvent& b) {
              if (a.r0 != b.r0) return a.r0 > b.r0;
              return std::pair(a.p, a.r) < std::pair(b.p, b.r);
            });
  return events;
}

double channel_velocity(const DiabaticBasis& basis, int p, double R, double T,
                        const SpeciesData& species) {
  if (T < 0) throw std::invalid_argument("channel_velocity: T < 0");
  const int i = p - 1;
  if (i < 0 || i >= static_cast<int>(basis.states.size()))
    throw std::invalid_argument("channel_velocity: bad state index");
  const double drop = basis.asymptote(i) - basis.diagonal_energy(i, R);
  const double radicand = (2.0 * drop + 3.0 * kBoltzmannAu * T);
  if (radicand < 0)
    throw std::runtime_error(
        "channel_velocity: classically forbidden at this R");
  return std::sqrt(radicand / species.reduced_mass);
}

double lz_probability(double w_pr, double slope_diff, double v_p) {
  if (slope_diff == 0.0)
    throw std::invalid_argument(
        "lz_probability: parallel curves, LZ model inapplicable");
  if (v_p <= 0.0) throw std::invalid_argument("lz_probability: v_p <= 0");
  const double gamma = w_pr * w_pr / (v_p * slope_diff);
  return std::exp(-2.0 * std::numbers::pi * gamma);
}

std::vector<CrossingEvent> landau_zener_events(
    const std::vector<CrossingEvent>& geometric, const DiabaticBasis& basis,
    const SpeciesData& species, double T) {
  std::vector<CrossingEvent> out;
  for (const CrossingEvent& geo : geometric) {
    const int ip = geo.p - 1, ir = geo.r - 1;
    const bool p_is_upper =
        basis.asymptote(ip) != basis.asymptote(ir)
            ? basis.asymptote(ip) > basis.asymptote(ir)
            : basis.states[ip].c5 > basis.states[ir].c5;
    for (const bool entrance_p : {true, false}) {
      CrossingEvent ev = geo;
      if (!entrance_p) std::swap(ev.p, ev.r);
      ev.temperature = T;
      ev.entrance_is_upper = entrance_p ? p_is_upper : !p_is_upper;
      ev.v_entrance = channel_velocity(basis, ev.p, ev.r0, T, species);
      ev.gamma = ev.w_pr * ev.w_pr / (ev.v_entrance * ev.slope_diff);
      ev.probability = lz_probability(ev.w_pr, ev.slope_diff, ev.v_entrance);
      out.push_back(ev);
    }
  }
  return out;
}

NormalizedCoupling normalized_coupling(const DiabaticBasis& basis, int p,
                                       int r, double R) {
  if (R <= 0) throw std::invalid_argument("normalized_coupling: R <= 0");
  const int i = p - 1, j = r - 1;
  const double r5 = std::pow(R, 5);
  const double num =
      basis.c5_matrix(i, j) / r5 + basis.c6_matrix(i, j) / (r5 * R);
  const double den = diag_diff(basis, i, j, R);
  NormalizedCoupling out;
  if (std::abs(num) < kIndeterminate && std::abs(den) < kIndeterminate) {
    out.indeterminate = true;
    return out;
  }
  if (den == 0.0 || std::abs(num) >= kClamp * std::abs(den)) {
    const double sign = (num >= 0) == (den >= 0) ? 1.0 : -1.0;
    out.value = sign * kClamp;
    out.resonant = true;
    return out;
  }
  out.value = num / den;
  return out;
}

ValidityReport validity_radius(const DiabaticBasis& basis, int p,
                               double epsilon,
                               const std::vector<double>& r_grid) {
  if (epsilon <= 0) throw std::invalid_argument("validity_radius: eps <= 0");
  if (r_grid.size() < 2 || r_grid.front() <= r_grid.back())
    throw std::invalid_argument("validity_radius: need a descending grid");
  const int i = p - 1;
  const int n = static_cast<int>(basis.states.size());
  const int nr = static_cast<int>(r_grid.size());

  ValidityReport report;
  report.state = {basis.states[i].p, basis.block->abs_mj, basis.states[i].n};
  report.epsilon = epsilon;

  // max_r |W_bar| per grid point, and denominator sign-change radii.
  std::vector<double> maxw(nr, 0.0);
  std::vector<double> resonances;
  for (int j = 0; j < n; ++j) {
    if (j == i) continue;
    for (int t = 0; t < nr; ++t) {
      const NormalizedCoupling w =
          normalized_coupling(basis, p, basis.states[j].p, r_grid[t]);
      if (!w.indeterminate)
        maxw[t] = std::max(maxw[t], std::abs(w.value));
      if (t > 0) {
        const double da = diag_diff(basis, i, j, r_grid[t - 1]);
        const double db = diag_diff(basis, i, j, r_grid[t]);
        if (da != 0.0 && (da < 0) != (db < 0))
          resonances.push_back(
              bisect([&](double r) { return diag_diff(basis, i, j, r); },
                     r_grid[t], r_grid[t - 1]));
      }
    }
  }
  std::sort(resonances.begin(), resonances.end(), std::greater<>());

  int t = 0;
  while (t < nr) {
    if (maxw[t] < epsilon) {
      ++t;
      continue;
    }
    int tb = t;
    while (tb + 1 < nr && maxw[tb + 1] >= epsilon) ++tb;
    const bool sustained = tb == nr - 1;
    const bool has_resonance =
        std::any_of(resonances.begin(), resonances.end(), [&](double r) {
          return r <= r_grid[t] && r >= r_grid[tb];
        });
    if (sustained || !has_resonance) {
      report.r_star = r_grid[t];
      report.criterion_met = true;
      break;
    }
    t = tb + 1;  // resonant spike that recedes: not the validity onset
  }
  if (!report.criterion_met) report.r_star = r_grid.back();

  for (double r : resonances)
    if (r > report.r_star) report.resonances.push_back(r);
  return report;
}

}  // namespace lrc
