#include "lrcurves/curves.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

namespace lrc {
namespace {

double symmetrized_kernel(const SymmetrizedState& a, const SymmetrizedState& b,
                          auto&& kfun) {
  double v = 0.0;
  for (const auto& ta : a.terms)
    for (const auto& tb : b.terms)
      v += ta.coef * tb.coef * kfun(ta.state, tb.state);
  return v;
}

Eigen::MatrixXd kernel_matrix(const SymmetryBlock& block, auto&& kfun) {
  const int n = block.size();
  Eigen::MatrixXd k(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      const double v = symmetrized_kernel(block.basis[i], block.basis[j], kfun);
      k(i, j) = v;
      k(j, i) = v;
    }
  return k;
}

Eigen::VectorXd rotor_diagonal(const SymmetryBlock& block, double b_rot) {
  Eigen::VectorXd rot(block.size());
  for (int i = 0; i < block.size(); ++i) {
    const double n = block.basis[i].n();
    rot(i) = b_rot * n * (n + 1.0);
  }
  return rot;
}

// Deterministic sign convention: largest-magnitude component positive.
void fix_signs(Eigen::MatrixXd& v) {
  for (int c = 0; c < v.cols(); ++c) {
    int imax = 0;
    v.col(c).cwiseAbs().maxCoeff(&imax);
    if (v(imax, c) < 0) v.col(c) = -v.col(c);
  }
}

struct Eig {
  Eigen::VectorXd e;
  Eigen::MatrixXd v;
};

Eig solve(const BlockKernels& kernels, double r) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(assemble_W(kernels, r));
  Eig out{es.eigenvalues(), es.eigenvectors()};
  fix_signs(out.v);
  return out;
}

// Greedy global max-overlap assignment; returns permutation new_col[k] and
// the worst accepted overlap.
std::pair<std::vector<int>, double> match_columns(const Eigen::MatrixXd& prev,
                                                  const Eigen::MatrixXd& cur) {
  const int n = static_cast<int>(prev.cols());
  Eigen::MatrixXd ov = (prev.transpose() * cur).cwiseAbs();
  std::vector<int> assign(n, -1);
  std::vector<bool> row_used(n, false), col_used(n, false);
  double worst = 1.0;
  for (int pick = 0; pick < n; ++pick) {
    double best = -1.0;
    int bi = -1, bj = -1;
    for (int i = 0; i < n; ++i) {
      if (row_used[i]) continue;
      for (int j = 0; j < n; ++j) {
        if (col_used[j]) continue;
        if (ov(i, j) > best) {
          best = ov(i, j);
          bi = i;
          bj = j;
        }
      }
    }
    assign[bi] = bj;
    row_used[bi] = true;
    col_used[bj] = true;
    worst = std::min(worst, best);
  }
  return {assign, worst};
}

constexpr int kRefineDepth = 16;
constexpr double kMinOverlap = 0.5;

// Track from vectors `prev` (at r_from) to radius r_to, refining by midpoint
// insertion when the overlap assignment is ambiguous.
Eig track_step(const BlockKernels& kernels, const Eigen::MatrixXd& prev,
               double r_from, double r_to, int depth, double& min_overlap) {
  Eig cur = solve(kernels, r_to);
  auto [assign, worst] = match_columns(prev, cur.v);
  if (worst < kMinOverlap) {
    if (depth >= kRefineDepth)
      throw std::runtime_error(
          "eigensweep: tracking ambiguous (overlap < 0.5 at refinement "
          "limit)");
    const double r_mid = std::sqrt(r_from * r_to);
    Eig mid = track_step(kernels, prev, r_from, r_mid, depth + 1, min_overlap);
    return track_step(kernels, mid.v, r_mid, r_to, depth + 1, min_overlap);
  }
  min_overlap = std::min(min_overlap, worst);
  Eig out;
  out.e.resize(cur.e.size());
  out.v.resizeLike(cur.v);
  for (int k = 0; k < cur.e.size(); ++k) {
    out.e(k) = cur.e(assign[k]);
    out.v.col(k) = cur.v.col(assign[k]);
  }
  return out;
}

}  // namespace

Eigen::MatrixXd assemble_W(const BlockKernels& kernels, double R) {
  if (R <= 0.0) throw std::invalid_argument("assemble_W: R must be > 0");
  const double r5 = std::pow(R, 5);
  Eigen::MatrixXd w = kernels.k5 / r5 + kernels.k6 / (r5 * R);
  w.diagonal() += kernels.rotor;
  return w;
}

BlockKernels build_kernels(const SymmetryBlock& block,
                           const SpeciesData& species,
                           const QuadratureRule& rule, int nmax) {
  BlockKernels k;
  k.k5 = kernel_matrix(block, [&](const BasisState& a, const BasisState& b) {
    return vqq_kernel(a, b, species);
  });
  k.k6 = kernel_matrix(block, [&](const BasisState& a, const BasisState& b) {
    return vdd2_kernel(a, b, species, rule, nmax);
  });
  k.rotor = rotor_diagonal(block, species.dimer.b_rot);

  if (rule.omega_scale > 0.0 && block.size() > 0) {
    const QuadratureRule dense = default_quadrature(
        rule.omega_scale, 2 * static_cast<int>(rule.nodes.size()));
    const Eigen::MatrixXd k6d =
        kernel_matrix(block, [&](const BasisState& a, const BasisState& b) {
          return vdd2_kernel(a, b, species, dense, nmax);
        });
    const double scale = k.k6.cwiseAbs().maxCoeff();
    if (scale > 0.0 &&
        (k.k6 - k6d).cwiseAbs().maxCoeff() > 1e-8 * scale)
      throw std::runtime_error(
          "build_kernels: quadrature non-convergence (doubling the node "
          "count moved K6 by more than 1e-8 relative)");
  }
  return k;
}

BlockKernels build_kernels_quadrupole_only(const SymmetryBlock& block,
                                           const SpeciesData& species) {
  BlockKernels k;
  k.k5 = kernel_matrix(block, [&](const BasisState& a, const BasisState& b) {
    return vqq_kernel(a, b, species);
  });
  k.k6 = Eigen::MatrixXd::Zero(block.size(), block.size());
  k.rotor = rotor_diagonal(block, species.dimer.b_rot);
  return k;
}

CurveSweep eigensweep(const SymmetryBlock& block, const BlockKernels& kernels,
                      const std::vector<double>& r_grid) {
  if (r_grid.empty()) throw std::invalid_argument("eigensweep: empty grid");
  for (std::size_t i = 1; i < r_grid.size(); ++i)
    if (r_grid[i] >= r_grid[i - 1])
      throw std::invalid_argument("eigensweep: grid must descend");

  const int n = block.size();
  CurveSweep sweep;
  sweep.r_grid = r_grid;
  sweep.energies.resize(static_cast<int>(r_grid.size()), n);
  sweep.vectors.reserve(r_grid.size());
  if (n == 0) return sweep;

  Eig cur = solve(kernels, r_grid[0]);
  sweep.energies.row(0) = cur.e.transpose();
  sweep.vectors.push_back(cur.v);

  sweep.labels.resize(n);
  for (int k = 0; k < n; ++k) {
    int imax = 0;
    cur.v.col(k).cwiseAbs().maxCoeff(&imax);
    sweep.labels[k] = {k + 1, block.abs_mj, block.basis[imax].n()};
  }

  for (std::size_t i = 1; i < r_grid.size(); ++i) {
    cur = track_step(kernels, cur.v, r_grid[i - 1], r_grid[i], 0,
                     sweep.min_overlap);
    sweep.energies.row(static_cast<int>(i)) = cur.e.transpose();
    sweep.vectors.push_back(cur.v);
  }
  return sweep;
}

DiabaticBasis build_diabatic(const SymmetryBlock& block,
                             const BlockKernels& kernels, double b_rot) {
  DiabaticBasis basis;
  basis.block = &block;
  basis.b_rot = b_rot;
  const int n = block.size();

  int start = 0;
  while (start < n) {
    const int nval = block.basis[start].n();
    int stop = start;
    while (stop < n && block.basis[stop].n() == nval) ++stop;
    const int dim = stop - start;

    const Eigen::MatrixXd k5r = kernels.k5.block(start, start, dim, dim);
    const Eigen::MatrixXd k6r = kernels.k6.block(start, start, dim, dim);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(k5r);
    Eigen::VectorXd e = es.eigenvalues();
    Eigen::MatrixXd v = es.eigenvectors();

    // Resolve K5 degeneracies inside K6.
    const double scale = std::max(1.0, e.cwiseAbs().maxCoeff());
    int c0 = 0;
    while (c0 < dim) {
      int c1 = c0;
      while (c1 + 1 < dim && e(c1 + 1) - e(c1) < 1e-10 * scale) ++c1;
      if (c1 > c0) {
        const int cd = c1 - c0 + 1;
        const Eigen::MatrixXd sub = v.middleCols(c0, cd);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es6(
            sub.transpose() * k6r * sub);
        v.middleCols(c0, cd) = sub * es6.eigenvectors();
      }
      c0 = c1 + 1;
    }
    fix_signs(v);

    std::vector<DiabaticState> manifold(dim);
    for (int c = 0; c < dim; ++c) {
      DiabaticState st;
      st.n = nval;
      st.c5 = e(c);
      st.c6 = v.col(c).dot(k6r * v.col(c));
      st.coeff = Eigen::VectorXd::Zero(n);
      st.coeff.segment(start, dim) = v.col(c);
      manifold[c] = std::move(st);
    }
    std::sort(manifold.begin(), manifold.end(),
              [](const DiabaticState& a, const DiabaticState& b) {
                return a.c5 != b.c5 ? a.c5 < b.c5 : a.c6 < b.c6;
              });
    for (auto& st : manifold) basis.states.push_back(std::move(st));
    start = stop;
  }

  std::sort(basis.states.begin(), basis.states.end(),
            [&](const DiabaticState& a, const DiabaticState& b) {
              const double ea = b_rot * a.n * (a.n + 1.0);
              const double eb = b_rot * b.n * (b.n + 1.0);
              if (ea != eb) return ea < eb;
              if (a.c5 != b.c5) return a.c5 < b.c5;
              return a.c6 < b.c6;
            });
  for (int i = 0; i < n; ++i) basis.states[i].p = i + 1;

  Eigen::MatrixXd u(n, n);
  for (int i = 0; i < n; ++i) u.col(i) = basis.states[i].coeff;
  basis.c5_matrix = u.transpose() * kernels.k5 * u;
  basis.c6_matrix = u.transpose() * kernels.k6 * u;
  return basis;
}

Eigen::MatrixXd diabatic_matrix(const DiabaticBasis& basis, double R) {
  if (R <= 0.0) throw std::invalid_argument("diabatic_matrix: R must be > 0");
  const double r5 = std::pow(R, 5);
  const int n = static_cast<int>(basis.states.size());
  Eigen::MatrixXd w = basis.c5_matrix / r5 + basis.c6_matrix / (r5 * R);
  for (int i = 0; i < n; ++i) w(i, i) += basis.asymptote(i);
  return w;
}

std::vector<double> log_grid(double r_min, double r_max, int points) {
  if (r_min <= 0 || r_max <= r_min || points < 2)
    throw std::invalid_argument("log_grid: bad range");
  std::vector<double> g(points);
  const double lmax = std::log(r_max), lmin = std::log(r_min);
  for (int i = 0; i < points; ++i)
    g[i] = std::exp(lmax + (lmin - lmax) * i / (points - 1.0));
  return g;
}

std::vector<double> adaptive_grid(const SymmetryBlock& block,
                                  const BlockKernels& kernels, double r_min,
                                  double r_max, int points) {
  std::vector<double> base = log_grid(r_min, r_max, points);
  if (block.size() < 2) return base;
  const CurveSweep coarse = eigensweep(block, kernels, base);

  std::set<double, std::greater<double>> grid(base.begin(), base.end());
  const int nr = static_cast<int>(base.size());
  for (int c = 0; c + 1 < block.size(); ++c) {
    for (int t = 1; t + 1 < nr; ++t) {
      const auto gap = [&](int i) {
        return std::abs(coarse.energies(i, c + 1) - coarse.energies(i, c));
      };
      if (gap(t) < gap(t - 1) && gap(t) < gap(t + 1)) {
        const double lo = base[t + 1], hi = base[t - 1];
        for (int k = 1; k <= 6; ++k)
          grid.insert(hi * std::pow(lo / hi, k / 7.0));
      }
    }
  }
  return {grid.begin(), grid.end()};
}

ConvergenceReport convergence_study(int abs_mj, Parity parity,
                                    Reflection reflection,
                                    const std::vector<double>& r_grid,
                                    int n_star, const SpeciesData& species,
                                    const QuadratureRule& rule) {
  if (n_star < 0) throw std::invalid_argument("convergence_study: N* < 0");
  ConvergenceReport report;
  report.n_star = n_star;
  report.nmax_values = {n_star + 2, n_star + 4, n_star + 6};

  std::vector<CurveSweep> sweeps;
  for (int nmax : report.nmax_values) {
    const SymmetryBlock block = build_block(abs_mj, parity, reflection, nmax);
    const BlockKernels kernels = build_kernels(block, species, rule, nmax);
    sweeps.push_back(eigensweep(block, kernels, r_grid));
  }

  const double ceiling = species.dimer.b_rot * n_star * (n_star + 1.0);
  const CurveSweep& s0 = sweeps[0];
  const CurveSweep& s1 = sweeps[1];
  const CurveSweep& s2 = sweeps[2];
  const int nr = static_cast<int>(r_grid.size());
  // Tracked columns are ordered by energy at the largest R in every run, so
  // column a describes the same asymptotic state in all three sweeps.
  for (int a = 0; a < s0.energies.cols(); ++a) {
    if (s0.labels[a].n_asym > n_star) continue;
    ConvergenceEntry entry;
    entry.label = s2.labels[a];
    for (int t = 0; t < nr; ++t) {
      if (r_grid[t] <= 40.0) continue;  // below validity, excluded
      if (s2.energies(t, a) >= ceiling) continue;
      const double shift1 = std::abs(s1.energies(t, a) - s0.energies(t, a));
      const double shift2 = std::abs(s2.energies(t, a) - s1.energies(t, a));
      entry.max_shift_step1 = std::max(entry.max_shift_step1, shift1);
      entry.max_shift_step2 = std::max(entry.max_shift_step2, shift2);
      if (r_grid[t] >= 45.0) {
        double spacing = std::numeric_limits<double>::infinity();
        for (int c = 0; c < s2.energies.cols(); ++c)
          if (c != a)
            spacing = std::min(
                spacing, std::abs(s2.energies(t, c) - s2.energies(t, a)));
        if (spacing > 0)
          entry.max_shift_over_spacing =
              std::max(entry.max_shift_over_spacing, shift2 / spacing);
      }
    }
    report.entries.push_back(entry);
  }
  return report;
}

}  // namespace lrc
