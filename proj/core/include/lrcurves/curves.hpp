#pragma once

#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lrcurves/blocks.hpp"
#include "lrcurves/quadrature.hpp"

namespace lrc {

// R-independent kernel matrices of one block plus the rotor diagonal;
// W(R) = diag(rotor) + k5/R^5 + k6/R^6.
struct BlockKernels {
  Eigen::MatrixXd k5;
  Eigen::MatrixXd k6;
  Eigen::VectorXd rotor;  // B * N(N+1)
};

// Assemble both kernels for a block. Verifies the quadrature convergence
// gate: recomputing K6 with twice the nodes must agree to 1e-8 relative,
// else throws ("quadrature non-convergence").
BlockKernels build_kernels(const SymmetryBlock& block,
                           const SpeciesData& species,
                           const QuadratureRule& rule, int nmax);

// Variant with the second-order kernel zeroed (quadrupole-only studies).
BlockKernels build_kernels_quadrupole_only(const SymmetryBlock& block,
                                           const SpeciesData& species);

// W_ij(R) = delta_ij B N_i(N_i+1) + K5_ij/R^5 + K6_ij/R^6. Throws on R <= 0.
Eigen::MatrixXd assemble_W(const BlockKernels& kernels, double R);

struct CurveLabel {
  int p = 0;       // 1-based index, increasing with asymptotic energy
  int abs_mj = 0;
  int n_asym = 0;  // dominant N character at the largest R
};

// Adiabatic curves on a descending R grid, continuity-tracked by maximum
// eigenvector overlap from the asymptotic region inward.
struct CurveSweep {
  std::vector<double> r_grid;            // descending
  Eigen::MatrixXd energies;              // (nR x ncurves), tracked columns
  std::vector<Eigen::MatrixXd> vectors;  // per R, columns follow curves
  std::vector<CurveLabel> labels;
  double min_overlap = 1.0;  // worst tracking overlap encountered
};

// Diagonalize W(R) over the grid (must be sorted descending). Curves are
// matched between adjacent radii by maximum |<v|v'>|; when the best overlap
// drops below 0.5 the interval is refined by midpoint insertion (depth limit
// 16) and an error is thrown if the assignment stays ambiguous.
CurveSweep eigensweep(const SymmetryBlock& block, const BlockKernels& kernels,
                      const std::vector<double>& r_grid);

// Diabatic state: fixed-N eigenvector of the K5 restriction with its C5
// (K5 eigenvalue) and C6 (K6 expectation). Diagonal energy law:
// B N(N+1) + C5/R^5 + C6/R^6.
struct DiabaticState {
  int p = 0;  // 1-based within the block, ordered by (rotor, C5, C6)
  int n = 0;
  double c5 = 0.0;
  double c6 = 0.0;
  Eigen::VectorXd coeff;  // in the block basis
};

struct DiabaticBasis {
  const SymmetryBlock* block = nullptr;
  double b_rot = 0.0;
  std::vector<DiabaticState> states;
  Eigen::MatrixXd c5_matrix;  // coeff^T K5 coeff (off-diagonals = C5')
  Eigen::MatrixXd c6_matrix;  // coeff^T K6 coeff (off-diagonals = C6')

  double asymptote(int i) const {
    return b_rot * states[i].n * (states[i].n + 1.0);
  }
  double diagonal_energy(int i, double r) const {
    const double r5 = std::pow(r, 5);
    return asymptote(i) + states[i].c5 / r5 + states[i].c6 / (r5 * r);
  }
};

// Per N manifold, eigendecomposition of the K5 restriction; K5-degenerate
// clusters (relative gap < 1e-10) are resolved by diagonalizing the K6
// restriction inside the cluster. States ordered by C5 then C6 within a
// manifold; p numbers states by (asymptote, C5, C6) across the block.
DiabaticBasis build_diabatic(const SymmetryBlock& block,
                             const BlockKernels& kernels, double b_rot);

// Full W(R) in the diabatic basis; unitarily equivalent to assemble_W.
Eigen::MatrixXd diabatic_matrix(const DiabaticBasis& basis, double R);

// Logarithmic descending grid from r_max to r_min.
std::vector<double> log_grid(double r_min, double r_max, int points);

// One densification pass: inserts extra points around local minima of
// adjacent-curve gaps (avoided crossings) found in a coarse sweep.
std::vector<double> adaptive_grid(const SymmetryBlock& block,
                                  const BlockKernels& kernels, double r_min,
                                  double r_max, int points);

// Nmax convergence study: eigensweep at Nmax in {N*+2, N*+4, N*+6};
// per-curve max shifts below the B N*(N*+1) ceiling, R <= 40 excluded.
struct ConvergenceEntry {
  CurveLabel label;
  double max_shift_step1 = 0.0;  // N*+2 -> N*+4, hartree
  double max_shift_step2 = 0.0;  // N*+4 -> N*+6, hartree
  double max_shift_over_spacing = 0.0;  // step2 shift / local level spacing
};

struct ConvergenceReport {
  int n_star = 0;
  std::vector<int> nmax_values;
  std::vector<ConvergenceEntry> entries;
};

ConvergenceReport convergence_study(int abs_mj, Parity parity,
                                    Reflection reflection,
                                    const std::vector<double>& r_grid,
                                    int n_star, const SpeciesData& species,
                                    const QuadratureRule& rule);

}  // namespace lrc
