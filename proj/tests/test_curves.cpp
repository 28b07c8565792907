#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include <doctest.h>

#include <Eigen/Dense>

#include "lrcurves/blocks.hpp"
#include "lrcurves/curves.hpp"
#include "lrcurves/species.hpp"

using namespace lrc;

namespace {

SpeciesData toy() {
  static const SpeciesData s =
      load_species(std::string(LRC_DATA_DIR) + "/cs2_cs_minimal.json");
  return s;
}

QuadratureRule toy_rule() { return default_quadrature(default_omega_scale(toy()), 60); }

// <a|W(R)|b> for symmetrized states from (possibly different) blocks.
double sym_element(const SymmetrizedState& a, const SymmetrizedState& b,
                   const SpeciesData& sp, const QuadratureRule& rule,
                   int nmax, double r) {
  const double r5 = std::pow(r, 5);
  double v = 0.0;
  for (const auto& ta : a.terms)
    for (const auto& tb : b.terms)
      v += ta.coef * tb.coef *
           (vqq_kernel(ta.state, tb.state, sp) / r5 +
            vdd2_kernel(ta.state, tb.state, sp, rule, nmax) / (r5 * r));
  return v;
}

}  // namespace

TEST_CASE("block sizes per manifold and the union invariant") {
  const int nmax = 6;
  // Sigma+: one state at N = 0, two per N >= 1
  const auto sp_even = build_block(0, Parity::kEven, Reflection::kPlus, nmax);
  CHECK(sp_even.size() == 1 + 2 + 2 + 2);  // N = 0, 2, 4, 6
  const auto sp_odd = build_block(0, Parity::kOdd, Reflection::kPlus, nmax);
  CHECK(sp_odd.size() == 2 + 2 + 2);  // N = 1, 3, 5
  // Sigma-: none at N = 0, one per N >= 1
  CHECK(build_block(0, Parity::kEven, Reflection::kMinus, nmax).size() == 3);
  CHECK(build_block(0, Parity::kOdd, Reflection::kMinus, nmax).size() == 3);
  // Pi: one at N = 0, two at N = 1, three per N >= 2
  const auto pi_even = build_block(1, Parity::kEven, Reflection::kPlus, nmax);
  CHECK(pi_even.size() == 1 + 3 + 3 + 3);
  const auto pi_odd = build_block(1, Parity::kOdd, Reflection::kPlus, nmax);
  CHECK(pi_odd.size() == 2 + 3 + 3);
  // beyond the largest reachable m_J the block is empty
  CHECK(build_block(nmax + 2, Parity::kEven, Reflection::kPlus, nmax).size() ==
        0);

  // all blocks together exhaust the 3*(nmax+1)^2 product states
  int total = 0;
  for (int mj = 0; mj <= nmax + 1; ++mj) {
    for (auto par : {Parity::kEven, Parity::kOdd}) {
      total += build_block(mj, par, Reflection::kPlus, nmax).size();
      if (mj == 0)
        total += build_block(mj, par, Reflection::kMinus, nmax).size();
      else  // m_J < 0 partners double the count
        total += build_block(mj, par, Reflection::kPlus, nmax).size();
    }
  }
  CHECK(total == 3 * (nmax + 1) * (nmax + 1));
}

TEST_CASE("symmetrized states are normalized and labeled") {
  const auto blk = build_block(0, Parity::kEven, Reflection::kPlus, 4);
  CHECK(blk.label == "Sigma+");
  CHECK(symmetry_label(0, Reflection::kMinus) == "Sigma-");
  CHECK(symmetry_label(2, Reflection::kPlus) == "Delta");
  CHECK(symmetry_label(5, Reflection::kPlus) == "H");
  for (const auto& s : blk.basis) {
    double norm = 0.0;
    for (const auto& t : s.terms) norm += t.coef * t.coef;
    CHECK(std::abs(norm - 1.0) < 1e-14);
    for (const auto& t : s.terms)
      CHECK(t.state.m + t.state.lambda == 0);
  }
}

TEST_CASE("the interaction is exactly block diagonal") {
  const SpeciesData sp = toy();
  const QuadratureRule rule = toy_rule();
  const int nmax = 3;
  std::vector<SymmetryBlock> blocks;
  for (int mj = 0; mj <= 2; ++mj)
    for (auto par : {Parity::kEven, Parity::kOdd})
      for (auto refl : {Reflection::kPlus, Reflection::kMinus}) {
        if (mj != 0 && refl == Reflection::kMinus) continue;
        blocks.push_back(build_block(mj, par, refl, nmax));
      }
  std::mt19937 rng(7);
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    for (std::size_t j = i + 1; j < blocks.size(); ++j) {
      if (blocks[i].size() == 0 || blocks[j].size() == 0) continue;
      for (int trial = 0; trial < 4; ++trial) {
        const auto& a =
            blocks[i].basis[rng() % blocks[i].basis.size()];
        const auto& b =
            blocks[j].basis[rng() % blocks[j].basis.size()];
        CHECK(std::abs(sym_element(a, b, sp, rule, nmax, 50.0)) < 1e-13);
      }
    }
  }
}

TEST_CASE("assemble_W splits into the two inverse-power laws") {
  const SpeciesData sp = toy();
  const auto blk = build_block(0, Parity::kEven, Reflection::kPlus, 4);
  const auto kern = build_kernels(blk, sp, toy_rule(), 4);

  CHECK_THROWS(assemble_W(kern, 0.0));
  CHECK_THROWS(assemble_W(kern, -5.0));

  // far away W is the rotor diagonal
  const Eigen::MatrixXd w_far = assemble_W(kern, 1e6);
  for (int i = 0; i < blk.size(); ++i) {
    CHECK(std::abs(w_far(i, i) - kern.rotor(i)) < 1e-25 + 1e-10 * kern.rotor(i));
  }

  // recover K5 and K6 from two radii
  const double r1 = 50.0, r2 = 80.0;
  const Eigen::MatrixXd v1 =
      assemble_W(kern, r1) - Eigen::MatrixXd(kern.rotor.asDiagonal());
  const Eigen::MatrixXd v2 =
      assemble_W(kern, r2) - Eigen::MatrixXd(kern.rotor.asDiagonal());
  const double a1 = std::pow(r1, -5), b1 = std::pow(r1, -6);
  const double a2 = std::pow(r2, -5), b2 = std::pow(r2, -6);
  const double det = a1 * b2 - a2 * b1;
  const Eigen::MatrixXd k5 = (v1 * b2 - v2 * b1) / det;
  const Eigen::MatrixXd k6 = (v2 * a1 - v1 * a2) / det;
  CHECK((k5 - kern.k5).cwiseAbs().maxCoeff() <
        1e-10 * kern.k5.cwiseAbs().maxCoeff());
  CHECK((k6 - kern.k6).cwiseAbs().maxCoeff() <
        1e-8 * kern.k6.cwiseAbs().maxCoeff());

  SUBCASE("kernel matrices are symmetric") {
    CHECK((kern.k5 - kern.k5.transpose()).cwiseAbs().maxCoeff() <
          1e-12 * kern.k5.cwiseAbs().maxCoeff());
    CHECK((kern.k6 - kern.k6.transpose()).cwiseAbs().maxCoeff() <
          1e-10 * kern.k6.cwiseAbs().maxCoeff());
  }
}

TEST_CASE("eigensweep invariants on a broad grid") {
  const SpeciesData sp = toy();
  const auto blk = build_block(0, Parity::kEven, Reflection::kPlus, 8);
  const auto kern = build_kernels(blk, sp, toy_rule(), 8);
  const auto grid = log_grid(40.0, 1000.0, 120);

  REQUIRE(grid.front() == doctest::Approx(1000.0));
  REQUIRE(grid.back() == doctest::Approx(40.0));
  CHECK(std::is_sorted(grid.rbegin(), grid.rend()));

  const CurveSweep sweep = eigensweep(blk, kern, grid);
  REQUIRE(sweep.energies.rows() == static_cast<int>(grid.size()));
  REQUIRE(sweep.energies.cols() == blk.size());
  CHECK(sweep.min_overlap >= 0.5);

  // labels: p = 1..n, ascending asymptotic energy, N parity even
  for (int c = 0; c < blk.size(); ++c) {
    CHECK(sweep.labels[c].p == c + 1);
    CHECK(sweep.labels[c].abs_mj == 0);
    CHECK(sweep.labels[c].n_asym % 2 == 0);
    if (c > 0)
      CHECK(sweep.energies(0, c) >= sweep.energies(0, c - 1) - 1e-18);
    // asymptote matches the rotor ladder
    CHECK(std::abs(sweep.energies(0, c) -
                   sp.dimer.b_rot * sweep.labels[c].n_asym *
                       (sweep.labels[c].n_asym + 1)) <
          1e-4 * sp.dimer.b_rot);
  }

  // at every radius the tracked columns are an orthonormal eigenbasis
  std::mt19937 rng(3);
  for (int trial = 0; trial < 5; ++trial) {
    const int k = rng() % grid.size();
    const Eigen::MatrixXd& v = sweep.vectors[k];
    const Eigen::MatrixXd gram = v.transpose() * v;
    CHECK((gram - Eigen::MatrixXd::Identity(blk.size(), blk.size()))
              .cwiseAbs()
              .maxCoeff() < 1e-10);
    const Eigen::MatrixXd w = assemble_W(kern, grid[k]);
    for (int c = 0; c < blk.size(); ++c) {
      const Eigen::VectorXd res =
          w * v.col(c) - sweep.energies(k, c) * v.col(c);
      CHECK(res.cwiseAbs().maxCoeff() < 1e-12);
    }
  }
}

TEST_CASE("diabatic basis diagonalizes each N manifold") {
  const SpeciesData sp = toy();
  const auto blk = build_block(0, Parity::kEven, Reflection::kPlus, 8);
  const auto kern = build_kernels(blk, sp, toy_rule(), 8);
  const DiabaticBasis dia = build_diabatic(blk, kern, sp.dimer.b_rot);

  REQUIRE(static_cast<int>(dia.states.size()) == blk.size());

  SUBCASE("p ordering and the isotropic N = 0 state") {
    for (std::size_t i = 0; i < dia.states.size(); ++i) {
      CHECK(dia.states[i].p == static_cast<int>(i) + 1);
      if (dia.states[i].n == 0) CHECK(dia.states[i].c5 == 0.0);
      if (i > 0) {
        const double e0 = dia.asymptote(i - 1), e1 = dia.asymptote(i);
        CHECK(e1 >= e0 - 1e-18);
        if (std::abs(e1 - e0) < 1e-18)
          CHECK(dia.states[i].c5 >= dia.states[i - 1].c5 - 1e-12);
      }
    }
  }

  SUBCASE("transform is orthogonal and traces are preserved") {
    Eigen::MatrixXd u(blk.size(), blk.size());
    for (int i = 0; i < blk.size(); ++i) u.col(i) = dia.states[i].coeff;
    CHECK((u.transpose() * u -
           Eigen::MatrixXd::Identity(blk.size(), blk.size()))
              .cwiseAbs()
              .maxCoeff() < 1e-12);
    CHECK(std::abs(dia.c5_matrix.trace() - kern.k5.trace()) <
          1e-10 * (1.0 + std::abs(kern.k5.trace())));
    CHECK(std::abs(dia.c6_matrix.trace() - kern.k6.trace()) <
          1e-10 * (1.0 + std::abs(kern.k6.trace())));
    // diagonals are the advertised C5 / C6
    for (int i = 0; i < blk.size(); ++i) {
      CHECK(std::abs(dia.c5_matrix(i, i) - dia.states[i].c5) < 1e-12);
      CHECK(std::abs(dia.c6_matrix(i, i) - dia.states[i].c6) < 1e-12);
    }
  }

  SUBCASE("the K5 restriction of each manifold is diagonal") {
    for (std::size_t i = 0; i < dia.states.size(); ++i)
      for (std::size_t j = i + 1; j < dia.states.size(); ++j)
        if (dia.states[i].n == dia.states[j].n)
          CHECK(std::abs(dia.c5_matrix(i, j)) <
                1e-10 * (1.0 + kern.k5.cwiseAbs().maxCoeff()));
  }

  SUBCASE("diabatic_matrix is unitarily equivalent to assemble_W") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> rd(40.0, 400.0);
    for (int trial = 0; trial < 20; ++trial) {
      const double r = rd(rng);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> sa(assemble_W(kern, r));
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> sd(
          diabatic_matrix(dia, r));
      const double scale = sa.eigenvalues().cwiseAbs().maxCoeff();
      CHECK((sa.eigenvalues() - sd.eigenvalues()).cwiseAbs().maxCoeff() <
            1e-10 * scale);
    }
  }

  SUBCASE("diagonal laws approach the adiabatic curves at large R") {
    const auto grid = log_grid(500.0, 2000.0, 30);
    const CurveSweep sweep = eigensweep(blk, kern, grid);
    for (int c = 0; c < blk.size(); ++c) {
      const double ad = sweep.energies(grid.size() - 1, c);
      const double di = dia.diagonal_energy(c, grid.back());
      CHECK(std::abs(ad - di) < 1e-5 * (std::abs(ad) + sp.dimer.b_rot));
    }
  }
}

TEST_CASE("grid helpers") {
  const auto g = log_grid(40.0, 500.0, 50);
  CHECK(g.size() == 50);
  CHECK(g.front() == doctest::Approx(500.0));
  CHECK(g.back() == doctest::Approx(40.0));
  // log spacing: constant ratio
  const double ratio = g[1] / g[0];
  for (std::size_t i = 1; i + 1 < g.size(); ++i)
    CHECK(g[i + 1] / g[i] == doctest::Approx(ratio).epsilon(1e-10));

  const SpeciesData sp = toy();
  const auto blk = build_block(0, Parity::kEven, Reflection::kPlus, 6);
  const auto kern = build_kernels(blk, sp, toy_rule(), 6);
  const auto dense = adaptive_grid(blk, kern, 40.0, 500.0, 50);
  CHECK(dense.size() >= 50);
  CHECK(std::is_sorted(dense.rbegin(), dense.rend()));
  CHECK(dense.front() <= 500.0 + 1e-9);
  CHECK(dense.back() >= 40.0 - 1e-9);
}

TEST_CASE("convergence study smoke test") {
  const SpeciesData sp = toy();
  const auto rule = toy_rule();
  const auto grid = log_grid(60.0, 300.0, 40);
  const ConvergenceReport rep = convergence_study(
      0, Parity::kEven, Reflection::kPlus, grid, 3, sp, rule);
  CHECK(rep.n_star == 3);
  REQUIRE(rep.nmax_values == std::vector<int>{5, 7, 9});
  CHECK(!rep.entries.empty());
  for (const auto& e : rep.entries) {
    CHECK(e.label.n_asym <= 3);
    CHECK(std::isfinite(e.max_shift_step1));
    CHECK(std::isfinite(e.max_shift_step2));
    CHECK(e.max_shift_step2 >= 0.0);
    CHECK(e.max_shift_over_spacing >= 0.0);
  }
}
