#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include <doctest.h>

#include "lrcurves/constants.hpp"
#include "lrcurves/crossings.hpp"
#include "lrcurves/curves.hpp"
#include "lrcurves/species.hpp"

using namespace lrc;

namespace {

const SpeciesData& toy() {
  static const SpeciesData s =
      load_species(std::string(LRC_DATA_DIR) + "/cs2_cs_minimal.json");
  return s;
}

struct Fixture {
  SymmetryBlock block;
  BlockKernels kernels;
  DiabaticBasis dia;
  Fixture(int abs_mj, Parity par, Reflection refl, int nmax)
      : block(build_block(abs_mj, par, refl, nmax)),
        kernels(build_kernels(block, toy(),
                              default_quadrature(default_omega_scale(toy()), 60),
                              nmax)),
        dia(build_diabatic(block, kernels, toy().dimer.b_rot)) {}
};

Fixture& sigma_plus_even() {
  static Fixture f(0, Parity::kEven, Reflection::kPlus, 8);
  return f;
}

}  // namespace

TEST_CASE("Landau-Zener algebra") {
  CHECK(lz_probability(0.0, 1e-8, 1e-5) == 1.0);
  // Gamma = ln(25)/(2 pi) gives P = 1/25
  const double v = 3e-6, slope = 4e-9;
  const double gamma = std::log(25.0) / (2.0 * std::numbers::pi);
  const double w = std::sqrt(gamma * v * slope);
  CHECK(lz_probability(w, slope, v) == doctest::Approx(0.04).epsilon(1e-12));
  // P decreases with coupling, increases with velocity
  CHECK(lz_probability(2.0 * w, slope, v) < lz_probability(w, slope, v));
  CHECK(lz_probability(w, slope, 2.0 * v) > lz_probability(w, slope, v));

  CHECK_THROWS_WITH_AS(lz_probability(w, 0.0, v), doctest::Contains("parallel"),
                       std::invalid_argument);
  CHECK_THROWS(lz_probability(w, slope, 0.0));
  CHECK_THROWS(lz_probability(w, slope, -1.0));
}

TEST_CASE("entrance velocity approaches the thermal value far away") {
  const Fixture& f = sigma_plus_even();
  const double T = 1e-3;
  const double thermal = std::sqrt(3.0 * kBoltzmannAu * T / toy().reduced_mass);
  const double v = channel_velocity(f.dia, 1, 1e5, T, toy());
  CHECK(v == doctest::Approx(thermal).epsilon(1e-4));
  // falling into an attractive well accelerates
  CHECK(channel_velocity(f.dia, 1, 60.0, T, toy()) > v);
  CHECK_THROWS(channel_velocity(f.dia, 0, 100.0, T, toy()));
  CHECK_THROWS(channel_velocity(f.dia, 1, 100.0, -1.0, toy()));

  SUBCASE("repulsive diagonal law is classically forbidden at T = 0") {
    // hand-built basis with one strongly repulsive law
    DiabaticBasis rep = f.dia;
    rep.states[0].n = 0;
    rep.states[0].c5 = 1.0e6;
    rep.states[0].c6 = 0.0;
    CHECK_THROWS_WITH_AS(channel_velocity(rep, 1, 45.0, 0.0, toy()),
                         doctest::Contains("forbidden"), std::runtime_error);
    // thermal energy can still carry it over a shallow wall
    rep.states[0].c5 = 1.0e-6;
    CHECK(channel_velocity(rep, 1, 45.0, 1.0, toy()) > 0.0);
  }
}

TEST_CASE("crossing search geometry") {
  const Fixture& f = sigma_plus_even();
  CHECK_THROWS(find_crossings(f.dia, 30.0, 100.0));
  CHECK_THROWS(find_crossings(f.dia, 40.0, 600.0));
  CHECK_THROWS(find_crossings(f.dia, 100.0, 50.0));

  const auto events = find_crossings(f.dia, 40.0, 500.0);
  CHECK(!events.empty());
  for (std::size_t k = 0; k < events.size(); ++k) {
    const auto& ev = events[k];
    CHECK(ev.p < ev.r);
    CHECK(ev.r0 >= 40.0);
    CHECK(ev.r0 <= 500.0);
    if (k > 0) CHECK(events[k - 1].r0 >= ev.r0);
    // located root: the diagonal laws actually meet there
    const double gap = f.dia.diagonal_energy(ev.p - 1, ev.r0) -
                       f.dia.diagonal_energy(ev.r - 1, ev.r0);
    const double slope = ev.slope_diff;
    CHECK(std::abs(gap) < slope * 2e-3);  // within the bisection tolerance
    // coupling recomputes from the reported law
    const double r5 = std::pow(ev.r0, 5);
    CHECK(ev.w_pr ==
          doctest::Approx(ev.c5_prime / r5 + ev.c6_prime / (r5 * ev.r0))
              .epsilon(1e-12));
  }

  SUBCASE("no crossings in a sub-range free of them") {
    for (const auto& ev : find_crossings(f.dia, 150.0, 500.0))
      CHECK(ev.r0 >= 150.0);
  }
}

TEST_CASE("Landau-Zener expansion of the crossing list") {
  const Fixture& f = sigma_plus_even();
  const double T = 1e-3;
  const auto geo = find_crossings(f.dia, 40.0, 500.0);
  const auto lz = landau_zener_events(geo, f.dia, toy(), T);
  REQUIRE(lz.size() == 2 * geo.size());
  for (std::size_t k = 0; k < geo.size(); ++k) {
    const auto& a = lz[2 * k];
    const auto& b = lz[2 * k + 1];
    CHECK(a.r0 == geo[k].r0);
    CHECK(a.p == b.r);
    CHECK(a.r == b.p);
    CHECK(a.entrance_is_upper != b.entrance_is_upper);
    for (const auto& ev : {a, b}) {
      CHECK(ev.temperature == T);
      CHECK(ev.probability > 0.0);
      CHECK(ev.probability <= 1.0);
      CHECK(ev.probability ==
            doctest::Approx(std::exp(-2.0 * std::numbers::pi * ev.gamma))
                .epsilon(1e-12));
      CHECK(ev.v_entrance > 0.0);
    }
    // the upper channel enters faster, so it hops with higher probability
    const auto& up = a.entrance_is_upper ? a : b;
    const auto& lo = a.entrance_is_upper ? b : a;
    if (f.dia.asymptote(up.p - 1) != f.dia.asymptote(lo.p - 1)) {
      CHECK(up.v_entrance > lo.v_entrance);
      CHECK(up.probability >= lo.probability);
    }
  }
}

TEST_CASE("normalized coupling and its resonances") {
  const Fixture& f = sigma_plus_even();

  SUBCASE("plain value away from resonance") {
    const double r = 200.0;
    const auto w = normalized_coupling(f.dia, 1, 2, r);
    CHECK(!w.resonant);
    CHECK(!w.indeterminate);
    const double r5 = std::pow(r, 5);
    const double num = f.dia.c5_matrix(0, 1) / r5 + f.dia.c6_matrix(0, 1) / (r5 * r);
    const double den =
        f.dia.diagonal_energy(0, r) - f.dia.diagonal_energy(1, r);
    CHECK(w.value == doctest::Approx(num / den).epsilon(1e-12));
  }

  SUBCASE("diverges through a diagonal-law crossing") {
    const auto geo = find_crossings(f.dia, 40.0, 500.0);
    REQUIRE(!geo.empty());
    const auto& ev = geo.front();
    // near the crossing the normalized coupling is much larger than nearby
    const auto near = normalized_coupling(f.dia, ev.p, ev.r, ev.r0);
    const auto far =
        normalized_coupling(f.dia, ev.p, ev.r, std::min(ev.r0 * 1.5, 500.0));
    CHECK((near.resonant || std::abs(near.value) > 10.0 * std::abs(far.value)));
  }
}

TEST_CASE("validity radius scan") {
  const Fixture& f = sigma_plus_even();
  const auto grid = log_grid(40.0, 500.0, 300);

  SUBCASE("a huge threshold is never exceeded") {
    const auto rep = validity_radius(f.dia, 1, 1e9, grid);
    CHECK(!rep.criterion_met);
    CHECK(rep.r_star == doctest::Approx(grid.back()));
  }

  SUBCASE("a tiny threshold is exceeded from the start") {
    const auto rep = validity_radius(f.dia, 1, 1e-9, grid);
    CHECK(rep.criterion_met);
    CHECK(rep.r_star == doctest::Approx(grid.front()));
  }

  SUBCASE("moderate threshold lies between the extremes") {
    const auto rep = validity_radius(f.dia, 1, 0.1, grid);
    CHECK(rep.r_star <= grid.front());
    CHECK(rep.r_star >= grid.back());
    CHECK(rep.epsilon == 0.1);
    CHECK(rep.state.p == 1);
    for (double r : rep.resonances) CHECK(r > rep.r_star);
  }

  SUBCASE("resonance radii coincide with diagonal-law crossings") {
    const auto geo = find_crossings(f.dia, 40.0, 500.0);
    const int p = geo.front().p;
    const auto rep = validity_radius(f.dia, p, 1e9, grid);
    // with eps never exceeded, every crossing of p sits above r_star
    for (const auto& ev : geo) {
      if (ev.p != p && ev.r != p) continue;
      const bool matched =
          std::any_of(rep.resonances.begin(), rep.resonances.end(),
                      [&](double r) { return std::abs(r - ev.r0) < 1e-2; });
      CHECK(matched);
    }
  }

  SUBCASE("input validation") {
    CHECK_THROWS(validity_radius(f.dia, 1, 0.0, grid));
    std::vector<double> ascending(grid.rbegin(), grid.rend());
    CHECK_THROWS(validity_radius(f.dia, 1, 0.1, ascending));
  }
}
