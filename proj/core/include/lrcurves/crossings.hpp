#pragma once

#include <string>
#include <vector>

#include "lrcurves/curves.hpp"

namespace lrc {

// A located crossing of two diabatic diagonal curves. `p` is the entrance
// channel; Landau-Zener fields are filled by landau_zener_events.
struct CrossingEvent {
  int p = 0;  // entrance channel (1-based diabatic index)
  int r = 0;  // partner channel
  double r0 = 0.0;          // crossing radius, bohr
  double w_pr = 0.0;        // coupling C5'/R0^5 + C6'/R0^6, hartree
  double c5_prime = 0.0;
  double c6_prime = 0.0;
  double slope_diff = 0.0;  // |dW_pp/dR - dW_rr/dR| at R0, hartree/bohr
  double v_entrance = 0.0;  // a.u.
  double gamma = 0.0;
  double probability = 1.0;
  double temperature = 0.0;  // K
  bool entrance_is_upper = false;  // higher rotor asymptote
};

// All sign changes of W_pp - W_rr over [r_lo, r_hi] (within [40, 500]),
// located by scan + bisection to 1e-3 bohr. Geometry only: p < r, one event
// per crossing, LZ fields unset. An empty list is a valid result.
std::vector<CrossingEvent> find_crossings(const DiabaticBasis& basis,
                                          double r_lo, double r_hi,
                                          int scan_points = 400);

// Classical entrance velocity v_p(R,T) = sqrt((2(W_pp(inf) - W_pp(R)) +
// 3 k_B T)/mu). Throws when the radicand is negative.
double channel_velocity(const DiabaticBasis& basis, int p, double R, double T,
                        const SpeciesData& species);

// P = exp(-2 pi Gamma), Gamma = |W_pr|^2 / (v_p * slope_diff).
// Throws on slope_diff == 0 ("parallel curves") or v_p <= 0.
double lz_probability(double w_pr, double slope_diff, double v_p);

// Expand geometric crossings into one event per entrance channel with
// velocity, Gamma and P at temperature T.
std::vector<CrossingEvent> landau_zener_events(
    const std::vector<CrossingEvent>& geometric, const DiabaticBasis& basis,
    const SpeciesData& species, double T);

struct NormalizedCoupling {
  double value = 0.0;
  bool resonant = false;       // clamped at +/-1e6 (denominator ~ 0)
  bool indeterminate = false;  // numerator and denominator both ~ 0
};

// W_bar_pr(R) = W_pr / (W_pp - W_rr) in the diabatic representation.
NormalizedCoupling normalized_coupling(const DiabaticBasis& basis, int p,
                                       int r, double R);

struct ValidityReport {
  CurveLabel state;  // (p, |m_J|, N^d)
  double epsilon = 0.1;
  double r_star = 0.0;              // bohr
  bool criterion_met = false;       // false => r_star is the grid lower bound
  std::vector<double> resonances;   // denominator sign-change radii > r_star
};

// Downward scan of max_r |W_bar_pr| on a descending grid. The first
// sustained exceedance sets R*; exceedance intervals that contain a
// denominator sign change and recede before the grid bottom are resonant
// spikes, listed separately.
ValidityReport validity_radius(const DiabaticBasis& basis, int p,
                               double epsilon,
                               const std::vector<double>& r_grid);

}  // namespace lrc
