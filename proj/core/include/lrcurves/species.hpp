#pragma once

#include <string>
#include <vector>

namespace lrc {

// One discrete pole of a polarizability / one dipole-allowed transition.
// delta_e and delta_e_cm1 hold the same energy in hartree and in the raw
// file units (cm^-1); the raw value is kept so serialization round-trips
// bit-identically.
struct TransitionChannel {
  double delta_e = 0.0;      // hartree, signed
  double delta_e_cm1 = 0.0;  // as read from file
  double dipole = 0.0;       // a.u.; for atomic channels this is the radial
                             // matrix element r_{n'l',nl}
  int target_l = -1;         // atomic channels only
  std::string label;
};

struct DimerSpecies {
  std::string name;
  double b_rot = 0.0;      // hartree
  double b_rot_cm1 = 0.0;  // as read from file
  double q20 = 0.0;        // a.u.
  std::vector<TransitionChannel> parallel_channels;
  std::vector<TransitionChannel> perpendicular_channels;
  double mass = 0.0;  // electron masses
};

struct AtomSpecies {
  std::string name;
  int l = 1;             // initial orbital momentum
  double r2_expect = 0;  // <r^2> a.u.
  std::vector<TransitionChannel> channels;
  std::vector<TransitionChannel> core_channels;
  double mass = 0.0;  // electron masses
};

struct SpeciesData {
  DimerSpecies dimer;
  AtomSpecies atom;
  double dimer_mass_amu = 0.0;
  double atom_mass_amu = 0.0;
  double reduced_mass = 0.0;  // electron masses
};

// Strict JSON loader: unknown keys, missing keys, non-positive B_rot,
// zero channel energies and empty channel lists are all errors naming the
// offending field. See data/README for the schema.
SpeciesData load_species(const std::string& path);

// Inverse of load_species; numeric fields round-trip bit-identically.
void save_species(const SpeciesData& s, const std::string& path);
std::string species_to_json(const SpeciesData& s);

enum class Polarization { kParallel, kPerpendicular };

// Frequency arguments are strongly typed: polarizabilities are evaluated
// either on the imaginary axis (Casimir-Polder integrals) or at a real
// energy (downward-channel pole terms).
struct ImagFreq {
  double omega = 0.0;  // hartree, >= 0
};
struct RealFreq {
  double z = 0.0;  // hartree
};

// alpha(z) = sum_k 2 dE_k mu_k^2 / (dE_k^2 - z^2); z = i*omega on the
// imaginary axis. The real-argument overload refuses evaluation within
// 1e-6 hartree of a pole.
double dimer_polarizability(const DimerSpecies& s, Polarization kind,
                            ImagFreq w);
double dimer_polarizability(const DimerSpecies& s, Polarization kind,
                            RealFreq z);

// State-to-state atomic polarizability for one channel,
// 2 dE mu^2/(dE^2 + omega^2) with mu = r * C^{l'0}_{l0 10} / sqrt(3);
// negative at small omega for downward channels.
double atomic_channel_polarizability(const AtomSpecies& a,
                                     const TransitionChannel& ch, ImagFreq w);

// Core contribution to the atomic polarizability; 0 when no core channels.
double core_polarizability(const AtomSpecies& a, ImagFreq w);

}  // namespace lrc
