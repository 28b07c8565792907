#pragma once

// Unit conversions. Internal units are hartree and bohr throughout; cm^-1 and
// amu appear only at I/O boundaries.
namespace lrc {

inline constexpr double kCmPerHartree = 219474.6313632;  // CODATA
inline constexpr double kBoltzmannAu = 3.1668115634556e-6;  // hartree/K
inline constexpr double kElectronMassPerAmu = 1822.888486209;

inline constexpr double cm1_to_hartree(double e) { return e / kCmPerHartree; }
inline constexpr double hartree_to_cm1(double e) { return e * kCmPerHartree; }
inline constexpr double amu_to_au(double m) { return m * kElectronMassPerAmu; }

}  // namespace lrc
