#include "lrcurves/blocks.hpp"

#include <cmath>
#include <stdexcept>

namespace lrc {

std::string symmetry_label(int abs_mj, Reflection refl) {
  switch (abs_mj) {
    case 0:
      return refl == Reflection::kPlus ? "Sigma+" : "Sigma-";
    case 1:
      return "Pi";
    case 2:
      return "Delta";
    case 3:
      return "Phi";
    case 4:
      return "Gamma";
    case 5:
      return "H";
    default:
      // past the Greek-letter series; fall back to the numeric projection
      return "mJ" + std::to_string(abs_mj);
  }
}

std::string parity_suffix(Parity p) {
  return p == Parity::kEven ? "even" : "odd";
}

SymmetryBlock build_block(int abs_mj, Parity parity, Reflection reflection,
                          int nmax) {
  if (abs_mj < 0) throw std::invalid_argument("build_block: |m_J| < 0");
  SymmetryBlock block;
  block.abs_mj = abs_mj;
  block.parity = parity;
  block.reflection = reflection;
  block.label = symmetry_label(abs_mj, reflection);

  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  const int n0 = parity == Parity::kEven ? 0 : 1;
  for (int n = n0; n <= nmax; n += 2) {
    if (abs_mj != 0) {
      for (int lam = -1; lam <= 1; ++lam) {
        const int m = abs_mj - lam;
        if (std::abs(m) > n) continue;
        block.basis.push_back({{{1.0, {n, m, lam}}}});
      }
    } else {
      for (int lam = -1; lam <= 1; ++lam) {
        const int m = -lam;
        if (std::abs(m) > n) continue;
        if (m == 0 && lam == 0) {
          if (reflection == Reflection::kPlus)
            block.basis.push_back({{{1.0, {n, 0, 0}}}});
        } else if (lam > 0) {  // one representative per (m,lam)/(-m,-lam) pair
          const double sign = reflection == Reflection::kPlus ? 1.0 : -1.0;
          block.basis.push_back({{{inv_sqrt2, {n, m, lam}},
                                  {sign * inv_sqrt2, {n, -m, -lam}}}});
        }
      }
    }
  }
  return block;
}

}  // namespace lrc
