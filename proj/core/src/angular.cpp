#include "lrcurves/angular.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace lrc {
namespace {

constexpr int kMaxFact = 170;  // largest n with n! finite in double

const std::array<double, kMaxFact + 1>& factorials() {
  static const auto table = [] {
    std::array<double, kMaxFact + 1> f{};
    f[0] = 1.0;
    for (int i = 1; i <= kMaxFact; ++i) f[i] = f[i - 1] * i;
    return f;
  }();
  return table;
}

double fact(int n) { return factorials()[n]; }

bool triangle_ok(int j1, int j2, int j) {
  return j >= std::abs(j1 - j2) && j <= j1 + j2;
}

}  // namespace

double clebsch_gordan(int j1, int m1, int j2, int m2, int j, int m) {
  if (j1 < 0 || j2 < 0 || j < 0)
    throw std::invalid_argument("clebsch_gordan: negative angular momentum");
  if (std::abs(m1) > j1 || std::abs(m2) > j2 || std::abs(m) > j) return 0.0;
  if (m1 + m2 != m || !triangle_ok(j1, j2, j)) return 0.0;

  // Racah's closed form.
  const auto& f = factorials();
  double pref = (2.0 * j + 1.0) * f[j1 + j2 - j] * f[j1 - j2 + j] *
                f[-j1 + j2 + j] / f[j1 + j2 + j + 1];
  pref *= f[j1 + m1] * f[j1 - m1] * f[j2 + m2] * f[j2 - m2] * f[j + m] *
          f[j - m];

  const int kmin = std::max({0, j2 - j - m1, j1 - j + m2});
  const int kmax = std::min({j1 + j2 - j, j1 - m1, j2 + m2});
  double sum = 0.0;
  for (int k = kmin; k <= kmax; ++k) {
    const double d = f[k] * f[j1 + j2 - j - k] * f[j1 - m1 - k] *
                     f[j2 + m2 - k] * f[j - j2 + m1 + k] * f[j - j1 - m2 + k];
    sum += (k % 2 == 0 ? 1.0 : -1.0) / d;
  }
  return std::sqrt(pref) * sum;
}

double cg_symmetry_flip(int j1, int m1, int j2, int m2, int j, int m) {
  if (j1 < 0 || j2 < 0 || j < 0)
    throw std::invalid_argument("cg_symmetry_flip: negative angular momentum");
  const double phase = ((j1 - m1) % 2 == 0) ? 1.0 : -1.0;
  return phase * std::sqrt((2.0 * j + 1.0) / (2.0 * j2 + 1.0)) *
         clebsch_gordan(j, m, j1, -m1, j2, m2);
}

double wigner_d_reduced(int j, int m1, int m2, double beta) {
  if (j < 0) throw std::invalid_argument("wigner_d_reduced: negative j");
  if (std::abs(m1) > j || std::abs(m2) > j) return 0.0;

  const auto& f = factorials();
  const double pref = std::sqrt(f[j + m1] * f[j - m1] * f[j + m2] * f[j - m2]);
  const double c = std::cos(beta / 2.0);
  const double s = std::sin(beta / 2.0);

  const int kmin = std::max(0, m2 - m1);
  const int kmax = std::min(j - m1, j + m2);
  double sum = 0.0;
  for (int k = kmin; k <= kmax; ++k) {
    const double num = std::pow(c, 2 * j + m2 - m1 - 2 * k) *
                       std::pow(s, m1 - m2 + 2 * k);
    const double den =
        f[j + m2 - k] * f[k] * f[j - m1 - k] * f[m1 - m2 + k];
    sum += ((m1 - m2 + k) % 2 == 0 ? 1.0 : -1.0) * num / den;
  }
  return pref * sum;
}

}  // namespace lrc
