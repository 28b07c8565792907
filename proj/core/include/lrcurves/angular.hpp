#pragma once

#include <cstdint>
#include <unordered_map>

namespace lrc {

// Clebsch-Gordan coefficient C^{j m}_{j1 m1 j2 m2}, Condon-Shortley phase,
// integer momenta only. Returns 0 when m != m1+m2, a triangle condition
// fails, or any |m_i| > j_i. Throws std::invalid_argument on negative j.
double clebsch_gordan(int j1, int m1, int j2, int m2, int j, int m);

// Right-hand side of the symmetry identity
//   C^{c gamma}_{a alpha, b beta}
//     = (-1)^{a-alpha} sqrt((2c+1)/(2b+1)) C^{b beta}_{c gamma, a -alpha}.
// Arguments are (a, alpha, b, beta, c, gamma), i.e. the same signature as
// clebsch_gordan; the two must agree to ~1e-13.
double cg_symmetry_flip(int j1, int m1, int j2, int m2, int j, int m);

// Reduced Wigner rotation matrix element d^j_{m1 m2}(beta), beta in radians.
double wigner_d_reduced(int j, int m1, int m2, double beta);

// Memoized CG table for kernel assembly. Warmed single-threaded while a block
// is built; read-only afterwards.
class CgTable {
 public:
  double operator()(int j1, int m1, int j2, int m2, int j, int m) {
    const std::uint64_t key = pack(j1, m1, j2, m2, j, m);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    const double v = clebsch_gordan(j1, m1, j2, m2, j, m);
    cache_.emplace(key, v);
    return v;
  }

 private:
  static std::uint64_t pack(int j1, int m1, int j2, int m2, int j, int m) {
    auto u = [](int x) { return static_cast<std::uint64_t>(x + 128) & 0x3ff; };
    return u(j1) | u(m1) << 10 | u(j2) << 20 | u(m2) << 30 | u(j) << 40 |
           u(m) << 50;
  }
  std::unordered_map<std::uint64_t, double> cache_;
};

}  // namespace lrc
