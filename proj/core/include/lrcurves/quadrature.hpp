#pragma once

#include <vector>

namespace lrc {

struct SpeciesData;

// Nodes and weights for integrals over [0, inf) of polarizability products.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  double omega_scale = 0.0;  // > 0 when built by default_quadrature; lets
                             // kernel assembly rebuild at doubled node count

  template <class F>
  double integrate(F&& f) const {
    double s = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) s += weights[i] * f(nodes[i]);
    return s;
  }
};

// Gauss-Legendre rule on [-1, 1].
QuadratureRule gauss_legendre(int n);

// Gauss-Legendre mapped to [0, inf) via omega = scale*(1+t)/(1-t).
// Throws on n <= 0 or scale <= 0.
QuadratureRule default_quadrature(double omega_scale, int n = 60);

// Smallest atomic channel |delta_e|; the default mapping scale.
double default_omega_scale(const SpeciesData& s);

}  // namespace lrc
