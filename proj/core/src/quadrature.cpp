#include "lrcurves/quadrature.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "lrcurves/species.hpp"

namespace lrc {

QuadratureRule gauss_legendre(int n) {
  if (n <= 0) throw std::invalid_argument("gauss_legendre: n must be > 0");
  QuadratureRule q;
  q.nodes.resize(n);
  q.weights.resize(n);
  // Newton iteration on the Legendre recurrence, symmetric pairs.
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    q.nodes[i] = -x;
    q.weights[i] = w;
    q.nodes[n - 1 - i] = x;
    q.weights[n - 1 - i] = w;
  }
  return q;
}

QuadratureRule default_quadrature(double omega_scale, int n) {
  if (omega_scale <= 0.0)
    throw std::invalid_argument("default_quadrature: omega_scale must be > 0");
  QuadratureRule gl = gauss_legendre(n);
  QuadratureRule q;
  q.omega_scale = omega_scale;
  q.nodes.resize(n);
  q.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    const double t = gl.nodes[i];
    q.nodes[i] = omega_scale * (1.0 + t) / (1.0 - t);
    q.weights[i] = gl.weights[i] * omega_scale * 2.0 / ((1.0 - t) * (1.0 - t));
  }
  return q;
}

double default_omega_scale(const SpeciesData& s) {
  double scale = std::numeric_limits<double>::infinity();
  for (const auto& c : s.atom.channels)
    scale = std::min(scale, std::abs(c.delta_e));
  return scale;
}

}  // namespace lrc
