#pragma once

#include "lrcurves/quadrature.hpp"
#include "lrcurves/species.hpp"

namespace lrc {

// One |N, m, lambda> product state of dimer rotation and atomic orbital
// projection; m_J = m + lambda is the conserved projection.
struct BasisState {
  int n = 0;
  int m = 0;
  int lambda = 0;
};

// (-1)^{LB} (LA+LB)! / sqrt((LA+M)!(LA-M)!(LB+M)!(LB-M)!)
double f_prefactor(int la, int lb, int mm);

// Quadrupole-quadrupole kernel K5: <1|V_qq|2> = K5/R^5. Zero unless
// m1+lambda1 == m2+lambda2 and N1 in {N2, N2 +/- 2}.
double vqq_kernel(const BasisState& s1, const BasisState& s2,
                  const SpeciesData& species);

// Second-order dipole-dipole kernel K6: <1|V_dd2|2> = K6/R^6. Same
// selection rules as vqq_kernel. Sums upward-channel Casimir-Polder
// integrals, downward-channel pole terms, and the core contribution.
// Intermediate rotational states run over |N_i - 1| ... N_i + 1, capped at
// nmax+1. The quadrature-convergence gate of the QuadratureRule contract is
// enforced at matrix-assembly level (see build_kernels in curves.hpp).
double vdd2_kernel(const BasisState& s1, const BasisState& s2,
                   const SpeciesData& species, const QuadratureRule& rule,
                   int nmax);

}  // namespace lrc
