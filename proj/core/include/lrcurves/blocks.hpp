#pragma once

#include <string>
#include <vector>

#include "lrcurves/kernels.hpp"

namespace lrc {

enum class Parity { kEven, kOdd };
enum class Reflection { kPlus, kMinus };  // meaningful only for m_J = 0

// One (possibly symmetrized) basis vector: sum of coef * |N m lambda>.
struct SymmetrizedState {
  struct Term {
    double coef;
    BasisState state;
  };
  std::vector<Term> terms;
  int n() const { return terms.front().state.n; }
};

// Independent subspace labeled by |m_J|, N-parity, and (for m_J = 0) the
// reflection character. W restricted to a block is exactly block-diagonal.
struct SymmetryBlock {
  int abs_mj = 0;
  Parity parity = Parity::kEven;
  Reflection reflection = Reflection::kPlus;
  std::vector<SymmetrizedState> basis;
  std::string label;  // "Sigma+", "Sigma-", "Pi", ..., "H"

  int size() const { return static_cast<int>(basis.size()); }
};

// Symmetry label for |m_J| = 0..5 ("Sigma+"/"Sigma-" at 0); "mJ<k>" above.
std::string symmetry_label(int abs_mj, Reflection refl);
std::string parity_suffix(Parity p);

// Build the block basis up to Nmax. For m_J != 0, plain |N m lambda> states
// with m + lambda = +|m_J|; for m_J = 0, combinations
// (|N m lambda> +/- |N -m -lambda>)/sqrt(2) (the reflection phase
// (-1)^{m+lambda} is +1 on every m_J = 0 pair), with the unpaired
// (m,lambda) = (0,0) state assigned to the + block. An empty block is a
// valid empty result.
SymmetryBlock build_block(int abs_mj, Parity parity, Reflection reflection,
                          int nmax);

}  // namespace lrc
