#ifndef ZIPPERLAB_ZIPPER_HPP
#define ZIPPERLAB_ZIPPER_HPP

#include <vector>

#include "zipperlab/verblunsky.hpp"

namespace zipperlab {

/// One scattering event S = [[a,b],[c,d]] in U(2L) with invertible b.
struct ScatteringEvent {
  Matrix a, b, c, d;

  int L() const { return static_cast<int>(a.rows()); }

  /// The assembled 2L x 2L unitary.
  Matrix full() const;

  /// Smallest singular value of the b block.
  double b_min_singular() const;
};

/// S(alpha, U, V) = [[alpha, rho U], [V rho_tilde, -V alpha* U]].
/// Haar phases keep b = rho U well-conditioned whenever alpha is a strict
/// contraction, so a b block at or below the floor indicates bad input.
ScatteringEvent build_scattering(const VerblunskyData& vd, const PhasePair& phases,
                                 double b_floor = 1e-10);

/// Periodic finite truncation of the scattering zipper U = V W.
///
/// Even-indexed events sit on the diagonal of v_op; odd-indexed events sit
/// shifted by L in w_op, the last one wrapping around the corner. The wrap
/// keeps every factor, and hence u_op, exactly unitary.
struct FiniteZipper {
  int L = 0;
  int n_blocks = 0;
  std::vector<ScatteringEvent> events;
  Matrix v_op, w_op, u_op;

  int dim() const { return L * n_blocks; }
  static constexpr const char* boundary = "periodic";
};

/// Assembles the truncation; n_blocks must be even and >= 4, and phases must
/// supply exactly n_blocks pairs.
FiniteZipper assemble_finite(const VerblunskyData& vd, const std::vector<PhasePair>& phases,
                             int n_blocks);

}  // namespace zipperlab

#endif
