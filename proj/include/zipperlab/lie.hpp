#ifndef ZIPPERLAB_LIE_HPP
#define ZIPPERLAB_LIE_HPP

#include <json.hpp>

#include "zipperlab/transfer.hpp"

namespace zipperlab {

/// Canonical real basis of u(L,L): anti-Hermitian diagonal blocks plus the
/// off-diagonal slices [[0,B],[B*,0]]; 4L^2 elements, each satisfying
/// M* L + L M = 0 by construction.
std::vector<Matrix> ull_basis(int L);

/// Real basis of the block-diagonal subalgebra {diag(A,D) : A,D anti-Hermitian}
/// (dimension 2L^2), the tangent space of the free phase curves.
std::vector<Matrix> block_diagonal_basis(int L);

/// Tangent generators of the transfer-matrix group at fixed (vd, z):
/// the block-diagonal basis from the phase curves at the identity, plus the
/// conjugated curve derivatives i T1^{-1} diag(E_jj, 0) T1 for j = 1..L.
/// All outputs are u(L,L) elements by construction.
std::vector<Matrix> tangent_generators(const VerblunskyData& vd, Complex z);

/// Real-linear basis of a bracket-closed subspace of u(L,L).
struct LieBasis {
  std::vector<Matrix> elements;  ///< orthonormal in the real vectorization
  int dimension = 0;
  double rank_tol = 0.0;  ///< absolute SVD threshold used for the final rank
  int rounds = 0;         ///< bracket rounds until stabilization
};

/// Smallest real Lie subalgebra containing the generators, computed by
/// iterated commutators with incremental re-orthonormalization. Dimension is
/// non-decreasing across rounds and capped at 4L^2. Throws
/// NonConvergenceError if the dimension is still moving after max_rounds.
LieBasis bracket_closure(const std::vector<Matrix>& gens, int max_rounds = 8);

/// Residuals of the commutator identities that generate the off-diagonal
/// complement of the block-diagonal subalgebra. Requires alpha != 0.
struct BracketIdentityReport {
  int row = 0, col = 0;  ///< located entry (row, col) of rho_tilde^{-2} alpha*
  Complex coefficient;   ///< its value c, nonzero by construction
  double curve_sum_residual = 0.0;      ///< sum of conjugated curves vs off-diagonal element
  double double_bracket_residual = 0.0; ///< diagonal pinching brackets vs i c E_{row,col} slice
  double fill_row_residual = 0.0;       ///< row-moving bracket (0 when L = 1)
  double fill_col_residual = 0.0;       ///< column-moving bracket (0 when L = 1)
  double max_residual() const;
};
BracketIdentityReport bracket_identity_checks(const VerblunskyData& vd, Complex z);

/// The fixed unitary conjugating U(L,L) onto the star-symplectic group,
/// with the symplectic form J.
struct CayleyData {
  Matrix c;  ///< (1/sqrt2) [[1, -i], [1, i]] in L x L blocks
  Matrix j;  ///< [[0, -1], [1, 0]]
  static CayleyData make(int L);
};

/// Splits real and imaginary parts: A + iB -> [[A, -B], [B, A]].
Eigen::MatrixXd real_split(const Matrix& m);

struct CayleyReport {
  double max_symplectic_residual = 0.0;       ///< (C*MC)* J (C*MC) = J, scale-relative
  double max_split_multiplicativity = 0.0;    ///< real_split(MN) vs product of splits
  double max_split_symplectic = 0.0;          ///< real form preserved by split conjugates
  bool distinct_singular_values = false;      ///< some sample with 2L distinct sigmas
  double best_min_relative_gap = 0.0;
};

/// Verifies the Cayley/real-split conjugation identities on U(L,L) samples.
CayleyReport cayley_checks(const std::vector<Matrix>& samples);

/// End-to-end certification: generators -> bracket closure -> dimension
/// verdict ("pass", "degenerate-as-predicted" for alpha = 0, or "mismatch"),
/// emitted as the JSON report {L, alpha_hash, z, dimension, expected,
/// expected_full, verdict, residuals, rounds}.
nlohmann::json lie_certification(const VerblunskyData& vd, Complex z, int max_rounds = 8);

}  // namespace zipperlab

#endif
