#ifndef ZIPPERLAB_TRANSFER_HPP
#define ZIPPERLAB_TRANSFER_HPP

#include <utility>
#include <vector>

#include "zipperlab/lorentz.hpp"
#include "zipperlab/zipper.hpp"

namespace zipperlab {

/// The bijection from admissible scattering events to U(L,L):
///   [[a,b],[c,d]] -> [[c - d b^{-1} a, d b^{-1}], [-b^{-1} a, b^{-1}]].
/// Throws SingularBlockError if b cannot be inverted reliably.
Matrix phi_map(const ScatteringEvent& s);

/// The constituent pair (T0(z), T1) with
///   T0(z) = [[z^{-1} rho_tilde^{-1}, rho_tilde^{-1} alpha*],
///            [alpha rho_tilde^{-1},  z rho^{-1}]],  T1 = T0(1).
/// Requires |z| = 1 to 1e-12; both factors are in U(L,L) exactly on the
/// circle and the Lorentz property fails off it.
std::pair<Matrix, Matrix> that_matrices(const VerblunskyData& vd, Complex z);

/// Precomputed builder of single-site transfer matrices at fixed (vd, z).
///
/// The transfer matrix over one cocycle step (two scattering events with
/// phase pairs p0, p1) is defined so that it coincides with
/// phi_map(z^{-1} S0) * phi_map(S1); it equals the four-factor product
/// diag(V0,U0*) T0(z) diag(V1,U1*) T1 conjugated by the Lorentz form. The
/// conjugation is a fixed U(L,L) automorphism, so every spectral quantity
/// downstream (Lyapunov exponents, Wronskian conservation, group residuals)
/// is unaffected; the convention is pinned by the phi-product identity.
///
/// Instances hold scratch storage: share across calls, not across threads.
class TransferFactory {
public:
  TransferFactory(const VerblunskyData& vd, Complex z);

  /// Writes the transfer matrix for one cocycle step into `out` (2L x 2L).
  void build(const PhasePair& p0, const PhasePair& p1, Matrix& out) const;

  Matrix operator()(const PhasePair& p0, const PhasePair& p1) const {
    Matrix t(2 * L_, 2 * L_);
    build(p0, p1, t);
    return t;
  }

  int L() const { return L_; }

private:
  int L_;
  Matrix that0_, that1_;
  mutable Matrix mid_, left_;
};

/// Convenience wrapper for a single transfer matrix.
Matrix transfer_matrix(const VerblunskyData& vd, Complex z, const PhasePair& p0,
                       const PhasePair& p1);

struct CocycleOptions {
  int recheck_period = 50;       ///< verify the Lorentz residual every K steps
  double abort_residual = 1e-6;  ///< relative residual that aborts the product
};

/// The cocycle over n steps: ordered transfer-matrix product for n > 0,
/// identity at n = 0, inverse-ordered product of Lorentz inverses for n < 0.
/// Step k consumes stream sites (2k, 2k+1).
Matrix cocycle(const VerblunskyData& vd, Complex z, const PhaseStream& stream, long n,
               const CocycleOptions& opts = {});

/// The form value x* L y on stacked solution pairs.
Complex wronskian(const Vector& x, const Vector& y);

/// Solution pairs along the lattice: path[n] = cocycle(n) * initial,
/// 0 <= n <= n_max.
using SolutionPath = std::vector<Vector>;
SolutionPath propagate_solution(const VerblunskyData& vd, Complex z, const PhaseStream& stream,
                                const Vector& initial, int n_max);

}  // namespace zipperlab

#endif
