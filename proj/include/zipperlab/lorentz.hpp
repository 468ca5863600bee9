#ifndef ZIPPERLAB_LORENTZ_HPP
#define ZIPPERLAB_LORENTZ_HPP

#include "zipperlab/haar.hpp"

namespace zipperlab {

/// The signature-(L,L) form diag(1_L, -1_L) of size 2L.
Matrix lorentz_form(int L);

/// Applies the form without materializing it: flips the sign of the lower
/// L rows of m.
Matrix apply_lorentz_left(const Matrix& m);

/// Scale-relative deviation of M from U(L,L):
///   ‖M* L M − L‖_F / max(1, ‖M‖_F²).
///
/// Cocycle products grow like exp(γ₁ n); the group identity can only be
/// maintained in floating point relative to that scale, and the relative
/// residual of an n-fold product accumulates linearly (≈ c·n·ε with c of
/// order the step count per factor). Near ‖M‖ ≈ 1 this is the plain
/// absolute residual.
double lorentz_residual(const Matrix& m);

/// Group inverse via the Lorentz identity, M^{-1} = L M* L.
Matrix lorentz_inverse(const Matrix& m);

/// Lie-algebra membership residual ‖M* L + L M‖_F (u(L,L) condition).
double ull_membership_residual(const Matrix& m);

}  // namespace zipperlab

#endif
