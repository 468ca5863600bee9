#include "zipperlab/lorentz.hpp"

#include "zipperlab/errors.hpp"

namespace zipperlab {

Matrix lorentz_form(int L) {
  Matrix form = Matrix::Identity(2 * L, 2 * L);
  form.bottomRightCorner(L, L) *= -1.0;
  return form;
}

Matrix apply_lorentz_left(const Matrix& m) {
  const int L = static_cast<int>(m.rows()) / 2;
  Matrix out = m;
  out.bottomRows(L) *= -1.0;
  return out;
}

double lorentz_residual(const Matrix& m) {
  if (m.rows() != m.cols() || m.rows() % 2 != 0)
    throw InvalidArgumentError("lorentz_residual: matrix must be square of even size");
  const int L = static_cast<int>(m.rows()) / 2;
  Matrix g = m.adjoint() * apply_lorentz_left(m) - lorentz_form(L);
  const double scale = m.squaredNorm();
  return g.norm() / std::max(1.0, scale);
}

Matrix lorentz_inverse(const Matrix& m) {
  // L M* L: conjugating the adjoint flips the sign of both off-diagonal blocks
  const int L = static_cast<int>(m.rows()) / 2;
  Matrix inv = m.adjoint();
  inv.topRightCorner(L, L) *= -1.0;
  inv.bottomLeftCorner(L, L) *= -1.0;
  return inv;
}

double ull_membership_residual(const Matrix& m) {
  // M* L + L M = (L M)* + L M since L is Hermitian
  Matrix lm = apply_lorentz_left(m);
  return (lm.adjoint() + lm).norm();
}

}  // namespace zipperlab
