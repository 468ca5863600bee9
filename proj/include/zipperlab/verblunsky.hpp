#ifndef ZIPPERLAB_VERBLUNSKY_HPP
#define ZIPPERLAB_VERBLUNSKY_HPP

#include <Eigen/Dense>

#include "zipperlab/haar.hpp"

namespace zipperlab {

/// Constant Verblunsky coefficient with its defect operators.
///
/// Holds a strict L x L contraction alpha together with
/// rho = (1 - alpha alpha*)^{1/2} and rho_tilde = (1 - alpha* alpha)^{1/2},
/// the Hermitian principal square roots, plus their inverses when the
/// defect spectra allow them. Immutable after construction.
class VerblunskyData {
public:
  /// Builds the defect operators; throws ContractionError if the largest
  /// singular value of alpha is >= 1. alpha = 0 is accepted.
  static VerblunskyData make(const Matrix& alpha);

  int L() const { return static_cast<int>(alpha_.rows()); }
  const Matrix& alpha() const { return alpha_; }
  const Matrix& rho() const { return rho_; }
  const Matrix& rho_tilde() const { return rho_tilde_; }
  double alpha_norm() const { return alpha_norm_; }
  bool is_zero() const { return alpha_norm_ == 0.0; }

  /// rho^{-1}; throws DefectInversionError if a defect eigenvalue < 1e-14.
  const Matrix& rho_inv() const;
  const Matrix& rho_tilde_inv() const;
  /// rho_tilde^{-2}, the matrix entering the off-diagonal Lie generator.
  const Matrix& rho_tilde_inv_sq() const;

private:
  VerblunskyData() = default;

  Matrix alpha_, rho_, rho_tilde_;
  Matrix rho_inv_, rho_tilde_inv_, rho_tilde_inv_sq_;
  double alpha_norm_ = 0.0;
  bool invertible_ = false;
};

}  // namespace zipperlab

#endif
