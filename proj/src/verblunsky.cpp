#include "zipperlab/verblunsky.hpp"

#include <cmath>

#include "zipperlab/errors.hpp"

namespace zipperlab {

namespace {

constexpr double kDefectFloor = 1e-14;

// Hermitian principal square root of 1 - G, with eigenvalues clamped at 0
// so rounding cannot produce a non-PSD root. Also returns the inverse root
// when all eigenvalues clear the floor.
struct DefectRoots {
  Matrix root;
  Matrix inv_root;
  Matrix inv_sq;
  bool invertible;
};

DefectRoots defect_roots(const Matrix& gram) {
  const int L = static_cast<int>(gram.rows());
  const Matrix h = Matrix::Identity(L, L) - gram;
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  if (es.info() != Eigen::Success)
    throw NumericError("defect operator eigendecomposition failed");

  Eigen::VectorXd vals = es.eigenvalues().cwiseMax(0.0);
  DefectRoots out;
  out.invertible = vals.minCoeff() >= kDefectFloor;

  const Matrix& q = es.eigenvectors();
  out.root = q * vals.cwiseSqrt().asDiagonal() * q.adjoint();
  if (out.invertible) {
    out.inv_root = q * vals.cwiseSqrt().cwiseInverse().asDiagonal() * q.adjoint();
    out.inv_sq = q * vals.cwiseInverse().asDiagonal() * q.adjoint();
  }
  return out;
}

}  // namespace

VerblunskyData VerblunskyData::make(const Matrix& alpha) {
  if (alpha.rows() != alpha.cols() || alpha.rows() < 1)
    throw InvalidArgumentError("VerblunskyData: alpha must be square and nonempty");

  VerblunskyData vd;
  vd.alpha_ = alpha;
  vd.alpha_norm_ = alpha.isZero(0.0) ? 0.0 : alpha.jacobiSvd().singularValues()(0);
  if (vd.alpha_norm_ >= 1.0)
    throw ContractionError("VerblunskyData: largest singular value of alpha is " +
                           std::to_string(vd.alpha_norm_) + ", need < 1");

  DefectRoots left = defect_roots(alpha * alpha.adjoint());
  DefectRoots right = defect_roots(alpha.adjoint() * alpha);
  vd.rho_ = std::move(left.root);
  vd.rho_tilde_ = std::move(right.root);
  vd.invertible_ = left.invertible && right.invertible;
  if (vd.invertible_) {
    vd.rho_inv_ = std::move(left.inv_root);
    vd.rho_tilde_inv_ = std::move(right.inv_root);
    vd.rho_tilde_inv_sq_ = std::move(right.inv_sq);
  }
  return vd;
}

const Matrix& VerblunskyData::rho_inv() const {
  if (!invertible_)
    throw DefectInversionError("defect eigenvalue below 1e-14: alpha too close to a partial isometry");
  return rho_inv_;
}

const Matrix& VerblunskyData::rho_tilde_inv() const {
  if (!invertible_)
    throw DefectInversionError("defect eigenvalue below 1e-14: alpha too close to a partial isometry");
  return rho_tilde_inv_;
}

const Matrix& VerblunskyData::rho_tilde_inv_sq() const {
  if (!invertible_)
    throw DefectInversionError("defect eigenvalue below 1e-14: alpha too close to a partial isometry");
  return rho_tilde_inv_sq_;
}

}  // namespace zipperlab
