#include "zipperlab/transfer.hpp"

#include <cmath>
#include <string>

#include "zipperlab/errors.hpp"

namespace zipperlab {

namespace {
constexpr double kCircleTol = 1e-12;
constexpr double kBFloor = 1e-10;

void require_on_circle(Complex z) {
  if (std::abs(std::abs(z) - 1.0) > kCircleTol)
    throw InvalidArgumentError("spectral parameter must satisfy |z| = 1, got |z| = " +
                               std::to_string(std::abs(z)));
}
}  // namespace

Matrix phi_map(const ScatteringEvent& s) {
  const int L = s.L();
  Eigen::JacobiSVD<Matrix> svd(s.b, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.singularValues()(L - 1) <= kBFloor)
    throw SingularBlockError("phi_map: scattering block b is numerically singular (sigma_min = " +
                             std::to_string(svd.singularValues()(L - 1)) + ")");
  Matrix b_inv = svd.matrixV() * svd.singularValues().cwiseInverse().asDiagonal() *
                 svd.matrixU().adjoint();

  Matrix out(2 * L, 2 * L);
  Matrix b_inv_a = b_inv * s.a;
  Matrix d_b_inv = s.d * b_inv;
  out.topLeftCorner(L, L) = s.c - d_b_inv * s.a;
  out.topRightCorner(L, L) = d_b_inv;
  out.bottomLeftCorner(L, L) = -b_inv_a;
  out.bottomRightCorner(L, L) = b_inv;
  return out;
}

std::pair<Matrix, Matrix> that_matrices(const VerblunskyData& vd, Complex z) {
  require_on_circle(z);
  const int L = vd.L();
  const Matrix& rt_inv = vd.rho_tilde_inv();
  const Matrix& r_inv = vd.rho_inv();
  const Matrix rt_inv_astar = rt_inv * vd.alpha().adjoint();
  const Matrix a_rt_inv = vd.alpha() * rt_inv;

  auto assemble = [&](Complex zz) {
    Matrix t(2 * L, 2 * L);
    t.topLeftCorner(L, L) = (Complex(1, 0) / zz) * rt_inv;
    t.topRightCorner(L, L) = rt_inv_astar;
    t.bottomLeftCorner(L, L) = a_rt_inv;
    t.bottomRightCorner(L, L) = zz * r_inv;
    return t;
  };
  return {assemble(z), assemble(Complex(1, 0))};
}

TransferFactory::TransferFactory(const VerblunskyData& vd, Complex z) : L_(vd.L()) {
  auto pair = that_matrices(vd, z);
  that0_ = std::move(pair.first);
  that1_ = std::move(pair.second);
  mid_.resize(2 * L_, 2 * L_);
  left_.resize(2 * L_, 2 * L_);
}

void TransferFactory::build(const PhasePair& p0, const PhasePair& p1, Matrix& out) const {
  const int L = L_;
  // mid = that0 * diag(V1, U1*)
  mid_.leftCols(L).noalias() = that0_.leftCols(L) * p1.v;
  mid_.rightCols(L).noalias() = that0_.rightCols(L) * p1.u.adjoint();
  // left = diag(V0, U0*) * mid
  left_.topRows(L).noalias() = p0.v * mid_.topRows(L);
  left_.bottomRows(L).noalias() = p0.u.adjoint() * mid_.bottomRows(L);
  // out = L (left * that1) L: the form conjugation flips the off-diagonal
  // blocks, which is what makes the product agree with phi(z^{-1}S0) phi(S1)
  out.resize(2 * L, 2 * L);
  out.noalias() = left_ * that1_;
  out.topRightCorner(L, L) *= -1.0;
  out.bottomLeftCorner(L, L) *= -1.0;
}

Matrix transfer_matrix(const VerblunskyData& vd, Complex z, const PhasePair& p0,
                       const PhasePair& p1) {
  return TransferFactory(vd, z)(p0, p1);
}

Matrix cocycle(const VerblunskyData& vd, Complex z, const PhaseStream& stream, long n,
               const CocycleOptions& opts) {
  const int L = vd.L();
  Matrix phi = Matrix::Identity(2 * L, 2 * L);
  if (n == 0) return phi;

  TransferFactory factory(vd, z);
  Matrix t(2 * L, 2 * L);
  Matrix next(2 * L, 2 * L);
  long done = 0;

  auto check = [&](long step) {
    if (opts.recheck_period > 0 && (step % opts.recheck_period) == 0) {
      const double res = lorentz_residual(phi);
      if (!std::isfinite(res) || res > opts.abort_residual)
        throw NumericError("cocycle: Lorentz residual " + std::to_string(res) +
                           " exceeded abort threshold after " + std::to_string(step) + " steps");
    }
  };

  if (n > 0) {
    for (long k = 0; k < n; ++k) {
      factory.build(stream.at(2 * k), stream.at(2 * k + 1), t);
      next.noalias() = t * phi;
      phi.swap(next);
      check(++done);
    }
  } else {
    for (long k = -1; k >= n; --k) {
      factory.build(stream.at(2 * k), stream.at(2 * k + 1), t);
      Matrix t_inv = lorentz_inverse(t);
      next.noalias() = t_inv * phi;
      phi.swap(next);
      check(++done);
    }
  }
  return phi;
}

Complex wronskian(const Vector& x, const Vector& y) {
  if (x.size() != y.size() || x.size() % 2 != 0)
    throw InvalidArgumentError("wronskian: vectors must share an even length");
  const Eigen::Index L = x.size() / 2;
  return x.head(L).dot(y.head(L)) - x.tail(L).dot(y.tail(L));
}

SolutionPath propagate_solution(const VerblunskyData& vd, Complex z, const PhaseStream& stream,
                                const Vector& initial, int n_max) {
  if (initial.size() != 2 * vd.L())
    throw InvalidArgumentError("propagate_solution: initial vector must have length 2L");

  TransferFactory factory(vd, z);
  Matrix t(2 * vd.L(), 2 * vd.L());
  SolutionPath path;
  path.reserve(static_cast<std::size_t>(n_max) + 1);
  path.push_back(initial);
  for (int k = 0; k < n_max; ++k) {
    factory.build(stream.at(2 * k), stream.at(2 * k + 1), t);
    path.push_back(t * path.back());
  }
  return path;
}

}  // namespace zipperlab
