#include "zipperlab/zipper.hpp"

#include <string>

#include "zipperlab/errors.hpp"

namespace zipperlab {

namespace {
constexpr int kDenseCap = 4096;  // diagnostics sizes are small; dense only
}

Matrix ScatteringEvent::full() const {
  const int n = L();
  Matrix s(2 * n, 2 * n);
  s.topLeftCorner(n, n) = a;
  s.topRightCorner(n, n) = b;
  s.bottomLeftCorner(n, n) = c;
  s.bottomRightCorner(n, n) = d;
  return s;
}

double ScatteringEvent::b_min_singular() const {
  Eigen::JacobiSVD<Matrix> svd(b);
  return svd.singularValues().tail(1)(0);
}

ScatteringEvent build_scattering(const VerblunskyData& vd, const PhasePair& phases,
                                 double b_floor) {
  const int L = vd.L();
  if (phases.u.rows() != L || phases.u.cols() != L || phases.v.rows() != L ||
      phases.v.cols() != L)
    throw InvalidArgumentError("build_scattering: phase dimension mismatch");

  ScatteringEvent s;
  s.a = vd.alpha();
  s.b = vd.rho() * phases.u;
  s.c = phases.v * vd.rho_tilde();
  s.d = -phases.v * vd.alpha().adjoint() * phases.u;

  if (s.b_min_singular() <= b_floor)
    throw SingularBlockError("build_scattering: b block below the singular-value floor " +
                             std::to_string(b_floor));
  return s;
}

FiniteZipper assemble_finite(const VerblunskyData& vd, const std::vector<PhasePair>& phases,
                             int n_blocks) {
  if (n_blocks < 4 || n_blocks % 2 != 0)
    throw InvalidArgumentError("assemble_finite: n_blocks must be even and >= 4 "
                               "(periodic closure needs an even block count)");
  if (static_cast<int>(phases.size()) != n_blocks)
    throw InvalidArgumentError("assemble_finite: need exactly n_blocks phase pairs, got " +
                               std::to_string(phases.size()));
  if (n_blocks * vd.L() > kDenseCap)
    throw InvalidArgumentError("assemble_finite: dimension " + std::to_string(n_blocks * vd.L()) +
                               " exceeds the dense cap of " + std::to_string(kDenseCap));

  FiniteZipper fz;
  fz.L = vd.L();
  fz.n_blocks = n_blocks;
  fz.events.reserve(static_cast<std::size_t>(n_blocks));
  for (const auto& p : phases) fz.events.push_back(build_scattering(vd, p));

  const int L = fz.L;
  const int dim = fz.dim();
  fz.v_op = Matrix::Zero(dim, dim);
  fz.w_op = Matrix::Zero(dim, dim);

  // v_op: S_0, S_2, ... on the diagonal, event k covering sites (k, k+1).
  for (int k = 0; k < n_blocks; k += 2) {
    const int off = k * L;
    fz.v_op.block(off, off, 2 * L, 2 * L) = fz.events[static_cast<std::size_t>(k)].full();
  }

  // w_op: S_1, S_3, ... shifted by L; the last event wraps (sites n-1, 0).
  for (int k = 1; k < n_blocks; k += 2) {
    const auto& s = fz.events[static_cast<std::size_t>(k)];
    const int r0 = k * L;
    const int r1 = ((k + 1) % n_blocks) * L;
    fz.w_op.block(r0, r0, L, L) = s.a;
    fz.w_op.block(r0, r1, L, L) = s.b;
    fz.w_op.block(r1, r0, L, L) = s.c;
    fz.w_op.block(r1, r1, L, L) = s.d;
  }

  fz.u_op = fz.v_op * fz.w_op;
  return fz;
}

}  // namespace zipperlab
