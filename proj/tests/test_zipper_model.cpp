#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "zipperlab/errors.hpp"
#include "zipperlab/zipper.hpp"

using namespace zipperlab;

namespace {

Matrix random_contraction(int L, std::uint64_t seed, double scale) {
  return scale * haar_unitary(L, SeedSpec{seed, 0});
}

PhasePair identity_phases(int L) {
  return PhasePair{Matrix::Identity(L, L), Matrix::Identity(L, L)};
}

}  // namespace

TEST_CASE("zero coefficient gives identity defect operators") {
  const auto vd = VerblunskyData::make(Matrix::Zero(3, 3));
  CHECK((vd.rho() - Matrix::Identity(3, 3)).norm() <= 1e-14);
  CHECK((vd.rho_tilde() - Matrix::Identity(3, 3)).norm() <= 1e-14);
  CHECK(vd.is_zero());
}

TEST_CASE("scalar defect operator value") {
  const auto vd = VerblunskyData::make(0.5 * Matrix::Identity(1, 1));
  const double expected = std::sqrt(0.75);
  CHECK(std::abs(vd.rho()(0, 0).real() - expected) <= 1e-12);
  CHECK(std::abs(vd.rho_tilde()(0, 0).real() - expected) <= 1e-12);
  CHECK(std::abs(vd.rho()(0, 0).imag()) <= 1e-15);
}

TEST_CASE("defect squares recombine to the identity") {
  // oracle: direct matrix multiplication
  const Matrix alpha = random_contraction(3, 71, 0.8);
  const auto vd = VerblunskyData::make(alpha);
  const Matrix id = Matrix::Identity(3, 3);
  CHECK((vd.rho() * vd.rho() + alpha * alpha.adjoint() - id).norm() <= 1e-12);
  CHECK((vd.rho_tilde() * vd.rho_tilde() + alpha.adjoint() * alpha - id).norm() <= 1e-12);
  CHECK((alpha * vd.rho_tilde() - vd.rho() * alpha).norm() <= 1e-12);
  CHECK((vd.rho() - vd.rho().adjoint()).norm() <= 1e-13);  // Hermitian root
}

TEST_CASE("contraction violation is rejected") {
  CHECK_THROWS_AS(VerblunskyData::make(Matrix::Identity(2, 2)), ContractionError);
  CHECK_THROWS_AS(VerblunskyData::make(1.2 * haar_unitary(2, SeedSpec{5, 0})), ContractionError);
  CHECK_THROWS_AS(VerblunskyData::make(Matrix::Zero(2, 3)), InvalidArgumentError);
}

TEST_CASE("defect inverses agree with the roots") {
  const auto vd = VerblunskyData::make(random_contraction(3, 72, 0.6));
  const Matrix id = Matrix::Identity(3, 3);
  CHECK((vd.rho() * vd.rho_inv() - id).norm() <= 1e-12);
  CHECK((vd.rho_tilde() * vd.rho_tilde_inv() - id).norm() <= 1e-12);
  CHECK((vd.rho_tilde_inv() * vd.rho_tilde_inv() - vd.rho_tilde_inv_sq()).norm() <= 1e-12);
}

TEST_CASE("scattering event at alpha = 0 with identity phases is the swap") {
  const auto vd = VerblunskyData::make(Matrix::Zero(2, 2));
  const auto s = build_scattering(vd, identity_phases(2));
  Matrix expected = Matrix::Zero(4, 4);
  expected.topRightCorner(2, 2) = Matrix::Identity(2, 2);
  expected.bottomLeftCorner(2, 2) = Matrix::Identity(2, 2);
  CHECK((s.full() - expected).norm() <= 1e-14);
}

TEST_CASE("scalar scattering event blocks") {
  const auto vd = VerblunskyData::make(0.5 * Matrix::Identity(1, 1));
  const auto s = build_scattering(vd, identity_phases(1));
  const double r = std::sqrt(0.75);
  CHECK(std::abs(s.a(0, 0) - Complex(0.5, 0)) <= 1e-12);
  CHECK(std::abs(s.b(0, 0) - Complex(r, 0)) <= 1e-12);
  CHECK(std::abs(s.c(0, 0) - Complex(r, 0)) <= 1e-12);
  CHECK(std::abs(s.d(0, 0) - Complex(-0.5, 0)) <= 1e-12);
}

TEST_CASE("random scattering events are unitary with unimodular determinant") {
  // oracle: direct multiplication
  const auto vd = VerblunskyData::make(random_contraction(3, 73, 0.7));
  double worst_unitary = 0.0, worst_det = 0.0, worst_contraction = 0.0;
  double min_b_sigma = 1.0;
  for (int k = 0; k < 25; ++k) {
    const auto s = build_scattering(vd, phase_pair_at(3, SeedSpec{74, 0}, k));
    const Matrix full = s.full();
    worst_unitary = std::max(worst_unitary, unitarity_residual(full));
    worst_det = std::max(worst_det, std::abs(std::abs(full.determinant()) - 1.0));
    worst_contraction = std::max(worst_contraction, s.a.jacobiSvd().singularValues()(0));
    min_b_sigma = std::min(min_b_sigma, s.b_min_singular());
  }
  CHECK(worst_unitary <= 1e-12);
  CHECK(worst_det <= 1e-10);
  CHECK(worst_contraction < 1.0);  // upper-left block stays a strict contraction
  CHECK(min_b_sigma > 1e-10);      // b stays safely invertible under Haar phases
}

TEST_CASE("scattering rejects mismatched phase dimensions") {
  const auto vd = VerblunskyData::make(Matrix::Zero(2, 2));
  CHECK_THROWS_AS(build_scattering(vd, identity_phases(3)), InvalidArgumentError);
}

TEST_CASE("finite zipper with identity phases is unitary and banded") {
  const auto vd = VerblunskyData::make(0.5 * Matrix::Identity(1, 1));
  {
    const std::vector<PhasePair> phases(4, identity_phases(1));
    const auto fz = assemble_finite(vd, phases, 4);
    CHECK(unitarity_residual(fz.u_op) <= 1e-12);
    CHECK(unitarity_residual(fz.v_op) <= 1e-12);
    CHECK(unitarity_residual(fz.w_op) <= 1e-12);
    CHECK((fz.u_op - fz.v_op * fz.w_op).norm() == 0.0);
  }
  {
    const std::vector<PhasePair> phases(8, identity_phases(1));
    const auto fz = assemble_finite(vd, phases, 8);
    for (int i = 0; i < 8; ++i)
      for (int j = 0; j < 8; ++j) {
        const int dist = std::min(std::abs(i - j), 8 - std::abs(i - j));
        if (dist > 3) CHECK(std::abs(fz.u_op(i, j)) == 0.0);
      }
  }
}

TEST_CASE("finite zipper eigenvalues lie on the circle") {
  const auto vd = VerblunskyData::make(random_contraction(2, 75, 0.5));
  const auto phases = phase_sequence(2, 12, SeedSpec{76, 0});
  const auto fz = assemble_finite(vd, phases, 12);
  Eigen::ComplexEigenSolver<Matrix> es(fz.u_op, false);
  REQUIRE(es.info() == Eigen::Success);
  CHECK((es.eigenvalues().cwiseAbs().array() - 1.0).abs().maxCoeff() <= 1e-10);
}

TEST_CASE("zero coefficient leaves one nonzero block per block-row") {
  const int L = 2, n_blocks = 8;
  const auto vd = VerblunskyData::make(Matrix::Zero(L, L));
  const auto phases = phase_sequence(L, n_blocks, SeedSpec{77, 0});
  const auto fz = assemble_finite(vd, phases, n_blocks);
  for (int bi = 0; bi < n_blocks; ++bi) {
    int nonzero = 0;
    for (int bj = 0; bj < n_blocks; ++bj)
      if (fz.u_op.block(bi * L, bj * L, L, L).norm() > 1e-14) ++nonzero;
    CHECK(nonzero == 1);
  }
}

TEST_CASE("assemble_finite validates block count and phase count") {
  const auto vd = VerblunskyData::make(Matrix::Zero(1, 1));
  const std::vector<PhasePair> five(5, identity_phases(1));
  CHECK_THROWS_AS(assemble_finite(vd, five, 5), InvalidArgumentError);  // odd
  const std::vector<PhasePair> two(2, identity_phases(1));
  CHECK_THROWS_AS(assemble_finite(vd, two, 2), InvalidArgumentError);  // too small
  const std::vector<PhasePair> four(4, identity_phases(1));
  CHECK_THROWS_AS(assemble_finite(vd, four, 6), InvalidArgumentError);  // count mismatch

  const auto vd4 = VerblunskyData::make(Matrix::Zero(4, 4));
  const std::vector<PhasePair> big(2048, identity_phases(4));
  CHECK_THROWS_AS(assemble_finite(vd4, big, 2048), InvalidArgumentError);  // above dense cap
}
