#include <cmath>

#include "zipperlab/diagnostics.hpp"
#include "zipperlab/lie.hpp"
#include "zipperlab/lyapunov.hpp"
#include "zipperlab/runner.hpp"

namespace zipperlab {

namespace {

void record(std::vector<SelftestResult>& results, const std::string& name, double residual,
            double tolerance) {
  results.push_back({name, residual, tolerance, std::isfinite(residual) && residual <= tolerance});
}

Matrix random_contraction(int L, const SeedSpec& seed, double scale) {
  // scaled Haar unitary: singular values all equal to scale < 1
  return scale * haar_unitary(L, seed);
}

}  // namespace

std::vector<SelftestResult> selftest(int threads) {
  std::vector<SelftestResult> results;
  const SeedSpec seed{20240915ULL, 0};
  const Complex z_i(0, 1);

  // sampling
  {
    double worst = 0.0;
    for (int L = 1; L <= 3; ++L)
      for (int k = 0; k < 50; ++k)
        worst = std::max(worst, unitarity_residual(haar_unitary(L, seed.child(100 + k + 50 * L))));
    record(results, "haar-unitarity", worst, 1e-12);
  }

  // defect operators
  const VerblunskyData vd3 = VerblunskyData::make(random_contraction(3, seed.child(1), 0.7));
  {
    const Matrix id = Matrix::Identity(3, 3);
    const double res_rho = (vd3.rho() * vd3.rho() + vd3.alpha() * vd3.alpha().adjoint() - id).norm();
    const double res_rho_t =
        (vd3.rho_tilde() * vd3.rho_tilde() + vd3.alpha().adjoint() * vd3.alpha() - id).norm();
    record(results, "defect-square-roots", std::max(res_rho, res_rho_t), 1e-12);
    record(results, "defect-intertwining",
           (vd3.alpha() * vd3.rho_tilde() - vd3.rho() * vd3.alpha()).norm(), 1e-12);
  }

  // scattering events
  const VerblunskyData vd2 = VerblunskyData::make(random_contraction(2, seed.child(2), 0.5));
  {
    double worst_unit = 0.0, worst_det = 0.0;
    for (int k = 0; k < 20; ++k) {
      const auto s = build_scattering(vd2, phase_pair_at(2, seed.child(3), k));
      const Matrix full = s.full();
      worst_unit = std::max(worst_unit, unitarity_residual(full));
      worst_det = std::max(worst_det, std::abs(std::abs(full.determinant()) - 1.0));
    }
    record(results, "scattering-unitarity", worst_unit, 1e-12);
    record(results, "scattering-det-modulus", worst_det, 1e-10);
  }

  // finite truncation
  {
    const auto phases = phase_sequence(2, 16, seed.child(4));
    const FiniteZipper fz = assemble_finite(vd2, phases, 16);
    record(results, "zipper-unitarity", unitarity_residual(fz.u_op), 1e-10);
  }

  // transfer matrices
  {
    double worst_phi = 0.0, worst_rel = 0.0, worst_inv = 0.0;
    const Matrix id4 = Matrix::Identity(4, 4);
    for (int k = 0; k < 20; ++k) {
      const PhasePair p0 = phase_pair_at(2, seed.child(5), 2 * k);
      const PhasePair p1 = phase_pair_at(2, seed.child(5), 2 * k + 1);
      const Matrix t = transfer_matrix(vd2, z_i, p0, p1);

      const auto s0 = build_scattering(vd2, p0);
      ScatteringEvent s0z = s0;
      const Complex zi_conj = Complex(1, 0) / z_i;
      s0z.a *= zi_conj;
      s0z.b *= zi_conj;
      s0z.c *= zi_conj;
      s0z.d *= zi_conj;
      const Matrix via_phi = phi_map(s0z) * phi_map(build_scattering(vd2, p1));

      worst_phi = std::max(worst_phi, lorentz_residual(phi_map(s0)));
      worst_rel = std::max(worst_rel, (t - via_phi).norm());
      worst_inv = std::max(worst_inv, (lorentz_inverse(t) * t - id4).norm());
    }
    record(results, "phi-lorentz-membership", worst_phi, 1e-11);
    record(results, "transfer-phi-product", worst_rel, 1e-11);
    record(results, "lorentz-inverse-identity", worst_inv, 1e-11);
  }

  // cocycle conservation
  {
    const PhaseStream stream(2, seed.child(6));
    const Matrix phi = cocycle(vd2, z_i, stream, 100);
    record(results, "cocycle-lorentz-100", lorentz_residual(phi), 1e-8);
  }
  {
    const auto drift = wronskian_harness(vd2, z_i, seed.child(6), 1000);
    record(results, "cocycle-lorentz-1e3", drift.max_gram_residual, 1e-8);
  }
  {
    const auto drift = wronskian_harness(VerblunskyData::make(0.4 * Matrix::Identity(2, 2)), z_i,
                                         seed.child(7), 1000);
    record(results, "wronskian-drift-1e3", drift.max_pair_drift, 1e-9);
  }

  // exponents
  {
    LyapunovOptions opts;
    opts.n_steps = 10000;
    opts.n_realizations = 4;
    opts.threads = threads;
    const VerblunskyData vd0 = VerblunskyData::make(Matrix::Zero(2, 2));
    const auto spec0 = lyapunov_spectrum(vd0, z_i, opts, seed.child(8));
    record(results, "zero-alpha-exponents", spec0.gammas.cwiseAbs().maxCoeff(), 1e-3);

    opts.n_realizations = 8;
    const VerblunskyData vd_half = VerblunskyData::make(0.5 * Matrix::Identity(2, 2));
    const auto spec = lyapunov_spectrum(vd_half, z_i, opts, seed.child(9));
    double pairing_tol = 5e-3;
    for (int j = 1; j <= spec.two_L(); ++j)
      pairing_tol = std::max(pairing_tol, 4.0 * spec.pairing_stderr(j));
    record(results, "lyapunov-pairing", spec.max_pairing_residual(), pairing_tol);
    record(results, "lyapunov-positivity",
           -(spec.gammas(spec.two_L() / 2 - 1) - 3.0 * spec.stderrs(spec.two_L() / 2 - 1)), 0.0);
  }

  // Lie certification
  {
    const VerblunskyData vd_half = VerblunskyData::make(0.5 * Matrix::Identity(2, 2));
    const auto closure = bracket_closure(tangent_generators(vd_half, Complex(1, 0)));
    record(results, "closure-dimension-full", std::abs(closure.dimension - 16.0), 0.0);

    const VerblunskyData vd0 = VerblunskyData::make(Matrix::Zero(2, 2));
    const auto closure0 = bracket_closure(tangent_generators(vd0, Complex(1, 0)));
    record(results, "closure-dimension-degenerate", std::abs(closure0.dimension - 8.0), 0.0);

    Matrix almost_diag = Matrix::Zero(2, 2);
    almost_diag(0, 0) = 0.3;
    const auto rep =
        bracket_identity_checks(VerblunskyData::make(almost_diag), z_i);
    record(results, "bracket-identities", rep.max_residual(), 1e-10);
  }

  // Cayley conjugation on short cocycle products
  {
    std::vector<Matrix> samples;
    const PhaseStream stream(2, seed.child(10));
    for (long n : {10L, 20L, 30L}) samples.push_back(cocycle(vd2, z_i, stream, n));
    const auto rep = cayley_checks(samples);
    record(results, "cayley-symplectic", rep.max_symplectic_residual, 1e-10);
    record(results, "real-split-multiplicative", rep.max_split_multiplicativity, 1e-11);
    record(results, "distinct-singular-values", rep.distinct_singular_values ? 0.0 : 1.0, 0.5);
  }

  // finite spectrum diagnostics
  {
    const VerblunskyData vd1 = VerblunskyData::make(0.5 * Matrix::Identity(1, 1));
    const auto phases = phase_sequence(1, 64, seed.child(11));
    const auto rep = finite_spectrum(assemble_finite(vd1, phases, 64));
    record(results, "spectrum-circle-residual", rep.max_circle_residual(), 1e-10);
    record(results, "ipr-range",
           (rep.ipr.minCoeff() > 0.0 && rep.ipr.maxCoeff() <= 1.0 + 1e-12) ? 0.0 : 1.0, 0.5);

    const Vector uniform = Vector::Constant(64, Complex(1.0, 0.0));
    record(results, "ipr-uniform-vector", std::abs(ipr_blockwise(uniform, 1) - 1.0 / 64.0), 1e-12);
  }

  return results;
}

}  // namespace zipperlab
