#include "zipperlab/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "zipperlab/errors.hpp"
#include "zipperlab/lie.hpp"

#ifdef ZIPPERLAB_HAVE_LAPACKE
#define lapack_complex_double std::complex<double>
#define lapack_complex_float std::complex<float>
#include <lapacke.h>
#endif

namespace zipperlab {

double ipr_blockwise(const Vector& v, int L) {
  if (v.size() % L != 0) throw InvalidArgumentError("ipr_blockwise: length not a multiple of L");
  const int n_blocks = static_cast<int>(v.size()) / L;
  double sum2 = 0.0, sum4 = 0.0;
  for (int n = 0; n < n_blocks; ++n) {
    const double w = v.segment(n * L, L).squaredNorm();
    sum2 += w;
    sum4 += w * w;
  }
  if (sum2 <= 0.0) throw InvalidArgumentError("ipr_blockwise: zero vector");
  return sum4 / (sum2 * sum2);
}

double SpectrumReport::max_circle_residual() const {
  return circle_residuals.size() ? circle_residuals.maxCoeff() : 0.0;
}

nlohmann::json SpectrumReport::to_json() const {
  nlohmann::json eig = nlohmann::json::array();
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i)
    eig.push_back({eigenvalues(i).real(), eigenvalues(i).imag()});
  return nlohmann::json{{"L", L},
                        {"n_blocks", n_blocks},
                        {"alpha_descriptor", alpha_descriptor},
                        {"seed", seed},
                        {"eigenvalues", eig},
                        {"circle_residuals", std::vector<double>(circle_residuals.data(),
                                                                 circle_residuals.data() +
                                                                     circle_residuals.size())},
                        {"ipr", std::vector<double>(ipr.data(), ipr.data() + ipr.size())}};
}

void SpectrumReport::write_csv(std::ostream& os) const {
  os << "index,lambda_re,lambda_im,circle_residual,ipr\n";
  char buf[160];
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%ld,%.17g,%.17g,%.17g,%.17g\n", static_cast<long>(i),
                  eigenvalues(i).real(), eigenvalues(i).imag(), circle_residuals(i), ipr(i));
    os << buf;
  }
}

namespace {

// Dense nonsymmetric eigendecomposition. LAPACK's blocked solver carries the
// dim <= 4096 cap of the diagnostics path; Eigen's unblocked Schur is kept
// for small problems and as the fallback when LAPACKE is absent.
void dense_eigensystem(const Matrix& m, Eigen::VectorXcd& values, Matrix& vectors) {
#ifdef ZIPPERLAB_HAVE_LAPACKE
  if (m.rows() > 128) {
    const lapack_int n = static_cast<lapack_int>(m.rows());
    Matrix work = m;
    values.resize(n);
    vectors.resize(n, n);
    const lapack_int info = LAPACKE_zgeev(
        LAPACK_COL_MAJOR, 'N', 'V', n, reinterpret_cast<lapack_complex_double*>(work.data()), n,
        reinterpret_cast<lapack_complex_double*>(values.data()), nullptr, 1,
        reinterpret_cast<lapack_complex_double*>(vectors.data()), n);
    if (info != 0)
      throw NumericError("finite_spectrum: zgeev failed with info " + std::to_string(info));
    return;
  }
#endif
  Eigen::ComplexEigenSolver<Matrix> es(m, /*computeEigenvectors=*/true);
  if (es.info() != Eigen::Success)
    throw NumericError("finite_spectrum: eigensolver did not converge");
  values = es.eigenvalues();
  vectors = es.eigenvectors();
}

}  // namespace

SpectrumReport finite_spectrum(const FiniteZipper& fz) {
  Eigen::VectorXcd values;
  Matrix vectors;
  dense_eigensystem(fz.u_op, values, vectors);

  SpectrumReport rep;
  rep.L = fz.L;
  rep.n_blocks = fz.n_blocks;
  rep.eigenvalues = std::move(values);
  rep.circle_residuals = (rep.eigenvalues.cwiseAbs().array() - 1.0).abs();
  rep.ipr.resize(rep.eigenvalues.size());
  for (Eigen::Index k = 0; k < rep.eigenvalues.size(); ++k)
    rep.ipr(k) = ipr_blockwise(vectors.col(k), fz.L);
  return rep;
}

namespace {

double median_of(std::vector<double> v) {
  const std::size_t n = v.size();
  std::nth_element(v.begin(), v.begin() + static_cast<long>(n / 2), v.end());
  double m = v[n / 2];
  if (n % 2 == 0) {
    const auto lower = std::max_element(v.begin(), v.begin() + static_cast<long>(n / 2));
    m = 0.5 * (m + *lower);
  }
  return m;
}

std::vector<double> pooled_iprs(const VerblunskyData& vd, int n_blocks, int n_samples,
                                const SeedSpec& seed) {
  std::vector<double> pool;
  pool.reserve(static_cast<std::size_t>(n_samples) * static_cast<std::size_t>(n_blocks) * vd.L());
  for (int s = 0; s < n_samples; ++s) {
    const auto phases = phase_sequence(vd.L(), n_blocks, seed.child(static_cast<std::uint64_t>(s)));
    const SpectrumReport rep = finite_spectrum(assemble_finite(vd, phases, n_blocks));
    for (Eigen::Index i = 0; i < rep.ipr.size(); ++i) pool.push_back(rep.ipr(i));
  }
  return pool;
}

}  // namespace

ContrastReport localization_contrast(const VerblunskyData& vd_zero, const VerblunskyData& vd_pos,
                                     int n_blocks, int n_samples, const SeedSpec& seed) {
  if (vd_zero.L() != vd_pos.L())
    throw InvalidArgumentError("localization_contrast: channel counts differ");
  if (n_samples < 1) throw InvalidArgumentError("localization_contrast: n_samples must be >= 1");

  // same child seeds on both sides so identical inputs give ratio 1 exactly
  const std::vector<double> pool_zero = pooled_iprs(vd_zero, n_blocks, n_samples, seed);
  const std::vector<double> pool_pos = pooled_iprs(vd_pos, n_blocks, n_samples, seed);

  ContrastReport rep;
  rep.n_samples = n_samples;
  rep.n_blocks = n_blocks;
  rep.median_ipr_zero = median_of(pool_zero);
  rep.median_ipr_pos = median_of(pool_pos);
  rep.ratio = rep.median_ipr_pos / rep.median_ipr_zero;

  // percentile bootstrap over the pooled values
  constexpr int kResamples = 200;
  std::mt19937_64 rng = seed.child(0x626f6f74ULL).engine();
  std::vector<double> ratios(kResamples);
  std::vector<double> rz(pool_zero.size()), rp(pool_pos.size());
  for (int b = 0; b < kResamples; ++b) {
    for (auto& x : rz)
      x = pool_zero[static_cast<std::size_t>(uniform01(rng) * static_cast<double>(pool_zero.size()))];
    for (auto& x : rp)
      x = pool_pos[static_cast<std::size_t>(uniform01(rng) * static_cast<double>(pool_pos.size()))];
    ratios[static_cast<std::size_t>(b)] = median_of(rp) / median_of(rz);
  }
  std::sort(ratios.begin(), ratios.end());
  rep.bootstrap_interval = {ratios[static_cast<std::size_t>(0.025 * kResamples)],
                            ratios[static_cast<std::size_t>(0.975 * kResamples)]};
  return rep;
}

WronskianDriftReport wronskian_harness(const VerblunskyData& vd, Complex z, const SeedSpec& seed,
                                       int n_max) {
  const int L = vd.L();
  const int dim = 2 * L;
  const PhaseStream stream(L, seed);
  const Matrix form = lorentz_form(L);
  const CayleyData cayley = CayleyData::make(L);

  TransferFactory factory(vd, z);
  // columns are the 2L solution paths; renormalized each step with the log
  // scale carried aside so ||frame||_F = 1 throughout
  Matrix frame = Matrix::Identity(dim, dim) / std::sqrt(static_cast<double>(dim));
  double log_scale = 0.5 * std::log(static_cast<double>(dim));
  Matrix t(dim, dim), next(dim, dim);

  WronskianDriftReport rep;
  rep.n_max = n_max;
  for (int n = 1; n <= n_max; ++n) {
    factory.build(stream.at(2 * (n - 1)), stream.at(2 * (n - 1) + 1), t);
    next.noalias() = t * frame;
    frame.swap(next);
    const double step_norm = frame.norm();
    if (!std::isfinite(step_norm) || step_norm <= 0.0)
      throw NumericError("wronskian_harness: frame norm degenerate at step " + std::to_string(n));
    frame /= step_norm;
    log_scale += std::log(step_norm);

    // Unscaled the claim reads Phi* L Phi = L; on the renormalized frame
    // the conserved target is L / scale^2, which underflows harmlessly to
    // zero once the cocycle has grown past it.
    const double inv_scale_sq = std::exp(-2.0 * log_scale);
    const Matrix gram = frame.adjoint() * apply_lorentz_left(frame);
    const Matrix target = inv_scale_sq * form;
    rep.max_gram_residual = std::max(rep.max_gram_residual, (gram - target).norm());
    rep.max_pair_drift =
        std::max(rep.max_pair_drift, (gram - target).cwiseAbs().maxCoeff());

    const Matrix conjugated = cayley.c.adjoint() * frame * cayley.c;
    rep.max_symplectic_residual =
        std::max(rep.max_symplectic_residual,
                 (conjugated.adjoint() * cayley.j * conjugated - inv_scale_sq * cayley.j).norm());
  }
  rep.drift_slope = n_max > 0 ? rep.max_pair_drift / n_max : 0.0;
  rep.final_log_scale = log_scale;
  return rep;
}

}  // namespace zipperlab
