#ifndef ZIPPERLAB_DIAGNOSTICS_HPP
#define ZIPPERLAB_DIAGNOSTICS_HPP

#include <array>
#include <string>

#include <json.hpp>

#include "zipperlab/transfer.hpp"

namespace zipperlab {

/// Inverse participation ratio with components grouped in C^L blocks:
/// sum_n ||v_n||^4 / (sum_n ||v_n||^2)^2, in (0, 1].
double ipr_blockwise(const Vector& v, int L);

/// Eigenvalues, unit-circle residuals and eigenvector IPRs of a finite
/// truncation.
struct SpectrumReport {
  Eigen::VectorXcd eigenvalues;
  Eigen::VectorXd circle_residuals;  ///< | |lambda| - 1 | per eigenvalue
  Eigen::VectorXd ipr;               ///< per normalized eigenvector
  int n_blocks = 0;
  int L = 0;
  std::string alpha_descriptor;
  std::uint64_t seed = 0;

  double max_circle_residual() const;
  nlohmann::json to_json() const;
  /// CSV rows: index, lambda_re, lambda_im, circle_residual, ipr.
  void write_csv(std::ostream& os) const;
};

/// Full dense eigendecomposition of the assembled operator.
SpectrumReport finite_spectrum(const FiniteZipper& fz);

/// Localization evidence as a contrast between the degenerate (alpha = 0)
/// and scattering (alpha != 0) configurations: ratio of median eigenvector
/// IPRs pooled over samples, with a bootstrap percentile interval.
struct ContrastReport {
  double median_ipr_zero = 0.0;
  double median_ipr_pos = 0.0;
  double ratio = 0.0;
  std::array<double, 2> bootstrap_interval{0.0, 0.0};  ///< 2.5% / 97.5%
  int n_samples = 0;
  int n_blocks = 0;
};

ContrastReport localization_contrast(const VerblunskyData& vd_zero, const VerblunskyData& vd_pos,
                                     int n_blocks, int n_samples, const SeedSpec& seed);

/// Propagates the full 2L-solution frame and tracks conservation of the
/// pairwise Wronskians, i.e. of the Gram matrix Phi(n)* L Phi(n) = L.
///
/// The frame is renormalized every step (the log scale is carried
/// separately), so the probe runs at any exponent without overflow; all
/// drifts are relative to the squared frame scale, the only sense in which
/// an exponentially growing cocycle can conserve anything in finite
/// precision. The report also carries the symplectic residual of the
/// Cayley conjugate of the same frame.
struct WronskianDriftReport {
  double max_pair_drift = 0.0;         ///< max over n and frame pairs of scaled |W_n - W_0|
  double max_gram_residual = 0.0;      ///< max over n of the relative Gram deviation
  double max_symplectic_residual = 0.0;///< Cayley conjugate vs the form J, same scaling
  double drift_slope = 0.0;            ///< max_pair_drift / n_max
  double final_log_scale = 0.0;        ///< log ||Phi(n_max)||_F
  int n_max = 0;
};

WronskianDriftReport wronskian_harness(const VerblunskyData& vd, Complex z, const SeedSpec& seed,
                                       int n_max);

}  // namespace zipperlab

#endif
