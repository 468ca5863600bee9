#ifndef ZIPPERLAB_LYAPUNOV_HPP
#define ZIPPERLAB_LYAPUNOV_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "zipperlab/transfer.hpp"

namespace zipperlab {

enum class Direction { forward, backward };

struct LyapunovOptions {
  long n_steps = 100000;
  int n_realizations = 8;
  int reorth_period = 1;  ///< QR every step by default; the cocycle is stiff
  int threads = 0;
  Direction direction = Direction::forward;
};

/// Estimated exponent spectrum at one spectral parameter.
///
/// Exponents are per cocycle step, i.e. per two scattering events; divide
/// by 2 for a per-site normalization. gammas is sorted descending with
/// stderrs carried along (across-realization standard errors).
struct LyapunovSpectrum {
  Complex z;
  Eigen::VectorXd gammas;
  Eigen::VectorXd stderrs;
  long n_steps = 0;
  int n_realizations = 0;

  int two_L() const { return static_cast<int>(gammas.size()); }
  /// |gamma_j + gamma_{2L+1-j}| for the U(L,L) pairing symmetry.
  double pairing_residual(int j) const;
  double pairing_stderr(int j) const;
  double max_pairing_residual() const;
};

/// QR-reorthogonalized estimator: per realization, iterate Q <- qr_q(T Q),
/// accumulating log |diag R|. Phase pairs are drawn sequentially from the
/// realization stream seed.child(r).
LyapunovSpectrum lyapunov_spectrum(const VerblunskyData& vd, Complex z,
                                   const LyapunovOptions& opts, const SeedSpec& seed);

struct BlockedOptions {
  long n_steps = 100000;
  int n_realizations = 8;
  int block_size = 16;
  int threads = 0;
};

/// Independent cross-validation estimator on a different algebraic route:
/// the partial sums gamma_1+...+gamma_k equal the growth rate of the top
/// singular value of the k-th compound (exterior power) of the cocycle,
/// tracked over norm-rescaled blocked products. No QR factorization is
/// involved anywhere in this path.
LyapunovSpectrum lyapunov_spectrum_blocked(const VerblunskyData& vd, Complex z,
                                           const BlockedOptions& opts, const SeedSpec& seed);

/// k-th compound matrix: entries are the k x k minors det(m[I,J]) over
/// lexicographically ordered index subsets.
Matrix kth_compound(const Matrix& m, int k);

struct SweepResult {
  std::vector<LyapunovSpectrum> points;
  std::vector<std::pair<int, std::string>> failed_points;  ///< (grid index, reason)
  nlohmann::json manifest;
};

/// Evaluates the spectrum over a z-grid, one child seed per grid index.
/// A failed point is recorded in failed_points, not fatal.
SweepResult sweep(const VerblunskyData& vd, const std::vector<Complex>& z_grid,
                  const LyapunovOptions& opts, const SeedSpec& seed);

struct GapAssessment {
  int j = 0;          ///< gap between gamma_j and gamma_{j+1}, 1-based
  double gap = 0.0;
  double stderr_combined = 0.0;
  bool significant = false;  ///< gap > 3 * combined stderr
};

/// Gap report over the first L exponents (empty for L = 1).
std::vector<GapAssessment> distinctness_report(const LyapunovSpectrum& spec);

/// Number of exponents statistically indistinguishable from zero
/// (|gamma_j| < 4 stderr_j); 2L at alpha = 0, 0 when all exponents clear.
int zero_band_count(const LyapunovSpectrum& spec);

/// CSV emission: z_re, z_im, j, gamma_j, stderr_j, n_steps, n_realizations,
/// doubles at 17 significant digits.
void write_sweep_csv(std::ostream& os, const SweepResult& result);

}  // namespace zipperlab

#endif
