#ifndef ZIPPERLAB_HAAR_HPP
#define ZIPPERLAB_HAAR_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <vector>

#include "zipperlab/seeding.hpp"

namespace zipperlab {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Frobenius deviation of U from unitarity, ‖U*U − 1‖_F.
double unitarity_residual(const Matrix& u);

/// Haar-distributed unitary of size L, drawn from the given engine.
///
/// Ginibre matrix -> Householder QR -> column phase fix by the R diagonal.
/// Consumes a fixed number of engine outputs, so streams stay aligned.
Matrix haar_unitary(int L, std::mt19937_64& rng);

/// Haar-distributed unitary of size L; deterministic in the seed.
Matrix haar_unitary(int L, const SeedSpec& seed);

/// One site's pair of independent phase unitaries (u, v).
struct PhasePair {
  Matrix u;
  Matrix v;
};

/// Phase pair of a single site; depends only on (seed, site).
PhasePair phase_pair_at(int L, const SeedSpec& seed, std::int64_t site);

/// Reusable-workspace Haar sampler for hot loops (one instance per thread).
class HaarSampler {
public:
  explicit HaarSampler(int L);
  /// Draws into `out` (L x L) without allocating.
  void sample(std::mt19937_64& rng, Matrix& out);
  Matrix sample(std::mt19937_64& rng);

private:
  int L_;
  Matrix ginibre_;
  Eigen::HouseholderQR<Matrix> qr_;
  Vector workspace_;
};

/// i.i.d. phase pairs for sites 0..n_sites-1.
std::vector<PhasePair> phase_sequence(int L, int n_sites, const SeedSpec& seed);

/// Site-addressable disorder realization.
///
/// at(n) is a pure function of (seed, origin + n), so the stream can be
/// shifted and read at negative sites; shifted streams share the sites of
/// their parent. One cocycle step consumes two sites.
class PhaseStream {
public:
  PhaseStream(int L, const SeedSpec& seed, std::int64_t origin = 0)
      : L_(L), seed_(seed), origin_(origin) {}

  PhasePair at(std::int64_t site) const { return phase_pair_at(L_, seed_, origin_ + site); }

  /// Stream advanced by `steps` cocycle steps (2·steps sites).
  PhaseStream shifted(std::int64_t steps) const {
    return PhaseStream(L_, seed_, origin_ + 2 * steps);
  }

  int L() const { return L_; }

private:
  int L_;
  SeedSpec seed_;
  std::int64_t origin_;
};

}  // namespace zipperlab

#endif
