#include "zipperlab/haar.hpp"

#include <cmath>

#include "zipperlab/errors.hpp"

namespace zipperlab {

double unitarity_residual(const Matrix& u) {
  const int n = static_cast<int>(u.cols());
  return (u.adjoint() * u - Matrix::Identity(n, n)).norm();
}

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// One Box-Muller pair; used instead of std::normal_distribution so that
// streams are reproducible across standard library implementations.
inline Complex standard_complex_gaussian(std::mt19937_64& rng) {
  const double u1 = 1.0 - uniform01(rng);  // (0,1], keeps log finite
  const double u2 = uniform01(rng);
  const double r = std::sqrt(-2.0 * std::log(u1));
  return Complex(r * std::cos(kTwoPi * u2), r * std::sin(kTwoPi * u2));
}

}  // namespace

HaarSampler::HaarSampler(int L) : L_(L), ginibre_(L, L), qr_(L, L), workspace_(L) {
  if (L < 1) throw InvalidArgumentError("HaarSampler: L must be >= 1");
}

void HaarSampler::sample(std::mt19937_64& rng, Matrix& out) {
  const int L = L_;
  for (int i = 0; i < L; ++i)
    for (int j = 0; j < L; ++j) ginibre_(i, j) = standard_complex_gaussian(rng);

  qr_.compute(ginibre_);
  out.resize(L, L);
  out.setIdentity();
  qr_.householderQ().applyThisOnTheLeft(out, workspace_);

  // Without the phase fix the Q of a QR factorization is not Haar: the
  // factorization is only unique once diag(R) is made positive. Rescale
  // column j by R_jj/|R_jj| (real for Householder R, so the conjugate
  // convention coincides).
  const Matrix& r = qr_.matrixQR();
  for (int j = 0; j < L; ++j) {
    const Complex d = r(j, j);
    const double a = std::abs(d);
    out.col(j) *= (a > 0.0) ? d / a : Complex(1.0, 0.0);
  }
}

Matrix HaarSampler::sample(std::mt19937_64& rng) {
  Matrix out(L_, L_);
  sample(rng, out);
  return out;
}

Matrix haar_unitary(int L, std::mt19937_64& rng) {
  HaarSampler sampler(L);
  return sampler.sample(rng);
}

Matrix haar_unitary(int L, const SeedSpec& seed) {
  std::mt19937_64 rng = seed.engine();
  return haar_unitary(L, rng);
}

PhasePair phase_pair_at(int L, const SeedSpec& seed, std::int64_t site) {
  std::mt19937_64 rng = seed.for_site(site).engine();
  PhasePair p;
  p.u = haar_unitary(L, rng);
  p.v = haar_unitary(L, rng);
  return p;
}

std::vector<PhasePair> phase_sequence(int L, int n_sites, const SeedSpec& seed) {
  if (n_sites < 1) throw InvalidArgumentError("phase_sequence: n_sites must be >= 1");
  std::vector<PhasePair> out;
  out.reserve(static_cast<std::size_t>(n_sites));
  for (int n = 0; n < n_sites; ++n) out.push_back(phase_pair_at(L, seed, n));
  return out;
}

}  // namespace zipperlab
