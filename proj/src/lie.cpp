#include "zipperlab/lie.hpp"

#include <algorithm>
#include <cmath>

#include "zipperlab/alpha_io.hpp"
#include "zipperlab/errors.hpp"

namespace zipperlab {

namespace {

constexpr double kMembershipTol = 1e-11;
constexpr double kAcceptTol = 1e-9;  // residual above which a direction counts as new

Matrix unit_entry(int L, int i, int j) {
  Matrix e = Matrix::Zero(L, L);
  e(i, j) = Complex(1, 0);
  return e;
}

Matrix embed_blocks(const Matrix& a, const Matrix& b, const Matrix& c, const Matrix& d) {
  const int L = static_cast<int>(a.rows());
  Matrix m(2 * L, 2 * L);
  m.topLeftCorner(L, L) = a;
  m.topRightCorner(L, L) = b;
  m.bottomLeftCorner(L, L) = c;
  m.bottomRightCorner(L, L) = d;
  return m;
}

/// [[0, B], [B*, 0]] — the off-diagonal u(L,L) slice determined by B.
Matrix off_diagonal_element(const Matrix& b) {
  const int L = static_cast<int>(b.rows());
  return embed_blocks(Matrix::Zero(L, L), b, b.adjoint(), Matrix::Zero(L, L));
}

Matrix commutator(const Matrix& x, const Matrix& y) { return x * y - y * x; }

// Anti-Hermitian basis of M_L(C): i E_jj, E_jk - E_kj, i(E_jk + E_kj).
std::vector<Matrix> anti_hermitian_basis(int L) {
  std::vector<Matrix> out;
  const Complex iu(0, 1);
  for (int j = 0; j < L; ++j) out.push_back(iu * unit_entry(L, j, j));
  for (int j = 0; j < L; ++j)
    for (int k = j + 1; k < L; ++k) {
      out.push_back(unit_entry(L, j, k) - unit_entry(L, k, j));
      out.push_back(iu * (unit_entry(L, j, k) + unit_entry(L, k, j)));
    }
  return out;
}

Eigen::VectorXd real_vectorize(const Matrix& m) {
  const Eigen::Index n = m.size();
  Eigen::VectorXd v(2 * n);
  Eigen::Map<const Eigen::VectorXcd> flat(m.data(), n);
  v.head(n) = flat.real();
  v.tail(n) = flat.imag();
  return v;
}

Matrix real_unvectorize(const Eigen::VectorXd& v, int rows, int cols) {
  const Eigen::Index n = static_cast<Eigen::Index>(rows) * cols;
  Matrix m(rows, cols);
  Eigen::Map<Eigen::VectorXcd> flat(m.data(), n);
  flat.real() = v.head(n);
  flat.imag() = v.tail(n);
  return m;
}

// Incrementally maintained orthonormal real span.
class RealSpan {
public:
  explicit RealSpan(int matrix_dim) : dim_(matrix_dim) {}

  bool add(const Matrix& candidate) {
    Eigen::VectorXd v = real_vectorize(candidate);
    const double norm0 = v.norm();
    if (norm0 < 1e-13) return false;
    v /= norm0;
    // two projection passes keep the basis orthonormal to machine precision
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& b : ortho_) v -= b.dot(v) * b;
    const double rem = v.norm();
    if (rem <= kAcceptTol) return false;
    v /= rem;
    ortho_.push_back(v);
    return true;
  }

  int size() const { return static_cast<int>(ortho_.size()); }

  std::vector<Matrix> matrices() const {
    std::vector<Matrix> out;
    out.reserve(ortho_.size());
    for (const auto& v : ortho_) out.push_back(real_unvectorize(v, dim_, dim_));
    return out;
  }

  // SVD rank of the stacked vectors at 1e-9 relative threshold; also reports
  // the absolute threshold used.
  std::pair<int, double> verified_rank() const {
    Eigen::MatrixXd stack(ortho_.front().size(), static_cast<Eigen::Index>(ortho_.size()));
    for (Eigen::Index c = 0; c < stack.cols(); ++c) stack.col(c) = ortho_[static_cast<std::size_t>(c)];
    Eigen::VectorXd sv = stack.jacobiSvd().singularValues();
    const double tol = 1e-9 * sv(0);
    int rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
      if (sv(i) > tol) ++rank;
    return {rank, tol};
  }

private:
  int dim_;
  std::vector<Eigen::VectorXd> ortho_;
};

}  // namespace

std::vector<Matrix> block_diagonal_basis(int L) {
  std::vector<Matrix> out;
  const Matrix zero = Matrix::Zero(L, L);
  for (const auto& a : anti_hermitian_basis(L)) out.push_back(embed_blocks(a, zero, zero, zero));
  for (const auto& d : anti_hermitian_basis(L)) out.push_back(embed_blocks(zero, zero, zero, d));
  return out;
}

std::vector<Matrix> ull_basis(int L) {
  std::vector<Matrix> out = block_diagonal_basis(L);
  const Complex iu(0, 1);
  for (int j = 0; j < L; ++j)
    for (int k = 0; k < L; ++k) {
      out.push_back(off_diagonal_element(unit_entry(L, j, k)));
      out.push_back(off_diagonal_element(iu * unit_entry(L, j, k)));
    }
  return out;
}

std::vector<Matrix> tangent_generators(const VerblunskyData& vd, Complex z) {
  const int L = vd.L();
  std::vector<Matrix> gens = block_diagonal_basis(L);

  const Matrix t1 = that_matrices(vd, z).second;
  const Matrix t1_inv = lorentz_inverse(t1);
  const Complex iu(0, 1);
  const Matrix zero = Matrix::Zero(L, L);
  for (int j = 0; j < L; ++j) {
    Matrix pin = embed_blocks(unit_entry(L, j, j), zero, zero, zero);
    gens.push_back(iu * (t1_inv * pin * t1));
  }
  return gens;
}

LieBasis bracket_closure(const std::vector<Matrix>& gens, int max_rounds) {
  if (gens.empty()) throw InvalidArgumentError("bracket_closure: empty generator list");
  const int dim2L = static_cast<int>(gens.front().rows());
  if (dim2L % 2 != 0) throw InvalidArgumentError("bracket_closure: odd matrix dimension");
  const int cap = dim2L * dim2L;  // 4 L^2 real dimensions

  for (const auto& g : gens) {
    if (g.rows() != dim2L || g.cols() != dim2L)
      throw InvalidArgumentError("bracket_closure: generator size mismatch");
    if (ull_membership_residual(g) > kMembershipTol * std::max(1.0, g.norm()))
      throw InvalidArgumentError("bracket_closure: generator is not in u(L,L)");
  }

  RealSpan span(dim2L);
  for (const auto& g : gens) span.add(g);
  if (span.size() == 0)
    throw InvalidArgumentError("bracket_closure: generators span the zero subspace");

  std::vector<Matrix> basis = span.matrices();
  int fresh_begin = 0;  // brackets of [fresh, all] are the only new candidates
  int rounds = 0;
  bool grew = true;

  while (grew && rounds < max_rounds) {
    ++rounds;
    const int old_size = static_cast<int>(basis.size());
    grew = false;
    for (int i = fresh_begin; i < old_size; ++i)
      for (int j = 0; j < old_size; ++j) {
        if (i == j) continue;
        if (span.add(commutator(basis[static_cast<std::size_t>(i)],
                                basis[static_cast<std::size_t>(j)])))
          grew = true;
      }
    if (grew) {
      basis = span.matrices();
      fresh_begin = old_size;
    }
    if (span.size() >= cap) break;
  }

  if (grew && span.size() < cap && rounds >= max_rounds)
    throw NonConvergenceError("bracket_closure: dimension still growing after " +
                              std::to_string(max_rounds) + " rounds (last sizes " +
                              std::to_string(fresh_begin) + " -> " + std::to_string(span.size()) +
                              ")");

  auto [rank, tol] = span.verified_rank();
  if (rank != span.size())
    throw NumericError("bracket_closure: orthonormal basis failed the SVD rank check");

  LieBasis out;
  out.elements = span.matrices();
  out.dimension = rank;
  out.rank_tol = tol;
  out.rounds = rounds;
  return out;
}

double BracketIdentityReport::max_residual() const {
  return std::max(std::max(curve_sum_residual, double_bracket_residual),
                  std::max(fill_row_residual, fill_col_residual));
}

BracketIdentityReport bracket_identity_checks(const VerblunskyData& vd, Complex z) {
  const int L = vd.L();
  const Matrix x = vd.rho_tilde_inv_sq() * vd.alpha().adjoint();

  BracketIdentityReport rep;
  double best = 0.0;
  for (int i = 0; i < L; ++i)
    for (int j = 0; j < L; ++j)
      if (std::abs(x(i, j)) > best) {
        best = std::abs(x(i, j));
        rep.row = i;
        rep.col = j;
      }
  if (best == 0.0)
    throw DegenerateInputError("bracket_identity_checks: alpha = 0 has no off-diagonal generator");
  rep.coefficient = x(rep.row, rep.col);

  const Complex iu(0, 1);
  const Matrix zero = Matrix::Zero(L, L);
  const Complex c = rep.coefficient;
  const int r = rep.row, s = rep.col;

  // Sum of the conjugated curve derivatives equals the off-diagonal element
  // determined by iX, up to its block-diagonal (phase-algebra) part.
  {
    const Matrix t1 = that_matrices(vd, z).second;
    const Matrix t1_inv = lorentz_inverse(t1);
    Matrix sum = iu * (t1_inv * embed_blocks(Matrix::Identity(L, L), zero, zero, zero) * t1);
    Matrix off = sum;
    off.topLeftCorner(L, L).setZero();
    off.bottomRightCorner(L, L).setZero();
    rep.curve_sum_residual = (off - off_diagonal_element(iu * x)).norm();
  }

  // Pinching by the two diagonal projectors isolates one matrix entry.
  const Matrix g_full = off_diagonal_element(iu * x);
  const Matrix pin_top = embed_blocks(iu * unit_entry(L, r, r), zero, zero, zero);
  const Matrix pin_bottom = embed_blocks(zero, zero, zero, iu * unit_entry(L, s, s));
  const Matrix g_single = commutator(pin_bottom, commutator(pin_top, g_full));
  rep.double_bracket_residual =
      (g_single - off_diagonal_element(iu * c * unit_entry(L, r, s))).norm();

  if (L >= 2) {
    // Bracketing with block-diagonal elements moves the isolated entry to
    // any (row, column), filling the whole off-diagonal subspace.
    const int k = (r + 1) % L;
    const Matrix mover_row =
        embed_blocks(unit_entry(L, k, r) - unit_entry(L, r, k), zero, zero, zero);
    const Matrix moved_row = commutator(mover_row, g_single);
    rep.fill_row_residual =
        (moved_row - off_diagonal_element(iu * c * unit_entry(L, k, s))).norm();

    const int j = (s + 1) % L;
    const Matrix mover_col =
        embed_blocks(zero, zero, zero, iu * (unit_entry(L, j, s) + unit_entry(L, s, j)));
    const Matrix moved_col = commutator(moved_row, mover_col);
    rep.fill_col_residual =
        (moved_col - off_diagonal_element(-c * unit_entry(L, k, j))).norm();
  }
  return rep;
}

CayleyData CayleyData::make(int L) {
  const Matrix id = Matrix::Identity(L, L);
  const Complex iu(0, 1);
  CayleyData out;
  out.c = (1.0 / std::sqrt(2.0)) *
          embed_blocks(id, -iu * id, id, iu * id);
  out.j = embed_blocks(Matrix::Zero(L, L), -id, id, Matrix::Zero(L, L));
  return out;
}

Eigen::MatrixXd real_split(const Matrix& m) {
  const int n = static_cast<int>(m.rows());
  Eigen::MatrixXd out(2 * n, 2 * n);
  out.topLeftCorner(n, n) = m.real();
  out.topRightCorner(n, n) = -m.imag();
  out.bottomLeftCorner(n, n) = m.imag();
  out.bottomRightCorner(n, n) = m.real();
  return out;
}

CayleyReport cayley_checks(const std::vector<Matrix>& samples) {
  if (samples.empty()) throw InvalidArgumentError("cayley_checks: no samples");
  const int L = static_cast<int>(samples.front().rows()) / 2;
  const CayleyData cd = CayleyData::make(L);
  const Eigen::MatrixXd j_split = real_split(cd.j);

  CayleyReport rep;
  rep.best_min_relative_gap = 0.0;

  std::vector<Matrix> conjugated;
  conjugated.reserve(samples.size());
  for (const auto& m : samples) {
    Matrix mc = cd.c.adjoint() * m * cd.c;
    const double scale = std::max(1.0, mc.squaredNorm());
    rep.max_symplectic_residual = std::max(
        rep.max_symplectic_residual, (mc.adjoint() * cd.j * mc - cd.j).norm() / scale);

    Eigen::MatrixXd sp = real_split(mc);
    rep.max_split_symplectic =
        std::max(rep.max_split_symplectic,
                 (sp.transpose() * j_split * sp - j_split).norm() / std::max(1.0, sp.squaredNorm()));
    conjugated.push_back(std::move(mc));

    Eigen::JacobiSVD<Matrix> svd(m);
    const Eigen::VectorXd& sv = svd.singularValues();
    double min_gap = 1.0;
    for (Eigen::Index i = 0; i + 1 < sv.size(); ++i)
      min_gap = std::min(min_gap, (sv(i) - sv(i + 1)) / sv(i));
    if (min_gap > rep.best_min_relative_gap) rep.best_min_relative_gap = min_gap;
    if (min_gap > 1e-6) rep.distinct_singular_values = true;
  }

  for (std::size_t i = 0; i + 1 < conjugated.size(); ++i) {
    const Matrix prod = conjugated[i] * conjugated[i + 1];
    const Eigen::MatrixXd lhs = real_split(prod);
    const Eigen::MatrixXd rhs = real_split(conjugated[i]) * real_split(conjugated[i + 1]);
    rep.max_split_multiplicativity =
        std::max(rep.max_split_multiplicativity,
                 (lhs - rhs).norm() / std::max(1.0, lhs.norm()));
  }
  return rep;
}

nlohmann::json lie_certification(const VerblunskyData& vd, Complex z, int max_rounds) {
  const int L = vd.L();
  const int full = 4 * L * L;
  const int expected = vd.is_zero() ? 2 * L * L : full;

  const std::vector<Matrix> gens = tangent_generators(vd, z);
  double membership = 0.0;
  for (const auto& g : gens) membership = std::max(membership, ull_membership_residual(g));

  const LieBasis closure = bracket_closure(gens, max_rounds);

  std::string verdict = "mismatch";
  if (closure.dimension == expected) verdict = vd.is_zero() ? "degenerate-as-predicted" : "pass";

  nlohmann::json residuals = {{"generator_membership", membership}};
  if (!vd.is_zero()) {
    const BracketIdentityReport rep = bracket_identity_checks(vd, z);
    residuals["curve_sum"] = rep.curve_sum_residual;
    residuals["double_bracket"] = rep.double_bracket_residual;
    residuals["fill_row"] = rep.fill_row_residual;
    residuals["fill_col"] = rep.fill_col_residual;
  }

  return nlohmann::json{{"L", L},
                        {"alpha_hash", alpha_fingerprint(vd.alpha())},
                        {"z", {z.real(), z.imag()}},
                        {"dimension", closure.dimension},
                        {"expected", expected},
                        {"expected_full", full},
                        {"verdict", verdict},
                        {"residuals", residuals},
                        {"rounds", closure.rounds}};
}

}  // namespace zipperlab
