// Acceptance suite: runs every property the project promises at full scale
// and prints one pass/fail line per criterion. Exit code 0 iff all
// non-informational criteria hold.
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <string>
#include <vector>

#include "zipperlab/diagnostics.hpp"
#include "zipperlab/lie.hpp"
#include "zipperlab/lyapunov.hpp"

using namespace zipperlab;

namespace {

struct CriterionResult {
  int id;
  std::string label;
  bool pass;
  bool informational;
  std::string detail;
};

std::vector<CriterionResult> g_results;

void report(int id, const std::string& label, bool pass, const std::string& detail,
            bool informational = false) {
  g_results.push_back({id, label, pass, informational, detail});
  std::printf("[%s] criterion %d: %s (%s)\n",
              pass ? "PASS" : (informational ? "INFO-FAIL" : "FAIL"), id, label.c_str(),
              detail.c_str());
  std::fflush(stdout);
}

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof buf, format, args);
  va_end(args);
  return buf;
}

// The per-channel coefficient families exercised by the spectrum criteria:
// a scalar multiple of the identity and a diagonal with one strong channel.
Matrix alpha_uniform(int L, double a) { return a * Matrix::Identity(L, L); }

Matrix alpha_diagonal(int L, double first, double rest) {
  Matrix alpha = Matrix::Zero(L, L);
  alpha(0, 0) = first;
  for (int j = 1; j < L; ++j) alpha(j, j) = rest;
  return alpha;
}

struct SpectrumConfig {
  int L;
  std::string name;
  Matrix alpha;
};

std::vector<SpectrumConfig> spectrum_configs() {
  std::vector<SpectrumConfig> configs;
  for (int L : {1, 2, 3}) {
    configs.push_back({L, "0.5*I(L=" + std::to_string(L) + ")", alpha_uniform(L, 0.5)});
    configs.push_back(
        {L, "diag(0.6,0.2,..)(L=" + std::to_string(L) + ")", alpha_diagonal(L, 0.6, 0.2)});
  }
  return configs;
}

std::vector<Complex> roots_of_unity(int n) {
  std::vector<Complex> grid;
  for (int k = 0; k < n; ++k) grid.push_back(std::polar(1.0, 2.0 * M_PI * k / n));
  return grid;
}

constexpr std::uint64_t kMasterSeed = 0x5a1ad501ULL;
constexpr long kSteps = 100000;
constexpr int kRealizations = 16;
constexpr int kOracleRealizations = 8;

}  // namespace

int main() {
  const auto suite_start = std::chrono::steady_clock::now();
  const auto grid8 = roots_of_unity(8);
  const auto configs = spectrum_configs();

  // Shared full-scale sweep data for criteria 1, 2 and 8.
  std::vector<SweepResult> sweeps;
  {
    const auto t0 = std::chrono::steady_clock::now();
    for (std::size_t c = 0; c < configs.size(); ++c) {
      LyapunovOptions opts;
      opts.n_steps = kSteps;
      opts.n_realizations = kRealizations;
      const auto vd = VerblunskyData::make(configs[c].alpha);
      sweeps.push_back(sweep(vd, grid8, opts, SeedSpec{kMasterSeed, c}));
      if (!sweeps.back().failed_points.empty()) {
        std::printf("unexpected sweep failure for %s\n", configs[c].name.c_str());
        return 1;
      }
    }
    std::printf("-- shared sweeps done in %.1fs\n", seconds_since(t0));
  }

  // 1. pairing symmetry: |gamma_j + gamma_{2L+1-j}| <= max(5e-3, 4 stderr)
  {
    double worst_residual = 0.0, worst_margin = -1.0;
    std::string where;
    bool pass = true;
    for (std::size_t c = 0; c < configs.size(); ++c)
      for (const auto& pt : sweeps[c].points)
        for (int j = 1; j <= pt.two_L(); ++j) {
          const double residual = pt.pairing_residual(j);
          const double bound = std::max(5e-3, 4.0 * pt.pairing_stderr(j));
          if (residual > worst_residual) {
            worst_residual = residual;
            where = configs[c].name;
          }
          if (residual > bound) pass = false;
          worst_margin = std::max(worst_margin, residual - bound);
        }
    report(1, "pairing symmetry over the z-grid", pass,
           fmt("max residual %.2e at %s, floor 5e-3", worst_residual, where.c_str()));
  }

  // 2. positivity of all L exponents at every grid point; L = 2 gap
  {
    bool pass = true;
    double worst = 1e9;
    std::string where;
    for (std::size_t c = 0; c < configs.size(); ++c)
      for (const auto& pt : sweeps[c].points)
        for (int j = 0; j < configs[c].L; ++j) {
          const double margin = pt.gammas(j) - 3.0 * pt.stderrs(j);
          if (margin < worst) {
            worst = margin;
            where = configs[c].name;
          }
          if (margin <= 0.0) pass = false;
        }

    double min_gap_sig = 1e9;
    for (std::size_t c = 0; c < configs.size(); ++c) {
      if (configs[c].L != 2 || configs[c].name.rfind("diag", 0) != 0) continue;
      for (const auto& pt : sweeps[c].points) {
        const auto gaps = distinctness_report(pt);
        min_gap_sig = std::min(min_gap_sig, gaps[0].gap / std::max(1e-300, gaps[0].stderr_combined));
        if (!gaps[0].significant) pass = false;
      }
    }
    report(2, "positivity and distinctness", pass,
           fmt("min (gamma_L - 3 se) = %.2e at %s; min gap significance %.1f sigma", worst,
               where.c_str(), min_gap_sig));
  }

  // 3. degenerate control at alpha = 0
  {
    bool pass = true;
    double worst_gamma = 0.0;
    for (int L : {1, 2, 3}) {
      const auto vd = VerblunskyData::make(Matrix::Zero(L, L));
      LyapunovOptions opts;
      opts.n_steps = 10000;
      opts.n_realizations = 8;
      for (const Complex& z : grid8) {
        const auto spec = lyapunov_spectrum(vd, z, opts, SeedSpec{kMasterSeed, 900 + static_cast<std::uint64_t>(L)});
        worst_gamma = std::max(worst_gamma, spec.gammas.cwiseAbs().maxCoeff());
        if (worst_gamma > 1e-3) pass = false;
      }
      for (const Complex& z : {Complex(1, 0), Complex(0, 1)}) {
        const auto closure = bracket_closure(tangent_generators(vd, z));
        if (closure.dimension != 2 * L * L) pass = false;
      }
    }
    report(3, "degenerate control at alpha = 0", pass,
           fmt("max |gamma| = %.2e (tol 1e-3); closures at 2L^2", worst_gamma));
  }

  // 4. Lie certification at full dimension, with bracket identity residuals
  {
    const auto t0 = std::chrono::steady_clock::now();
    bool pass = true;
    double worst_residual = 0.0;
    const Complex zs[] = {Complex(1, 0), Complex(0, 1), std::polar(1.0, M_PI / 7)};
    for (int L : {1, 2, 3}) {
      const Matrix alphas[] = {alpha_uniform(L, 0.5), alpha_diagonal(L, 0.3, 0.0)};
      for (const Matrix& alpha : alphas) {
        const auto vd = VerblunskyData::make(alpha);
        for (const Complex& z : zs) {
          const auto closure = bracket_closure(tangent_generators(vd, z));
          if (closure.dimension != 4 * L * L) pass = false;
          const auto rep = bracket_identity_checks(vd, z);
          worst_residual = std::max(worst_residual, rep.max_residual());
          if (rep.max_residual() > 1e-10) pass = false;
        }
      }
    }
    const double dt = seconds_since(t0);
    if (dt > 60.0) pass = false;
    report(4, "bracket closure reaches u(L,L)", pass,
           fmt("all dims 4L^2; max identity residual %.2e (tol 1e-10); %.1fs (budget 60s)",
               worst_residual, dt));
  }

  // 5. transfer matrix vs phi-product over 1000 draws
  {
    bool pass = true;
    double worst = 0.0;
    for (int L : {1, 2, 4}) {
      const auto vd = VerblunskyData::make(0.55 * haar_unitary(L, SeedSpec{kMasterSeed, 50 + static_cast<std::uint64_t>(L)}));
      std::mt19937_64 zrng = SeedSpec{kMasterSeed, 60 + static_cast<std::uint64_t>(L)}.engine();
      const PhaseStream stream(L, SeedSpec{kMasterSeed, 70 + static_cast<std::uint64_t>(L)});
      for (int k = 0; k < 334; ++k) {
        const Complex z = std::polar(1.0, 2.0 * M_PI * uniform01(zrng));
        const Complex z_inv = Complex(1, 0) / z;
        const PhasePair p0 = stream.at(2 * k), p1 = stream.at(2 * k + 1);
        const Matrix t = transfer_matrix(vd, z, p0, p1);
        auto s0 = build_scattering(vd, p0);
        s0.a *= z_inv;
        s0.b *= z_inv;
        s0.c *= z_inv;
        s0.d *= z_inv;
        const double res = (t - phi_map(s0) * phi_map(build_scattering(vd, p1))).norm();
        worst = std::max(worst, res);
        if (res > 1e-11) pass = false;
      }
    }
    report(5, "transfer matrix equals the phi product", pass,
           fmt("max deviation %.2e over 1002 draws (tol 1e-11)", worst));
  }

  // 6. Lorentz-group conservation along the cocycle + Cayley conjugates
  {
    bool pass = true;
    double worst_gram = 0.0, worst_symp = 0.0;
    for (std::size_t c = 0; c < configs.size(); ++c) {
      const auto vd = VerblunskyData::make(configs[c].alpha);
      for (const Complex& z : {Complex(1, 0), Complex(0, 1), std::polar(1.0, M_PI / 7)}) {
        const auto rep = wronskian_harness(vd, z, SeedSpec{kMasterSeed, 100 + c}, 1000);
        worst_gram = std::max(worst_gram, rep.max_gram_residual);
        worst_symp = std::max(worst_symp, rep.max_symplectic_residual);
      }
    }
    if (worst_gram > 1e-8 || worst_symp > 1e-10) pass = false;
    report(6, "Lorentz and symplectic conservation to n = 1e3", pass,
           fmt("max scaled group residual %.2e (tol 1e-8); Cayley residual %.2e (tol 1e-10)",
               worst_gram, worst_symp));
  }

  // 7. Wronskian conservation for solution pairs, L <= 4
  {
    bool pass = true;
    double worst = 0.0;
    for (int L : {1, 2, 3, 4}) {
      const auto vd = VerblunskyData::make(alpha_uniform(L, 0.4));
      for (const Complex& z : {Complex(0, 1), std::polar(1.0, M_PI / 7)}) {
        const auto rep = wronskian_harness(vd, z, SeedSpec{kMasterSeed, 200 + static_cast<std::uint64_t>(L)}, 1000);
        worst = std::max(worst, rep.max_pair_drift);
      }
    }
    {  // the mixed-channel configuration as well
      const auto vd = VerblunskyData::make(alpha_diagonal(2, 0.6, 0.2));
      const auto rep = wronskian_harness(vd, Complex(0, 1), SeedSpec{kMasterSeed, 210}, 1000);
      worst = std::max(worst, rep.max_pair_drift);
    }
    if (worst > 1e-9) pass = false;
    report(7, "Wronskian drift over n = 1e3", pass, fmt("max scaled drift %.2e (tol 1e-9)", worst));
  }

  // 8. estimator cross-validation on the criterion-1 configurations.
  // One verdict per configuration and exponent: the 8 grid points are
  // independent replicates of the same comparison, so they are pooled;
  // a hard 3-sigma gate on each of the ~576 per-point comparisons would
  // trip on expected t-distribution tails with no estimator at fault.
  {
    const auto t0 = std::chrono::steady_clock::now();
    bool pass = true;
    double worst_pooled = 0.0, worst_point = 0.0;
    std::string where;
    for (std::size_t c = 0; c < configs.size(); ++c) {
      const auto vd = VerblunskyData::make(configs[c].alpha);
      BlockedOptions opts;
      opts.n_steps = kSteps;
      opts.n_realizations = kOracleRealizations;

      const int dim = 2 * configs[c].L;
      Eigen::VectorXd qr_mean = Eigen::VectorXd::Zero(dim), qr_var = Eigen::VectorXd::Zero(dim);
      Eigen::VectorXd bl_mean = Eigen::VectorXd::Zero(dim), bl_var = Eigen::VectorXd::Zero(dim);
      for (std::size_t g = 0; g < grid8.size(); ++g) {
        const auto oracle = lyapunov_spectrum_blocked(
            vd, grid8[g], opts, SeedSpec{kMasterSeed ^ 0xffffULL, 300 + 8 * c + g});
        const auto& qr = sweeps[c].points[g];
        for (int j = 0; j < dim; ++j) {
          qr_mean(j) += qr.gammas(j);
          qr_var(j) += qr.stderrs(j) * qr.stderrs(j);
          bl_mean(j) += oracle.gammas(j);
          bl_var(j) += oracle.stderrs(j) * oracle.stderrs(j);
          const double per_point =
              std::abs(qr.gammas(j) - oracle.gammas(j)) /
              std::max(1e-300, std::sqrt(qr.stderrs(j) * qr.stderrs(j) +
                                         oracle.stderrs(j) * oracle.stderrs(j)));
          worst_point = std::max(worst_point, per_point);
        }
      }
      const double n_points = static_cast<double>(grid8.size());
      for (int j = 0; j < dim; ++j) {
        const double diff = std::abs(qr_mean(j) - bl_mean(j)) / n_points;
        const double combined = std::sqrt(qr_var(j) + bl_var(j)) / n_points;
        const double zscore = diff / std::max(1e-300, combined);
        if (zscore > worst_pooled) {
          worst_pooled = zscore;
          where = configs[c].name + " j=" + std::to_string(j + 1);
        }
        if (zscore > 3.0) pass = false;
      }
    }
    report(8, "QR vs compound-matrix estimator agreement", pass,
           fmt("max pooled |difference|/stderr = %.2f sigma at %s (bound 3); per-point max %.2f; %.0fs",
               worst_pooled, where.c_str(), worst_point, seconds_since(t0)));
  }

  // 9. finite-operator integrity up to dimension 1024
  {
    const auto t0 = std::chrono::steady_clock::now();
    bool pass = true;
    double worst_unitary = 0.0, worst_circle = 0.0;
    const struct {
      int L;
      int n_blocks;
    } sizes[] = {{1, 256}, {2, 512}};
    for (const auto& sz : sizes) {
      const auto vd = VerblunskyData::make(alpha_uniform(sz.L, 0.5));
      const auto phases = phase_sequence(sz.L, sz.n_blocks, SeedSpec{kMasterSeed, 400 + static_cast<std::uint64_t>(sz.L)});
      const auto fz = assemble_finite(vd, phases, sz.n_blocks);
      worst_unitary = std::max(worst_unitary, unitarity_residual(fz.u_op));
      const auto rep = finite_spectrum(fz);
      worst_circle = std::max(worst_circle, rep.max_circle_residual());
    }
    const double dt = seconds_since(t0);
    if (worst_unitary > 1e-10 || worst_circle > 1e-10 || dt > 60.0) pass = false;
    report(9, "finite truncation integrity to dim 1024", pass,
           fmt("unitarity %.2e, circle residual %.2e (tol 1e-10); %.1fs (budget 60s)",
               worst_unitary, worst_circle, dt));
  }

  // 10. localization contrast (informational: finite-volume surrogate)
  {
    const auto vd_zero = VerblunskyData::make(Matrix::Zero(1, 1));
    const auto vd_pos = VerblunskyData::make(alpha_uniform(1, 0.5));
    const auto rep = localization_contrast(vd_zero, vd_pos, 200, 16, SeedSpec{kMasterSeed, 500});
    report(10, "localization contrast (informational)", rep.ratio > 2.0,
           fmt("median IPR ratio %.2f (threshold 2), bootstrap [%.2f, %.2f]", rep.ratio,
               rep.bootstrap_interval[0], rep.bootstrap_interval[1]),
           /*informational=*/true);
  }

  std::printf("-- acceptance suite finished in %.1fs\n", seconds_since(suite_start));

  bool all_pass = true;
  for (const auto& r : g_results)
    if (!r.pass && !r.informational) all_pass = false;
  std::printf("%s\n", all_pass ? "ACCEPTANCE: all required criteria pass"
                               : "ACCEPTANCE: FAILURES present");
  return all_pass ? 0 : 1;
}
