#include "zipperlab/runner.hpp"

#include <cmath>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "zipperlab/alpha_io.hpp"
#include "zipperlab/diagnostics.hpp"
#include "zipperlab/errors.hpp"
#include "zipperlab/lie.hpp"
#include "zipperlab/lyapunov.hpp"

namespace zipperlab {

const char* kToolVersion = "zipperlab 0.1.0";

namespace {

bool parse_double(const std::string& s, double& out) {
  try {
    std::size_t pos = 0;
    out = std::stod(s, &pos);
    return pos == s.size();
  } catch (...) {
    return false;
  }
}

std::string iso_timestamp() {
  std::time_t now = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return buf;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgumentError("cannot write " + path.string());
  out << text;
}

}  // namespace

Matrix RunConfig::resolve_alpha() const {
  double scalar = 0.0;
  Matrix alpha;
  if (parse_double(alpha_source, scalar)) {
    alpha = scalar * Matrix::Identity(L, L);
  } else {
    alpha = load_alpha_file(alpha_source);
    if (alpha.rows() != L && L != 1)
      throw InvalidArgumentError("alpha file has L = " + std::to_string(alpha.rows()) +
                                 " but --L = " + std::to_string(L));
  }
  return alpha;
}

std::vector<Complex> RunConfig::resolve_grid() const {
  std::vector<Complex> grid;
  if (z_grid > 0) {
    for (int k = 0; k < z_grid; ++k) {
      const double angle = 2.0 * M_PI * k / z_grid;
      grid.emplace_back(std::cos(angle), std::sin(angle));
    }
    return grid;
  }

  double re = 0.0, im = 0.0;
  const auto comma = z_spec.find(',');
  if (comma == std::string::npos) {
    if (!parse_double(z_spec, re)) throw InvalidArgumentError("bad --z value: " + z_spec);
  } else {
    if (!parse_double(z_spec.substr(0, comma), re) ||
        !parse_double(z_spec.substr(comma + 1), im))
      throw InvalidArgumentError("bad --z value: " + z_spec);
  }
  Complex z(re, im);
  const double r = std::abs(z);
  if (std::abs(r - 1.0) > 1e-9)
    throw InvalidArgumentError("--z must lie on the unit circle (within 1e-9), got |z| = " +
                               std::to_string(r));
  grid.push_back(z / r);
  return grid;
}

std::string RunConfig::resolve_output_dir() const {
  if (!output_dir.empty()) return output_dir;
  if (const char* env = std::getenv("ZIPPERLAB_OUTDIR"); env && *env) return env;
  return "zipperlab_out";
}

nlohmann::json make_manifest(const RunConfig& config) {
  const Matrix alpha = config.resolve_alpha();
  nlohmann::json grid = nlohmann::json::array();
  nlohmann::json streams = nlohmann::json::array();
  const SeedSpec root{config.master_seed, 0};
  const auto zs = config.resolve_grid();
  for (int g = 0; g < static_cast<int>(zs.size()); ++g) {
    grid.push_back({zs[static_cast<std::size_t>(g)].real(), zs[static_cast<std::size_t>(g)].imag()});
    const SeedSpec child = root.child(static_cast<std::uint64_t>(g));
    streams.push_back({{"grid_index", g}, {"stream_id", child.stream_id}});
  }

  return nlohmann::json{
      {"tool", kToolVersion},
      {"timestamp", iso_timestamp()},
      {"command", config.command},
      {"L", static_cast<int>(alpha.rows())},
      {"alpha", alpha_to_json(alpha)},
      {"alpha_fingerprint", alpha_fingerprint(alpha)},
      {"z_grid", grid},
      {"n_steps", config.n_steps},
      {"n_realizations", config.n_realizations},
      {"n_blocks", config.n_blocks},
      {"master_seed", config.master_seed},
      {"threads", config.threads},
      {"format", config.format},
      {"per_task_streams", streams},
      {"conventions",
       {{"exponent_normalization",
         "per cocycle step (two scattering events); divide by 2 for per-site rates"},
        {"truncation", "periodic wrap of the L-shifted odd factor"}}},
  };
}

namespace {

std::filesystem::path prepare_output_dir(const RunConfig& config) {
  const std::filesystem::path dir = config.resolve_output_dir();
  std::filesystem::create_directories(dir);
  const auto manifest_path = dir / "manifest.json";
  if (std::filesystem::exists(manifest_path) && !config.force)
    throw InvalidArgumentError("output directory already holds a run (" + manifest_path.string() +
                               "); pass --force to overwrite");
  return dir;
}

int run_lyapunov_like(const RunConfig& config, std::ostream& out, bool is_sweep) {
  const Matrix alpha = config.resolve_alpha();
  const VerblunskyData vd = VerblunskyData::make(alpha);
  const auto grid = config.resolve_grid();
  if (!is_sweep && grid.size() != 1)
    throw InvalidArgumentError("lyapunov expects a single --z; use sweep for grids");

  LyapunovOptions opts;
  opts.n_steps = config.n_steps;
  opts.n_realizations = config.n_realizations;
  opts.threads = config.threads;
  const SeedSpec root{config.master_seed, 0};

  const SweepResult result = sweep(vd, grid, opts, root);
  if (!result.failed_points.empty() && result.points.empty())
    throw NumericError("all grid points failed: " + result.failed_points.front().second);

  const auto dir = prepare_output_dir(config);
  std::ostringstream csv;
  write_sweep_csv(csv, result);
  write_text_file(dir / "results.csv", csv.str());

  nlohmann::json manifest = make_manifest(config);
  manifest["sweep"] = result.manifest;
  write_text_file(dir / "manifest.json", manifest.dump(2) + "\n");

  if (config.format == "json") {
    nlohmann::json points = nlohmann::json::array();
    for (const auto& pt : result.points) {
      nlohmann::json gaps = nlohmann::json::array();
      for (const auto& g : distinctness_report(pt))
        gaps.push_back({{"j", g.j},
                        {"gap", g.gap},
                        {"stderr", g.stderr_combined},
                        {"significant", g.significant}});
      points.push_back(
          {{"z", {pt.z.real(), pt.z.imag()}},
           {"gammas", std::vector<double>(pt.gammas.data(), pt.gammas.data() + pt.gammas.size())},
           {"stderrs",
            std::vector<double>(pt.stderrs.data(), pt.stderrs.data() + pt.stderrs.size())},
           {"max_pairing_residual", pt.max_pairing_residual()},
           {"zero_band_count", zero_band_count(pt)},
           {"gaps", gaps}});
    }
    write_text_file(dir / "results.json", points.dump(2) + "\n");
  }

  out << "wrote " << (dir / "results.csv").string() << " (" << result.points.size()
      << " grid points";
  if (!result.failed_points.empty()) out << ", " << result.failed_points.size() << " failed";
  out << ")\n";
  return kExitOk;
}

int run_lie_check(const RunConfig& config, std::ostream& out) {
  const VerblunskyData vd = VerblunskyData::make(config.resolve_alpha());
  const auto grid = config.resolve_grid();

  nlohmann::json reports = nlohmann::json::array();
  bool mismatch = false;
  for (const Complex& z : grid) {
    nlohmann::json rep = lie_certification(vd, z, config.max_rounds);
    mismatch = mismatch || rep["verdict"] == "mismatch";
    reports.push_back(std::move(rep));
  }
  const nlohmann::json payload = grid.size() == 1 ? reports.front() : reports;
  out << payload.dump(2) << "\n";

  if (!config.output_dir.empty()) {
    const auto dir = prepare_output_dir(config);
    write_text_file(dir / "lie_check.json", payload.dump(2) + "\n");
    write_text_file(dir / "manifest.json", make_manifest(config).dump(2) + "\n");
  }
  return mismatch ? kExitCertificationMismatch : kExitOk;
}

int run_spectrum(const RunConfig& config, std::ostream& out) {
  const VerblunskyData vd = VerblunskyData::make(config.resolve_alpha());
  const SeedSpec root{config.master_seed, 0};
  const auto phases = phase_sequence(vd.L(), config.n_blocks, root);

  SpectrumReport rep = finite_spectrum(assemble_finite(vd, phases, config.n_blocks));
  rep.alpha_descriptor = alpha_fingerprint(vd.alpha());
  rep.seed = config.master_seed;

  const auto dir = prepare_output_dir(config);
  write_text_file(dir / "spectrum.json", rep.to_json().dump(2) + "\n");
  std::ostringstream csv;
  rep.write_csv(csv);
  write_text_file(dir / "spectrum.csv", csv.str());
  write_text_file(dir / "manifest.json", make_manifest(config).dump(2) + "\n");

  out << "wrote " << (dir / "spectrum.json").string() << " (dim " << rep.eigenvalues.size()
      << ", max circle residual " << rep.max_circle_residual() << ")\n";
  return kExitOk;
}

int run_selftest(const RunConfig& config, std::ostream& out) {
  const auto results = selftest(config.threads);
  bool all_pass = true;
  for (const auto& r : results) {
    out << (r.pass ? "[ok]   " : "[FAIL] ") << r.name << ": residual " << r.residual
        << " (tolerance " << r.tolerance << ")\n";
    all_pass = all_pass && r.pass;
  }
  if (!all_pass) {
    for (const auto& r : results)
      if (!r.pass) {
        out << "selftest failed: " << r.name << "\n";
        break;
      }
    return kExitSelftestFailure;
  }
  out << "selftest: all " << results.size() << " invariants pass\n";
  return kExitOk;
}

}  // namespace

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    if (config.command == "lyapunov") return run_lyapunov_like(config, out, false);
    if (config.command == "sweep") return run_lyapunov_like(config, out, true);
    if (config.command == "lie-check") return run_lie_check(config, out);
    if (config.command == "spectrum") return run_spectrum(config, out);
    if (config.command == "selftest") return run_selftest(config, out);
    err << "unknown command: " << config.command << "\n";
    return kExitConfigError;
  } catch (const InvalidArgumentError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const ZipperError& e) {
    err << "numeric failure: " << e.what() << "\n";
    return kExitNumericFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumericFailure;
  }
}

}  // namespace zipperlab
