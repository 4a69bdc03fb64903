// sfdoa: batch DOA estimation, success sweeps and manifold bandwidth analysis.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sfdoa/config.hpp"
#include "sfdoa/csv.hpp"
#include "sfdoa/error.hpp"
#include "sfdoa/manifold.hpp"
#include "sfdoa/pipeline.hpp"
#include "sfdoa/simulate.hpp"

namespace fs = std::filesystem;
using namespace sfdoa;

namespace {

constexpr int kExitEstimation = 1;
constexpr int kExitConfig = 2;

struct Args {
  std::string scenario;
  std::string geometry;
  std::string out = "out";
  std::string reference = "centroid";
  std::optional<int> p;
  std::optional<double> gamma_db;
  std::optional<long> seed;
  std::optional<int> trials;
  int jobs = 1;
  bool resume = false;
  bool timing = false;
  std::string radii = "2:0.5:10";
  std::string gammas = "-160";
};

class Writer {
 public:
  explicit Writer(const fs::path& path) : path_(path), out_(path, std::ios::binary | std::ios::trunc) {
    if (!out_) throw IoError("cannot write " + path.string(), path.string());
  }
  Writer(const fs::path& path, std::ios::openmode mode) : path_(path), out_(path, std::ios::binary | mode) {
    if (!out_) throw IoError("cannot write " + path.string(), path.string());
  }
  void row(const std::vector<std::string>& fields) {
    out_ << csv::join_fields(fields) << '\n';
    out_.flush();
    if (!out_) throw IoError("write failed for " + path_.string(), path_.string());
  }

 private:
  fs::path path_;
  std::ofstream out_;
};

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoError("cannot create output directory " + dir.string(), dir.string());
}

void write_json(const fs::path& path, const nlohmann::json& j) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string(), path.string());
  out << j.dump(2) << '\n';
}

std::string num(double v) { return csv::format_double(v); }

void log_timing(const fs::path& dir, const std::string& what, double seconds) {
  std::ofstream log(dir / "timing.log", std::ios::app);
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%S", std::gmtime(&now));
  log << stamp << ' ' << what << ' ' << seconds << "s\n";
}

int run_estimate(Scenario scn, const Args& args) {
  const fs::path dir = args.out;
  ensure_dir(dir);
  if (args.p) scn.options.p = *args.p;
  if (args.gamma_db) scn.options.gamma_db = *args.gamma_db;

  const ComplexVector y = synthesize(scn);
  const auto start = std::chrono::steady_clock::now();
  const EstimateResult res = estimate(y, scn.geometry, scn.options);
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  auto j = to_json(res, args.timing ? std::optional<double>(elapsed) : std::nullopt);
  nlohmann::json truth = nlohmann::json::array();
  for (const auto& s : scn.sources) {
    truth.push_back({{"angle_deg", rad2deg(s.theta)}, {"magnitude", std::abs(s.amplitude)},
                     {"phase_deg", rad2deg(std::arg(s.amplitude))}});
  }
  j["truth"] = truth;
  j["sensors"] = scn.geometry.size();
  write_json(dir / "result.json", j);
  if (args.timing) log_timing(dir, "estimate", elapsed);

  constexpr int grid = 3600;
  const auto r = autocorrelation(DualPolynomial::from_vector(res.sdp.dual_poly));
  Writer dual(dir / "dual_poly.csv");
  Writer nonneg(dir / "nonneg_poly.csv");
  dual.row({"theta_deg", "magnitude"});
  nonneg.row({"theta_deg", "value"});
  for (int g = 0; g < grid; ++g) {
    const double th = grid_angle(g, grid);
    dual.row({num(rad2deg(th)), num(std::abs(eval_trig_poly(res.sdp.dual_poly, th)))});
    nonneg.row({num(rad2deg(th)), num(nonneg_value(r, th))});
  }

  Writer roots_csv(dir / "roots.csv");
  roots_csv.row({"real", "imag", "modulus", "angle_deg", "near_unit_circle"});
  for (const auto& z : res.q_roots) {
    const bool near = std::abs(std::abs(z) - 1.0) <= scn.options.root_tol;
    roots_csv.row({num(z.real()), num(z.imag()), num(std::abs(z)), num(rad2deg(std::arg(z))), near ? "1" : "0"});
  }

  // CBF scaled so its peak matches the largest recovered magnitude.
  const auto cbf = cbf_spectrum(y, scn.geometry, grid);
  double peak = 0.0, mag = 0.0;
  for (double v : cbf) peak = std::max(peak, v);
  for (const auto& s : res.doa.amplitudes) mag = std::max(mag, std::abs(s));
  const double scale = peak > 0.0 && mag > 0.0 ? mag / peak : 1.0;
  Writer cmp(dir / "comparison.csv");
  cmp.row({"theta_deg", "cbf", "cbf_scaled"});
  for (int g = 0; g < grid; ++g) {
    const auto i = static_cast<std::size_t>(g);
    cmp.row({num(rad2deg(grid_angle(g, grid))), num(cbf[i]), num(cbf[i] * scale)});
  }
  Writer est(dir / "estimates.csv");
  est.row({"role", "angle_deg", "magnitude", "phase_deg"});
  for (const auto& s : scn.sources) {
    est.row({"truth", num(rad2deg(s.theta)), num(std::abs(s.amplitude)), num(rad2deg(std::arg(s.amplitude)))});
  }
  for (std::size_t i = 0; i < res.doa.angles.size(); ++i) {
    const Complex s = res.doa.amplitudes[i];
    est.row({"estimate", num(rad2deg(res.doa.angles[i])), num(std::abs(s)), num(rad2deg(std::arg(s)))});
  }

  std::cout << j.dump(2) << '\n';
  return 0;
}

Scenario scenario_with_overrides(const Args& args) {
  if (args.scenario.empty()) throw ConfigError("--scenario is required");
  auto doc = config::read_document(args.scenario);
  if (!args.geometry.empty()) {
    doc.sections["geometry"] = {{"type", "csv", 0}, {"path", fs::absolute(args.geometry).string(), 0},
                                {"reference", args.reference, 0}};
  }
  return config::scenario_from(doc);
}

Scenario demo_scenario() {
  const char* text =
      "[geometry]\n"
      "type = uca\nsensors = 40\nradius_over_lambda = 2\n"
      "[sources]\n"
      "source = -10.3, 5, 0\nsource = 30.5, 30, 0\nsource = 70.7, 7, 0\n"
      "[estimate]\np = 61\n";
  return config::scenario_from(config::parse_document(text, "<demo>"));
}

// Completed rows of a previous run. Every row must match the cell it stands
// for; anything else is reported with its line number.
std::size_t check_resume(const fs::path& path, const ExperimentConfig& cfg) {
  const auto table = csv::read_file(path.string());
  if (table.header != sweep_header()) {
    throw ConfigError(path.string() + ":1: header does not match the sweep columns");
  }
  const auto cells = sweep_cells(cfg);
  if (table.rows.size() > cells.size()) {
    throw ConfigError(path.string() + ":" + std::to_string(table.line_numbers[cells.size()]) +
                      ": more rows than sweep cells");
  }
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    const auto where = path.string() + ":" + std::to_string(table.line_numbers[i]);
    const auto expect = sweep_fields({cells[i], cfg.trials, 0.0, 0.0, 0.0});
    if (row.size() != expect.size()) throw ConfigError(where + ": bad row (wrong field count)");
    for (std::size_t k = 0; k < 5; ++k) {
      if (row[k] != expect[k]) throw ConfigError(where + ": bad row (does not match sweep cell " + std::to_string(i) + ")");
    }
    for (std::size_t k = 5; k < row.size(); ++k) {
      double v = 0.0;
      if (!csv::parse_double(row[k], v) || v < 0.0 || (k < 7 && v > 1.0)) {
        throw ConfigError(where + ": bad row (invalid " + sweep_header()[k] + ")");
      }
    }
  }
  return table.rows.size();
}

int run_sweep(const Args& args) {
  if (args.scenario.empty()) throw ConfigError("--scenario is required (a sweep file)");
  auto cfg = config::load_sweep(args.scenario);
  if (args.trials) cfg.trials = *args.trials;
  if (args.seed) cfg.seed = static_cast<std::uint64_t>(*args.seed);
  if (args.p) cfg.p = {*args.p};
  if (args.gamma_db) cfg.options.gamma_db = *args.gamma_db;
  cfg.jobs = args.jobs;
  cfg.timing = args.timing;
  validate(cfg);

  const fs::path dir = args.out;
  ensure_dir(dir);
  const fs::path path = dir / "sweep.csv";
  std::size_t done = 0;
  std::optional<Writer> out;
  if (args.resume && fs::exists(path)) {
    done = check_resume(path, cfg);
    out.emplace(path, std::ios::app);
  } else {
    out.emplace(path);
    out->row(sweep_header());
  }
  const auto start = std::chrono::steady_clock::now();
  success_sweep(cfg, [&](const SweepRow& row) {
    out->row(sweep_fields(row));
    std::cout << csv::join_fields(sweep_fields(row)) << '\n' << std::flush;
  }, done);
  if (args.timing) {
    log_timing(dir, "sweep", std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
  }
  return 0;
}

int run_analyze(const Args& args) {
  std::vector<double> radii, gammas;
  try {
    radii = config::parse_number_list(args.radii);
    gammas = config::parse_number_list(args.gammas);
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("--radii/--gammas: ") + e.what());
  }
  for (double g : gammas) {
    if (g < -200.0 || g > -40.0) throw ConfigError("--gammas values must lie in [-200, -40]");
  }
  for (double r : radii) {
    if (r < 0.0) throw ConfigError("--radii values must be nonnegative");
  }
  const fs::path dir = args.out;
  ensure_dir(dir);
  const auto rows = bandwidth_profile(radii, gammas);
  Writer prof(dir / "bandwidth.csv");
  prof.row({"radius_over_lambda", "gamma_db", "min_p"});
  for (const auto& row : rows) prof.row({num(row.radius_over_lambda), num(row.gamma_db), std::to_string(row.min_p)});

  Writer fits(dir / "fits.csv");
  fits.row({"gamma_db", "slope", "intercept"});
  nlohmann::json summary = nlohmann::json::array();
  for (double g : gammas) {
    std::vector<double> x, y;
    for (const auto& row : rows) {
      if (row.gamma_db == g) {
        x.push_back(row.radius_over_lambda);
        y.push_back(row.min_p);
      }
    }
    if (std::set<double>(x.begin(), x.end()).size() < 2) continue;
    const auto fit = fit_line(x, y);
    fits.row({num(g), num(fit.slope), num(fit.intercept)});
    summary.push_back({{"gamma_db", g}, {"slope", fit.slope}, {"intercept", fit.intercept}});
  }
  std::cout << summary.dump(2) << '\n';
  return 0;
}

int report(const Error& e, const std::string& out_dir, int code) {
  nlohmann::json j = {{"error", e.kind()}, {"message", e.what()}, {"exit_code", code}};
  if (const auto* io = dynamic_cast<const IoError*>(&e)) j["path"] = io->path();
  if (const auto* r = dynamic_cast<const RootingError*>(&e)) j["worst_residual"] = r->worst_residual();
  if (const auto* c = dynamic_cast<const ConditioningError*>(&e)) j["condition_number"] = c->condition_number();
  std::cerr << j.dump() << '\n';
  std::error_code ec;
  if (!out_dir.empty() && fs::is_directory(out_dir, ec)) {
    std::ofstream f(fs::path(out_dir) / "error.json");
    f << j.dump(2) << '\n';
  }
  return code;
}

int exit_code_for(const Error& e) {
  if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const IoError*>(&e) ||
      dynamic_cast<const ArgumentError*>(&e) || dynamic_cast<const GenerationError*>(&e)) {
    return kExitConfig;
  }
  return kExitEstimation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Search-free DOA estimation for planar arrays"};
  app.require_subcommand(1);
  Args args;

  auto common = [&](CLI::App* cmd) {
    cmd->add_option("--out", args.out, "Output directory")->capture_default_str();
    cmd->add_option("--p", args.p, "Number of Fourier coefficients (odd)");
    cmd->add_option("--gamma-db", args.gamma_db, "Truncation level in dB");
    cmd->add_flag("--timing", args.timing, "Record wall-clock time (sidecar timing.log)");
  };

  auto* est = app.add_subcommand("estimate", "Estimate DOAs for a scenario file");
  est->add_option("--scenario", args.scenario, "Scenario file")->required();
  est->add_option("--geometry", args.geometry, "Geometry CSV overriding the scenario's array");
  est->add_option("--reference", args.reference, "Reference point for --geometry")
      ->check(CLI::IsMember({"centroid", "origin"}))
      ->capture_default_str();
  common(est);

  auto* demo = app.add_subcommand("demo", "Run the built-in three-source UCA example");
  common(demo);

  auto* sweep = app.add_subcommand("sweep", "Monte-Carlo success probability sweep");
  sweep->add_option("--scenario", args.scenario, "Sweep file")->required();
  sweep->add_option("--seed", args.seed, "Master seed");
  sweep->add_option("--trials", args.trials, "Trials per cell");
  sweep->add_option("--jobs", args.jobs, "Worker threads")->capture_default_str();
  sweep->add_flag("--resume", args.resume, "Skip cells already present in the output CSV");
  common(sweep);

  auto* analyze = app.add_subcommand("analyze-manifold", "Minimum P versus sensor radius");
  analyze->add_option("--radii", args.radii, "Radii in wavelengths (list or a:step:b)")->capture_default_str();
  analyze->add_option("--gammas", args.gammas, "Truncation levels in dB")->capture_default_str();
  analyze->add_option("--out", args.out, "Output directory")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  try {
    if (args.p && (*args.p < 3 || *args.p % 2 == 0)) throw ConfigError("--p must be odd and at least 3");
    if (args.gamma_db && (*args.gamma_db < -200.0 || *args.gamma_db > -40.0)) {
      throw ConfigError("--gamma-db must lie in [-200, -40]");
    }
    if (args.trials && *args.trials < 1) throw ConfigError("--trials must be at least 1");
    if (args.jobs < 1) throw ConfigError("--jobs must be at least 1");
    if (*est) return run_estimate(scenario_with_overrides(args), args);
    if (*demo) return run_estimate(demo_scenario(), args);
    if (*sweep) return run_sweep(args);
    if (*analyze) return run_analyze(args);
  } catch (const Error& e) {
    return report(e, args.out, exit_code_for(e));
  } catch (const std::exception& e) {
    std::cerr << nlohmann::json{{"error", "internal"}, {"message", e.what()}, {"exit_code", kExitEstimation}}.dump()
              << '\n';
    return kExitEstimation;
  }
  return 0;
}
