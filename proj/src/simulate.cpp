#include "sfdoa/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <map>
#include <mutex>
#include <random>
#include <thread>

#include "sfdoa/csv.hpp"
#include "sfdoa/error.hpp"

namespace sfdoa {

double grid_angle(int g, int grid) { return -kPi + 2.0 * kPi * (g + 1) / grid; }

std::vector<double> cbf_spectrum(const ComplexVector& y, const ArrayGeometry& geom, int grid) {
  if (grid < 2) throw ArgumentError("cbf_spectrum: grid must have at least two points");
  if (static_cast<std::size_t>(y.size()) != geom.size()) {
    throw ShapeError("cbf_spectrum: snapshot length does not match the array");
  }
  std::vector<double> out(static_cast<std::size_t>(grid));
  const double m = static_cast<double>(geom.size());
  for (int g = 0; g < grid; ++g) {
    out[static_cast<std::size_t>(g)] = std::abs(steering(geom, grid_angle(g, grid)).values.dot(y)) / m;
  }
  return out;
}

std::vector<int> local_maxima(const std::vector<double>& v) {
  std::vector<int> out;
  const int n = static_cast<int>(v.size());
  if (n < 3) return out;
  for (int i = 0; i < n; ++i) {
    const double prev = v[static_cast<std::size_t>((i + n - 1) % n)];
    const double next = v[static_cast<std::size_t>((i + 1) % n)];
    const double cur = v[static_cast<std::size_t>(i)];
    if (cur > prev && cur >= next) out.push_back(i);
  }
  return out;
}

double wrap_separation(double a, double b) { return std::abs(wrap_angle(a - b)); }

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

namespace {

// Uniform in [0, 1) from the top 53 bits; std distributions are not portable.
double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

std::vector<Source> random_scene(int count, double min_sep_deg, std::uint64_t seed, Complex amplitude) {
  if (count < 1) throw GenerationError("random_scene: need at least one source");
  if (!(min_sep_deg >= 0.0) || count * min_sep_deg >= 360.0) {
    throw GenerationError("random_scene: " + std::to_string(count) + " sources cannot be " +
                          csv::format_double(min_sep_deg) + " deg apart on the circle");
  }
  const double sep = deg2rad(min_sep_deg);
  std::mt19937_64 rng(seed);
  std::vector<double> angles;
  for (long attempt = 0; attempt < 1000000; ++attempt) {
    if (attempt % 10000 == 0) angles.clear();
    const double theta = kPi - 2.0 * kPi * unit(rng);
    const bool ok = std::all_of(angles.begin(), angles.end(),
                                [&](double a) { return wrap_separation(a, theta) >= sep; });
    if (!ok) continue;
    angles.push_back(theta);
    if (static_cast<int>(angles.size()) == count) {
      std::vector<Source> out;
      for (double a : angles) out.push_back({a, amplitude});
      return out;
    }
  }
  throw GenerationError("random_scene: rejection sampling did not place all sources");
}

bool all_matched(const std::vector<double>& truth, const std::vector<double>& estimate, double threshold_deg) {
  if (truth.size() != estimate.size()) return false;
  const double thr = deg2rad(threshold_deg);
  std::vector<char> used(estimate.size(), 0);
  for (double t : truth) {
    std::size_t best = estimate.size();
    double best_d = thr;
    for (std::size_t i = 0; i < estimate.size(); ++i) {
      const double d = wrap_separation(t, estimate[i]);
      if (!used[i] && d <= best_d) {
        best = i;
        best_d = d;
      }
    }
    if (best == estimate.size()) return false;
    used[best] = 1;
  }
  return true;
}

void validate(const ExperimentConfig& cfg) {
  auto fail = [](const std::string& what) { throw ConfigError("sweep config: " + what); };
  if (cfg.sensors < 2) fail("sensors must be at least 2");
  if (cfg.trials < 1) fail("trials must be at least 1");
  if (!(cfg.threshold_deg > 0.0)) fail("threshold_deg must be positive");
  if (cfg.jobs < 1) fail("jobs must be at least 1");
  if (cfg.p.empty() || cfg.radius_over_lambda.empty() || cfg.sources.empty() || cfg.min_separation_deg.empty()) {
    fail("p, radius_over_lambda, sources and min_separation_deg must all be nonempty");
  }
  for (int p : cfg.p) {
    if (p < 3 || p % 2 == 0) fail("p values must be odd and at least 3 (got " + std::to_string(p) + ")");
  }
  for (double r : cfg.radius_over_lambda) {
    if (!(r > 0.0) || !std::isfinite(r)) fail("radius_over_lambda values must be positive");
  }
  for (int l : cfg.sources) {
    if (l < 1 || l > cfg.sensors) fail("sources values must lie in [1, sensors]");
  }
  for (double d : cfg.min_separation_deg) {
    if (!(d >= 0.0)) fail("min_separation_deg values must be nonnegative");
    for (int l : cfg.sources) {
      if (l * d >= 360.0) fail("sources * min_separation_deg must stay below 360");
    }
  }
}

std::vector<SweepCell> sweep_cells(const ExperimentConfig& cfg) {
  std::vector<SweepCell> cells;
  for (double r : cfg.radius_over_lambda)
    for (int p : cfg.p)
      for (int l : cfg.sources)
        for (double d : cfg.min_separation_deg) cells.push_back({r, p, l, d});
  return cells;
}

namespace {

std::uint64_t scene_seed(const ExperimentConfig& cfg, const SweepCell& cell, int trial) {
  std::size_t li = 0;
  std::size_t di = 0;
  while (cfg.sources[li] != cell.sources) ++li;
  while (cfg.min_separation_deg[di] != cell.min_separation_deg) ++di;
  const std::uint64_t key = li * cfg.min_separation_deg.size() + di;
  return mix_seed(mix_seed(cfg.seed, key), static_cast<std::uint64_t>(trial));
}

}  // namespace

bool run_trial(const ExperimentConfig& cfg, const SweepCell& cell, int trial, bool& solver_failed) {
  solver_failed = false;
  const auto geom = make_uca(static_cast<std::size_t>(cfg.sensors), cell.radius_over_lambda);
  const auto scene = random_scene(cell.sources, cell.min_separation_deg, scene_seed(cfg, cell, trial));
  const auto y = synthesize(geom, scene);
  EstimateOptions opts = cfg.options;
  opts.p = cell.p;
  try {
    const auto result = estimate(y, geom, opts);
    std::vector<double> truth;
    for (const auto& s : scene) truth.push_back(s.theta);
    return all_matched(truth, result.doa.angles, cfg.threshold_deg);
  } catch (const SolverError&) {
    solver_failed = true;
  } catch (const Error&) {
  }
  return false;
}

std::vector<SweepRow> success_sweep(const ExperimentConfig& cfg, const std::function<void(const SweepRow&)>& on_row,
                                    std::size_t first_cell) {
  validate(cfg);
  const auto cells = sweep_cells(cfg);
  if (first_cell >= cells.size()) return {};
  const std::size_t ncell = cells.size() - first_cell;
  const std::size_t ntask = ncell * static_cast<std::size_t>(cfg.trials);

  struct Tally {
    int done = 0;
    int success = 0;
    int solver_fail = 0;
    double runtime = 0.0;
  };
  std::vector<Tally> tally(ncell);
  std::vector<SweepRow> rows;
  std::size_t next_emit = 0;
  std::mutex mu;
  std::atomic<std::size_t> next_task{0};

  auto worker = [&]() {
    for (;;) {
      const std::size_t t = next_task.fetch_add(1);
      if (t >= ntask) return;
      const std::size_t ci = t / static_cast<std::size_t>(cfg.trials);
      const int trial = static_cast<int>(t % static_cast<std::size_t>(cfg.trials));
      const auto start = std::chrono::steady_clock::now();
      bool solver_failed = false;
      const bool ok = run_trial(cfg, cells[first_cell + ci], trial, solver_failed);
      const double elapsed =
          cfg.timing ? std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() : 0.0;

      std::lock_guard lock(mu);
      auto& tl = tally[ci];
      ++tl.done;
      tl.success += ok ? 1 : 0;
      tl.solver_fail += solver_failed ? 1 : 0;
      tl.runtime += elapsed;
      while (next_emit < ncell && tally[next_emit].done == cfg.trials) {
        const auto& done = tally[next_emit];
        SweepRow row{cells[first_cell + next_emit], cfg.trials,
                     static_cast<double>(done.success) / cfg.trials,
                     static_cast<double>(done.solver_fail) / cfg.trials, done.runtime / cfg.trials};
        rows.push_back(row);
        if (on_row) on_row(row);
        ++next_emit;
      }
    }
  };

  const int jobs = std::max(1, std::min<int>(cfg.jobs, static_cast<int>(ntask)));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
  }
  return rows;
}

std::vector<std::string> sweep_header() {
  return {"radius_over_lambda", "p", "sources", "min_separation_deg", "trials",
          "success_prob", "solver_fail_frac", "mean_runtime_s"};
}

std::vector<std::string> sweep_fields(const SweepRow& row) {
  return {csv::format_double(row.cell.radius_over_lambda),
          std::to_string(row.cell.p),
          std::to_string(row.cell.sources),
          csv::format_double(row.cell.min_separation_deg),
          std::to_string(row.trials),
          csv::format_double(row.success_prob),
          csv::format_double(row.solver_fail_frac),
          csv::format_double(row.mean_runtime_s)};
}

}  // namespace sfdoa
