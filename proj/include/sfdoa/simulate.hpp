#pragma once

// CBF baseline, random scenes and Monte-Carlo success sweeps.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "sfdoa/pipeline.hpp"

namespace sfdoa {

/// Angle of grid point g: -pi + 2 pi (g + 1) / grid, so the grid covers (-pi, pi].
double grid_angle(int g, int grid);

/// |a(theta)^H y| / M on grid_angle(0..grid-1). Throws ArgumentError for grid < 2.
std::vector<double> cbf_spectrum(const ComplexVector& y, const ArrayGeometry& geom, int grid);

/// Indices of strict local maxima, neighbors taken circularly.
std::vector<int> local_maxima(const std::vector<double>& values);

/// Distance on the circle in radians, in [0, pi].
double wrap_separation(double a, double b);

/// Counter-based seed mixing (splitmix64 finalizer).
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);

/// L angles uniform on (-pi, pi] with pairwise wraparound separation of at
/// least min_sep_deg, all carrying the same amplitude. Throws GenerationError
/// when L * min_sep_deg >= 360 or rejection sampling gives up.
std::vector<Source> random_scene(int count, double min_sep_deg, std::uint64_t seed,
                                 Complex amplitude = {1.0, 0.0});

/// True when the estimate has exactly one angle per true source and each true
/// angle is matched to a distinct estimate within threshold_deg.
bool all_matched(const std::vector<double>& truth, const std::vector<double>& estimate,
                 double threshold_deg);

struct SweepCell {
  double radius_over_lambda = 0.0;
  int p = 0;
  int sources = 0;
  double min_separation_deg = 0.0;
};

struct ExperimentConfig {
  int sensors = 40;  // UCA size
  std::vector<int> p;
  std::vector<double> radius_over_lambda;
  std::vector<int> sources;
  std::vector<double> min_separation_deg;
  int trials = 50;
  double threshold_deg = 0.001;
  std::uint64_t seed = 1;
  int jobs = 1;
  bool timing = false;  // measure wall clock; otherwise mean_runtime_s is 0
  EstimateOptions options;
};

/// Throws ConfigError naming the offending field.
void validate(const ExperimentConfig& cfg);

/// Cells in output order: radius, then P, then L, then separation.
std::vector<SweepCell> sweep_cells(const ExperimentConfig& cfg);

struct SweepRow {
  SweepCell cell;
  int trials = 0;
  double success_prob = 0.0;
  double solver_fail_frac = 0.0;
  double mean_runtime_s = 0.0;
};

/// One trial of a cell; returns success and sets solver_failed when the SDP
/// did not terminate Optimal.
bool run_trial(const ExperimentConfig& cfg, const SweepCell& cell, int trial, bool& solver_failed);

/// Runs every cell from first_cell on with cfg.jobs workers. on_row is called
/// in cell order as soon as each row is complete. Scenes depend on the master
/// seed, the (L, separation) pair and the trial index only, so they are shared
/// across the P and radius axes.
std::vector<SweepRow> success_sweep(const ExperimentConfig& cfg,
                                    const std::function<void(const SweepRow&)>& on_row = {},
                                    std::size_t first_cell = 0);

std::vector<std::string> sweep_header();
std::vector<std::string> sweep_fields(const SweepRow& row);

}  // namespace sfdoa
