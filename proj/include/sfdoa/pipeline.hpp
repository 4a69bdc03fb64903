#pragma once

// End-to-end estimation: basis, SDP, dual polynomial, rooting, amplitudes.

#include <optional>
#include <vector>

#include <json.hpp>

#include "sfdoa/geometry.hpp"
#include "sfdoa/manifold.hpp"
#include "sfdoa/rooting.hpp"
#include "sfdoa/sdp.hpp"

namespace sfdoa {

struct Source {
  double theta = 0.0;  // radians
  Complex amplitude{1.0, 0.0};
};

struct EstimateOptions {
  std::optional<int> p;  // default: min_p(farthest radius, gamma_db)
  double gamma_db = -160.0;
  SolverOptions solver;
  RootOptions rooting;
  double root_tol = 0.02;
  double cluster_deg = 0.05;
  /// Unit-circle candidates whose 1 - |b(theta)| exceeds this are dropped.
  double certificate_tol = 1e-4;
};

struct Scenario {
  ArrayGeometry geometry;
  std::vector<Source> sources;
  EstimateOptions options;
};

/// y = sum_l s_l a(theta_l). Throws ArgumentError for an empty source list or
/// a non-finite angle.
ComplexVector synthesize(const ArrayGeometry& geom, const std::vector<Source>& sources);
inline ComplexVector synthesize(const Scenario& scn) { return synthesize(scn.geometry, scn.sources); }

struct EstimateResult {
  DoaEstimate doa;
  bool no_sources = true;
  int p = 0;
  bool undersized = false;
  SdpSolution sdp;
  std::vector<Complex> q;           // ascending coefficients of the rooted polynomial
  std::vector<Complex> q_roots;
  double worst_root_residual = 0.0;
  std::vector<double> certificate_deficit;  // 1 - |b(theta)| per kept angle
  int rejected_candidates = 0;
  double amplitude_residual = 0.0;  // ||A s - y||
};

/// Throws ShapeError when y does not match the array, SolverError when the SDP
/// does not terminate Optimal, and propagates rooting / conditioning errors.
EstimateResult estimate(const ComplexVector& y, const ArrayGeometry& geom,
                        const EstimateOptions& options = {});

/// Least-squares amplitudes for the given angles. Throws ArgumentError when
/// there are more angles than sensors and ConditioningError when the steering
/// matrix is too ill-conditioned.
std::vector<Complex> recover_amplitudes(const ComplexVector& y, const ArrayGeometry& geom,
                                        const std::vector<double>& angles,
                                        double* residual = nullptr);

/// Result record: angles in degrees, amplitude magnitudes and phases (degrees),
/// solver diagnostics. Timing is added only when given.
nlohmann::json to_json(const EstimateResult& result, std::optional<double> runtime_s = std::nullopt);

inline double deg2rad(double deg) { return deg * kPi / 180.0; }
inline double rad2deg(double rad) { return rad * 180.0 / kPi; }

}  // namespace sfdoa
