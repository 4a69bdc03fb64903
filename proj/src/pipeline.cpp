#include "sfdoa/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sfdoa/error.hpp"

namespace sfdoa {

ComplexVector synthesize(const ArrayGeometry& geom, const std::vector<Source>& sources) {
  if (sources.empty()) throw ArgumentError("synthesize: at least one source is required");
  ComplexVector y = ComplexVector::Zero(static_cast<long>(geom.size()));
  for (const auto& s : sources) {
    if (!std::isfinite(s.theta)) throw ArgumentError("synthesize: source angle must be finite");
    y += s.amplitude * steering(geom, s.theta).values;
  }
  return y;
}

std::vector<Complex> recover_amplitudes(const ComplexVector& y, const ArrayGeometry& geom,
                                        const std::vector<double>& angles, double* residual) {
  if (static_cast<std::size_t>(y.size()) != geom.size()) {
    throw ShapeError("recover_amplitudes: snapshot length does not match the array");
  }
  if (angles.size() > geom.size()) {
    throw ArgumentError("recover_amplitudes: more angles than sensors");
  }
  if (angles.empty()) {
    if (residual) *residual = y.norm();
    return {};
  }
  const ComplexMatrix a = steering_matrix(geom, angles);
  const ComplexVector s = numkit::lstsq(a, y);
  if (residual) *residual = (a * s - y).norm();
  return {s.data(), s.data() + s.size()};
}

EstimateResult estimate(const ComplexVector& y, const ArrayGeometry& geom, const EstimateOptions& options) {
  if (static_cast<std::size_t>(y.size()) != geom.size()) {
    throw ShapeError("estimate: snapshot has " + std::to_string(y.size()) + " entries, array has " +
                     std::to_string(geom.size()) + " sensors");
  }
  EstimateResult out;
  out.p = options.p ? *options.p : min_p(geom.max_normalized_radius(), options.gamma_db);
  const ManifoldBasis basis = build_basis(geom, out.p, options.gamma_db);
  out.undersized = basis.undersized;

  const SdpProblem problem = assemble(basis, y);
  out.sdp = solve(problem, options.solver);
  if (out.sdp.status != SdpStatus::Optimal) {
    throw SolverError(std::string("estimate: SDP terminated with status ") + to_string(out.sdp.status));
  }

  const auto poly = DualPolynomial::from_vector(out.sdp.dual_poly);
  out.q = nonneg_poly(poly);
  out.q_roots = roots(out.q, options.rooting);
  for (const auto& z : out.q_roots) out.worst_root_residual = std::max(out.worst_root_residual, root_residual(out.q, z));

  const auto candidates = extract_doas(out.q_roots, options.root_tol, options.cluster_deg);
  for (std::size_t i = 0; i < candidates.angles.size(); ++i) {
    const double deficit = 1.0 - std::abs(eval_trig_poly(out.sdp.dual_poly, candidates.angles[i]));
    if (deficit > options.certificate_tol) {
      ++out.rejected_candidates;
      continue;
    }
    out.doa.angles.push_back(candidates.angles[i]);
    out.doa.root_distances.push_back(candidates.root_distances[i]);
    out.doa.cluster_sizes.push_back(candidates.cluster_sizes[i]);
    out.certificate_deficit.push_back(deficit);
  }
  out.no_sources = out.doa.angles.empty();
  out.doa.amplitudes = recover_amplitudes(y, geom, out.doa.angles, &out.amplitude_residual);
  return out;
}

nlohmann::json to_json(const EstimateResult& r, std::optional<double> runtime_s) {
  using nlohmann::json;
  json sources = json::array();
  for (std::size_t i = 0; i < r.doa.angles.size(); ++i) {
    const Complex s = i < r.doa.amplitudes.size() ? r.doa.amplitudes[i] : Complex{};
    sources.push_back({{"angle_deg", rad2deg(r.doa.angles[i])},
                       {"magnitude", std::abs(s)},
                       {"phase_deg", rad2deg(std::arg(s))},
                       {"root_distance", r.doa.root_distances[i]},
                       {"certificate_deficit", r.certificate_deficit[i]},
                       {"cluster_size", r.doa.cluster_sizes[i]}});
  }
  json j = {
      {"no_sources", r.no_sources},
      {"sources", sources},
      {"p", r.p},
      {"undersized", r.undersized},
      {"solver",
       {{"status", to_string(r.sdp.status)},
        {"objective", r.sdp.objective},
        {"duality_gap", r.sdp.duality_gap},
        {"absolute_gap", r.sdp.absolute_gap},
        {"primal_infeasibility", r.sdp.primal_infeasibility},
        {"max_trace_residual", r.sdp.max_trace_residual},
        {"min_block_eigenvalue", r.sdp.min_block_eigenvalue},
        {"iterations", r.sdp.iterations}}},
      {"rooting",
       {{"roots", r.q_roots.size()},
        {"worst_residual", r.worst_root_residual},
        {"rejected_candidates", r.rejected_candidates}}},
      {"amplitude_residual", r.amplitude_residual},
  };
  if (runtime_s) j["runtime_s"] = *runtime_s;
  return j;
}

}  // namespace sfdoa
