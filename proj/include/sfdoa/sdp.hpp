#pragma once

// Fourier-domain dual of the atomic-norm problem:
//
//   maximize Re{c^H y}
//   subject to [[H, G^H c], [c^H G, 1]] >= 0,
//              sum_i H[i, i+j] = 1 for j = 0 and 0 for j = 1..P-1.
//
// The (P+1) x (P+1) Hermitian block is the primal variable of a real
// standard-form SDP over its 2(P+1) x 2(P+1) real embedding. The coupling
// through c is expressed as "the last column lies in range(G^H)", with the
// objective rewritten in terms of that column; c is recovered afterwards.

#include <optional>
#include <string>
#include <vector>

#include "sfdoa/ipm.hpp"
#include "sfdoa/manifold.hpp"
#include "sfdoa/numkit.hpp"

namespace sfdoa {

struct SolverOptions {
  double gap_tol = 1e-9;     // relative duality gap
  int max_iter = 200;        // Newton steps
  double psd_slack = 1e-8;   // tolerated negative eigenvalue of the final block
};

enum class SdpStatus { Optimal, MaxIter, NumericalTrouble };
const char* to_string(SdpStatus status);

struct SdpProblem {
  ManifoldBasis basis;
  ComplexVector y;

  int rank = 0;                    // numerical rank of G^H
  ComplexMatrix range_basis;       // U_r, P x rank
  ComplexMatrix coupling;          // V_r diag(1/s_r), maps U_r^H h to c
  ComplexVector objective_weights; // w with Re{c^H y} = Re{h^H w} on range(G^H)
  double objective_scale = 0.0;    // ||w||; the embedded objective uses w / ||w||
  ipm::StandardForm form;

  int trace_constraint_count() const { return basis.p; }
  int block_dimension() const { return 2 * (basis.p + 1); }
  int real_constraint_count() const { return static_cast<int>(form.a.size()); }
};

/// Throws ShapeError when y does not have one entry per basis column.
///
/// Singular values of G^H below rank_tol * s_max are dropped. The default,
/// 100 * 10^(gamma_db / 20), sits above the truncation error of the basis so
/// that c cannot exploit directions the series does not resolve.
SdpProblem assemble(const ManifoldBasis& basis, const ComplexVector& y,
                    std::optional<double> rank_tol = std::nullopt);

struct SdpSolution {
  ComplexVector c_star;
  ComplexMatrix h_star;          // P x P block H
  ComplexVector dual_poly;       // h = G^H c_star, k = -N..N
  double objective = 0.0;        // Re{c_star^H y}
  double duality_gap = 0.0;      // relative
  double absolute_gap = 0.0;     // in objective units
  double primal_infeasibility = 0.0;
  double max_trace_residual = 0.0;
  double min_block_eigenvalue = 0.0;
  int iterations = 0;
  SdpStatus status = SdpStatus::MaxIter;
};

SdpSolution solve(const SdpProblem& problem, const SolverOptions& options = {});

/// G^H c.
ComplexVector dual_poly_coefficients(const ManifoldBasis& basis, const ComplexVector& c);

/// sum_k h_k e^{jk theta}, k = -N..N.
Complex eval_trig_poly(const ComplexVector& h, double theta);

struct CertificateReport {
  double max_magnitude = 0.0;
  double argmax_theta = 0.0;
  /// Local maxima of |b(theta)| within 1e-3 of one, ascending.
  std::vector<double> peak_angles;
  bool bounded = false;  // max_magnitude <= 1 + 1e-6
};

/// Evaluates |b(theta)| for b built from G^H c_star on a uniform grid.
CertificateReport check_certificate(const SdpSolution& solution, const ManifoldBasis& basis,
                                    int grid = 8192);

}  // namespace sfdoa
