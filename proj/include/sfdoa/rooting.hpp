#pragma once

// Unit-circle rooting of p(z) = 1 - |b(z)|^2 built from the dual polynomial.

#include <string>
#include <vector>

#include "sfdoa/numkit.hpp"

namespace sfdoa {

/// Coefficients of b(z) = sum_{k=-N}^{N} h_k z^k; h[i] holds k = i - N.
struct DualPolynomial {
  std::vector<Complex> h;

  /// Throws ArgumentError unless the length is odd.
  explicit DualPolynomial(std::vector<Complex> coeffs);
  static DualPolynomial from_vector(const ComplexVector& v);

  int degree() const { return static_cast<int>(h.size() - 1) / 2; }
  Complex evaluate(double theta) const;
};

/// r_k = sum_j h_j conj(h_{j-k}) for k = -(P-1)..(P-1); r[i] holds k = i - (P-1).
/// r_{-k} = conj(r_k) holds bit-for-bit.
std::vector<Complex> autocorrelation(const DualPolynomial& poly);

/// Ascending coefficients of q(z) = z^{2N'} (1 - sum_k r_k z^k), N' = P - 1:
/// q_j = -r_{j-2N'} for j != 2N' and q_{2N'} = 1 - r_0 (zero outside the
/// support of r). q has 4N'+1 coefficients.
std::vector<Complex> nonneg_poly(const DualPolynomial& poly);

/// p(e^{j theta}) = 1 - |b(e^{j theta})|^2 evaluated from the autocorrelation.
double nonneg_value(const std::vector<Complex>& r, double theta);

struct RootOptions {
  int max_sweeps = 500;
  double residual_tol = 1e-8;  // relative backward error accepted per root
};

/// All roots of sum_j q_j z^j by Aberth-Ehrlich iteration. Coefficients below
/// 1e-14 max|q| at either end are trimmed first; trimmed low-order terms are
/// returned as roots at zero. Throws DegenerateError for a (numerically) zero
/// polynomial and RootingError when a root misses the residual bound.
std::vector<Complex> roots(const std::vector<Complex>& q, const RootOptions& options = {});

/// Relative backward error |q(z)| / sum_j |q_j| |z|^j, after the same trimming
/// as roots(). Zero for z = 0 when low-order terms were trimmed.
double root_residual(const std::vector<Complex>& q, Complex z);

struct DoaEstimate {
  std::vector<double> angles;          // radians in (-pi, pi], ascending
  std::vector<Complex> amplitudes;     // filled by the pipeline
  std::vector<double> root_distances;  // min ||z| - 1| per angle's cluster
  std::vector<int> cluster_sizes;
};

/// Keeps roots with ||z| - 1| <= tol, clusters their angles within cluster_deg
/// (with wraparound) and reports the circular mean of each cluster. An empty
/// result means no sources were detected.
DoaEstimate extract_doas(const std::vector<Complex>& q_roots, double tol = 0.02,
                         double cluster_deg = 0.05);

/// Wraps an angle into (-pi, pi].
double wrap_angle(double theta);

}  // namespace sfdoa
