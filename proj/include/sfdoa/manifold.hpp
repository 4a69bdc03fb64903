#pragma once

// Fourier-series representation of the conjugate array manifold.

#include <vector>

#include "sfdoa/geometry.hpp"
#include "sfdoa/numkit.hpp"

namespace sfdoa {

/// P x M matrix G^H whose column m holds the Fourier-series coefficients of
/// conj(a_m(theta)) for k = -N..N (row i corresponds to k = i - N).
struct ManifoldBasis {
  ComplexMatrix g_h;
  int p = 0;
  int n = 0;
  double gamma_db = -160.0;
  /// Set when P is below min_p() for the farthest sensor.
  bool undersized = false;

  int sensors() const { return static_cast<int>(g_h.cols()); }
};

/// Coefficients alpha_m[k], k = -N..N, from a P-point DFT of conj(a_m) sampled
/// at l * 2 pi / P. Throws ArgumentError unless P is odd and >= 3.
std::vector<Complex> fourier_coeffs(const ArrayGeometry& geom, std::size_t m, int p);

/// Smallest odd P whose discarded coefficient energies |alpha[k]|^2, |k| > N,
/// all sit below gamma_db relative to the peak, found by scanning a 4x
/// oversized DFT of exp(j 2 pi r cos theta). Never returns less than 3.
int scan_min_p(double radius_over_lambda, double gamma_db);

/// Minimum P for a sensor at the given normalized radius. At -160 dB and
/// radius >= 1 the linear rule P >= 15.9 r + 27.03 applies (never below the
/// scan); elsewhere the scan decides. Throws ArgumentError for a negative
/// radius or gamma outside [-200, -40] dB.
int min_p(double radius_over_lambda, double gamma_db);

/// Assembles G^H column by column. P must be odd and >= 3.
ManifoldBasis build_basis(const ArrayGeometry& geom, int p, double gamma_db = -160.0);

/// max over m and a uniform theta grid of |sum_k alpha_m[k] e^{jk theta} - conj(a_m(theta))|.
double max_reconstruction_error(const ManifoldBasis& basis, const ArrayGeometry& geom, int grid = 2048);

struct BandwidthRow {
  double radius_over_lambda = 0.0;
  double gamma_db = 0.0;
  int min_p = 0;
};

/// Scanned minimum P for every (radius, gamma) pair, gamma-major order.
std::vector<BandwidthRow> bandwidth_profile(const std::vector<double>& radii,
                                            const std::vector<double>& gamma_db_list);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};

/// Ordinary least-squares line through (x, y). Requires at least two distinct x.
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace sfdoa
