#include "sfdoa/manifold.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sfdoa/error.hpp"

namespace sfdoa {

namespace {

constexpr double kRuleSlope = 15.9;
constexpr double kRuleIntercept = 27.03;
constexpr double kRuleGammaDb = -160.0;

int smallest_odd_at_least(double x) {
  int p = static_cast<int>(std::ceil(x));
  return p % 2 == 0 ? p + 1 : p;
}

void require_valid_p(int p) {
  if (p < 3 || p % 2 == 0) {
    std::ostringstream os;
    os << "P must be odd and at least 3 (got " << p << ")";
    throw ArgumentError(os.str());
  }
}

}  // namespace

std::vector<Complex> fourier_coeffs(const ArrayGeometry& geom, std::size_t m, int p) {
  require_valid_p(p);
  if (m >= geom.size()) throw ArgumentError("fourier_coeffs: sensor index out of range");
  const int n = (p - 1) / 2;
  std::vector<Complex> out(static_cast<std::size_t>(p), Complex{});
  const double radius = geom.normalized_radius(m);
  if (radius == 0.0) {
    out[static_cast<std::size_t>(n)] = 1.0;
    return out;
  }
  const double angle = geom.polar_angle(m);
  std::vector<Complex> samples(static_cast<std::size_t>(p));
  for (int l = 0; l < p; ++l) {
    const double theta = 2.0 * kPi * l / p;
    samples[static_cast<std::size_t>(l)] = std::polar(1.0, 2.0 * kPi * radius * std::cos(theta - angle));
  }
  const auto spectrum = numkit::dft(samples);
  for (int k = -n; k <= n; ++k) {
    out[static_cast<std::size_t>(k + n)] = spectrum[static_cast<std::size_t>((k + p) % p)] / static_cast<double>(p);
  }
  return out;
}

int scan_min_p(double radius_over_lambda, double gamma_db) {
  if (radius_over_lambda == 0.0) return 3;
  const double x = 2.0 * kPi * radius_over_lambda;
  // Bessel tails are negligible well before x + 10 x^(1/3) + 40 for every gamma we accept.
  const int n_hi = static_cast<int>(std::ceil(x + 10.0 * std::cbrt(x) + 40.0));
  const std::size_t len = 4 * static_cast<std::size_t>(2 * n_hi + 1);
  std::vector<Complex> samples(len);
  for (std::size_t l = 0; l < len; ++l) {
    const double theta = 2.0 * kPi * static_cast<double>(l) / static_cast<double>(len);
    samples[l] = std::polar(1.0, x * std::cos(theta));
  }
  const auto spectrum = numkit::dft(samples);
  std::vector<double> energy(static_cast<std::size_t>(n_hi) + 1);
  for (int k = 0; k <= n_hi; ++k) {
    const double pos = std::norm(spectrum[static_cast<std::size_t>(k)]);
    const double neg = std::norm(spectrum[(len - static_cast<std::size_t>(k)) % len]);
    energy[static_cast<std::size_t>(k)] = std::max(pos, neg);
  }
  const double peak = *std::max_element(energy.begin(), energy.end());
  const double threshold = peak * std::pow(10.0, gamma_db / 10.0);
  int n = 0;
  for (int k = n_hi; k >= 0; --k) {
    if (energy[static_cast<std::size_t>(k)] >= threshold) {
      n = k;
      break;
    }
  }
  return std::max(3, 2 * n + 1);
}

int min_p(double radius_over_lambda, double gamma_db) {
  if (!(radius_over_lambda >= 0.0) || !std::isfinite(radius_over_lambda)) {
    throw ArgumentError("min_p: radius must be nonnegative and finite");
  }
  if (!(gamma_db >= -200.0 && gamma_db <= -40.0)) {
    throw ArgumentError("min_p: gamma must lie in [-200, -40] dB");
  }
  const int scanned = scan_min_p(radius_over_lambda, gamma_db);
  if (gamma_db == kRuleGammaDb && radius_over_lambda >= 1.0) {
    return std::max(scanned, smallest_odd_at_least(kRuleSlope * radius_over_lambda + kRuleIntercept));
  }
  return scanned;
}

ManifoldBasis build_basis(const ArrayGeometry& geom, int p, double gamma_db) {
  require_valid_p(p);
  ManifoldBasis basis;
  basis.p = p;
  basis.n = (p - 1) / 2;
  basis.gamma_db = gamma_db;
  basis.g_h.resize(p, static_cast<Eigen::Index>(geom.size()));
  for (std::size_t m = 0; m < geom.size(); ++m) {
    const auto col = fourier_coeffs(geom, m, p);
    for (int i = 0; i < p; ++i) basis.g_h(i, static_cast<Eigen::Index>(m)) = col[static_cast<std::size_t>(i)];
  }
  const double gamma = std::clamp(gamma_db, -200.0, -40.0);
  basis.undersized = p < min_p(geom.max_normalized_radius(), gamma);
  return basis;
}

double max_reconstruction_error(const ManifoldBasis& basis, const ArrayGeometry& geom, int grid) {
  double worst = 0.0;
  for (int g = 0; g < grid; ++g) {
    const double theta = -kPi + 2.0 * kPi * g / grid;
    ComplexVector e(basis.p);
    for (int i = 0; i < basis.p; ++i) e(i) = std::polar(1.0, (i - basis.n) * theta);
    const ComplexVector approx = basis.g_h.transpose() * e;
    const ComplexVector exact = steering(geom, theta).values.conjugate();
    worst = std::max(worst, (approx - exact).cwiseAbs().maxCoeff());
  }
  return worst;
}

std::vector<BandwidthRow> bandwidth_profile(const std::vector<double>& radii,
                                            const std::vector<double>& gamma_db_list) {
  std::vector<BandwidthRow> rows;
  rows.reserve(radii.size() * gamma_db_list.size());
  for (double gamma : gamma_db_list) {
    for (double r : radii) {
      if (!(r >= 0.0)) throw ArgumentError("bandwidth_profile: radii must be nonnegative");
      rows.push_back({r, gamma, scan_min_p(r, gamma)});
    }
  }
  return rows;
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw ArgumentError("fit_line: need at least two points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw ArgumentError("fit_line: x values are all equal");
  const double slope = sxy / sxx;
  return {slope, my - slope * mx};
}

}  // namespace sfdoa
