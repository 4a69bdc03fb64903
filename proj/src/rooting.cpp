#include "sfdoa/rooting.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sfdoa/error.hpp"

namespace sfdoa {

DualPolynomial::DualPolynomial(std::vector<Complex> coeffs) : h(std::move(coeffs)) {
  if (h.size() % 2 == 0) throw ArgumentError("DualPolynomial: coefficient count must be odd");
}

DualPolynomial DualPolynomial::from_vector(const ComplexVector& v) {
  return DualPolynomial(std::vector<Complex>(v.data(), v.data() + v.size()));
}

Complex DualPolynomial::evaluate(double theta) const {
  const Complex z = std::polar(1.0, theta);
  Complex acc = 0.0;
  for (auto it = h.rbegin(); it != h.rend(); ++it) acc = acc * z + *it;
  return acc * std::polar(1.0, -static_cast<double>(degree()) * theta);
}

std::vector<Complex> autocorrelation(const DualPolynomial& poly) {
  const auto& h = poly.h;
  const std::size_t p = h.size();
  std::vector<Complex> r(2 * p - 1);
  double r0 = 0.0;
  for (const auto& v : h) r0 += std::norm(v);
  r[p - 1] = Complex(r0, 0.0);
  for (std::size_t k = 1; k < p; ++k) {
    Complex acc = 0.0;
    for (std::size_t j = k; j < p; ++j) acc += h[j] * std::conj(h[j - k]);
    r[p - 1 + k] = acc;
    r[p - 1 - k] = std::conj(acc);
  }
  return r;
}

std::vector<Complex> nonneg_poly(const DualPolynomial& poly) {
  const auto r = autocorrelation(poly);
  const std::size_t np = poly.h.size() - 1;  // N' = P - 1
  std::vector<Complex> q(4 * np + 1, Complex{});
  for (std::size_t i = 0; i < r.size(); ++i) q[np + i] = -r[i];
  q[2 * np] = 1.0 - r[np];
  return q;
}

double nonneg_value(const std::vector<Complex>& r, double theta) {
  const long np = static_cast<long>(r.size() - 1) / 2;
  double acc = 0.0;
  for (long i = 0; i < static_cast<long>(r.size()); ++i) {
    acc += std::real(r[static_cast<std::size_t>(i)] * std::polar(1.0, static_cast<double>(i - np) * theta));
  }
  return 1.0 - acc;
}

namespace {

struct Eval {
  Complex ratio;         // q(z) / q'(z)
  double backward_error; // |q(z)| / sum |q_j| |z|^j
};

// Evaluates q and q' at z, switching to the reversed polynomial outside the
// unit disk so large |z| never overflows.
Eval evaluate_newton(const std::vector<Complex>& c, Complex z) {
  const std::size_t d = c.size() - 1;
  const double az = std::abs(z);
  if (az <= 1.0) {
    Complex f = c[d];
    Complex df = 0.0;
    double bound = std::abs(c[d]);
    for (std::size_t i = d; i-- > 0;) {
      df = df * z + f;
      f = f * z + c[i];
      bound = bound * az + std::abs(c[i]);
    }
    const double be = bound > 0.0 ? std::abs(f) / bound : 0.0;
    if (f == Complex{}) return {0.0, 0.0};
    return {f / df, be};
  }
  const Complex w = 1.0 / z;
  const double aw = 1.0 / az;
  // Q(w) = sum_i c_{d-i} w^i
  Complex f = c[0];
  Complex df = 0.0;
  double bound = std::abs(c[0]);
  for (std::size_t i = 1; i <= d; ++i) {
    df = df * w + f;
    f = f * w + c[i];
    bound = bound * aw + std::abs(c[i]);
  }
  const double be = bound > 0.0 ? std::abs(f) / bound : 0.0;
  if (f == Complex{}) return {0.0, 0.0};
  return {z / (static_cast<double>(d) - w * df / f), be};
}

struct Trimmed {
  std::size_t zeros = 0;  // low-order terms dropped, i.e. roots at the origin
  std::vector<Complex> c;
};

Trimmed trim(const std::vector<Complex>& q) {
  double scale = 0.0;
  for (const auto& v : q) scale = std::max(scale, std::abs(v));
  if (q.empty() || scale <= 1e-10) {
    throw DegenerateError("roots: polynomial is identically zero (|b| = 1 everywhere on the circle)");
  }
  const double cut = 1e-14 * scale;
  std::size_t lo = 0;
  while (std::abs(q[lo]) <= cut) ++lo;
  std::size_t hi = q.size() - 1;
  while (std::abs(q[hi]) <= cut) --hi;
  return {lo, std::vector<Complex>(q.begin() + static_cast<long>(lo), q.begin() + static_cast<long>(hi) + 1)};
}

}  // namespace

double root_residual(const std::vector<Complex>& q, Complex z) {
  const auto t = trim(q);
  if (z == Complex{} && t.zeros > 0) return 0.0;
  if (t.c.size() == 1) return 1.0;
  return evaluate_newton(t.c, z).backward_error;
}

std::vector<Complex> roots(const std::vector<Complex>& q, const RootOptions& options) {
  const auto trimmed = trim(q);
  const auto& c = trimmed.c;
  std::vector<Complex> out(trimmed.zeros, Complex{});
  const std::size_t d = c.size() - 1;
  if (d == 0) return out;

  const double radius = std::pow(std::abs(c[0]) / std::abs(c[d]), 1.0 / static_cast<double>(d));
  std::vector<Complex> z(d);
  for (std::size_t i = 0; i < d; ++i) {
    z[i] = std::polar(radius, 2.0 * kPi * static_cast<double>(i) / static_cast<double>(d) + 0.4);
  }
  std::vector<char> done(d, 0);
  const double stop = 4.0 * static_cast<double>(d) * 2.220446049250313e-16;

  std::size_t remaining = d;
  for (int sweep = 0; sweep < options.max_sweeps && remaining > 0; ++sweep) {
    for (std::size_t i = 0; i < d; ++i) {
      if (done[i]) continue;
      const auto ev = evaluate_newton(c, z[i]);
      if (ev.backward_error <= stop) {
        done[i] = 1;
        --remaining;
        continue;
      }
      Complex repulsion = 0.0;
      for (std::size_t j = 0; j < d; ++j) {
        if (j != i) repulsion += 1.0 / (z[i] - z[j]);
      }
      const Complex step = ev.ratio / (1.0 - ev.ratio * repulsion);
      if (std::isfinite(step.real()) && std::isfinite(step.imag())) z[i] -= step;
    }
  }

  double worst = 0.0;
  for (const auto& zi : z) worst = std::max(worst, evaluate_newton(c, zi).backward_error);
  if (!(worst <= options.residual_tol)) {
    std::ostringstream os;
    os << "roots: Aberth iteration did not converge in " << options.max_sweeps
       << " sweeps (worst relative residual " << worst << ")";
    throw RootingError(os.str(), worst);
  }
  out.insert(out.end(), z.begin(), z.end());
  return out;
}

double wrap_angle(double theta) {
  double t = std::remainder(theta, 2.0 * kPi);
  if (t <= -kPi) t += 2.0 * kPi;
  return t;
}

DoaEstimate extract_doas(const std::vector<Complex>& q_roots, double tol, double cluster_deg) {
  struct Candidate {
    double angle;
    double distance;
  };
  std::vector<Candidate> cand;
  for (const auto& z : q_roots) {
    const double dist = std::abs(std::abs(z) - 1.0);
    if (dist <= tol) cand.push_back({wrap_angle(std::arg(z)), dist});
  }
  DoaEstimate est;
  if (cand.empty()) return est;
  std::sort(cand.begin(), cand.end(), [](const Candidate& a, const Candidate& b) { return a.angle < b.angle; });

  const double width = cluster_deg * kPi / 180.0;
  std::vector<std::vector<Candidate>> clusters{{cand.front()}};
  for (std::size_t i = 1; i < cand.size(); ++i) {
    if (cand[i].angle - clusters.back().back().angle <= width) {
      clusters.back().push_back(cand[i]);
    } else {
      clusters.push_back({cand[i]});
    }
  }
  if (clusters.size() > 1 &&
      clusters.front().front().angle + 2.0 * kPi - clusters.back().back().angle <= width) {
    clusters.front().insert(clusters.front().end(), clusters.back().begin(), clusters.back().end());
    clusters.pop_back();
  }

  struct Summary {
    double angle;
    double distance;
    int size;
  };
  std::vector<Summary> summary;
  for (const auto& cl : clusters) {
    Complex acc = 0.0;
    double dist = cl.front().distance;
    for (const auto& c : cl) {
      acc += std::polar(1.0, c.angle);
      dist = std::min(dist, c.distance);
    }
    summary.push_back({wrap_angle(std::arg(acc)), dist, static_cast<int>(cl.size())});
  }
  std::sort(summary.begin(), summary.end(), [](const Summary& a, const Summary& b) { return a.angle < b.angle; });
  for (const auto& s : summary) {
    est.angles.push_back(s.angle);
    est.root_distances.push_back(s.distance);
    est.cluster_sizes.push_back(s.size);
  }
  return est;
}

}  // namespace sfdoa
