// Acceptance gate: one PASS/FAIL line per criterion.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "sfdoa/csv.hpp"
#include "sfdoa/error.hpp"
#include "sfdoa/manifold.hpp"
#include "sfdoa/pipeline.hpp"
#include "sfdoa/simulate.hpp"

using namespace sfdoa;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      pass = false;
      detail << "[failed: " << what << "] ";
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<Source> make_sources(const std::vector<double>& deg, const std::vector<Complex>& amp) {
  std::vector<Source> s;
  for (std::size_t i = 0; i < deg.size(); ++i) s.push_back({oracle::rad(deg[i]), amp[i]});
  return s;
}

// Max angular error in degrees after sorting both sides; infinity on a count mismatch.
double angle_error(std::vector<double> got, std::vector<double> want_deg) {
  if (got.size() != want_deg.size()) return 1e300;
  std::sort(want_deg.begin(), want_deg.end());
  double worst = 0.0;
  for (std::size_t i = 0; i < got.size(); ++i) worst = std::max(worst, oracle::circ_deg(got[i], oracle::rad(want_deg[i])));
  return worst;
}

void criterion1(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto g = make_uca(40, 2.0);
  const auto y = synthesize(g, make_sources({-10.3, 30.5, 70.7}, {5.0, 30.0, 7.0}));
  EstimateOptions opt;
  opt.p = 61;
  const auto res = estimate(y, g, opt);
  const double err = angle_error(res.doa.angles, {-10.3, 30.5, 70.7});
  double mag_err = 1e300;
  if (res.doa.amplitudes.size() == 3) {
    const double want[3] = {5.0, 30.0, 7.0};
    mag_err = 0.0;
    for (int i = 0; i < 3; ++i) mag_err = std::max(mag_err, std::abs(std::abs(res.doa.amplitudes[i]) - want[i]) / want[i]);
  }
  const double obj_err = std::abs(res.sdp.objective - 42.0) / 42.0;
  const double t = seconds_since(t0);
  o.require(err <= 1e-3, "angles within 0.001 deg");
  o.require(mag_err <= 1e-3, "magnitudes within 1e-3");
  o.require(obj_err <= 1e-5, "objective 42 within 1e-5");
  o.require(t < 60.0, "runtime < 60 s");
  o.detail << "max angle err " << err << " deg, max magnitude rel err " << mag_err << ", objective "
           << csv::format_double(res.sdp.objective) << ", " << t << " s";
}

void criterion2(Outcome& o) {
  const auto g = make_uca(40, 2.0);
  const auto y = synthesize(g, make_sources({60.0, 70.0}, {1.0, 1.0}));
  EstimateOptions opt;
  opt.p = 61;
  const double err = angle_error(estimate(y, g, opt).doa.angles, {60.0, 70.0});
  const int grid = 7200;
  const auto spec = cbf_spectrum(y, g, grid);
  const double peak = *std::max_element(spec.begin(), spec.end());
  int lobes = 0;
  for (int i : local_maxima(spec)) {
    const double a = oracle::deg(grid_angle(i, grid));
    if (a > 50.0 && a < 80.0 && spec[static_cast<std::size_t>(i)] > 0.5 * peak) ++lobes;
  }
  o.require(err <= 1e-3, "both sources within 0.001 deg");
  o.require(lobes == 1, "CBF shows a single lobe");
  o.detail << "max angle err " << err << " deg, CBF maxima above half peak in (50,80): " << lobes;
}

void criterion3(Outcome& o) {
  const auto g = make_rpa(30, 0.25, 2.0, 4);
  const auto y = synthesize(g, make_sources({-65.1, 37.5, 50.7}, {1.0, 1.0, 1.0}));
  EstimateOptions opt;
  opt.p = 61;
  const double err = angle_error(estimate(y, g, opt).doa.angles, {-65.1, 37.5, 50.7});
  o.require(err <= 1e-3, "angles within 0.001 deg");
  o.detail << "RPA M=30 max radius " << g.max_normalized_radius() << ", max angle err " << err << " deg";
}

void criterion4(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<double> radii;
  for (int i = 0; i <= 16; ++i) radii.push_back(2.0 + 0.5 * i);
  const auto rows = bandwidth_profile(radii, {-160.0});
  std::vector<double> x, y;
  for (const auto& r : rows) {
    x.push_back(r.radius_over_lambda);
    y.push_back(r.min_p);
  }
  const auto fit = fit_line(x, y);
  const double t = seconds_since(t0);
  o.require(std::abs(fit.slope - 15.9) <= 0.05 * 15.9, "slope within 5% of 15.9");
  o.require(std::abs(fit.intercept - 27.03) <= 0.10 * 27.03, "intercept within 10% of 27.03");
  o.require(t < 300.0, "runtime < 5 min");
  o.detail << "slope " << fit.slope << ", intercept " << fit.intercept << ", " << t << " s";
}

void criterion5(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  ExperimentConfig cfg;
  cfg.sensors = 40;
  cfg.p = {53};
  cfg.radius_over_lambda = {1.59};
  cfg.sources = {2, 5, 10, 15};
  cfg.min_separation_deg = {12.0, 15.0, 20.0};
  cfg.trials = 10;
  cfg.seed = 7;
  double worst = 1.0;
  const auto rows = success_sweep(cfg);
  for (const auto& r : rows) worst = std::min(worst, r.success_prob);
  const double t = seconds_since(t0);
  o.require(rows.size() == 12, "12 cells");
  o.require(worst == 1.0, "success probability 1.0 in every cell");
  o.require(t < 1800.0, "runtime < 30 min");
  o.detail << rows.size() << " cells x 10 trials, min success " << worst << ", " << t << " s";
}

void criterion6(Outcome& o) {
  double worst = 0.0;
  for (double r : {0.5, 1.0, 2.0, 3.0}) {
    const int p = min_p(r, -160.0);
    const int n = (p - 1) / 2;
    for (double phi : {0.0, 1.1}) {
      const auto g = ArrayGeometry::from_normalized({{r * std::cos(phi), r * std::sin(phi)}});
      const auto c = fourier_coeffs(g, 0, p);
      for (int k = -n; k <= n; ++k) {
        worst = std::max(worst, std::abs(c[static_cast<std::size_t>(k + n)] - oracle::jacobi_anger(k, r, phi)));
      }
    }
  }
  o.require(worst <= 1e-8, "coefficients within 1e-8 of the Bessel expansion");
  o.detail << "max |error| " << worst;
}

void criterion7(Outcome& o) {
  const auto g = make_uca(40, 1.59);
  std::mt19937_64 rng(2024);
  int optimal = 0;
  double max_b = 0.0, min_p_val = 1e300, max_pair = 0.0;
  bool hermitian = true;
  for (int t = 0; t < 20; ++t) {
    const int count = 1 + static_cast<int>(rng() % 8);
    const auto scene = random_scene(count, 15.0, rng());
    EstimateOptions opt;
    opt.p = 53;
    EstimateResult res;
    try {
      res = estimate(synthesize(g, scene), g, opt);
    } catch (const Error& e) {
      o.require(false, std::string("scene ") + std::to_string(t) + ": " + e.what());
      continue;
    }
    ++optimal;
    const auto& h = res.sdp.dual_poly;
    const auto r = autocorrelation(DualPolynomial::from_vector(h));
    const std::size_t mid = (r.size() - 1) / 2;
    hermitian = hermitian && r[mid].imag() == 0.0;
    for (std::size_t k = 1; k <= mid; ++k) hermitian = hermitian && r[mid - k] == std::conj(r[mid + k]);
    for (int gi = 0; gi < 8192; ++gi) {
      const double th = grid_angle(gi, 8192);
      max_b = std::max(max_b, std::abs(eval_trig_poly(h, th)));
      min_p_val = std::min(min_p_val, nonneg_value(r, th));
    }
    for (const auto& z : res.q_roots) {
      if (z == Complex{}) continue;
      const Complex mirror = 1.0 / std::conj(z);
      double best = 1e300;
      for (const auto& w : res.q_roots) best = std::min(best, std::abs(w - mirror));
      max_pair = std::max(max_pair, best / std::max(1.0, std::abs(mirror)));
    }
  }
  o.require(max_b <= 1.0 + 1e-6, "(a) |b| <= 1 + 1e-6");
  o.require(min_p_val >= -1e-6, "(b) p >= -1e-6");
  o.require(hermitian, "(c) exact Hermitian autocorrelation");
  o.require(max_pair <= 1e-6, "(d) conjugate-reciprocal root pairing");

  // (e) equivariance
  const auto y = synthesize(g, make_sources({-120.0, 15.0, 95.0}, {1.0, Complex(0.0, 2.0), 0.7}));
  EstimateOptions opt;
  opt.p = 53;
  const auto base = estimate(y, g, opt);
  const Complex rot = std::polar(1.0, 1.1);
  const auto phased = estimate(ComplexVector(rot * y), g, opt);
  const auto scaled = estimate(ComplexVector(2.5 * y), g, opt);
  double eq_angle = 0.0, eq_amp = 0.0;
  if (base.doa.angles.size() != 3 || phased.doa.angles.size() != 3 || scaled.doa.angles.size() != 3) {
    eq_angle = 1e300;
  } else {
    for (std::size_t i = 0; i < 3; ++i) {
      eq_angle = std::max({eq_angle, oracle::circ_deg(base.doa.angles[i], phased.doa.angles[i]),
                           oracle::circ_deg(base.doa.angles[i], scaled.doa.angles[i])});
      const double m = std::abs(base.doa.amplitudes[i]);
      eq_amp = std::max({eq_amp, std::abs(phased.doa.amplitudes[i] - rot * base.doa.amplitudes[i]) / m,
                         std::abs(scaled.doa.amplitudes[i] - 2.5 * base.doa.amplitudes[i]) / (2.5 * m)});
    }
  }
  o.require(eq_angle <= 1e-4 && eq_amp <= 1e-5, "(e) phase and scaling equivariance");

  // (f) sweep determinism
  ExperimentConfig cfg;
  cfg.p = {41, 53};
  cfg.radius_over_lambda = {1.59};
  cfg.sources = {3, 6};
  cfg.min_separation_deg = {12.0};
  cfg.trials = 3;
  cfg.seed = 99;
  auto table = [&](int jobs) {
    auto c = cfg;
    c.jobs = jobs;
    std::string text = csv::join_fields(sweep_header()) + "\n";
    success_sweep(c, [&](const SweepRow& r) { text += csv::join_fields(sweep_fields(r)) + "\n"; });
    return text;
  };
  const auto first = table(1);
  const bool same = first == table(1) && first == table(2);
  o.require(same, "(f) byte-identical sweep CSV");

  o.detail << optimal << "/20 Optimal, max|b| - 1 = " << max_b - 1.0 << ", min p = " << min_p_val
           << ", hermitian " << (hermitian ? "exact" : "broken") << ", pairing " << max_pair << ", equivariance "
           << eq_angle << " deg / " << eq_amp << ", sweep CSV " << (same ? "identical" : "differs");
}

void criterion8(Outcome& o) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-180.0, 180.0), mag(0.2, 4.0), ph(-M_PI, M_PI);
  double worst_ratio = 0.0, worst_trace = 0.0, worst_eig = 1e300;
  int scenes = 0;
  for (double r : {0.8, 1.59, 2.0}) {
    const auto g = make_uca(40, r);
    const auto basis = build_basis(g, min_p(r, -160.0));
    for (int t = 0; t < 4; ++t) {
      std::vector<Source> src;
      double atomic = 0.0;
      for (int l = 0; l < 1 + t; ++l) {
        src.push_back({oracle::rad(u(rng)), std::polar(mag(rng), ph(rng))});
        atomic += std::abs(src.back().amplitude);
      }
      const auto sol = solve(assemble(basis, synthesize(g, src)));
      ++scenes;
      o.require(sol.status == SdpStatus::Optimal, "Optimal termination");
      worst_ratio = std::max(worst_ratio, sol.objective / atomic);
      worst_trace = std::max(worst_trace, sol.max_trace_residual);
      worst_eig = std::min(worst_eig, sol.min_block_eigenvalue);
    }
  }
  const auto g = make_uca(40, 2.0);
  const auto zero = solve(assemble(build_basis(g, 61), ComplexVector::Zero(40)));
  o.require(worst_ratio <= 1.0 + 1e-6, "weak duality");
  o.require(worst_trace <= 1e-8, "trace constraints within 1e-8");
  o.require(worst_eig >= -1e-8, "PSD slack >= -1e-8");
  o.require(zero.status == SdpStatus::Optimal && std::abs(zero.objective) <= 1e-9, "y = 0 gives objective 0");
  o.detail << scenes << " scenes, max objective/atomic " << csv::format_double(worst_ratio) << ", max trace residual "
           << worst_trace << ", min block eigenvalue " << worst_eig << ", zero-snapshot objective " << zero.objective;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria = {
      {"three-source UCA reproduction", criterion1},
      {"two-source resolution vs CBF", criterion2},
      {"random planar array", criterion3},
      {"bandwidth rule regression", criterion4},
      {"success region sweep", criterion5},
      {"Bessel coefficient oracle", criterion6},
      {"property suite", criterion7},
      {"SDP solver suite", criterion8},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << "exception: " << e.what();
    }
    std::printf("%s criterion %zu (%s): %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                o.detail.str().c_str());
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
