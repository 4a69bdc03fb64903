#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "sfdoa/error.hpp"
#include "sfdoa/pipeline.hpp"

using namespace sfdoa;

namespace {

std::vector<Source> sources(const std::vector<double>& deg, const std::vector<Complex>& amp) {
  std::vector<Source> s;
  for (std::size_t i = 0; i < deg.size(); ++i) s.push_back({oracle::rad(deg[i]), amp[i]});
  return s;
}

void check_angles(const std::vector<double>& got, const std::vector<double>& want_deg, double tol_deg) {
  REQUIRE(got.size() == want_deg.size());
  auto sorted = want_deg;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < got.size(); ++i) CHECK(oracle::circ_deg(got[i], oracle::rad(sorted[i])) < tol_deg);
}

}  // namespace

TEST_SUITE("pipeline") {
  TEST_CASE("synthesis examples") {
    const auto g = make_uca(40, 2.0);
    CHECK((synthesize(g, sources({0.0}, {1.0})) - steering(g, 0.0).values).norm() < 1e-15);
    CHECK(synthesize(g, sources({33.0, 33.0}, {2.0, -2.0})).norm() < 1e-13);
    const auto y = synthesize(g, sources({-10.3, 30.5, 70.7}, {5.0, 30.0, 7.0}));
    const ComplexVector want = 5.0 * steering(g, oracle::rad(-10.3)).values + 30.0 * steering(g, oracle::rad(30.5)).values +
                               7.0 * steering(g, oracle::rad(70.7)).values;
    CHECK((y - want).norm() < 1e-12);
    CHECK_THROWS_AS(synthesize(g, {}), ArgumentError);
  }

  TEST_CASE("three coherent sources on the 40-sensor UCA") {
    const auto g = make_uca(40, 2.0);
    const auto y = synthesize(g, sources({-10.3, 30.5, 70.7}, {5.0, 30.0, 7.0}));
    EstimateOptions opt;
    opt.p = 61;
    const auto res = estimate(y, g, opt);
    CHECK_FALSE(res.no_sources);
    check_angles(res.doa.angles, {-10.3, 30.5, 70.7}, 1e-3);
    const std::vector<double> mags{5.0, 30.0, 7.0};
    REQUIRE(res.doa.amplitudes.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(res.doa.amplitudes[i]) == doctest::Approx(mags[i]).epsilon(1e-3));
    CHECK(res.sdp.objective == doctest::Approx(42.0).epsilon(1e-5));
    CHECK(res.worst_root_residual < 1e-8);

    const auto j = to_json(res);
    CHECK(j["sources"].size() == 3);
    CHECK_FALSE(j.contains("runtime_s"));
    CHECK(to_json(res, 1.5)["runtime_s"] == 1.5);
  }

  TEST_CASE("random planar array scene") {
    const auto g = make_rpa(30, 0.25, 2.0, 4);
    const auto y = synthesize(g, sources({-65.1, 37.5, 50.7}, {1.0, 1.0, 1.0}));
    EstimateOptions opt;
    opt.p = 61;
    check_angles(estimate(y, g, opt).doa.angles, {-65.1, 37.5, 50.7}, 1e-3);
  }

  TEST_CASE("default P comes from the bandwidth rule") {
    const auto g = make_uca(24, 1.0);
    const auto res = estimate(synthesize(g, sources({12.0}, {1.0})), g);
    CHECK(res.p == min_p(1.0, -160.0));
    check_angles(res.doa.angles, {12.0}, 1e-3);
  }

  TEST_CASE("zero snapshot yields no sources") {
    const auto g = make_uca(16, 1.0);
    const auto res = estimate(ComplexVector::Zero(16), g);
    CHECK(res.no_sources);
    CHECK(res.doa.angles.empty());
    CHECK(res.doa.amplitudes.empty());
  }

  TEST_CASE("shape mismatch") {
    const auto g = make_uca(16, 1.0);
    CHECK_THROWS_AS(estimate(ComplexVector::Zero(15), g), ShapeError);
    CHECK_THROWS_AS(recover_amplitudes(ComplexVector::Zero(15), g, {0.0}), ShapeError);
  }

  TEST_CASE("least-squares amplitudes are exact for exact angles") {
    const auto g = make_uca(40, 2.0);
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> u(-180.0, 180.0), m(0.5, 2.0), ph(-M_PI, M_PI);
    std::vector<double> deg;
    std::vector<Complex> amp;
    for (int l = 0; l < 5; ++l) {
      deg.push_back(u(rng));
      amp.push_back(std::polar(m(rng), ph(rng)));
    }
    const auto src = sources(deg, amp);
    const auto y = synthesize(g, src);
    std::vector<double> angles;
    for (const auto& s : src) angles.push_back(s.theta);
    double residual = 1.0;
    const auto got = recover_amplitudes(y, g, angles, &residual);
    for (std::size_t i = 0; i < 5; ++i) CHECK(std::abs(got[i] - amp[i]) <= 1e-8 * std::abs(amp[i]));
    CHECK(residual < 1e-10);

    CHECK_THROWS_AS(recover_amplitudes(y, g, {0.3, 0.3}), ConditioningError);
    CHECK_THROWS_AS(recover_amplitudes(ComplexVector::Zero(4), make_uca(4, 0.5), {0.1, 0.2, 0.3, 0.4, 0.5}),
                    ArgumentError);
  }

  TEST_CASE("global phase and positive scaling equivariance") {
    const auto g = make_uca(32, 1.5);
    const auto y = synthesize(g, sources({-120.0, 15.0, 95.0}, {1.0, Complex(0.0, 2.0), 0.7}));
    const auto base = estimate(y, g);
    const Complex rot = std::polar(1.0, 1.1);
    const auto phased = estimate(ComplexVector(rot * y), g);
    const auto scaled = estimate(ComplexVector(3.5 * y), g);
    REQUIRE(base.doa.angles.size() == 3);
    REQUIRE(phased.doa.angles.size() == 3);
    REQUIRE(scaled.doa.angles.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(oracle::circ_deg(base.doa.angles[i], phased.doa.angles[i]) < 1e-4);
      CHECK(oracle::circ_deg(base.doa.angles[i], scaled.doa.angles[i]) < 1e-4);
      CHECK(std::abs(phased.doa.amplitudes[i] - rot * base.doa.amplitudes[i]) < 1e-4 * std::abs(base.doa.amplitudes[i]));
      CHECK(std::abs(scaled.doa.amplitudes[i] - 3.5 * base.doa.amplitudes[i]) < 1e-4 * 3.5 * std::abs(base.doa.amplitudes[i]));
    }
  }
}
