#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "sfdoa/error.hpp"
#include "sfdoa/ipm.hpp"
#include "sfdoa/pipeline.hpp"
#include "sfdoa/sdp.hpp"

using namespace sfdoa;

namespace {

ComplexVector scene(const ArrayGeometry& g, const std::vector<double>& deg, const std::vector<Complex>& amp) {
  std::vector<Source> s;
  for (std::size_t i = 0; i < deg.size(); ++i) s.push_back({oracle::rad(deg[i]), amp[i]});
  return synthesize(g, s);
}

}  // namespace

TEST_SUITE("sdp") {
  TEST_CASE("real-symmetric solver: small problem with a known optimum") {
    // minimize <C, X> with trace X = 1: optimum is the smallest eigenvalue of C.
    ipm::StandardForm f;
    f.n = 3;
    f.c.add(0, 0, 2.0);
    f.c.add(1, 1, 1.0);
    f.c.add(2, 2, 3.0);
    f.c.add(0, 1, 0.5);
    ipm::SparseSym tr;
    for (int i = 0; i < 3; ++i) tr.add(i, i, 1.0);
    f.a.push_back(tr);
    f.b = RealVector::Ones(1);
    const auto res = ipm::solve(f);
    REQUIRE(res.status == ipm::Status::Optimal);
    Eigen::MatrixXcd c = f.c.dense(3).cast<Complex>();
    CHECK(res.primal_objective == doctest::Approx(oracle::min_eigenvalue(c)).epsilon(1e-7));
    CHECK(res.dual_objective <= res.primal_objective + 1e-9);
  }

  TEST_CASE("complex embedding projection") {
    RealMatrix w = RealMatrix::Random(6, 6);
    w = (w + w.transpose()).eval();
    ipm::project_complex_embedding(w);
    CHECK((w.topLeftCorner(3, 3) - w.bottomRightCorner(3, 3)).norm() < 1e-15);
    CHECK((w.bottomLeftCorner(3, 3) + w.topRightCorner(3, 3)).norm() < 1e-15);
    CHECK((w - w.transpose()).norm() < 1e-15);
  }

  TEST_CASE("problem dimensions") {
    const auto g = ArrayGeometry::from_normalized({{0.1, 0.0}, {0.0, 0.2}});
    const auto prob = assemble(build_basis(g, 3), ComplexVector::Ones(2));
    CHECK(prob.trace_constraint_count() == 3);
    CHECK(prob.block_dimension() == 8);
    CHECK(prob.real_constraint_count() == 4 * 3 - 2 * prob.rank);

    const auto uca = make_uca(40, 2.0);
    const auto big = assemble(build_basis(uca, 61), ComplexVector::Ones(40));
    CHECK(big.trace_constraint_count() == 61);
    CHECK(big.block_dimension() == 124);
    CHECK_THROWS_AS(assemble(build_basis(uca, 61), ComplexVector::Ones(39)), ShapeError);
  }

  TEST_CASE("zero snapshot: objective zero and c = 0") {
    const auto g = make_uca(12, 1.0);
    const auto basis = build_basis(g, min_p(1.0, -160.0));
    const auto sol = solve(assemble(basis, ComplexVector::Zero(12)));
    REQUIRE(sol.status == SdpStatus::Optimal);
    CHECK(std::abs(sol.objective) < 1e-9);
    CHECK(sol.c_star.norm() < 1e-6);
  }

  TEST_CASE("single unit source: objective one") {
    const auto g = make_uca(16, 1.0);
    const auto y = scene(g, {40.0}, {1.0});
    const auto sol = solve(assemble(build_basis(g, min_p(1.0, -160.0)), y));
    REQUIRE(sol.status == SdpStatus::Optimal);
    CHECK(sol.objective == doctest::Approx(1.0).epsilon(1e-6));
  }

  TEST_CASE("three sources: objective is the amplitude sum and the certificate peaks at the sources") {
    const auto g = make_uca(40, 2.0);
    const auto basis = build_basis(g, 61);
    const auto y = scene(g, {-10.3, 30.5, 70.7}, {5.0, 30.0, 7.0});
    const auto sol = solve(assemble(basis, y));
    REQUIRE(sol.status == SdpStatus::Optimal);
    CHECK(sol.objective == doctest::Approx(42.0).epsilon(1e-5));
    CHECK(sol.max_trace_residual <= 1e-8);
    CHECK(sol.min_block_eigenvalue >= -1e-8);

    const auto cert = check_certificate(sol, basis);
    CHECK(cert.bounded);
    CHECK(cert.max_magnitude <= 1.0 + 1e-6);
    REQUIRE(cert.peak_angles.size() >= 3);
    for (double want : {-10.3, 30.5, 70.7}) {
      double best = 180.0;
      for (double a : cert.peak_angles) best = std::min(best, oracle::circ_deg(a, oracle::rad(want)));
      CHECK(best < 0.05);
    }

    SdpSolution scaled = sol;
    scaled.c_star *= 1.1;
    scaled.dual_poly = dual_poly_coefficients(basis, scaled.c_star);
    CHECK_FALSE(check_certificate(scaled, basis).bounded);

    SdpSolution zero = sol;
    zero.c_star.setZero();
    zero.dual_poly.setZero();
    CHECK(check_certificate(zero, basis).max_magnitude == 0.0);
  }

  TEST_CASE("weak duality and feasibility on random scenes") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(-180.0, 180.0), mag(0.5, 3.0), ph(-M_PI, M_PI);
    const auto g = make_uca(24, 1.2);
    const auto basis = build_basis(g, min_p(1.2, -160.0));
    for (int t = 0; t < 4; ++t) {
      std::vector<double> deg;
      std::vector<Complex> amp;
      double atomic = 0.0;
      for (int l = 0; l < 3; ++l) {
        deg.push_back(u(rng));
        amp.push_back(std::polar(mag(rng), ph(rng)));
        atomic += std::abs(amp.back());
      }
      const auto sol = solve(assemble(basis, scene(g, deg, amp)));
      REQUIRE(sol.status == SdpStatus::Optimal);
      CHECK(sol.objective <= atomic * (1.0 + 1e-6));
      CHECK(sol.max_trace_residual <= 1e-8);
      CHECK(sol.min_block_eigenvalue >= -1e-8);
    }
  }

  TEST_CASE("more sensors than coefficients: weak duality still holds") {
    const auto g = make_uca(40, 0.8);
    const auto basis = build_basis(g, min_p(0.8, -160.0));
    REQUIRE(basis.p < 40);
    const auto prob = assemble(basis, scene(g, {-50.0, 20.0, 100.0}, {1.0, Complex(0.0, 2.0), 0.5}));
    CHECK(prob.rank < basis.p);
    const auto sol = solve(prob);
    REQUIRE(sol.status == SdpStatus::Optimal);
    CHECK(sol.objective <= 3.5 * (1.0 + 1e-6));
    CHECK(sol.objective == doctest::Approx(3.5).epsilon(1e-6));
  }

  TEST_CASE("solver is deterministic") {
    const auto g = make_uca(20, 1.0);
    const auto basis = build_basis(g, min_p(1.0, -160.0));
    const auto y = scene(g, {10.0, -100.0}, {1.0, Complex(0.0, 2.0)});
    const auto prob = assemble(basis, y);
    const auto a = solve(prob);
    const auto b = solve(prob);
    CHECK(a.iterations == b.iterations);
    CHECK(a.objective == b.objective);
    CHECK((a.c_star - b.c_star).norm() == 0.0);
  }

  TEST_CASE("iteration cap reports MaxIter") {
    const auto g = make_uca(20, 1.0);
    SolverOptions opt;
    opt.max_iter = 2;
    const auto sol = solve(assemble(build_basis(g, 31), scene(g, {10.0}, {1.0})), opt);
    CHECK(sol.status == SdpStatus::MaxIter);
  }

  TEST_CASE("trigonometric polynomial evaluation") {
    ComplexVector h(3);
    h << Complex(0.5, 0), Complex(0, 0), Complex(0, 1);
    const double th = 0.3;
    const Complex want = 0.5 * std::polar(1.0, -th) + Complex(0, 1) * std::polar(1.0, th);
    CHECK(std::abs(eval_trig_poly(h, th) - want) < 1e-15);
  }
}
