#include "sfdoa/sdp.hpp"

#include <cmath>
#include <sstream>

#include "sfdoa/error.hpp"

namespace sfdoa {

const char* to_string(SdpStatus status) {
  switch (status) {
    case SdpStatus::Optimal: return "Optimal";
    case SdpStatus::MaxIter: return "MaxIter";
    case SdpStatus::NumericalTrouble: return "NumericalTrouble";
  }
  return "Unknown";
}

namespace {

// Accumulates a Hermitian matrix, given by its upper triangle, into the real
// embedding 1/2 [[Re A, -Im A], [Im A, Re A]] so that <A~, X~> = tr(A X).
class HermitianBuilder {
 public:
  explicit HermitianBuilder(int nc) : nc_(nc) {}

  void add(int i, int j, Complex v) {
    if (i > j) {
      std::swap(i, j);
      v = std::conj(v);
    }
    if (i == j) {
      out_.add(i, i, 0.5 * v.real());
      out_.add(i + nc_, i + nc_, 0.5 * v.real());
      return;
    }
    out_.add(i, j, 0.5 * v.real());
    out_.add(i + nc_, j + nc_, 0.5 * v.real());
    out_.add(i, j + nc_, -0.5 * v.imag());
    out_.add(j, i + nc_, 0.5 * v.imag());
  }

  ipm::SparseSym take() { return std::move(out_); }

 private:
  int nc_;
  ipm::SparseSym out_;
};

}  // namespace

SdpProblem assemble(const ManifoldBasis& basis, const ComplexVector& y, std::optional<double> rank_tol) {
  if (y.size() != basis.g_h.cols()) {
    std::ostringstream os;
    os << "assemble: snapshot has " << y.size() << " entries but the basis has " << basis.g_h.cols()
       << " sensors";
    throw ShapeError(os.str());
  }
  const int p = basis.p;
  const int nc = p + 1;

  SdpProblem prob;
  prob.basis = basis;
  prob.y = y;

  Eigen::JacobiSVD<ComplexMatrix> svd(basis.g_h, Eigen::ComputeFullU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  const double tol = rank_tol ? *rank_tol : 100.0 * std::pow(10.0, basis.gamma_db / 20.0);
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > s(0) * tol) ++rank;
  }
  prob.rank = rank;
  prob.range_basis = svd.matrixU().leftCols(rank);
  prob.coupling = svd.matrixV().leftCols(rank) *
                  s.head(rank).cwiseInverse().cast<Complex>().asDiagonal();
  // c = V_r S_r^-1 U_r^H h  =>  c^H y = h^H U_r S_r^-1 V_r^H y.
  prob.objective_weights = prob.range_basis * (prob.coupling.adjoint() * y);
  prob.objective_scale = prob.objective_weights.norm();
  const ComplexVector w = prob.objective_scale > 0.0
                              ? ComplexVector(prob.objective_weights / prob.objective_scale)
                              : prob.objective_weights;

  auto& form = prob.form;
  form.n = 2 * nc;
  form.structure = ipm::Structure::ComplexEmbedding;
  std::vector<double> rhs;

  // sum_i H[i,i] = 1
  {
    HermitianBuilder a(nc);
    for (int i = 0; i < p; ++i) a.add(i, i, 1.0);
    form.a.push_back(a.take());
    rhs.push_back(1.0);
  }
  // Re and Im of sum_i H[i, i+j] = 0, j = 1..P-1.
  for (int j = 1; j < p; ++j) {
    HermitianBuilder re(nc);
    HermitianBuilder im(nc);
    for (int i = 0; i + j < p; ++i) {
      re.add(i, i + j, 0.5);
      im.add(i, i + j, Complex(0.0, 0.5));
    }
    form.a.push_back(re.take());
    rhs.push_back(0.0);
    form.a.push_back(im.take());
    rhs.push_back(0.0);
  }
  // Corner entry equals one.
  {
    HermitianBuilder a(nc);
    a.add(p, p, 1.0);
    form.a.push_back(a.take());
    rhs.push_back(1.0);
  }
  // Last column orthogonal to every left singular vector outside range(G^H).
  const ComplexMatrix& u = svd.matrixU();
  for (int q = rank; q < p; ++q) {
    HermitianBuilder re(nc);
    HermitianBuilder im(nc);
    for (int i = 0; i < p; ++i) {
      re.add(i, p, 0.5 * u(i, q));
      im.add(i, p, Complex(0.0, 0.5) * u(i, q));
    }
    form.a.push_back(re.take());
    rhs.push_back(0.0);
    form.a.push_back(im.take());
    rhs.push_back(0.0);
  }
  form.b = Eigen::Map<RealVector>(rhs.data(), static_cast<Eigen::Index>(rhs.size()));

  // minimize -Re{h^H w}
  HermitianBuilder cost(nc);
  for (int i = 0; i < p; ++i) cost.add(i, p, -0.5 * w(i));
  form.c = cost.take();
  return prob;
}

ComplexVector dual_poly_coefficients(const ManifoldBasis& basis, const ComplexVector& c) {
  return basis.g_h * c;
}

Complex eval_trig_poly(const ComplexVector& h, double theta) {
  const Eigen::Index n = (h.size() - 1) / 2;
  // Horner in z = e^{j theta}, then shift by z^-N.
  const Complex z = std::polar(1.0, theta);
  Complex acc = 0.0;
  for (Eigen::Index i = h.size() - 1; i >= 0; --i) acc = acc * z + h(i);
  return acc * std::polar(1.0, -static_cast<double>(n) * theta);
}

SdpSolution solve(const SdpProblem& prob, const SolverOptions& options) {
  ipm::Options ipm_opts;
  ipm_opts.gap_tol = options.gap_tol;
  ipm_opts.max_iter = options.max_iter;
  const auto res = ipm::solve(prob.form, ipm_opts);

  const int p = prob.basis.p;
  const int nc = p + 1;
  const ComplexMatrix x = res.x.topLeftCorner(nc, nc).cast<Complex>() +
                          Complex(0.0, 1.0) * res.x.bottomLeftCorner(nc, nc).cast<Complex>();

  SdpSolution sol;
  sol.h_star = x.topLeftCorner(p, p);
  const ComplexVector column = x.col(p).head(p);
  sol.c_star = prob.coupling * (prob.range_basis.adjoint() * column);
  sol.dual_poly = dual_poly_coefficients(prob.basis, sol.c_star);
  sol.objective = std::real(sol.c_star.dot(prob.y));
  sol.duality_gap = res.relative_gap;
  sol.absolute_gap = std::abs(res.primal_objective - res.dual_objective) * prob.objective_scale;
  sol.primal_infeasibility = res.primal_infeasibility;
  sol.iterations = res.iterations;

  for (int j = 0; j < p; ++j) {
    Complex acc = 0.0;
    for (int i = 0; i + j < p; ++i) acc += sol.h_star(i, i + j);
    sol.max_trace_residual = std::max(sol.max_trace_residual, std::abs(acc - (j == 0 ? 1.0 : 0.0)));
  }
  ComplexMatrix block(nc, nc);
  block.topLeftCorner(p, p) = sol.h_star;
  block.col(p).head(p) = sol.dual_poly;
  block.row(p).head(p) = sol.dual_poly.adjoint();
  block(p, p) = 1.0;
  block = 0.5 * (block + block.adjoint()).eval();
  sol.min_block_eigenvalue = numkit::hermitian_eigen_min(block);

  switch (res.status) {
    case ipm::Status::Optimal: sol.status = SdpStatus::Optimal; break;
    case ipm::Status::MaxIter: sol.status = SdpStatus::MaxIter; break;
    case ipm::Status::NumericalTrouble: sol.status = SdpStatus::NumericalTrouble; break;
  }
  if (sol.status == SdpStatus::Optimal &&
      (sol.min_block_eigenvalue < -options.psd_slack || sol.max_trace_residual > 1e-8)) {
    sol.status = SdpStatus::NumericalTrouble;
  }
  return sol;
}

CertificateReport check_certificate(const SdpSolution& solution, const ManifoldBasis& basis, int grid) {
  const ComplexVector h = dual_poly_coefficients(basis, solution.c_star);
  std::vector<double> mag(static_cast<std::size_t>(grid));
  CertificateReport rep;
  for (int g = 0; g < grid; ++g) {
    const double theta = -kPi + 2.0 * kPi * (g + 1) / grid;
    mag[static_cast<std::size_t>(g)] = std::abs(eval_trig_poly(h, theta));
    if (mag[static_cast<std::size_t>(g)] > rep.max_magnitude) {
      rep.max_magnitude = mag[static_cast<std::size_t>(g)];
      rep.argmax_theta = theta;
    }
  }
  for (int g = 0; g < grid; ++g) {
    const double prev = mag[static_cast<std::size_t>((g + grid - 1) % grid)];
    const double next = mag[static_cast<std::size_t>((g + 1) % grid)];
    const double cur = mag[static_cast<std::size_t>(g)];
    if (cur >= prev && cur > next && cur >= 1.0 - 1e-3) {
      rep.peak_angles.push_back(-kPi + 2.0 * kPi * (g + 1) / grid);
    }
  }
  rep.bounded = rep.max_magnitude <= 1.0 + 1e-6;
  return rep;
}

}  // namespace sfdoa
