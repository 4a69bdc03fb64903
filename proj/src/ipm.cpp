#include "sfdoa/ipm.hpp"

#include <cmath>
#include <limits>

#include "sfdoa/error.hpp"

namespace sfdoa::ipm {

void SparseSym::add(int row, int col, double value) {
  if (value == 0.0) return;
  if (row > col) std::swap(row, col);
  entries.push_back({row, col, value});
}

double SparseSym::dot(const RealMatrix& w) const {
  double acc = 0.0;
  for (const auto& e : entries) {
    acc += e.row == e.col ? e.value * w(e.row, e.col) : e.value * (w(e.row, e.col) + w(e.col, e.row));
  }
  return acc;
}

void SparseSym::scatter_add(RealMatrix& w, double scale) const {
  for (const auto& e : entries) {
    w(e.row, e.col) += scale * e.value;
    if (e.row != e.col) w(e.col, e.row) += scale * e.value;
  }
}

double SparseSym::frobenius_norm() const {
  double acc = 0.0;
  for (const auto& e : entries) acc += (e.row == e.col ? 1.0 : 2.0) * e.value * e.value;
  return std::sqrt(acc);
}

RealMatrix SparseSym::dense(int n) const {
  RealMatrix w = RealMatrix::Zero(n, n);
  scatter_add(w, 1.0);
  return w;
}

void project_complex_embedding(RealMatrix& w) {
  const Eigen::Index k = w.rows() / 2;
  const RealMatrix re = 0.25 * (w.topLeftCorner(k, k) + w.topLeftCorner(k, k).transpose() +
                                w.bottomRightCorner(k, k) + w.bottomRightCorner(k, k).transpose());
  const RealMatrix im = 0.25 * (w.bottomLeftCorner(k, k) - w.bottomLeftCorner(k, k).transpose() -
                                w.topRightCorner(k, k) + w.topRightCorner(k, k).transpose());
  w.topLeftCorner(k, k) = re;
  w.bottomRightCorner(k, k) = re;
  w.bottomLeftCorner(k, k) = im;
  w.topRightCorner(k, k) = -im;
}

const char* to_string(Status status) {
  switch (status) {
    case Status::Optimal: return "Optimal";
    case Status::MaxIter: return "MaxIter";
    case Status::NumericalTrouble: return "NumericalTrouble";
  }
  return "Unknown";
}

namespace {

RealVector apply_a(const StandardForm& p, const RealMatrix& w) {
  RealVector out(static_cast<Eigen::Index>(p.a.size()));
  for (std::size_t k = 0; k < p.a.size(); ++k) out(static_cast<Eigen::Index>(k)) = p.a[k].dot(w);
  return out;
}

RealMatrix apply_at(const StandardForm& p, const RealVector& y) {
  RealMatrix out = RealMatrix::Zero(p.n, p.n);
  for (std::size_t k = 0; k < p.a.size(); ++k) p.a[k].scatter_add(out, y(static_cast<Eigen::Index>(k)));
  return out;
}

RealMatrix sym(const RealMatrix& w) { return 0.5 * (w + w.transpose()); }

// Largest alpha with L L^T + alpha D >= 0 (infinity when D >= 0).
double max_step(const RealMatrix& chol_lower, const RealMatrix& d) {
  const auto l = chol_lower.triangularView<Eigen::Lower>();
  RealMatrix w = l.solve(d);
  w = l.solve(RealMatrix(w.transpose()));
  Eigen::SelfAdjointEigenSolver<RealMatrix> eig(sym(w), Eigen::EigenvaluesOnly);
  const double lam = eig.eigenvalues()(0);
  return lam >= 0.0 ? std::numeric_limits<double>::infinity() : -1.0 / lam;
}

bool try_cholesky(const RealMatrix& a, RealMatrix& l) {
  try {
    l = numkit::cholesky_factor(a);
    return true;
  } catch (const FactorizationError&) {
    return false;
  }
}

// Schur complement M_kl = tr(A_k X A_l Z^-1) of the HKM direction.
RealMatrix schur_complement(const StandardForm& p, const RealMatrix& x, const RealMatrix& z_inv) {
  const Eigen::Index m = static_cast<Eigen::Index>(p.a.size());
  RealMatrix schur(m, m);
  RealMatrix zt(p.n, p.n);  // (A_k Z^-1)^T = Z^-1 A_k
  RealMatrix prod(p.n, p.n);
  for (Eigen::Index k = 0; k < m; ++k) {
    zt.setZero();
    for (const auto& e : p.a[static_cast<std::size_t>(k)].entries) {
      zt.col(e.row) += e.value * z_inv.col(e.col);
      if (e.row != e.col) zt.col(e.col) += e.value * z_inv.col(e.row);
    }
    prod.noalias() = x * zt.transpose();
    for (Eigen::Index l = k; l < m; ++l) schur(k, l) = p.a[static_cast<std::size_t>(l)].dot(prod);
  }
  for (Eigen::Index k = 0; k < m; ++k) {
    for (Eigen::Index l = 0; l < k; ++l) schur(k, l) = schur(l, k);
  }
  return schur;
}

}  // namespace

Result solve(const StandardForm& p, const Options& opt) {
  const int n = p.n;
  const Eigen::Index m = static_cast<Eigen::Index>(p.a.size());
  if (n <= 0) throw ArgumentError("ipm::solve: empty problem");
  if (p.b.size() != m) throw ShapeError("ipm::solve: b and constraint count differ");
  const bool embedded = p.structure == Structure::ComplexEmbedding;
  if (embedded && n % 2 != 0) throw ArgumentError("ipm::solve: complex embedding needs even dimension");

  const RealMatrix c = p.c.dense(n);
  const double norm_c = p.c.frobenius_norm();
  const double norm_b = p.b.norm();

  RealMatrix x = RealMatrix::Identity(n, n);
  RealMatrix z = std::max(1.0, norm_c) * RealMatrix::Identity(n, n);
  RealVector y = RealVector::Zero(m);

  Result res;
  RealMatrix lx, lz, lm;
  for (int iter = 0;; ++iter) {
    const RealVector rp = p.b - apply_a(p, x);
    const RealMatrix rd = c - apply_at(p, y) - z;
    res.primal_objective = p.c.dot(x);
    res.dual_objective = p.b.dot(y);
    res.relative_gap = std::abs(res.primal_objective - res.dual_objective) /
                       (1.0 + std::abs(res.primal_objective) + std::abs(res.dual_objective));
    res.primal_infeasibility = rp.norm() / (1.0 + norm_b);
    res.dual_infeasibility = rd.norm() / (1.0 + norm_c);
    res.iterations = iter;
    if (res.relative_gap <= opt.gap_tol && res.primal_infeasibility <= opt.feas_tol &&
        res.dual_infeasibility <= opt.feas_tol) {
      res.status = Status::Optimal;
      break;
    }
    if (iter >= opt.max_iter) {
      res.status = Status::MaxIter;
      break;
    }
    if (!try_cholesky(x, lx) || !try_cholesky(z, lz)) {
      res.status = Status::NumericalTrouble;
      break;
    }
    RealMatrix lz_inv = lz.triangularView<Eigen::Lower>().solve(RealMatrix::Identity(n, n));
    const RealMatrix z_inv = lz_inv.transpose() * lz_inv;

    RealMatrix schur = schur_complement(p, x, z_inv);
    bool factored = try_cholesky(schur, lm);
    const double diag_scale = schur.diagonal().cwiseAbs().maxCoeff();
    for (double reg = 1e-14; !factored && reg <= 1e-8; reg *= 100.0) {
      schur.diagonal().array() += reg * diag_scale;
      factored = try_cholesky(schur, lm);
    }
    if (!factored) {
      res.status = Status::NumericalTrouble;
      break;
    }

    const RealVector base_rhs = rp + apply_a(p, x * rd * z_inv);
    auto direction = [&](const RealMatrix& k, RealMatrix& dx, RealVector& dy, RealMatrix& dz) {
      dy = lm.triangularView<Eigen::Lower>().solve(base_rhs - apply_a(p, k));
      lm.transpose().triangularView<Eigen::Upper>().solveInPlace(dy);
      dz = rd - apply_at(p, dy);
      dx = k - sym(x * dz * z_inv);
      if (embedded) {
        project_complex_embedding(dx);
        project_complex_embedding(dz);
      }
    };

    const double mu = x.cwiseProduct(z).sum() / n;
    RealMatrix dx_aff, dz_aff;
    RealVector dy_aff;
    direction(-x, dx_aff, dy_aff, dz_aff);
    const double ap_aff = std::min(1.0, max_step(lx, dx_aff));
    const double ad_aff = std::min(1.0, max_step(lz, dz_aff));
    const double mu_aff = (x + ap_aff * dx_aff).cwiseProduct(z + ad_aff * dz_aff).sum() / n;
    const double sigma = std::clamp(std::pow(mu_aff / mu, 3.0), 0.0, 1.0);

    const RealMatrix k_corr = sigma * mu * z_inv - x - sym(dx_aff * dz_aff * z_inv);
    RealMatrix dx, dz;
    RealVector dy;
    direction(k_corr, dx, dy, dz);
    double ap = std::min(1.0, opt.step_fraction * max_step(lx, dx));
    double ad = std::min(1.0, opt.step_fraction * max_step(lz, dz));

    bool accepted = false;
    RealMatrix x_next, z_next, scratch;
    for (int backtrack = 0; backtrack < 30; ++backtrack) {
      x_next = x + ap * dx;
      z_next = z + ad * dz;
      if (embedded) {
        project_complex_embedding(x_next);
        project_complex_embedding(z_next);
      }
      if (try_cholesky(x_next, scratch) && try_cholesky(z_next, scratch)) {
        accepted = true;
        break;
      }
      ap *= 0.8;
      ad *= 0.8;
    }
    if (!accepted) {
      res.status = Status::NumericalTrouble;
      break;
    }
    x = std::move(x_next);
    z = std::move(z_next);
    y += ad * dy;
  }
  res.x = std::move(x);
  res.y = std::move(y);
  res.z = std::move(z);
  return res;
}

}  // namespace sfdoa::ipm
