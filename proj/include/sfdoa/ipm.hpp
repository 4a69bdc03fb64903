#pragma once

// Primal-dual interior-point method for real symmetric standard-form SDPs:
//
//   minimize <C, X>  subject to  <A_k, X> = b_k,  X >= 0
//   maximize b^T y   subject to  Z = C - sum_k y_k A_k >= 0
//
// Infeasible start, HKM search direction, Mehrotra predictor-corrector.

#include <vector>

#include "sfdoa/numkit.hpp"

namespace sfdoa::ipm {

/// One stored entry of a symmetric matrix; row <= col. Off-diagonal entries
/// stand for both (row, col) and (col, row).
struct SymEntry {
  int row = 0;
  int col = 0;
  double value = 0.0;
};

struct SparseSym {
  std::vector<SymEntry> entries;

  /// Adds value at (row, col) and its mirror, merging with nothing; callers
  /// must not add the same position twice.
  void add(int row, int col, double value);
  /// sum_ij A_ij W_ij for any (not necessarily symmetric) W.
  double dot(const RealMatrix& w) const;
  /// W += scale * A.
  void scatter_add(RealMatrix& w, double scale) const;
  double frobenius_norm() const;
  RealMatrix dense(int n) const;
};

enum class Structure {
  General,
  /// n = 2k and every matrix has the form [[R, -I], [I, R]] with R symmetric
  /// and I antisymmetric (real image of a k x k Hermitian matrix). Iterates
  /// are projected back onto this subspace after each step.
  ComplexEmbedding,
};

struct StandardForm {
  int n = 0;
  SparseSym c;
  std::vector<SparseSym> a;
  RealVector b;
  Structure structure = Structure::General;
};

struct Options {
  double gap_tol = 1e-9;       // relative duality gap
  double feas_tol = 1e-10;     // relative primal and dual residuals
  int max_iter = 200;
  double step_fraction = 0.98;
};

enum class Status { Optimal, MaxIter, NumericalTrouble };

struct Result {
  RealMatrix x;
  RealVector y;
  RealMatrix z;
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  double relative_gap = 0.0;
  double primal_infeasibility = 0.0;
  double dual_infeasibility = 0.0;
  int iterations = 0;
  Status status = Status::MaxIter;
};

Result solve(const StandardForm& problem, const Options& options = {});

/// Projects a symmetric 2k x 2k matrix onto the complex-embedding subspace.
void project_complex_embedding(RealMatrix& w);

const char* to_string(Status status);

}  // namespace sfdoa::ipm
