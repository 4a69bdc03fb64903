#pragma once

// Dense linear algebra and transform kernels. No domain knowledge lives here.

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace sfdoa {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

inline constexpr double kPi = 3.14159265358979323846;

namespace numkit {

/// Unnormalized forward DFT: X[k] = sum_l x[l] exp(-j 2 pi l k / P).
///
/// Mixed-radix Cooley-Tukey on the smallest prime factor; prime lengths fall
/// back to direct summation.
std::vector<Complex> dft(std::span<const Complex> samples);

/// Inverse of dft() including the 1/P scale.
std::vector<Complex> idft(std::span<const Complex> spectrum);

/// Smallest eigenvalue of a Hermitian matrix. Throws ShapeError when the
/// matrix is not square or not Hermitian to within 1e-12 (absolute, scaled by
/// the largest entry when that exceeds one).
double hermitian_eigen_min(const ComplexMatrix& a);

/// Least-squares solution of min ||A x - b||_2 via column-pivoted QR.
/// Throws ShapeError on dimension mismatch or rows < cols, and
/// ConditioningError when cond(A) exceeds max_condition.
ComplexVector lstsq(const ComplexMatrix& a, const ComplexVector& b,
                    double max_condition = 1e10);

/// 2-norm condition number from the singular values.
double condition_number(const ComplexMatrix& a);

/// Lower Cholesky factor of a Hermitian positive-definite matrix. Throws
/// FactorizationError naming the first pivot that is not strictly positive.
template <typename Matrix>
Matrix cholesky_factor(const Matrix& a);

/// Solves A X = B for Hermitian positive-definite A.
ComplexMatrix cholesky_solve(const ComplexMatrix& a, const ComplexMatrix& b);
RealMatrix cholesky_solve(const RealMatrix& a, const RealMatrix& b);

}  // namespace numkit
}  // namespace sfdoa
