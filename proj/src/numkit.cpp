#include "sfdoa/numkit.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "sfdoa/error.hpp"

namespace sfdoa::numkit {

namespace {

std::size_t smallest_prime_factor(std::size_t n) {
  if (n % 2 == 0) return 2;
  for (std::size_t f = 3; f * f <= n; f += 2) {
    if (n % f == 0) return f;
  }
  return n;
}

// Twiddle table w[t] = exp(-j 2 pi t / n), t = 0..n-1.
std::vector<Complex> twiddles(std::size_t n) {
  std::vector<Complex> w(n);
  for (std::size_t t = 0; t < n; ++t) {
    w[t] = std::polar(1.0, -2.0 * kPi * static_cast<double>(t) / static_cast<double>(n));
  }
  return w;
}

void dft_recursive(const Complex* in, std::size_t stride, std::size_t n, Complex* out) {
  if (n == 1) {
    out[0] = in[0];
    return;
  }
  const std::size_t radix = smallest_prime_factor(n);
  const auto w = twiddles(n);
  if (radix == n) {
    for (std::size_t k = 0; k < n; ++k) {
      Complex acc = 0.0;
      for (std::size_t l = 0; l < n; ++l) acc += in[l * stride] * w[(l * k) % n];
      out[k] = acc;
    }
    return;
  }
  const std::size_t m = n / radix;
  std::vector<Complex> sub(n);
  for (std::size_t r = 0; r < radix; ++r) {
    dft_recursive(in + r * stride, stride * radix, m, sub.data() + r * m);
  }
  for (std::size_t k = 0; k < n; ++k) {
    Complex acc = 0.0;
    for (std::size_t r = 0; r < radix; ++r) acc += sub[r * m + k % m] * w[(r * k) % n];
    out[k] = acc;
  }
}

template <typename Matrix>
void require_square(const Matrix& a, const char* who) {
  if (a.rows() != a.cols()) {
    std::ostringstream os;
    os << who << ": matrix is " << a.rows() << "x" << a.cols() << ", expected square";
    throw ShapeError(os.str());
  }
}

}  // namespace

std::vector<Complex> dft(std::span<const Complex> samples) {
  std::vector<Complex> out(samples.size());
  if (!samples.empty()) dft_recursive(samples.data(), 1, samples.size(), out.data());
  return out;
}

std::vector<Complex> idft(std::span<const Complex> spectrum) {
  std::vector<Complex> conj_in(spectrum.size());
  for (std::size_t i = 0; i < spectrum.size(); ++i) conj_in[i] = std::conj(spectrum[i]);
  auto out = dft(conj_in);
  const double scale = 1.0 / static_cast<double>(spectrum.size());
  for (auto& v : out) v = std::conj(v) * scale;
  return out;
}

double hermitian_eigen_min(const ComplexMatrix& a) {
  require_square(a, "hermitian_eigen_min");
  if (a.size() == 0) throw ShapeError("hermitian_eigen_min: empty matrix");
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  const double asym = (a - a.adjoint()).cwiseAbs().maxCoeff();
  if (!(asym <= 1e-12 * scale)) {
    std::ostringstream os;
    os << "hermitian_eigen_min: matrix is not Hermitian (max |A - A^H| = " << asym << ")";
    throw ShapeError(os.str());
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(a, Eigen::EigenvaluesOnly);
  return eig.eigenvalues()(0);
}

double condition_number(const ComplexMatrix& a) {
  if (a.size() == 0) return 1.0;
  Eigen::JacobiSVD<ComplexMatrix> svd(a);
  const auto& s = svd.singularValues();
  const double smallest = s(s.size() - 1);
  if (smallest == 0.0) return std::numeric_limits<double>::infinity();
  return s(0) / smallest;
}

ComplexVector lstsq(const ComplexMatrix& a, const ComplexVector& b, double max_condition) {
  if (a.rows() != b.size()) {
    std::ostringstream os;
    os << "lstsq: A has " << a.rows() << " rows but b has " << b.size() << " entries";
    throw ShapeError(os.str());
  }
  if (a.rows() < a.cols()) {
    std::ostringstream os;
    os << "lstsq: underdetermined system (" << a.rows() << "x" << a.cols() << ")";
    throw ShapeError(os.str());
  }
  const double cond = condition_number(a);
  if (!(cond <= max_condition)) {
    std::ostringstream os;
    os << "lstsq: matrix is rank deficient or ill-conditioned (cond = " << cond << ")";
    throw ConditioningError(os.str(), cond);
  }
  return a.colPivHouseholderQr().solve(b);
}

template <typename Matrix>
Matrix cholesky_factor(const Matrix& a) {
  require_square(a, "cholesky_factor");
  const Eigen::Index n = a.rows();
  Matrix l = Matrix::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double d = std::real(a(j, j)) - l.row(j).head(j).squaredNorm();
    if (!(d > 0.0)) {
      std::ostringstream os;
      os << "cholesky_factor: matrix is not positive definite (pivot " << j << " = " << d << ")";
      throw FactorizationError(os.str(), j);
    }
    const double ljj = std::sqrt(d);
    l(j, j) = ljj;
    const Eigen::Index rest = n - j - 1;
    if (rest > 0) {
      l.col(j).tail(rest) =
          (a.col(j).tail(rest) - l.block(j + 1, 0, rest, j) * l.row(j).head(j).adjoint()) / ljj;
    }
  }
  return l;
}

template RealMatrix cholesky_factor<RealMatrix>(const RealMatrix&);
template ComplexMatrix cholesky_factor<ComplexMatrix>(const ComplexMatrix&);

namespace {

template <typename Matrix>
Matrix cholesky_solve_impl(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) {
    std::ostringstream os;
    os << "cholesky_solve: A is " << a.rows() << "x" << a.cols() << " but B has " << b.rows()
       << " rows";
    throw ShapeError(os.str());
  }
  const Matrix l = cholesky_factor(a);
  Matrix x = l.template triangularView<Eigen::Lower>().solve(b);
  l.adjoint().template triangularView<Eigen::Upper>().solveInPlace(x);
  return x;
}

}  // namespace

ComplexMatrix cholesky_solve(const ComplexMatrix& a, const ComplexMatrix& b) {
  return cholesky_solve_impl(a, b);
}

RealMatrix cholesky_solve(const RealMatrix& a, const RealMatrix& b) {
  return cholesky_solve_impl(a, b);
}

}  // namespace sfdoa::numkit
