#ifndef QWP_COMPLEX_MATRIX_HPP
#define QWP_COMPLEX_MATRIX_HPP

#include <Eigen/Dense>
#include <complex>
#include <initializer_list>
#include <vector>

#include "qwp/error.hpp"

namespace qwp {

using Complex = std::complex<double>;

// Default tolerances used across the library. Callers can pass their own to
// the predicates that take one; these are the documented defaults.
inline constexpr double kHermTol = 1e-10;   // Hermiticity slack (max-norm)
inline constexpr double kPsdTol = 1e-9;     // eigenvalue floor for PSD checks
inline constexpr double kEqTol = 1e-9;      // operator equality (max-norm)
inline constexpr double kTraceTol = 1e-9;   // trace bound slack

// Dense complex matrix value type. Wraps an Eigen matrix; all public
// constructors reject non-finite entries so NaN/inf never propagate.
class ComplexMatrix {
 public:
  ComplexMatrix() : m_(0, 0) {}
  explicit ComplexMatrix(Eigen::MatrixXcd m);
  ComplexMatrix(int rows, int cols);  // zero-filled

  static ComplexMatrix zero(int rows, int cols);
  static ComplexMatrix identity(int n);
  // Row-major nested-list constructor, used heavily by tests.
  static ComplexMatrix fromRows(
      std::initializer_list<std::initializer_list<Complex>> rows);
  static ComplexMatrix fromRows(
      const std::vector<std::vector<Complex>>& rows);
  // Column vector |v> from amplitudes.
  static ComplexMatrix columnVector(const std::vector<Complex>& amps);

  int rows() const { return static_cast<int>(m_.rows()); }
  int cols() const { return static_cast<int>(m_.cols()); }

  Complex operator()(int r, int c) const { return m_(r, c); }
  Complex& operator()(int r, int c) { return m_(r, c); }

  const Eigen::MatrixXcd& raw() const { return m_; }
  Eigen::MatrixXcd& raw() { return m_; }

  bool sameShape(const ComplexMatrix& other) const {
    return rows() == other.rows() && cols() == other.cols();
  }

 private:
  Eigen::MatrixXcd m_;
};

// Ascending eigenvalues of a Hermitian matrix together with a unitary matrix
// whose k-th column is the eigenvector for eigenvalues[k].
struct EigenResult {
  std::vector<double> eigenvalues;
  ComplexMatrix eigenvectors;
};

ComplexMatrix adjoint(const ComplexMatrix& a);
ComplexMatrix multiply(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix add(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix sub(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix scale(Complex factor, const ComplexMatrix& a);
Complex trace(const ComplexMatrix& a);
// Kronecker product; the left factor is the most significant index.
ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b);
// Block-diagonal embedding of square blocks.
ComplexMatrix directSumEmbed(const std::vector<ComplexMatrix>& blocks);

// Largest |entry|; 0 for empty matrices.
double maxAbs(const ComplexMatrix& a);
double maxAbsDiff(const ComplexMatrix& a, const ComplexMatrix& b);
double frobeniusNorm(const ComplexMatrix& a);

bool isHermitian(const ComplexMatrix& a, double tol = kHermTol);

// Eigendecomposition of a Hermitian matrix. The input must be Hermitian
// within hermTol; it is symmetrized as (A + A^dag)/2 before solving so the
// reported eigenvalues are exactly real.
EigenResult hermEigen(const ComplexMatrix& a, double hermTol = kHermTol);

// Hermitian and no eigenvalue below -tol.
bool isPSD(const ComplexMatrix& a, double tol = kPsdTol);

// Loewner order: m <= n iff n - m is PSD within tol. Both operands must be
// Hermitian; the order is partial, so !loewnerLeq(m,n) does not imply
// loewnerLeq(n,m).
bool loewnerLeq(const ComplexMatrix& m, const ComplexMatrix& n,
                double tol = kPsdTol);

inline ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  return multiply(a, b);
}
inline ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b) {
  return add(a, b);
}
inline ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) {
  return sub(a, b);
}
inline ComplexMatrix operator*(Complex factor, const ComplexMatrix& a) {
  return scale(factor, a);
}
inline ComplexMatrix operator*(double factor, const ComplexMatrix& a) {
  return scale(Complex(factor, 0.0), a);
}

}  // namespace qwp

#endif
