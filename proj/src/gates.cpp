#include "qwp/gates.hpp"

#include <cmath>
#include <string>

namespace qwp::gates {

namespace {

void requireQubitCount(int numQubits) {
  if (numQubits < 1 || numQubits > 16) {
    fail(ErrorCode::OutOfRange,
         "qubit count out of range: " + std::to_string(numQubits));
  }
}

}  // namespace

ComplexMatrix pauliX() {
  return ComplexMatrix::fromRows({{0.0, 1.0}, {1.0, 0.0}});
}

ComplexMatrix pauliY() {
  return ComplexMatrix::fromRows(
      {{0.0, Complex(0.0, -1.0)}, {Complex(0.0, 1.0), 0.0}});
}

ComplexMatrix pauliZ() {
  return ComplexMatrix::fromRows({{1.0, 0.0}, {0.0, -1.0}});
}

ComplexMatrix hadamard() {
  const double s = std::sqrt(0.5);
  return ComplexMatrix::fromRows({{s, s}, {s, -s}});
}

ComplexMatrix cnot() {
  return ComplexMatrix::fromRows({{1.0, 0.0, 0.0, 0.0},
                                  {0.0, 1.0, 0.0, 0.0},
                                  {0.0, 0.0, 0.0, 1.0},
                                  {0.0, 0.0, 1.0, 0.0}});
}

ComplexMatrix basisProjector(int dim, int k) {
  if (k < 0 || k >= dim) {
    fail(ErrorCode::OutOfRange, "basis index out of range");
  }
  ComplexMatrix p(dim, dim);
  p(k, k) = 1.0;
  return p;
}

ComplexMatrix basisKet(int dim, int k) {
  if (k < 0 || k >= dim) {
    fail(ErrorCode::OutOfRange, "basis index out of range");
  }
  ComplexMatrix v(dim, 1);
  v(k, 0) = 1.0;
  return v;
}

ComplexMatrix inversionAboutMean(int numQubits) {
  requireQubitCount(numQubits);
  const int n = 1 << numQubits;
  const double offDiag = 2.0 / n;
  ComplexMatrix m(n, n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      m(r, c) = (r == c) ? offDiag - 1.0 : offDiag;
    }
  }
  return m;
}

ComplexMatrix phaseOracle(int numQubits, int marked) {
  requireQubitCount(numQubits);
  const int n = 1 << numQubits;
  if (marked < 0 || marked >= n) {
    fail(ErrorCode::OutOfRange,
         "marked state " + std::to_string(marked) + " exceeds dimension " +
             std::to_string(n));
  }
  ComplexMatrix m = ComplexMatrix::identity(n);
  m(marked, marked) = -1.0;
  return m;
}

ComplexMatrix groverOperator(int numQubits, int marked) {
  return multiply(inversionAboutMean(numQubits),
                  phaseOracle(numQubits, marked));
}

int groverIterationCount(int numQubits) {
  requireQubitCount(numQubits);
  const double n = static_cast<double>(1 << numQubits);
  const double theta = std::asin(2.0 * std::sqrt(n - 1.0) / n);
  return static_cast<int>(std::lround(std::acos(1.0 / std::sqrt(n)) / theta));
}

bool isUnitary(const ComplexMatrix& u, double tol) {
  if (u.rows() != u.cols()) return false;
  ComplexMatrix product = multiply(adjoint(u), u);
  return maxAbsDiff(product, ComplexMatrix::identity(u.rows())) <= tol;
}

}  // namespace qwp::gates
