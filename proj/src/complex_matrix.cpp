#include "qwp/complex_matrix.hpp"

#include <cmath>
#include <sstream>
#include <string>

namespace qwp {

const char* errorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "dimension_mismatch";
    case ErrorCode::NotSquare: return "not_square";
    case ErrorCode::NotHermitian: return "not_hermitian";
    case ErrorCode::NonFinite: return "non_finite";
    case ErrorCode::SignatureMismatch: return "signature_mismatch";
    case ErrorCode::InvalidPredicate: return "invalid_predicate";
    case ErrorCode::InvalidThreshold: return "invalid_threshold";
    case ErrorCode::NonConvergent: return "non_convergent";
    case ErrorCode::NonMonotone: return "non_monotone";
    case ErrorCode::NotUnitary: return "not_unitary";
    case ErrorCode::NotNormalized: return "not_normalized";
    case ErrorCode::SyntaxError: return "syntax_error";
    case ErrorCode::ScopeError: return "scope_error";
    case ErrorCode::TypeError: return "type_error";
    case ErrorCode::ElaborationError: return "elaboration_error";
    case ErrorCode::OutOfRange: return "out_of_range";
    case ErrorCode::IoError: return "io_error";
    case ErrorCode::FormatError: return "format_error";
    case ErrorCode::Internal: return "internal";
  }
  return "unknown";
}

namespace {

void requireFinite(const Eigen::MatrixXcd& m) {
  if (!m.allFinite()) {
    fail(ErrorCode::NonFinite, "matrix contains NaN or infinite entries");
  }
}

void requirePositiveDims(int rows, int cols) {
  if (rows <= 0 || cols <= 0) {
    fail(ErrorCode::DimensionMismatch,
         "matrix dimensions must be positive, got " + std::to_string(rows) +
             "x" + std::to_string(cols));
  }
}

}  // namespace

ComplexMatrix::ComplexMatrix(Eigen::MatrixXcd m) : m_(std::move(m)) {
  requireFinite(m_);
}

ComplexMatrix::ComplexMatrix(int rows, int cols) {
  requirePositiveDims(rows, cols);
  m_ = Eigen::MatrixXcd::Zero(rows, cols);
}

ComplexMatrix ComplexMatrix::zero(int rows, int cols) {
  return ComplexMatrix(rows, cols);
}

ComplexMatrix ComplexMatrix::identity(int n) {
  requirePositiveDims(n, n);
  return ComplexMatrix(Eigen::MatrixXcd::Identity(n, n));
}

ComplexMatrix ComplexMatrix::fromRows(
    std::initializer_list<std::initializer_list<Complex>> rows) {
  std::vector<std::vector<Complex>> copied;
  copied.reserve(rows.size());
  for (const auto& r : rows) copied.emplace_back(r);
  return fromRows(copied);
}

ComplexMatrix ComplexMatrix::fromRows(
    const std::vector<std::vector<Complex>>& rows) {
  if (rows.empty() || rows.front().empty()) {
    fail(ErrorCode::DimensionMismatch, "matrix literal must be non-empty");
  }
  const int nr = static_cast<int>(rows.size());
  const int nc = static_cast<int>(rows.front().size());
  Eigen::MatrixXcd m(nr, nc);
  for (int r = 0; r < nr; ++r) {
    if (static_cast<int>(rows[r].size()) != nc) {
      fail(ErrorCode::DimensionMismatch, "ragged matrix literal");
    }
    for (int c = 0; c < nc; ++c) m(r, c) = rows[r][c];
  }
  requireFinite(m);
  return ComplexMatrix(std::move(m));
}

ComplexMatrix ComplexMatrix::columnVector(const std::vector<Complex>& amps) {
  if (amps.empty()) {
    fail(ErrorCode::DimensionMismatch, "vector literal must be non-empty");
  }
  Eigen::MatrixXcd m(static_cast<int>(amps.size()), 1);
  for (int i = 0; i < static_cast<int>(amps.size()); ++i) m(i, 0) = amps[i];
  requireFinite(m);
  return ComplexMatrix(std::move(m));
}

ComplexMatrix adjoint(const ComplexMatrix& a) {
  return ComplexMatrix(a.raw().adjoint().eval());
}

ComplexMatrix multiply(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) {
    fail(ErrorCode::DimensionMismatch,
         "cannot multiply " + std::to_string(a.rows()) + "x" +
             std::to_string(a.cols()) + " by " + std::to_string(b.rows()) +
             "x" + std::to_string(b.cols()));
  }
  return ComplexMatrix((a.raw() * b.raw()).eval());
}

ComplexMatrix add(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (!a.sameShape(b)) {
    fail(ErrorCode::DimensionMismatch, "cannot add matrices of unequal shape");
  }
  return ComplexMatrix((a.raw() + b.raw()).eval());
}

ComplexMatrix sub(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (!a.sameShape(b)) {
    fail(ErrorCode::DimensionMismatch,
         "cannot subtract matrices of unequal shape");
  }
  return ComplexMatrix((a.raw() - b.raw()).eval());
}

ComplexMatrix scale(Complex factor, const ComplexMatrix& a) {
  if (!std::isfinite(factor.real()) || !std::isfinite(factor.imag())) {
    fail(ErrorCode::NonFinite, "scale factor must be finite");
  }
  return ComplexMatrix((factor * a.raw()).eval());
}

Complex trace(const ComplexMatrix& a) {
  if (a.rows() != a.cols()) {
    fail(ErrorCode::NotSquare, "trace requires a square matrix");
  }
  return a.raw().trace();
}

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
  const int ar = a.rows(), ac = a.cols(), br = b.rows(), bc = b.cols();
  Eigen::MatrixXcd out(ar * br, ac * bc);
  for (int i = 0; i < ar; ++i) {
    for (int j = 0; j < ac; ++j) {
      out.block(i * br, j * bc, br, bc) = a(i, j) * b.raw();
    }
  }
  return ComplexMatrix(std::move(out));
}

ComplexMatrix directSumEmbed(const std::vector<ComplexMatrix>& blocks) {
  if (blocks.empty()) {
    fail(ErrorCode::DimensionMismatch, "direct sum of zero blocks");
  }
  int total = 0;
  for (const auto& b : blocks) {
    if (b.rows() != b.cols()) {
      fail(ErrorCode::NotSquare, "direct sum blocks must be square");
    }
    total += b.rows();
  }
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(total, total);
  int offset = 0;
  for (const auto& b : blocks) {
    out.block(offset, offset, b.rows(), b.rows()) = b.raw();
    offset += b.rows();
  }
  return ComplexMatrix(std::move(out));
}

double maxAbs(const ComplexMatrix& a) {
  if (a.rows() == 0 || a.cols() == 0) return 0.0;
  return a.raw().cwiseAbs().maxCoeff();
}

double maxAbsDiff(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (!a.sameShape(b)) {
    fail(ErrorCode::DimensionMismatch,
         "cannot compare matrices of unequal shape");
  }
  return (a.raw() - b.raw()).cwiseAbs().maxCoeff();
}

double frobeniusNorm(const ComplexMatrix& a) { return a.raw().norm(); }

bool isHermitian(const ComplexMatrix& a, double tol) {
  if (a.rows() != a.cols()) return false;
  return (a.raw() - a.raw().adjoint()).cwiseAbs().maxCoeff() <= tol;
}

EigenResult hermEigen(const ComplexMatrix& a, double hermTol) {
  if (a.rows() != a.cols()) {
    fail(ErrorCode::NotSquare, "eigendecomposition requires a square matrix");
  }
  if (!isHermitian(a, hermTol)) {
    std::ostringstream msg;
    msg << "matrix is not Hermitian within tolerance " << hermTol;
    fail(ErrorCode::NotHermitian, msg.str());
  }
  // Symmetrize so roundoff in the input cannot leak imaginary eigenvalue
  // parts through the solver.
  Eigen::MatrixXcd sym = 0.5 * (a.raw() + a.raw().adjoint().eval());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(sym);
  if (solver.info() != Eigen::Success) {
    fail(ErrorCode::Internal, "eigendecomposition failed to converge");
  }
  EigenResult result;
  result.eigenvalues.assign(solver.eigenvalues().data(),
                            solver.eigenvalues().data() + a.rows());
  result.eigenvectors = ComplexMatrix(solver.eigenvectors().eval());
  return result;
}

bool isPSD(const ComplexMatrix& a, double tol) {
  EigenResult eig = hermEigen(a);
  return eig.eigenvalues.empty() || eig.eigenvalues.front() >= -tol;
}

bool loewnerLeq(const ComplexMatrix& m, const ComplexMatrix& n, double tol) {
  if (!m.sameShape(n) || m.rows() != m.cols()) {
    fail(ErrorCode::DimensionMismatch,
         "order comparison requires equal square shapes");
  }
  if (!isHermitian(m) || !isHermitian(n)) {
    fail(ErrorCode::NotHermitian, "order comparison requires Hermitian operands");
  }
  return isPSD(sub(n, m), tol);
}

}  // namespace qwp
