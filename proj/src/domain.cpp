#include "qwp/domain.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qwp {

namespace {

void requireTupleShape(const Signature& sig,
                       const std::vector<ComplexMatrix>& entries,
                       const char* what) {
  if (static_cast<int>(entries.size()) != sig.size()) {
    fail(ErrorCode::DimensionMismatch,
         std::string(what) + " entry count does not match signature");
  }
  for (int k = 0; k < sig.size(); ++k) {
    if (entries[k].rows() != sig.dim(k) || entries[k].cols() != sig.dim(k)) {
      fail(ErrorCode::DimensionMismatch,
           std::string(what) + " entry " + std::to_string(k) + " is not " +
               std::to_string(sig.dim(k)) + "-square");
    }
  }
}

}  // namespace

DensityState::DensityState(Signature s, std::vector<ComplexMatrix> e)
    : sig(std::move(s)), entries(std::move(e)) {
  requireTupleShape(sig, entries, "state");
}

PredicateTuple::PredicateTuple(Signature s, std::vector<ComplexMatrix> e)
    : sig(std::move(s)), entries(std::move(e)) {
  requireTupleShape(sig, entries, "predicate");
}

PredicateTuple PredicateTuple::identity(const Signature& sig) {
  std::vector<ComplexMatrix> entries;
  entries.reserve(sig.size());
  for (int k = 0; k < sig.size(); ++k) {
    entries.push_back(ComplexMatrix::identity(sig.dim(k)));
  }
  return PredicateTuple(sig, std::move(entries));
}

PredicateTuple PredicateTuple::zero(const Signature& sig) {
  std::vector<ComplexMatrix> entries;
  entries.reserve(sig.size());
  for (int k = 0; k < sig.size(); ++k) {
    entries.push_back(ComplexMatrix::zero(sig.dim(k), sig.dim(k)));
  }
  return PredicateTuple(sig, std::move(entries));
}

KrausChannel::KrausChannel(int in, int out, std::vector<ComplexMatrix> ops)
    : inDim(in), outDim(out), kraus(std::move(ops)) {
  if (inDim <= 0 || outDim <= 0) {
    fail(ErrorCode::DimensionMismatch, "channel dimensions must be positive");
  }
  for (const auto& e : kraus) {
    if (e.rows() != outDim || e.cols() != inDim) {
      fail(ErrorCode::DimensionMismatch,
           "Kraus operator must be " + std::to_string(outDim) + "x" +
               std::to_string(inDim));
    }
  }
}

KrausChannel KrausChannel::identity(int dim) {
  return KrausChannel(dim, dim, {ComplexMatrix::identity(dim)});
}

KrausChannel KrausChannel::zero(int inDim, int outDim) {
  return KrausChannel(inDim, outDim, {});
}

KrausChannel KrausChannel::fromUnitary(const ComplexMatrix& u) {
  if (u.rows() != u.cols()) {
    fail(ErrorCode::NotSquare, "unitary channel requires a square matrix");
  }
  return KrausChannel(u.cols(), u.rows(), {u});
}

Superoperator::Superoperator(Signature inSig, Signature outSig,
                             std::vector<std::vector<KrausChannel>> blocks)
    : inSig_(std::move(inSig)),
      outSig_(std::move(outSig)),
      blocks_(std::move(blocks)) {
  if (static_cast<int>(blocks_.size()) != outSig_.size()) {
    fail(ErrorCode::DimensionMismatch,
         "superoperator block rows must match output signature");
  }
  for (int j = 0; j < outSig_.size(); ++j) {
    if (static_cast<int>(blocks_[j].size()) != inSig_.size()) {
      fail(ErrorCode::DimensionMismatch,
           "superoperator block columns must match input signature");
    }
    for (int i = 0; i < inSig_.size(); ++i) {
      const KrausChannel& c = blocks_[j][i];
      if (c.inDim != inSig_.dim(i) || c.outDim != outSig_.dim(j)) {
        fail(ErrorCode::DimensionMismatch,
             "block (" + std::to_string(j) + "," + std::to_string(i) +
                 ") has wrong channel dimensions");
      }
    }
  }
}

Superoperator Superoperator::identity(const Signature& sig) {
  std::vector<std::vector<KrausChannel>> blocks;
  blocks.reserve(sig.size());
  for (int j = 0; j < sig.size(); ++j) {
    std::vector<KrausChannel> row;
    row.reserve(sig.size());
    for (int i = 0; i < sig.size(); ++i) {
      row.push_back(i == j ? KrausChannel::identity(sig.dim(j))
                           : KrausChannel::zero(sig.dim(i), sig.dim(j)));
    }
    blocks.push_back(std::move(row));
  }
  return Superoperator(sig, sig, std::move(blocks));
}

Superoperator Superoperator::zero(const Signature& inSig,
                                  const Signature& outSig) {
  std::vector<std::vector<KrausChannel>> blocks;
  blocks.reserve(outSig.size());
  for (int j = 0; j < outSig.size(); ++j) {
    std::vector<KrausChannel> row;
    row.reserve(inSig.size());
    for (int i = 0; i < inSig.size(); ++i) {
      row.push_back(KrausChannel::zero(inSig.dim(i), outSig.dim(j)));
    }
    blocks.push_back(std::move(row));
  }
  return Superoperator(inSig, outSig, std::move(blocks));
}

void ValidationReport::flag(std::string code, std::string message,
                            double witness) {
  pass = false;
  violations.push_back({std::move(code), std::move(message), witness});
}

double ValidationReport::maxWitness() const {
  double m = 0.0;
  for (const auto& v : violations) m = std::max(m, std::abs(v.witness));
  return m;
}

ValidationReport validateState(const DensityState& s, double tol) {
  ValidationReport report;
  double totalTrace = 0.0;
  for (int k = 0; k < s.sig.size(); ++k) {
    const ComplexMatrix& m = s.entries[k];
    if (!isHermitian(m)) {
      report.flag("not_hermitian",
                  "state entry " + std::to_string(k) + " is not Hermitian",
                  maxAbsDiff(m, adjoint(m)));
      continue;
    }
    EigenResult eig = hermEigen(m);
    if (eig.eigenvalues.front() < -tol) {
      report.flag("not_psd",
                  "state entry " + std::to_string(k) +
                      " has a negative eigenvalue",
                  eig.eigenvalues.front());
    }
    totalTrace += trace(m).real();
  }
  if (totalTrace > 1.0 + kTraceTol) {
    report.flag("trace_exceeds_one", "total trace exceeds 1", totalTrace);
  }
  if (totalTrace < -kTraceTol) {
    report.flag("negative_trace", "total trace is negative", totalTrace);
  }
  return report;
}

ValidationReport validatePredicateEntry(const ComplexMatrix& m, double tol) {
  ValidationReport report;
  if (m.rows() != m.cols()) {
    report.flag("not_square", "predicate entry is not square",
                static_cast<double>(m.rows() - m.cols()));
    return report;
  }
  if (!isHermitian(m)) {
    report.flag("not_hermitian", "predicate entry is not Hermitian",
                maxAbsDiff(m, adjoint(m)));
    return report;
  }
  EigenResult eig = hermEigen(m);
  if (eig.eigenvalues.front() < -tol) {
    report.flag("not_psd", "predicate entry has a negative eigenvalue",
                eig.eigenvalues.front());
  }
  // Eigenvalues in (1, 1+tol] are accepted as roundoff from healthy
  // transformer outputs; anything larger is a genuine violation.
  if (eig.eigenvalues.back() > 1.0 + tol) {
    report.flag("exceeds_identity", "predicate entry has eigenvalue above 1",
                eig.eigenvalues.back());
  }
  return report;
}

ValidationReport validatePredicate(const PredicateTuple& p, double tol) {
  ValidationReport report;
  for (int k = 0; k < p.sig.size(); ++k) {
    ValidationReport entry = validatePredicateEntry(p.entries[k], tol);
    for (auto& v : entry.violations) {
      report.flag(v.code, "entry " + std::to_string(k) + ": " + v.message,
                  v.witness);
    }
  }
  return report;
}

ValidationReport validateChannel(const KrausChannel& c, double tol) {
  ValidationReport report;
  ComplexMatrix sum = ComplexMatrix::zero(c.inDim, c.inDim);
  for (const auto& e : c.kraus) {
    sum = add(sum, multiply(adjoint(e), e));
  }
  EigenResult eig = hermEigen(sum);
  if (eig.eigenvalues.back() > 1.0 + tol) {
    report.flag("trace_increasing",
                "sum of E^dag E has eigenvalue above 1 (trace increasing)",
                eig.eigenvalues.back());
  }
  return report;
}

ValidationReport validateSuper(const Superoperator& f, double tol) {
  ValidationReport report;
  for (int i = 0; i < f.inSig().size(); ++i) {
    ComplexMatrix sum = ComplexMatrix::zero(f.inSig().dim(i), f.inSig().dim(i));
    for (int j = 0; j < f.outSig().size(); ++j) {
      for (const auto& e : f.block(j, i).kraus) {
        sum = add(sum, multiply(adjoint(e), e));
      }
    }
    EigenResult eig = hermEigen(sum);
    if (eig.eigenvalues.back() > 1.0 + tol) {
      report.flag("trace_increasing",
                  "input branch " + std::to_string(i) +
                      " is trace increasing",
                  eig.eigenvalues.back());
    }
  }
  return report;
}

ComplexMatrix applyChannel(const KrausChannel& c, const ComplexMatrix& rho) {
  if (rho.rows() != c.inDim || rho.cols() != c.inDim) {
    fail(ErrorCode::DimensionMismatch,
         "channel input must be " + std::to_string(c.inDim) + "-square");
  }
  ComplexMatrix out = ComplexMatrix::zero(c.outDim, c.outDim);
  for (const auto& e : c.kraus) {
    out = add(out, multiply(multiply(e, rho), adjoint(e)));
  }
  return out;
}

DensityState applySuper(const Superoperator& f, const DensityState& s) {
  if (s.sig != f.inSig()) {
    fail(ErrorCode::SignatureMismatch,
         "state signature " + s.sig.describe() +
             " does not match superoperator input " + f.inSig().describe());
  }
  std::vector<ComplexMatrix> out;
  out.reserve(f.outSig().size());
  for (int j = 0; j < f.outSig().size(); ++j) {
    ComplexMatrix acc = ComplexMatrix::zero(f.outSig().dim(j), f.outSig().dim(j));
    for (int i = 0; i < f.inSig().size(); ++i) {
      acc = add(acc, applyChannel(f.block(j, i), s.entries[i]));
    }
    out.push_back(std::move(acc));
  }
  return DensityState(f.outSig(), std::move(out));
}

double expectation(const DensityState& s, const PredicateTuple& p) {
  if (s.sig != p.sig) {
    fail(ErrorCode::SignatureMismatch,
         "state signature " + s.sig.describe() +
             " does not match predicate signature " + p.sig.describe());
  }
  double total = 0.0;
  for (int k = 0; k < s.sig.size(); ++k) {
    total += trace(multiply(p.entries[k], s.entries[k])).real();
  }
  return total;
}

bool satisfies(const DensityState& s, const PredicateTuple& p, double r) {
  if (!(r >= 0.0 && r <= 1.0)) {
    fail(ErrorCode::InvalidThreshold,
         "threshold must lie in [0, 1], got " + std::to_string(r));
  }
  return expectation(s, p) >= r - 1e-9;
}

ComplexMatrix choiMatrix(const KrausChannel& c) {
  const int dim = c.inDim * c.outDim;
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& e : c.kraus) {
    // vec(E)[a*outDim + r] = E(r, a); the Choi matrix is sum vec(E) vec(E)^dag.
    Eigen::VectorXcd v(dim);
    for (int a = 0; a < c.inDim; ++a) {
      for (int r = 0; r < c.outDim; ++r) {
        v(a * c.outDim + r) = e(r, a);
      }
    }
    out.noalias() += v * v.adjoint();
  }
  return ComplexMatrix(std::move(out));
}

KrausChannel compressChannel(const KrausChannel& c) {
  if (static_cast<int>(c.kraus.size()) <= c.inDim * c.outDim) return c;
  ComplexMatrix choi = choiMatrix(c);
  EigenResult eig = hermEigen(choi, 1e-8);
  const double cutoff =
      1e-15 * std::max(1.0, eig.eigenvalues.empty() ? 0.0
                                                    : eig.eigenvalues.back());
  std::vector<ComplexMatrix> ops;
  for (int k = 0; k < static_cast<int>(eig.eigenvalues.size()); ++k) {
    const double lambda = eig.eigenvalues[k];
    if (lambda <= cutoff) continue;
    const double scale = std::sqrt(lambda);
    ComplexMatrix e(c.outDim, c.inDim);
    for (int a = 0; a < c.inDim; ++a) {
      for (int r = 0; r < c.outDim; ++r) {
        e(r, a) = scale * eig.eigenvectors(a * c.outDim + r, k);
      }
    }
    ops.push_back(std::move(e));
  }
  return KrausChannel(c.inDim, c.outDim, std::move(ops));
}

double superChoiDistance(const Superoperator& f, const Superoperator& g) {
  if (f.inSig() != g.inSig() || f.outSig() != g.outSig()) {
    fail(ErrorCode::SignatureMismatch,
         "superoperator comparison requires equal signatures");
  }
  double dist = 0.0;
  for (int j = 0; j < f.outSig().size(); ++j) {
    for (int i = 0; i < f.inSig().size(); ++i) {
      dist = std::max(dist, maxAbsDiff(choiMatrix(f.block(j, i)),
                                       choiMatrix(g.block(j, i))));
    }
  }
  return dist;
}

double superChoiMagnitude(const Superoperator& f) {
  double mag = 0.0;
  for (int j = 0; j < f.outSig().size(); ++j) {
    for (int i = 0; i < f.inSig().size(); ++i) {
      mag = std::max(mag, maxAbs(choiMatrix(f.block(j, i))));
    }
  }
  return mag;
}

}  // namespace qwp
