#include "qwp/wp.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "qwp/random_gen.hpp"

namespace qwp {

namespace {

ComplexMatrix wpChannelUnchecked(const KrausChannel& c,
                                 const ComplexMatrix& n) {
  ComplexMatrix out = ComplexMatrix::zero(c.inDim, c.inDim);
  for (const auto& e : c.kraus) {
    out = add(out, multiply(multiply(adjoint(e), n), e));
  }
  return out;
}

// Choi matrix of the difference beta - alpha of one block pair, in adjoint
// form (operators conjugate as E^dag M E). Used for the transformer order.
ComplexMatrix adjointChoiDiff(const KrausChannel& alpha,
                              const KrausChannel& beta) {
  auto adjointChannel = [](const KrausChannel& c) {
    std::vector<ComplexMatrix> ops;
    ops.reserve(c.kraus.size());
    for (const auto& e : c.kraus) ops.push_back(adjoint(e));
    return KrausChannel(c.outDim, c.inDim, std::move(ops));
  };
  return sub(choiMatrix(adjointChannel(beta)),
             choiMatrix(adjointChannel(alpha)));
}

Superoperator subSuper(const Superoperator& full, const std::vector<int>& rows,
                       const std::vector<int>& cols) {
  std::vector<int> inDims, outDims;
  for (int c : cols) inDims.push_back(full.inSig().dim(c));
  for (int r : rows) outDims.push_back(full.outSig().dim(r));
  std::vector<std::vector<KrausChannel>> blocks;
  blocks.reserve(rows.size());
  for (int r : rows) {
    std::vector<KrausChannel> row;
    row.reserve(cols.size());
    for (int c : cols) row.push_back(full.block(r, c));
    blocks.push_back(std::move(row));
  }
  return Superoperator(Signature(inDims), Signature(outDims),
                       std::move(blocks));
}

Superoperator compressSuper(const Superoperator& f) {
  std::vector<std::vector<KrausChannel>> blocks;
  blocks.reserve(f.outSig().size());
  for (int j = 0; j < f.outSig().size(); ++j) {
    std::vector<KrausChannel> row;
    row.reserve(f.inSig().size());
    for (int i = 0; i < f.inSig().size(); ++i) {
      row.push_back(compressChannel(f.block(j, i)));
    }
    blocks.push_back(std::move(row));
  }
  return Superoperator(f.inSig(), f.outSig(), std::move(blocks));
}

void requirePartition(const std::vector<int>& a, const std::vector<int>& b,
                      int size, const char* what) {
  std::vector<bool> seen(size, false);
  auto mark = [&](const std::vector<int>& idx) {
    for (int i : idx) {
      if (i < 0 || i >= size || seen[i]) {
        fail(ErrorCode::SignatureMismatch,
             std::string("loop split does not partition the ") + what +
                 " signature");
      }
      seen[i] = true;
    }
  };
  mark(a);
  mark(b);
  for (bool s : seen) {
    if (!s) {
      fail(ErrorCode::SignatureMismatch,
           std::string("loop split does not cover the ") + what +
               " signature");
    }
  }
}

}  // namespace

ComplexMatrix wpChannel(const KrausChannel& c, const ComplexMatrix& n) {
  if (n.rows() != c.outDim || n.cols() != c.outDim) {
    fail(ErrorCode::DimensionMismatch,
         "postcondition must be " + std::to_string(c.outDim) + "-square");
  }
  if (!isHermitian(n)) {
    fail(ErrorCode::InvalidPredicate, "postcondition must be Hermitian");
  }
  return wpChannelUnchecked(c, n);
}

PredicateTuple wpSuper(const Superoperator& f, const PredicateTuple& post) {
  if (post.sig != f.outSig()) {
    fail(ErrorCode::SignatureMismatch,
         "postcondition signature " + post.sig.describe() +
             " does not match superoperator output " + f.outSig().describe());
  }
  for (int j = 0; j < post.sig.size(); ++j) {
    if (!isHermitian(post.entries[j])) {
      fail(ErrorCode::InvalidPredicate,
           "postcondition entry " + std::to_string(j) + " is not Hermitian");
    }
  }
  std::vector<ComplexMatrix> pre;
  pre.reserve(f.inSig().size());
  for (int i = 0; i < f.inSig().size(); ++i) {
    ComplexMatrix acc = ComplexMatrix::zero(f.inSig().dim(i), f.inSig().dim(i));
    for (int j = 0; j < f.outSig().size(); ++j) {
      acc = add(acc, wpChannelUnchecked(f.block(j, i), post.entries[j]));
    }
    pre.push_back(std::move(acc));
  }
  return PredicateTuple(f.inSig(), std::move(pre));
}

bool isPrecondition(const PredicateTuple& m, const Superoperator& f,
                    const PredicateTuple& post, double tol) {
  if (m.sig != f.inSig()) {
    fail(ErrorCode::SignatureMismatch,
         "candidate precondition signature does not match superoperator input");
  }
  PredicateTuple weakest = wpSuper(f, post);
  for (int k = 0; k < m.sig.size(); ++k) {
    if (!loewnerLeq(m.entries[k], weakest.entries[k], tol)) return false;
  }
  return true;
}

bool transformerLeq(const PredicateTransformer& alpha,
                    const PredicateTransformer& beta, double tol) {
  if (alpha.preSig() != beta.preSig() || alpha.postSig() != beta.postSig()) {
    fail(ErrorCode::SignatureMismatch,
         "transformer comparison requires equal signatures");
  }
  const Superoperator& a = alpha.forward();
  const Superoperator& b = beta.forward();
  for (int j = 0; j < a.outSig().size(); ++j) {
    for (int i = 0; i < a.inSig().size(); ++i) {
      ComplexMatrix diff = adjointChoiDiff(a.block(j, i), b.block(j, i));
      if (!isPSD(diff, tol)) return false;
    }
  }
  return true;
}

Superoperator seqCompose(const Superoperator& f, const Superoperator& g) {
  if (f.outSig() != g.inSig()) {
    fail(ErrorCode::SignatureMismatch,
         "sequential composition requires matching middle signature, got " +
             f.outSig().describe() + " then " + g.inSig().describe());
  }
  std::vector<std::vector<KrausChannel>> blocks;
  blocks.reserve(g.outSig().size());
  for (int k = 0; k < g.outSig().size(); ++k) {
    std::vector<KrausChannel> row;
    row.reserve(f.inSig().size());
    for (int i = 0; i < f.inSig().size(); ++i) {
      std::vector<ComplexMatrix> ops;
      for (int j = 0; j < f.outSig().size(); ++j) {
        const KrausChannel& first = f.block(j, i);
        const KrausChannel& second = g.block(k, j);
        for (const auto& b : second.kraus) {
          for (const auto& a : first.kraus) {
            ops.push_back(multiply(b, a));
          }
        }
      }
      row.push_back(
          KrausChannel(f.inSig().dim(i), g.outSig().dim(k), std::move(ops)));
    }
    blocks.push_back(std::move(row));
  }
  return Superoperator(f.inSig(), g.outSig(), std::move(blocks));
}

Superoperator coproduct(const Superoperator& f, const Superoperator& g) {
  Signature inSig = Signature::concat(f.inSig(), g.inSig());
  Signature outSig = Signature::concat(f.outSig(), g.outSig());
  const int fOut = f.outSig().size(), fIn = f.inSig().size();
  std::vector<std::vector<KrausChannel>> blocks;
  blocks.reserve(outSig.size());
  for (int j = 0; j < outSig.size(); ++j) {
    std::vector<KrausChannel> row;
    row.reserve(inSig.size());
    for (int i = 0; i < inSig.size(); ++i) {
      const bool jInF = j < fOut, iInF = i < fIn;
      if (jInF && iInF) {
        row.push_back(f.block(j, i));
      } else if (!jInF && !iInF) {
        row.push_back(g.block(j - fOut, i - fIn));
      } else {
        row.push_back(KrausChannel::zero(inSig.dim(i), outSig.dim(j)));
      }
    }
    blocks.push_back(std::move(row));
  }
  return Superoperator(std::move(inSig), std::move(outSig), std::move(blocks));
}

Superoperator addSuper(const Superoperator& f, const Superoperator& g) {
  if (f.inSig() != g.inSig() || f.outSig() != g.outSig()) {
    fail(ErrorCode::SignatureMismatch,
         "superoperator sum requires equal signatures");
  }
  std::vector<std::vector<KrausChannel>> blocks;
  blocks.reserve(f.outSig().size());
  for (int j = 0; j < f.outSig().size(); ++j) {
    std::vector<KrausChannel> row;
    row.reserve(f.inSig().size());
    for (int i = 0; i < f.inSig().size(); ++i) {
      std::vector<ComplexMatrix> ops = f.block(j, i).kraus;
      const auto& more = g.block(j, i).kraus;
      ops.insert(ops.end(), more.begin(), more.end());
      row.push_back(
          KrausChannel(f.inSig().dim(i), f.outSig().dim(j), std::move(ops)));
    }
    blocks.push_back(std::move(row));
  }
  return Superoperator(f.inSig(), f.outSig(), std::move(blocks));
}

Superoperator extendClassicalBit(const Superoperator& f) {
  return coproduct(f, f);
}

Superoperator extendQuantumBit(const Superoperator& f) {
  std::vector<int> inDims, outDims;
  for (int d : f.inSig().dims()) inDims.push_back(2 * d);
  for (int d : f.outSig().dims()) outDims.push_back(2 * d);
  ComplexMatrix id2 = ComplexMatrix::identity(2);
  std::vector<std::vector<KrausChannel>> blocks;
  blocks.reserve(f.outSig().size());
  for (int j = 0; j < f.outSig().size(); ++j) {
    std::vector<KrausChannel> row;
    row.reserve(f.inSig().size());
    for (int i = 0; i < f.inSig().size(); ++i) {
      std::vector<ComplexMatrix> ops;
      ops.reserve(f.block(j, i).kraus.size());
      for (const auto& e : f.block(j, i).kraus) {
        ops.push_back(tensor(id2, e));
      }
      row.push_back(KrausChannel(inDims[i], outDims[j], std::move(ops)));
    }
    blocks.push_back(std::move(row));
  }
  return Superoperator(Signature(inDims), Signature(outDims),
                       std::move(blocks));
}

LoopDecomposition::LoopDecomposition(Superoperator f, std::vector<int> inS,
                                     std::vector<int> inT, std::vector<int> outS,
                                     std::vector<int> outT)
    : full(std::move(f)),
      inSigma(std::move(inS)),
      inTau(std::move(inT)),
      outSigma(std::move(outS)),
      outTau(std::move(outT)) {
  requirePartition(inSigma, inTau, full.inSig().size(), "input");
  requirePartition(outSigma, outTau, full.outSig().size(), "output");
  if (inTau.size() != outTau.size()) {
    fail(ErrorCode::SignatureMismatch,
         "feedback wires must pair up between input and output");
  }
  for (size_t k = 0; k < inTau.size(); ++k) {
    if (full.inSig().dim(inTau[k]) != full.outSig().dim(outTau[k])) {
      fail(ErrorCode::SignatureMismatch,
           "feedback wire " + std::to_string(k) + " changes dimension");
    }
  }
}

LoopDecomposition LoopDecomposition::fromParts(const Superoperator& e11,
                                               const Superoperator& e12,
                                               const Superoperator& e21,
                                               const Superoperator& e22) {
  if (e11.inSig() != e12.inSig() || e21.inSig() != e22.inSig() ||
      e11.outSig() != e21.outSig() || e12.outSig() != e22.outSig() ||
      e22.inSig() != e22.outSig()) {
    fail(ErrorCode::SignatureMismatch,
         "loop components do not share consistent signatures");
  }
  const Signature& sigma = e11.inSig();
  const Signature& sigmaOut = e11.outSig();
  const Signature& tau = e22.inSig();
  Signature inSig = Signature::concat(sigma, tau);
  Signature outSig = Signature::concat(sigmaOut, tau);
  std::vector<std::vector<KrausChannel>> blocks;
  blocks.reserve(outSig.size());
  for (int j = 0; j < outSig.size(); ++j) {
    std::vector<KrausChannel> row;
    row.reserve(inSig.size());
    const bool jSigma = j < sigmaOut.size();
    for (int i = 0; i < inSig.size(); ++i) {
      const bool iSigma = i < sigma.size();
      if (jSigma && iSigma) {
        row.push_back(e11.block(j, i));
      } else if (jSigma && !iSigma) {
        row.push_back(e21.block(j, i - sigma.size()));
      } else if (!jSigma && iSigma) {
        row.push_back(e12.block(j - sigmaOut.size(), i));
      } else {
        row.push_back(e22.block(j - sigmaOut.size(), i - sigma.size()));
      }
    }
    blocks.push_back(std::move(row));
  }
  std::vector<int> inS, inT, outS, outT;
  for (int i = 0; i < sigma.size(); ++i) inS.push_back(i);
  for (int i = 0; i < tau.size(); ++i) inT.push_back(sigma.size() + i);
  for (int j = 0; j < sigmaOut.size(); ++j) outS.push_back(j);
  for (int j = 0; j < tau.size(); ++j) outT.push_back(sigmaOut.size() + j);
  return LoopDecomposition(
      Superoperator(std::move(inSig), std::move(outSig), std::move(blocks)),
      std::move(inS), std::move(inT), std::move(outS), std::move(outT));
}

Superoperator LoopDecomposition::e11() const {
  return subSuper(full, outSigma, inSigma);
}
Superoperator LoopDecomposition::e12() const {
  return subSuper(full, outTau, inSigma);
}
Superoperator LoopDecomposition::e21() const {
  return subSuper(full, outSigma, inTau);
}
Superoperator LoopDecomposition::e22() const {
  return subSuper(full, outTau, inTau);
}

Superoperator monoidalTrace(const LoopDecomposition& loop, double tol,
                            int maxIter) {
  if (tol <= 0.0) {
    fail(ErrorCode::OutOfRange, "truncation tolerance must be positive");
  }
  if (maxIter < 1) {
    fail(ErrorCode::OutOfRange, "iteration budget must be at least 1");
  }
  const Superoperator exit = loop.e11();
  const Superoperator enter = loop.e12();
  const Superoperator leave = loop.e21();
  const Superoperator repeat = loop.e22();
  Superoperator sum = exit;
  // feedback = E22^i o E12, advanced one feedback pass per term.
  Superoperator feedback = enter;
  for (int i = 0; i < maxIter; ++i) {
    Superoperator term = compressSuper(seqCompose(feedback, leave));
    const double increment = superChoiMagnitude(term);
    sum = compressSuper(addSuper(sum, term));
    if (increment <= tol) return sum;
    feedback = compressSuper(seqCompose(feedback, repeat));
  }
  fail(ErrorCode::NonConvergent,
       "loop did not converge within " + std::to_string(maxIter) +
           " feedback passes");
}

Superoperator monoidalTraceTruncated(const LoopDecomposition& loop,
                                     int terms) {
  if (terms < 0) {
    fail(ErrorCode::OutOfRange, "term count must be nonnegative");
  }
  Superoperator sum = loop.e11();
  Superoperator feedback = loop.e12();
  const Superoperator leave = loop.e21();
  const Superoperator repeat = loop.e22();
  for (int i = 0; i < terms; ++i) {
    sum = compressSuper(addSuper(sum, seqCompose(feedback, leave)));
    if (i + 1 < terms) feedback = compressSuper(seqCompose(feedback, repeat));
  }
  return sum;
}

Superoperator recursiveFixpoint(const RecursiveSpec& spec, double tol,
                                int maxIter) {
  if (tol <= 0.0) {
    fail(ErrorCode::OutOfRange, "convergence tolerance must be positive");
  }
  if (maxIter < 1) {
    fail(ErrorCode::OutOfRange, "iteration budget must be at least 1");
  }
  Superoperator current = Superoperator::zero(spec.holeInSig, spec.holeOutSig);
  for (int iter = 0; iter < maxIter; ++iter) {
    Superoperator next = spec.body(current);
    if (next.inSig() != spec.holeInSig || next.outSig() != spec.holeOutSig) {
      fail(ErrorCode::SignatureMismatch,
           "recursive body changed the hole signature");
    }
    next = compressSuper(next);
    // Kleene iterates must climb; a decrease means the body is not monotone.
    for (int j = 0; j < next.outSig().size(); ++j) {
      for (int i = 0; i < next.inSig().size(); ++i) {
        ComplexMatrix diff = sub(choiMatrix(next.block(j, i)),
                                 choiMatrix(current.block(j, i)));
        EigenResult eig = hermEigen(diff, 1e-8);
        const double floor = kPsdTol * (1.0 + maxAbs(diff));
        if (eig.eigenvalues.front() < -floor) {
          fail(ErrorCode::NonMonotone,
               "iterate decreased in transformer order by " +
                   std::to_string(-eig.eigenvalues.front()));
        }
      }
    }
    if (superChoiDistance(next, current) <= tol) return next;
    current = std::move(next);
  }
  fail(ErrorCode::NonConvergent,
       "recursion did not converge within " + std::to_string(maxIter) +
           " iterations");
}

DualityReport dualityCheck(const Superoperator& f, int trials,
                           std::uint64_t seed) {
  RandomGen rng(seed);
  DualityReport report;
  report.trials = trials;
  for (int t = 0; t < trials; ++t) {
    DensityState s = rng.randomState(f.inSig());
    PredicateTuple p = rng.randomPredicate(f.outSig());
    const double backward = expectation(s, wpSuper(f, p));
    const double forward = expectation(applySuper(f, s), p);
    report.maxResidual =
        std::max(report.maxResidual, std::abs(backward - forward));
  }
  report.pass = report.maxResidual <= 1e-9;
  return report;
}

bool stabilizerCheck(const ComplexMatrix& u, const ComplexMatrix& psi) {
  if (u.rows() != u.cols()) {
    fail(ErrorCode::NotSquare, "stabilizer candidate must be square");
  }
  if (maxAbsDiff(multiply(adjoint(u), u),
                 ComplexMatrix::identity(u.rows())) > 1e-9) {
    fail(ErrorCode::NotUnitary, "stabilizer candidate is not unitary");
  }
  if (psi.cols() != 1 || psi.rows() != u.rows()) {
    fail(ErrorCode::DimensionMismatch,
         "state must be a column vector matching the operator dimension");
  }
  const double norm = psi.raw().norm();
  if (std::abs(norm - 1.0) > 1e-9) {
    fail(ErrorCode::NotNormalized, "state vector is not normalized");
  }
  ComplexMatrix rho = multiply(psi, adjoint(psi));
  const Complex t = trace(multiply(u, rho));
  const bool byTrace = std::abs(t - Complex(1.0, 0.0)) <= 1e-9;
  const bool byResidual = (u.raw() * psi.raw() - psi.raw()).norm() <= 1e-6;
  if (byTrace != byResidual) {
    fail(ErrorCode::Internal,
         "trace and residual stabilizer criteria disagree");
  }
  return byTrace;
}

}  // namespace qwp
