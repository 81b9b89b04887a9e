#include "qwp/random_gen.hpp"

#include <cmath>

namespace qwp {

double RandomGen::uniform() {
  return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
}

double RandomGen::gaussian() {
  if (hasSpare_) {
    hasSpare_ = false;
    return spare_;
  }
  double u1 = uniform();
  double u2 = uniform();
  if (u1 <= 0.0) u1 = 0x1.0p-53;
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * M_PI * u2;
  spare_ = radius * std::sin(angle);
  hasSpare_ = true;
  return radius * std::cos(angle);
}

Complex RandomGen::complexGaussian() {
  const double re = gaussian();
  const double im = gaussian();
  return Complex(re, im);
}

int RandomGen::uniformInt(int lo, int hi) {
  const int span = hi - lo + 1;
  return lo + static_cast<int>(uniform() * span) % span;
}

ComplexMatrix RandomGen::gaussianMatrix(int rows, int cols) {
  ComplexMatrix m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) m(r, c) = complexGaussian();
  }
  return m;
}

ComplexMatrix RandomGen::randomUnitary(int dim) {
  Eigen::MatrixXcd g = gaussianMatrix(dim, dim).raw();
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  Eigen::MatrixXcd q = qr.householderQ();
  // Fix the phase of each column so the distribution does not depend on the
  // QR implementation's sign conventions.
  Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < dim; ++i) {
    Complex d = r(i, i);
    if (std::abs(d) > 0.0) q.col(i) *= d / std::abs(d);
  }
  return ComplexMatrix(std::move(q));
}

ComplexMatrix RandomGen::randomPureKet(int dim) {
  ComplexMatrix v = gaussianMatrix(dim, 1);
  double norm = v.raw().norm();
  while (norm == 0.0) {
    v = gaussianMatrix(dim, 1);
    norm = v.raw().norm();
  }
  return ComplexMatrix((v.raw() / norm).eval());
}

DensityState RandomGen::randomState(const Signature& sig, bool normalized) {
  std::vector<ComplexMatrix> entries;
  entries.reserve(sig.size());
  double total = 0.0;
  for (int k = 0; k < sig.size(); ++k) {
    ComplexMatrix g = gaussianMatrix(sig.dim(k), sig.dim(k));
    ComplexMatrix w = multiply(g, adjoint(g));
    total += trace(w).real();
    entries.push_back(std::move(w));
  }
  double target = normalized ? 1.0 : 0.05 + 0.95 * uniform();
  const double factor = total > 0.0 ? target / total : 0.0;
  for (auto& e : entries) e = scale(Complex(factor, 0.0), e);
  return DensityState(sig, std::move(entries));
}

PredicateTuple RandomGen::randomPredicate(const Signature& sig) {
  std::vector<ComplexMatrix> entries;
  entries.reserve(sig.size());
  for (int k = 0; k < sig.size(); ++k) {
    ComplexMatrix g = gaussianMatrix(sig.dim(k), sig.dim(k));
    ComplexMatrix w = multiply(g, adjoint(g));
    EigenResult eig = hermEigen(w);
    const double top = eig.eigenvalues.back();
    const double cap = uniform();
    entries.push_back(scale(Complex(top > 0.0 ? cap / top : 0.0, 0.0), w));
  }
  return PredicateTuple(sig, std::move(entries));
}

KrausChannel RandomGen::randomChannel(int inDim, int outDim, int numKraus,
                                      bool tracePreserving) {
  // A trace-preserving channel needs sum E^dag E = I, which requires the
  // stacked operators to have full column rank: at least ceil(in/out) terms.
  int count = numKraus;
  if (tracePreserving) {
    count = std::max(count, (inDim + outDim - 1) / outDim);
  }
  std::vector<ComplexMatrix> ops;
  ops.reserve(count);
  for (int k = 0; k < count; ++k) {
    ops.push_back(gaussianMatrix(outDim, inDim));
  }
  ComplexMatrix sum = ComplexMatrix::zero(inDim, inDim);
  for (const auto& e : ops) sum = add(sum, multiply(adjoint(e), e));
  if (tracePreserving) {
    // Normalize with S^{-1/2} so sum E^dag E = I exactly (up to roundoff).
    EigenResult eig = hermEigen(sum);
    Eigen::MatrixXcd inv = Eigen::MatrixXcd::Zero(inDim, inDim);
    for (int i = 0; i < inDim; ++i) {
      const double lambda = std::max(eig.eigenvalues[i], 1e-300);
      inv += (1.0 / std::sqrt(lambda)) *
             eig.eigenvectors.raw().col(i) * eig.eigenvectors.raw().col(i).adjoint();
    }
    for (auto& e : ops) e = ComplexMatrix((e.raw() * inv).eval());
  } else {
    EigenResult eig = hermEigen(sum);
    const double top = eig.eigenvalues.back();
    const double slack = 0.1 + 0.9 * uniform();
    const double factor = top > 0.0 ? std::sqrt(slack / top) : 0.0;
    for (auto& e : ops) e = scale(Complex(factor, 0.0), e);
  }
  return KrausChannel(inDim, outDim, std::move(ops));
}

Superoperator RandomGen::randomSuper(const Signature& inSig,
                                     const Signature& outSig,
                                     int maxKrausPerBlock,
                                     bool tracePreserving) {
  std::vector<std::vector<KrausChannel>> blocks(
      outSig.size(), std::vector<KrausChannel>());
  for (int j = 0; j < outSig.size(); ++j) {
    blocks[j].reserve(inSig.size());
    for (int i = 0; i < inSig.size(); ++i) {
      blocks[j].push_back(KrausChannel::zero(inSig.dim(i), outSig.dim(j)));
    }
  }
  // Populate column by column so the trace bound can be enforced per input
  // branch, as the validity invariant requires.
  for (int i = 0; i < inSig.size(); ++i) {
    std::vector<std::vector<ComplexMatrix>> colOps(outSig.size());
    ComplexMatrix sum = ComplexMatrix::zero(inSig.dim(i), inSig.dim(i));
    bool any = false;
    long coverage = 0;  // total output rows; must reach inDim for S^{-1/2}
    for (int j = 0; j < outSig.size(); ++j) {
      int count = uniformInt(0, maxKrausPerBlock);
      if (outSig.size() == 1 && count == 0) count = 1;
      for (int k = 0; k < count; ++k) {
        ComplexMatrix g = gaussianMatrix(outSig.dim(j), inSig.dim(i));
        sum = add(sum, multiply(adjoint(g), g));
        colOps[j].push_back(std::move(g));
        coverage += outSig.dim(j);
        any = true;
      }
    }
    for (int j = 0; tracePreserving && coverage < inSig.dim(i);
         j = (j + 1) % outSig.size()) {
      ComplexMatrix g = gaussianMatrix(outSig.dim(j), inSig.dim(i));
      sum = add(sum, multiply(adjoint(g), g));
      colOps[j].push_back(std::move(g));
      coverage += outSig.dim(j);
      any = true;
    }
    if (!any) continue;  // zero column: valid, nothing reaches the output
    double factorScale;
    Eigen::MatrixXcd inv;
    EigenResult eig = hermEigen(sum);
    if (tracePreserving) {
      inv = Eigen::MatrixXcd::Zero(inSig.dim(i), inSig.dim(i));
      for (int k = 0; k < inSig.dim(i); ++k) {
        const double lambda = std::max(eig.eigenvalues[k], 1e-300);
        inv += (1.0 / std::sqrt(lambda)) * eig.eigenvectors.raw().col(k) *
               eig.eigenvectors.raw().col(k).adjoint();
      }
      factorScale = 0.0;
    } else {
      const double top = eig.eigenvalues.back();
      const double slack = 0.1 + 0.9 * uniform();
      factorScale = top > 0.0 ? std::sqrt(slack / top) : 0.0;
    }
    for (int j = 0; j < outSig.size(); ++j) {
      std::vector<ComplexMatrix> scaled;
      scaled.reserve(colOps[j].size());
      for (auto& g : colOps[j]) {
        if (tracePreserving) {
          scaled.push_back(ComplexMatrix((g.raw() * inv).eval()));
        } else {
          scaled.push_back(scale(Complex(factorScale, 0.0), g));
        }
      }
      blocks[j][i] = KrausChannel(inSig.dim(i), outSig.dim(j), std::move(scaled));
    }
  }
  return Superoperator(inSig, outSig, std::move(blocks));
}

}  // namespace qwp
