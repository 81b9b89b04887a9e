#ifndef QWP_RANDOM_GEN_HPP
#define QWP_RANDOM_GEN_HPP

#include <cstdint>
#include <random>

#include "qwp/domain.hpp"

namespace qwp {

// Deterministic random source. Uniform doubles are drawn from the top 53 bits
// of mt19937_64 output and Gaussians via Box-Muller, so the stream depends
// only on the seed, not on library internals.
class RandomGen {
 public:
  explicit RandomGen(std::uint64_t seed) : eng_(seed) {}

  double uniform();                      // [0, 1)
  double gaussian();                     // standard normal
  Complex complexGaussian();             // independent N(0,1) parts
  int uniformInt(int lo, int hi);        // inclusive bounds

  ComplexMatrix gaussianMatrix(int rows, int cols);
  ComplexMatrix randomUnitary(int dim);
  ComplexMatrix randomPureKet(int dim);  // normalized column vector

  // Random PSD entry tuple with total trace <= 1 (== 1 when normalized).
  DensityState randomState(const Signature& sig, bool normalized = false);
  // Random tuple of PSD entries with max eigenvalue <= 1.
  PredicateTuple randomPredicate(const Signature& sig);
  // Random channel with numKraus operators; trace preserving on request,
  // otherwise trace-nonincreasing with random slack.
  KrausChannel randomChannel(int inDim, int outDim, int numKraus,
                             bool tracePreserving = false);
  // Random block superoperator, trace-nonincreasing per input branch.
  Superoperator randomSuper(const Signature& inSig, const Signature& outSig,
                            int maxKrausPerBlock,
                            bool tracePreserving = false);

 private:
  std::mt19937_64 eng_;
  bool hasSpare_ = false;
  double spare_ = 0.0;
};

}  // namespace qwp

#endif
