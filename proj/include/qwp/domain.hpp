#ifndef QWP_DOMAIN_HPP
#define QWP_DOMAIN_HPP

#include <string>
#include <vector>

#include "qwp/complex_matrix.hpp"
#include "qwp/signature.hpp"

namespace qwp {

// Tuple-valued density operator: entry k is a dims[k]-square matrix carrying
// the unnormalized state of classical branch k. Constructors enforce shape;
// the semantic invariants (Hermitian, PSD, total trace <= 1) are reported by
// validateState so that invalid data read from files can be diagnosed rather
// than rejected at construction.
struct DensityState {
  Signature sig;
  std::vector<ComplexMatrix> entries;

  DensityState() = default;
  DensityState(Signature s, std::vector<ComplexMatrix> e);
};

// Tuple-valued predicate: entry k is a dims[k]-square observable. Valid
// predicates are PSD with max eigenvalue <= 1; wp results are also carried in
// this type when the caller works with general Hermitian observables, so the
// constructor enforces shape only.
struct PredicateTuple {
  Signature sig;
  std::vector<ComplexMatrix> entries;

  PredicateTuple() = default;
  PredicateTuple(Signature s, std::vector<ComplexMatrix> e);

  static PredicateTuple identity(const Signature& sig);
  static PredicateTuple zero(const Signature& sig);
};

// Completely positive trace-nonincreasing map in operator-sum form. An empty
// operator list denotes the zero map.
struct KrausChannel {
  int inDim = 0;
  int outDim = 0;
  std::vector<ComplexMatrix> kraus;

  KrausChannel() = default;
  KrausChannel(int in, int out, std::vector<ComplexMatrix> ops);

  static KrausChannel identity(int dim);
  static KrausChannel zero(int inDim, int outDim);
  static KrausChannel fromUnitary(const ComplexMatrix& u);
};

// Map between tuple-valued states: blocks[j][i] carries branch i of the input
// to branch j of the output. Forward action sums over input branches.
class Superoperator {
 public:
  Superoperator() = default;
  Superoperator(Signature inSig, Signature outSig,
                std::vector<std::vector<KrausChannel>> blocks);

  static Superoperator identity(const Signature& sig);
  static Superoperator zero(const Signature& inSig, const Signature& outSig);

  const Signature& inSig() const { return inSig_; }
  const Signature& outSig() const { return outSig_; }
  const KrausChannel& block(int j, int i) const { return blocks_.at(j).at(i); }
  KrausChannel& block(int j, int i) { return blocks_.at(j).at(i); }
  const std::vector<std::vector<KrausChannel>>& blocks() const {
    return blocks_;
  }

 private:
  Signature inSig_, outSig_;
  std::vector<std::vector<KrausChannel>> blocks_;  // [out branch][in branch]
};

struct Violation {
  std::string code;
  std::string message;
  double witness = 0.0;  // offending eigenvalue, trace, or residual
};

struct ValidationReport {
  bool pass = true;
  std::vector<Violation> violations;

  void flag(std::string code, std::string message, double witness);
  double maxWitness() const;
};

// Semantic validation. Each check lists every violated invariant along with a
// numeric witness.
ValidationReport validateState(const DensityState& s, double tol = kPsdTol);
ValidationReport validatePredicateEntry(const ComplexMatrix& m,
                                        double tol = kPsdTol);
ValidationReport validatePredicate(const PredicateTuple& p,
                                   double tol = kPsdTol);
ValidationReport validateChannel(const KrausChannel& c, double tol = kPsdTol);
ValidationReport validateSuper(const Superoperator& f, double tol = kPsdTol);

// Forward action sum_m E_m rho E_m^dag.
ComplexMatrix applyChannel(const KrausChannel& c, const ComplexMatrix& rho);
// Forward action on tuples: out[j] = sum_i block[j][i](in[i]).
DensityState applySuper(const Superoperator& f, const DensityState& s);

// sum_k Re tr(P_k s_k); in [0,1] (up to roundoff) for valid inputs.
double expectation(const DensityState& s, const PredicateTuple& p);
// Threshold satisfaction |=_r: expectation >= r - 1e-9. r must lie in [0,1].
bool satisfies(const DensityState& s, const PredicateTuple& p, double r);

// Choi matrix sum_{a,b} |a><b| (x) E(|a><b|), an (inDim*outDim)-square
// operator; PSD exactly when the map is completely positive, and a complete
// extensional fingerprint of the channel.
ComplexMatrix choiMatrix(const KrausChannel& c);

// Rewrites the channel with at most inDim*outDim Kraus operators obtained
// from the eigendecomposition of its Choi matrix. Extensionally exact; used
// to keep operator counts bounded under repeated composition.
KrausChannel compressChannel(const KrausChannel& c);

// Max-norm distance between blockwise Choi matrices; zero iff the two
// superoperators are extensionally equal (as block maps).
double superChoiDistance(const Superoperator& f, const Superoperator& g);

// Largest max-norm over the blockwise Choi matrices of f.
double superChoiMagnitude(const Superoperator& f);

}  // namespace qwp

#endif
