#ifndef QWP_WP_HPP
#define QWP_WP_HPP

#include <cstdint>
#include <functional>
#include <vector>

#include "qwp/domain.hpp"

namespace qwp {

// Weakest precondition of a single channel: sum_m E_m^dag N E_m. N must be a
// Hermitian observable on the channel's output space; PSD and the unit bound
// are not required, so stabilizer-style observables with eigenvalue -1 are
// accepted. When N is a valid predicate the result is one too.
ComplexMatrix wpChannel(const KrausChannel& c, const ComplexMatrix& n);

// Blockwise weakest precondition: pre[i] = sum_j wp(block[j][i], post[j]).
// Satisfies the duality <wp(F)(P), s> = <P, F(s)> for every state s.
PredicateTuple wpSuper(const Superoperator& f, const PredicateTuple& post);

// True iff m entrywise Loewner-below wpSuper(f, post), i.e. m is a (not
// necessarily weakest) precondition for post under f.
bool isPrecondition(const PredicateTuple& m, const Superoperator& f,
                    const PredicateTuple& post, double tol = kPsdTol);

// Adjoint view of a superoperator: applies the same Kraus blocks in
// conjugated form, mapping postconditions on outSig back to preconditions on
// inSig. Healthy exactly when the underlying blocks are trace-nonincreasing
// per input branch.
class PredicateTransformer {
 public:
  explicit PredicateTransformer(Superoperator forward)
      : forward_(std::move(forward)) {}

  const Signature& postSig() const { return forward_.outSig(); }
  const Signature& preSig() const { return forward_.inSig(); }
  const Superoperator& forward() const { return forward_; }

  PredicateTuple apply(const PredicateTuple& post) const {
    return wpSuper(forward_, post);
  }

  ValidationReport healthiness(double tol = kPsdTol) const {
    return validateSuper(forward_, tol);
  }

 private:
  Superoperator forward_;
};

// Order on transformers: alpha <= beta iff the blockwise difference of their
// adjoint maps is completely positive, decided through the Choi matrix of
// each block difference.
bool transformerLeq(const PredicateTransformer& alpha,
                    const PredicateTransformer& beta, double tol = kPsdTol);

// Sequential composition: run f, then g (forward reading g o f). The wp of
// the composite is wp(f) o wp(g) applied postcondition-first.
Superoperator seqCompose(const Superoperator& f, const Superoperator& g);

// Branch-parallel composition on concatenated signatures; f and g never
// exchange probability.
Superoperator coproduct(const Superoperator& f, const Superoperator& g);

// Blockwise sum of two maps with equal signatures (Kraus concatenation).
Superoperator addSuper(const Superoperator& f, const Superoperator& g);

// Lift to a context extended by a fresh classical bit: the map acts
// identically in both branches.
Superoperator extendClassicalBit(const Superoperator& f);

// Lift to a context extended by a fresh qubit as the most significant tensor
// factor: every Kraus operator E becomes I_2 (x) E, so the map acts blockwise
// on each quadrant of the doubled space.
Superoperator extendQuantumBit(const Superoperator& f);

// A loop-shaped superoperator together with the branch partition that
// separates through-wires (sigma) from feedback wires (tau) on each side.
struct LoopDecomposition {
  Superoperator full;          // sigma (+) tau  ->  sigma' (+) tau
  std::vector<int> inSigma;    // entry indices of full.inSig in sigma
  std::vector<int> inTau;      // entry indices of full.inSig in tau
  std::vector<int> outSigma;   // entry indices of full.outSig in sigma'
  std::vector<int> outTau;     // entry indices of full.outSig in tau

  LoopDecomposition(Superoperator f, std::vector<int> inS, std::vector<int> inT,
                    std::vector<int> outS, std::vector<int> outT);

  // Assemble from the four components with the canonical layout
  // [sigma entries first, tau entries second] on both sides.
  static LoopDecomposition fromParts(const Superoperator& e11,
                                     const Superoperator& e12,
                                     const Superoperator& e21,
                                     const Superoperator& e22);

  Superoperator e11() const;  // sigma -> sigma'
  Superoperator e12() const;  // sigma -> tau
  Superoperator e21() const;  // tau   -> sigma'
  Superoperator e22() const;  // tau   -> tau
};

// Feedback elimination: E11 + sum_{i>=0} E21 o E22^i o E12, truncated once
// the blockwise Choi increment drops to tol. Throws NonConvergent when
// maxIter terms do not reach the tolerance.
Superoperator monoidalTrace(const LoopDecomposition& loop, double tol = 1e-10,
                            int maxIter = 100000);

// Partial sum with exactly `terms` feedback passes (terms = 0 gives E11).
Superoperator monoidalTraceTruncated(const LoopDecomposition& loop, int terms);

// Recursive definition: a body functional together with the signature of the
// hole it closes over.
struct RecursiveSpec {
  Signature holeInSig;
  Signature holeOutSig;
  std::function<Superoperator(const Superoperator&)> body;
};

// Least fixed point by Kleene iteration from the zero map. Iterates must be
// nondecreasing in the transformer order (NonMonotone otherwise); convergence
// is blockwise Choi distance <= tol within maxIter steps (NonConvergent).
Superoperator recursiveFixpoint(const RecursiveSpec& spec, double tol = 1e-10,
                                int maxIter = 100000);

struct DualityReport {
  bool pass = false;
  double maxResidual = 0.0;
  int trials = 0;
};

// Samples random (state, predicate) pairs on f's signatures and reports the
// largest |<wp(f)(P), s> - <P, f(s)>|. Passes at 1e-9.
DualityReport dualityCheck(const Superoperator& f, int trials,
                           std::uint64_t seed = 0x5eedULL);

// True iff psi is a +1 eigenvector of u, decided by |tr(u |psi><psi|) - 1|
// <= 1e-9 and cross-checked against ||u psi - psi|| <= 1e-6. u must be
// unitary and psi normalized.
bool stabilizerCheck(const ComplexMatrix& u, const ComplexMatrix& psi);

}  // namespace qwp

#endif
