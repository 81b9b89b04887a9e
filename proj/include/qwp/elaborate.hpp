#ifndef QWP_ELABORATE_HPP
#define QWP_ELABORATE_HPP

#include <string>
#include <vector>

#include "qwp/ast.hpp"
#include "qwp/domain.hpp"

namespace qwp {

// One typing-context slot: a named bit, a named qubit register, or the
// anonymous bit a bare `measure` leaves behind.
struct ContextEntry {
  std::string name;   // empty for anonymous measurement outcomes
  bool isQbit = false;
  int width = 1;      // qubits covered; bits always 1

  bool operator==(const ContextEntry& o) const {
    return name == o.name && isQbit == o.isQbit && width == o.width;
  }
};

// Ordered typing context. entries()[0] is the most significant slot: the
// front bit indexes the upper half of the branch tuple, and the front qubit
// is the leftmost tensor factor. Allocation prepends, so the newest slot is
// the most significant, and a measurement outcome outranks anything its
// branch bodies allocate.
class TypingContext {
 public:
  TypingContext() = default;
  explicit TypingContext(std::vector<ContextEntry> entries);

  const std::vector<ContextEntry>& entries() const { return entries_; }
  int numBits() const;
  int numQubits() const;

  // 2^{#bits} branches, each of dimension 2^{#qubits}.
  Signature signature() const;

  // Index of the named slot, or -1. Anonymous slots are not addressable.
  int find(const std::string& name) const;
  // Branch-bit position (0 = most significant) of the bit entry at `index`.
  int bitPosition(int index) const;
  // First tensor slot (0 = most significant) of the qubit entry at `index`.
  int qubitSlot(int index) const;

  TypingContext withPrepended(ContextEntry e) const;
  TypingContext withRemoved(int index) const;

  bool operator==(const TypingContext& o) const {
    return entries_ == o.entries_;
  }
  bool operator!=(const TypingContext& o) const { return !(*this == o); }
  std::string describe() const;

 private:
  std::vector<ContextEntry> entries_;
};

struct ElabOptions {
  double loopTol = 1e-10;  // monoidal-trace truncation tolerance
  int loopMaxIter = 100000;
  double recTol = 1e-10;   // fixpoint convergence tolerance
  int recMaxIter = 100000;
};

struct Elaboration {
  Superoperator op;  // maps the input signature to the output signature
  TypingContext inputContext;
  TypingContext outputContext;
};

// Context declared by the program's input headers, first input most
// significant.
TypingContext declaredInputContext(const Program& p);

// Elaborates the statement list under the given input context, which must
// match the declared headers. Throws TypeError on context-discipline
// violations (branch contexts differing at a merge point, non-qubit unitary
// targets, loop or rec bodies that do not preserve their context),
// ElaborationError on bad unitary material, and NonConvergent/NonMonotone
// from the loop and fixpoint engines.
Elaboration elaborateProgram(const Program& p, const TypingContext& inputCtx,
                             const ElabOptions& opts = {});
Elaboration elaborateProgram(const Program& p, const ElabOptions& opts = {});

// Superoperator-only view of elaborateProgram.
Superoperator elaborate(const Program& p, const TypingContext& inputCtx);

}  // namespace qwp

#endif
