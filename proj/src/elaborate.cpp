#include "qwp/elaborate.hpp"

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "qwp/gates.hpp"
#include "qwp/wp.hpp"

namespace qwp {

namespace {

constexpr int kMaxBits = 12;
constexpr int kMaxQubits = 12;

std::string posPrefix(const SourcePos& pos) {
  if (pos.line <= 0) return "";
  return "line " + std::to_string(pos.line) + ", col " +
         std::to_string(pos.col) + ": ";
}

[[noreturn]] void typeError(const SourcePos& pos, const std::string& what) {
  fail(ErrorCode::TypeError, posPrefix(pos) + what);
}

[[noreturn]] void elabError(const SourcePos& pos, const std::string& what) {
  fail(ErrorCode::ElaborationError, posPrefix(pos) + what);
}

[[noreturn]] void scopeError(const SourcePos& pos, const std::string& what) {
  fail(ErrorCode::ScopeError, posPrefix(pos) + what);
}

// Basis permutation for reordering qubit slots: position p of the output
// index holds what slot newOrder[p] of the input index held.
ComplexMatrix slotPermutation(int numQubits, const std::vector<int>& newOrder) {
  const int d = 1 << numQubits;
  ComplexMatrix p = ComplexMatrix::zero(d, d);
  for (int a = 0; a < d; ++a) {
    int b = 0;
    for (int pos = 0; pos < numQubits; ++pos) {
      const int bit = (a >> (numQubits - 1 - newOrder[pos])) & 1;
      b |= bit << (numQubits - 1 - pos);
    }
    p(b, a) = Complex(1.0, 0.0);
  }
  return p;
}

// Embeds a unitary acting on the listed slots (first slot = most significant
// factor of u's space) into the full 2^{numQubits} space.
ComplexMatrix embedUnitary(const ComplexMatrix& u, const std::vector<int>& slots,
                           int numQubits) {
  std::vector<int> order = slots;
  std::set<int> used(slots.begin(), slots.end());
  for (int s = 0; s < numQubits; ++s) {
    if (!used.count(s)) order.push_back(s);
  }
  ComplexMatrix p = slotPermutation(numQubits, order);
  const int restDim = 1 << (numQubits - static_cast<int>(slots.size()));
  ComplexMatrix lifted =
      restDim == 1 ? u : tensor(u, ComplexMatrix::identity(restDim));
  return multiply(adjoint(p), multiply(lifted, p));
}

// I_{2^slot} (x) op (x) I_rest on numQubits slots; op acts on `width` slots.
ComplexMatrix embedAtSlot(const ComplexMatrix& op, int slot, int width,
                          int numQubits) {
  ComplexMatrix out = op;
  if (slot > 0) out = tensor(ComplexMatrix::identity(1 << slot), out);
  const int restQubits = numQubits - slot - width;
  if (restQubits > 0) out = tensor(out, ComplexMatrix::identity(1 << restQubits));
  return out;
}

Superoperator compressSuper(const Superoperator& f) {
  std::vector<std::vector<KrausChannel>> blocks(f.outSig().size());
  for (int j = 0; j < f.outSig().size(); ++j) {
    blocks[j].reserve(f.inSig().size());
    for (int i = 0; i < f.inSig().size(); ++i) {
      blocks[j].push_back(compressChannel(f.block(j, i)));
    }
  }
  return Superoperator(f.inSig(), f.outSig(), std::move(blocks));
}

class Elaborator {
 public:
  explicit Elaborator(const ElabOptions& opts) : opts_(opts) {}

  std::pair<Superoperator, TypingContext> block(const Block& b,
                                                const TypingContext& ctx) {
    Superoperator op = Superoperator::identity(ctx.signature());
    TypingContext cur = ctx;
    bool prevWasMeasure = false;
    for (const Stmt& s : b) {
      if (s.kind == StmtKind::Merge && !prevWasMeasure) {
        typeError(s.pos, "merge must immediately follow a measurement");
      }
      auto [stepOp, nextCtx] = step(s, cur);
      op = compressSuper(seqCompose(op, stepOp));
      cur = std::move(nextCtx);
      prevWasMeasure = s.kind == StmtKind::Measure;
    }
    return {std::move(op), std::move(cur)};
  }

 private:
  std::pair<Superoperator, TypingContext> step(const Stmt& s,
                                               const TypingContext& ctx) {
    switch (s.kind) {
      case StmtKind::NewBit: return stepNewBit(s, ctx);
      case StmtKind::NewQbit: return stepNewQbit(s, ctx);
      case StmtKind::ApplyUnitary: return stepApply(s, ctx);
      case StmtKind::Measure: return stepMeasure(s, ctx);
      case StmtKind::Merge:
        return {Superoperator::identity(ctx.signature()), ctx};
      case StmtKind::Discard: return stepDiscard(s, ctx);
      case StmtKind::Repeat: return stepRepeat(s, ctx);
      case StmtKind::While: return stepWhile(s, ctx);
      case StmtKind::CallRec: return stepCall(s, ctx);
      case StmtKind::DefRec: return stepRec(s, ctx);
    }
    fail(ErrorCode::Internal, "unhandled statement kind");
  }

  void requireFresh(const std::string& name, const TypingContext& ctx,
                    const SourcePos& pos) {
    if (ctx.find(name) >= 0 || recEnv_.count(name)) {
      scopeError(pos, "'" + name + "' is already in scope");
    }
  }

  std::pair<Superoperator, TypingContext> stepNewBit(const Stmt& s,
                                                     const TypingContext& ctx) {
    requireFresh(s.name, ctx, s.pos);
    TypingContext out = ctx.withPrepended({s.name, false, 1});
    const Signature inSig = ctx.signature();
    const Signature outSig = out.signature();
    const int branches = inSig.size();
    std::vector<std::vector<KrausChannel>> blocks(outSig.size());
    for (int j = 0; j < outSig.size(); ++j) {
      for (int i = 0; i < branches; ++i) {
        const bool hit = j == s.value * branches + i;
        blocks[j].push_back(hit ? KrausChannel::identity(inSig.dim(i))
                                : KrausChannel::zero(inSig.dim(i), outSig.dim(j)));
      }
    }
    return {Superoperator(inSig, outSig, std::move(blocks)), std::move(out)};
  }

  std::pair<Superoperator, TypingContext> stepNewQbit(const Stmt& s,
                                                      const TypingContext& ctx) {
    requireFresh(s.name, ctx, s.pos);
    TypingContext out = ctx.withPrepended({s.name, true, 1});
    const Signature inSig = ctx.signature();
    const Signature outSig = out.signature();
    // Injection |v> (x) rho: the fresh qubit is the most significant factor.
    ComplexMatrix inject =
        tensor(gates::basisKet(2, s.value), ComplexMatrix::identity(inSig.dim(0)));
    std::vector<std::vector<KrausChannel>> blocks(outSig.size());
    for (int j = 0; j < outSig.size(); ++j) {
      for (int i = 0; i < inSig.size(); ++i) {
        blocks[j].push_back(
            j == i ? KrausChannel(inSig.dim(i), outSig.dim(j), {inject})
                   : KrausChannel::zero(inSig.dim(i), outSig.dim(j)));
      }
    }
    return {Superoperator(inSig, outSig, std::move(blocks)), std::move(out)};
  }

  // Resolves unitary targets to tensor slots, first target most significant.
  std::vector<int> resolveSlots(const std::vector<QubitRef>& targets,
                                const TypingContext& ctx, const SourcePos& pos) {
    std::vector<int> slots;
    for (const QubitRef& ref : targets) {
      const int idx = ctx.find(ref.name);
      if (idx < 0) scopeError(pos, "'" + ref.name + "' is not in scope");
      const ContextEntry& entry = ctx.entries()[idx];
      if (!entry.isQbit) {
        typeError(pos, "'" + ref.name + "' is a bit; unitaries act on qubits");
      }
      const int base = ctx.qubitSlot(idx);
      if (ref.index >= 0) {
        if (ref.index >= entry.width) {
          scopeError(pos, "index " + std::to_string(ref.index) +
                              " out of range for '" + ref.name + "'");
        }
        slots.push_back(base + ref.index);
      } else {
        for (int k = 0; k < entry.width; ++k) slots.push_back(base + k);
      }
    }
    std::set<int> seen;
    for (int sgl : slots) {
      if (!seen.insert(sgl).second) {
        typeError(pos, "duplicate unitary target");
      }
    }
    return slots;
  }

  ComplexMatrix resolveUnitary(const UnitaryRef& u, int numSlots,
                               const SourcePos& pos) {
    const int want = 1 << numSlots;
    if (u.kind == UnitaryRef::Kind::Matrix) {
      const ComplexMatrix& m = u.matrix;
      if (m.rows() != m.cols() || m.rows() != want) {
        typeError(pos, "matrix of dimension " + std::to_string(m.rows()) + "x" +
                           std::to_string(m.cols()) + " cannot act on " +
                           std::to_string(numSlots) + " qubit target(s)");
      }
      if (!gates::isUnitary(m)) {
        elabError(pos, "matrix literal is not unitary");
      }
      return m;
    }
    ComplexMatrix m = ComplexMatrix::identity(1);
    if (u.name == "H") m = gates::hadamard();
    else if (u.name == "X") m = gates::pauliX();
    else if (u.name == "Y") m = gates::pauliY();
    else if (u.name == "Z") m = gates::pauliZ();
    else if (u.name == "CNOT") m = gates::cnot();
    else if (u.name == "IAM" || u.name == "Oracle" || u.name == "GroverG") {
      const int n = u.params.at(0);
      if (n < 1 || n > kMaxQubits) {
        elabError(pos, u.name + " needs between 1 and " +
                           std::to_string(kMaxQubits) + " qubits");
      }
      if (u.name == "IAM") {
        m = gates::inversionAboutMean(n);
      } else {
        const int marked = u.params.at(1);
        if (marked < 0 || marked >= (1 << n)) {
          elabError(pos, u.name + " marked state " + std::to_string(marked) +
                             " out of range");
        }
        m = u.name == "Oracle" ? gates::phaseOracle(n, marked)
                               : gates::groverOperator(n, marked);
      }
    } else {
      fail(ErrorCode::Internal, "unknown builtin unitary " + u.name);
    }
    if (m.rows() != want) {
      typeError(pos, u.name + " acts on " + std::to_string(m.rows()) +
                         "-dimensional space but was given " +
                         std::to_string(numSlots) + " qubit target(s)");
    }
    return m;
  }

  std::pair<Superoperator, TypingContext> stepApply(const Stmt& s,
                                                    const TypingContext& ctx) {
    std::vector<int> slots = resolveSlots(s.targets, ctx, s.pos);
    ComplexMatrix u = resolveUnitary(s.unitary, static_cast<int>(slots.size()),
                                     s.pos);
    ComplexMatrix full = embedUnitary(u, slots, ctx.numQubits());
    const Signature sig = ctx.signature();
    std::vector<std::vector<KrausChannel>> blocks(sig.size());
    for (int j = 0; j < sig.size(); ++j) {
      for (int i = 0; i < sig.size(); ++i) {
        blocks[j].push_back(j == i ? KrausChannel::fromUnitary(full)
                                   : KrausChannel::zero(sig.dim(i), sig.dim(j)));
      }
    }
    return {Superoperator(sig, sig, std::move(blocks)), ctx};
  }

  // Single-qubit target of a measurement: a scalar qubit or one register
  // element.
  int resolveMeasureSlot(const QubitRef& ref, const TypingContext& ctx,
                         const SourcePos& pos) {
    const int idx = ctx.find(ref.name);
    if (idx < 0) scopeError(pos, "'" + ref.name + "' is not in scope");
    const ContextEntry& entry = ctx.entries()[idx];
    if (!entry.isQbit) {
      typeError(pos, "'" + ref.name + "' is a bit and cannot be measured");
    }
    if (ref.index < 0) {
      if (entry.width != 1) {
        typeError(pos, "measure takes a single qubit; '" + ref.name +
                           "' has width " + std::to_string(entry.width));
      }
      return ctx.qubitSlot(idx);
    }
    if (ref.index >= entry.width) {
      scopeError(pos, "index " + std::to_string(ref.index) +
                          " out of range for '" + ref.name + "'");
    }
    return ctx.qubitSlot(idx) + ref.index;
  }

  std::pair<Superoperator, TypingContext> stepMeasure(const Stmt& s,
                                                      const TypingContext& ctx) {
    const int slot = resolveMeasureSlot(s.qubit, ctx, s.pos);
    // Split: outcome o sends branch i to branch o*B + i, projecting the
    // measured slot. The outcome becomes the most significant branch bit.
    const Signature inSig = ctx.signature();
    const int branches = inSig.size();
    TypingContext splitCtx = ctx.withPrepended({"", false, 1});
    const Signature splitSig = splitCtx.signature();
    std::vector<std::vector<KrausChannel>> blocks(splitSig.size());
    for (int o = 0; o < 2; ++o) {
      ComplexMatrix proj = embedAtSlot(gates::basisProjector(2, o), slot, 1,
                                       ctx.numQubits());
      for (int j = 0; j < branches; ++j) {
        for (int i = 0; i < branches; ++i) {
          blocks[o * branches + j].push_back(
              j == i ? KrausChannel(inSig.dim(i), inSig.dim(i), {proj})
                     : KrausChannel::zero(inSig.dim(i), inSig.dim(j)));
        }
      }
    }
    Superoperator split(inSig, splitSig, std::move(blocks));

    auto [thenOp, thenCtx] = block(s.thenBlock, ctx);
    auto [elseOp, elseCtx] = block(s.elseBlock, ctx);
    if (thenCtx != elseCtx) {
      typeError(s.pos, "measurement branches end in different contexts: " +
                           thenCtx.describe() + " vs " + elseCtx.describe());
    }
    if (!s.outcomeName.empty()) requireFresh(s.outcomeName, thenCtx, s.pos);
    Superoperator combined = seqCompose(split, coproduct(thenOp, elseOp));
    TypingContext out = thenCtx.withPrepended({s.outcomeName, false, 1});
    return {std::move(combined), std::move(out)};
  }

  std::pair<Superoperator, TypingContext> stepDiscard(const Stmt& s,
                                                      const TypingContext& ctx) {
    const int idx = ctx.find(s.name);
    if (idx < 0) scopeError(s.pos, "'" + s.name + "' is not in scope");
    const ContextEntry& entry = ctx.entries()[idx];
    TypingContext out = ctx.withRemoved(idx);
    const Signature inSig = ctx.signature();
    const Signature outSig = out.signature();
    std::vector<std::vector<KrausChannel>> blocks(outSig.size());
    if (!entry.isQbit) {
      // Dropping a bit merges each 0/1 branch pair by summation.
      const int p = ctx.bitPosition(idx);
      const int numBits = ctx.numBits();
      const int lowMask = (1 << (numBits - 1 - p)) - 1;
      for (int j = 0; j < outSig.size(); ++j) {
        blocks[j].assign(inSig.size(),
                         KrausChannel::zero(inSig.dim(0), outSig.dim(j)));
        const int high = j & ~lowMask;
        const int low = j & lowMask;
        for (int v = 0; v < 2; ++v) {
          const int i = (((high << 1) | (v << (numBits - 1 - p))) | low);
          blocks[j][i] = KrausChannel::identity(inSig.dim(i));
        }
      }
    } else {
      // Dropping a qubit register traces it out branch by branch.
      const int slot = ctx.qubitSlot(idx);
      const int w = entry.width;
      std::vector<ComplexMatrix> ops;
      for (int x = 0; x < (1 << w); ++x) {
        ComplexMatrix bra = adjoint(gates::basisKet(1 << w, x));
        ops.push_back(embedAtSlot(bra, slot, w, ctx.numQubits()));
      }
      for (int j = 0; j < outSig.size(); ++j) {
        for (int i = 0; i < inSig.size(); ++i) {
          blocks[j].push_back(
              j == i ? KrausChannel(inSig.dim(i), outSig.dim(j), ops)
                     : KrausChannel::zero(inSig.dim(i), outSig.dim(j)));
        }
      }
    }
    return {Superoperator(inSig, outSig, std::move(blocks)), std::move(out)};
  }

  std::pair<Superoperator, TypingContext> stepRepeat(const Stmt& s,
                                                     const TypingContext& ctx) {
    auto [bodyOp, bodyCtx] = block(s.body, ctx);
    if (bodyCtx != ctx) {
      typeError(s.pos, "repeat body must preserve its context: " +
                           ctx.describe() + " became " + bodyCtx.describe());
    }
    Superoperator op = Superoperator::identity(ctx.signature());
    for (int k = 0; k < s.value; ++k) {
      op = compressSuper(seqCompose(op, bodyOp));
    }
    return {std::move(op), ctx};
  }

  // Diagonal selector keeping only the branches whose bit p equals v.
  Superoperator selectBit(const TypingContext& ctx, int p, int v) {
    const Signature sig = ctx.signature();
    const int numBits = ctx.numBits();
    std::vector<std::vector<KrausChannel>> blocks(sig.size());
    for (int j = 0; j < sig.size(); ++j) {
      for (int i = 0; i < sig.size(); ++i) {
        const bool keep = j == i && ((i >> (numBits - 1 - p)) & 1) == v;
        blocks[j].push_back(keep ? KrausChannel::identity(sig.dim(i))
                                 : KrausChannel::zero(sig.dim(i), sig.dim(j)));
      }
    }
    return Superoperator(sig, sig, std::move(blocks));
  }

  std::pair<Superoperator, TypingContext> stepWhile(const Stmt& s,
                                                    const TypingContext& ctx) {
    const int idx = ctx.find(s.name);
    if (idx < 0) scopeError(s.pos, "'" + s.name + "' is not in scope");
    if (ctx.entries()[idx].isQbit) {
      typeError(s.pos, "'" + s.name + "' is a qubit; while needs a bit");
    }
    auto [bodyOp, bodyCtx] = block(s.body, ctx);
    if (bodyCtx != ctx) {
      typeError(s.pos, "while body must preserve its context: " +
                           ctx.describe() + " became " + bodyCtx.describe());
    }
    const int p = ctx.bitPosition(idx);
    Superoperator exit = selectBit(ctx, p, 0);
    Superoperator enter = compressSuper(seqCompose(selectBit(ctx, p, 1), bodyOp));
    LoopDecomposition loop = LoopDecomposition::fromParts(exit, enter, exit, enter);
    Superoperator op = monoidalTrace(loop, opts_.loopTol, opts_.loopMaxIter);
    return {std::move(op), ctx};
  }

  std::pair<Superoperator, TypingContext> stepCall(const Stmt& s,
                                                   const TypingContext& ctx) {
    auto it = recEnv_.find(s.name);
    if (it == recEnv_.end()) {
      scopeError(s.pos, "'" + s.name + "' is not an enclosing rec");
    }
    if (ctx != it->second.entry) {
      typeError(s.pos, "call to '" + s.name + "' in context " + ctx.describe() +
                           " but its rec starts in " +
                           it->second.entry.describe());
    }
    return {*it->second.current, ctx};
  }

  std::pair<Superoperator, TypingContext> stepRec(const Stmt& s,
                                                  const TypingContext& ctx) {
    requireFresh(s.name, ctx, s.pos);
    const Signature sig = ctx.signature();
    RecursiveSpec spec;
    spec.holeInSig = sig;
    spec.holeOutSig = sig;
    spec.body = [this, &s, &ctx](const Superoperator& x) {
      recEnv_[s.name] = RecFrame{ctx, &x};
      auto [bodyOp, bodyCtx] = block(s.body, ctx);
      recEnv_.erase(s.name);
      if (bodyCtx != ctx) {
        typeError(s.pos, "rec body must preserve its context: " +
                             ctx.describe() + " became " + bodyCtx.describe());
      }
      return bodyOp;
    };
    Superoperator op = recursiveFixpoint(spec, opts_.recTol, opts_.recMaxIter);
    return {std::move(op), ctx};
  }

  struct RecFrame {
    TypingContext entry;
    const Superoperator* current = nullptr;
  };

  const ElabOptions& opts_;
  std::map<std::string, RecFrame> recEnv_;
};

}  // namespace

TypingContext::TypingContext(std::vector<ContextEntry> entries)
    : entries_(std::move(entries)) {
  std::set<std::string> names;
  for (ContextEntry& e : entries_) {
    if (!e.isQbit) e.width = 1;
    if (e.width < 1) {
      fail(ErrorCode::ScopeError, "register width must be at least 1");
    }
    if (!e.name.empty() && !names.insert(e.name).second) {
      fail(ErrorCode::ScopeError, "duplicate name '" + e.name + "' in context");
    }
  }
}

int TypingContext::numBits() const {
  int n = 0;
  for (const ContextEntry& e : entries_) n += e.isQbit ? 0 : 1;
  return n;
}

int TypingContext::numQubits() const {
  int n = 0;
  for (const ContextEntry& e : entries_) n += e.isQbit ? e.width : 0;
  return n;
}

Signature TypingContext::signature() const {
  const int bits = numBits();
  const int qubits = numQubits();
  if (bits > kMaxBits || qubits > kMaxQubits) {
    fail(ErrorCode::ElaborationError,
         "context too large: " + std::to_string(bits) + " bits and " +
             std::to_string(qubits) + " qubits");
  }
  return Signature(std::vector<int>(1 << bits, 1 << qubits));
}

int TypingContext::find(const std::string& name) const {
  if (name.empty()) return -1;
  for (size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i].name == name) return static_cast<int>(i);
  }
  return -1;
}

int TypingContext::bitPosition(int index) const {
  int p = 0;
  for (int i = 0; i < index; ++i) p += entries_.at(i).isQbit ? 0 : 1;
  return p;
}

int TypingContext::qubitSlot(int index) const {
  int p = 0;
  for (int i = 0; i < index; ++i) {
    p += entries_.at(i).isQbit ? entries_.at(i).width : 0;
  }
  return p;
}

TypingContext TypingContext::withPrepended(ContextEntry e) const {
  std::vector<ContextEntry> entries;
  entries.reserve(entries_.size() + 1);
  entries.push_back(std::move(e));
  entries.insert(entries.end(), entries_.begin(), entries_.end());
  return TypingContext(std::move(entries));
}

TypingContext TypingContext::withRemoved(int index) const {
  std::vector<ContextEntry> entries = entries_;
  entries.erase(entries.begin() + index);
  return TypingContext(std::move(entries));
}

std::string TypingContext::describe() const {
  std::string out = "{";
  for (size_t i = 0; i < entries_.size(); ++i) {
    if (i) out += ", ";
    const ContextEntry& e = entries_[i];
    out += (e.name.empty() ? "_" : e.name);
    out += e.isQbit ? ":qbit" : ":bit";
    if (e.isQbit && e.width > 1) out += "[" + std::to_string(e.width) + "]";
  }
  return out + "}";
}

TypingContext declaredInputContext(const Program& p) {
  std::vector<ContextEntry> entries;
  for (const InputDecl& d : p.inputs) {
    entries.push_back({d.name, d.isQbit, d.width});
  }
  return TypingContext(std::move(entries));
}

Elaboration elaborateProgram(const Program& p, const TypingContext& inputCtx,
                             const ElabOptions& opts) {
  if (inputCtx != declaredInputContext(p)) {
    fail(ErrorCode::TypeError,
         "input context " + inputCtx.describe() +
             " does not match the declared inputs " +
             declaredInputContext(p).describe());
  }
  Elaborator e(opts);
  auto [op, outCtx] = e.block(p.body, inputCtx);
  return {std::move(op), inputCtx, std::move(outCtx)};
}

Elaboration elaborateProgram(const Program& p, const ElabOptions& opts) {
  return elaborateProgram(p, declaredInputContext(p), opts);
}

Superoperator elaborate(const Program& p, const TypingContext& inputCtx) {
  return elaborateProgram(p, inputCtx).op;
}

}  // namespace qwp
