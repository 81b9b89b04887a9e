#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "doctest.h"
#include "qwp/ast.hpp"
#include "qwp/elaborate.hpp"
#include "qwp/gates.hpp"
#include "qwp/parser.hpp"
#include "qwp/programs.hpp"
#include "qwp/random_gen.hpp"
#include "qwp/wp.hpp"

using namespace qwp;

namespace {

ComplexMatrix uniformKet(int n) {
  const int d = 1 << n;
  ComplexMatrix psi = ComplexMatrix::zero(d, 1);
  for (int i = 0; i < d; ++i) psi(i, 0) = Complex(1.0 / std::sqrt(d), 0.0);
  return psi;
}

ComplexMatrix pureState(const ComplexMatrix& ket) {
  return multiply(ket, adjoint(ket));
}

ComplexMatrix basisState(int dim, int k) {
  return gates::basisProjector(dim, k);
}

bool throwsCode(ErrorCode code, const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code() == code;
  }
  return false;
}

const char* kFlipWhile =
    "input r : qbit\n"
    "\n"
    "new bit b := 1\n"
    "while b {\n"
    "  discard b\n"
    "  new qbit q := 0\n"
    "  q *= H\n"
    "  measure q as b\n"
    "  discard q\n"
    "}\n"
    "discard b\n";

const char* kFlipRec =
    "input r : qbit\n"
    "\n"
    "rec f {\n"
    "  new qbit q := 0\n"
    "  q *= H\n"
    "  measure q as b {\n"
    "    discard q\n"
    "  } else {\n"
    "    discard q\n"
    "    call f\n"
    "  }\n"
    "  discard b\n"
    "}\n";

}  // namespace

TEST_CASE("empty program parses to the identity program") {
  Program p = parse("");
  CHECK(p.inputs.empty());
  CHECK(p.body.empty());
  Elaboration e = elaborateProgram(p);
  CHECK(e.op.inSig() == Signature({1}));
  CHECK(superChoiDistance(e.op, Superoperator::identity(Signature({1}))) ==
        0.0);
}

TEST_CASE("parser reports syntax errors with position and expectation") {
  auto msgOf = [](const std::string& text) {
    try {
      parse(text);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::SyntaxError);
      return std::string(e.what());
    }
    return std::string("(no error)");
  };
  CHECK(msgOf("input r : qbit\nnew bit b := 2").find("line 2, col 14") !=
        std::string::npos);
  CHECK(msgOf("new qbit q = 0").find("':='") != std::string::npos);
  CHECK(msgOf("input r : flux").find("'bit' or 'qbit'") != std::string::npos);
  CHECK(msgOf("input r : qbit\nr *= Hadamard").find("not a builtin") !=
        std::string::npos);
  CHECK(msgOf("input r : qbit\nr *= IAM(1, 2)").find("1 parameter") !=
        std::string::npos);
  CHECK(msgOf("input r : qbit\nmeasure r { discard r }").find("'else'") !=
        std::string::npos);
  CHECK(msgOf("input r : qbit\nwhile r { discard r").find("'}'") !=
        std::string::npos);
  CHECK(msgOf("input r : qbit\nr *= [[1, 0], [1]]").find("equal length") !=
        std::string::npos);
  CHECK(msgOf("new bit H := 0").find("reserved") != std::string::npos);
  CHECK(msgOf("new bit while := 0").find("keyword") != std::string::npos);
  CHECK(msgOf("input r : qbit; discard r discard r").find(
            "expected end of statement") != std::string::npos);
  CHECK(msgOf("repeat 3 discard").find("'{'") != std::string::npos);
}

TEST_CASE("parser reports scope errors") {
  auto codeOf = [](const std::string& text) {
    try {
      parse(text);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::Internal;
  };
  CHECK(codeOf("q *= H") == ErrorCode::ScopeError);
  CHECK(codeOf("measure q") == ErrorCode::ScopeError);
  CHECK(codeOf("input q : qbit\ninput q : qbit") == ErrorCode::ScopeError);
  CHECK(codeOf("input q : qbit\nnew bit q := 0") == ErrorCode::ScopeError);
  CHECK(codeOf("call f") == ErrorCode::ScopeError);
  CHECK(codeOf("rec f { call g }") == ErrorCode::ScopeError);
  CHECK(codeOf("rec f {}\ncall f") == ErrorCode::ScopeError);
  CHECK(codeOf("input q : qbit[2]\nq[2] *= H") == ErrorCode::ScopeError);
  CHECK(codeOf("input q : qbit\ndiscard q\nq *= H") == ErrorCode::ScopeError);
  // After discarding, the name is free again.
  CHECK_NOTHROW(parse("input q : qbit\ndiscard q\nnew bit q := 0"));
  // Scope error messages carry the position.
  try {
    parse("input r : qbit\n\nq *= H");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("line 3, col 1") != std::string::npos);
  }
}

TEST_CASE("print-parse round trip is the identity on ASTs") {
  const std::vector<std::string> corpus = {
      "",
      "input r : qbit\nnew qbit q := 0\nq *= H\nmeasure q\ndiscard q\n",
      "input a : qbit\ninput b : qbit\na *= H\na, b *= CNOT\n",
      "input q : qbit[3]\nrepeat 2 { q *= GroverG(3, 5) }\nmeasure q[2]\n",
      "input q : qbit\nq *= [[0, 1], [1, 0]]\n",
      "input q : qbit\nq *= [[0.5+0.5i, 0.5-0.5i], [0.5-0.5i, 0.5+0.5i]]\n",
      "input q : qbit\nmeasure q as c {} else { q *= X }\ndiscard c\n",
      "input q : qbit\nmeasure q\nmerge\ndiscard q\n",
      kFlipWhile,
      kFlipRec,
  };
  for (const std::string& text : corpus) {
    CAPTURE(text);
    Program p = parse(text);
    std::string printed = printProgram(p);
    Program again = parse(printed);
    CHECK(astEquals(p, again));
    // Printing is idempotent on its own output.
    CHECK(printProgram(again) == printed);
  }
  for (int n = 1; n <= 5; ++n) {
    Program g = buildGrover(n, (1 << n) - 1);
    CHECK(astEquals(g, parse(printProgram(g))));
  }
  CHECK(astEquals(buildCoin(2), parse(printProgram(buildCoin(2)))));
  BellStabilizer bell = buildBellStabilizer();
  CHECK(astEquals(bell.program, parse(printProgram(bell.program))));
}

TEST_CASE("golden ASTs for the canonical corpus") {
  CHECK(dumpAst(buildCoin()) ==
        "(program (inputs (qbit r 1)) (body (new-qbit q 0) (apply (q) H) "
        "(measure q _ () ()) (discard q)))");
  CHECK(dumpAst(buildGrover(2, 3)) ==
        "(program (inputs (qbit q 2)) (body (repeat 1 ((apply (q) "
        "GroverG(2, 3)))) (measure q[1] _ () ()) (measure q[0] _ () ())))");
  CHECK(dumpAst(buildGrover(3, 5)) ==
        "(program (inputs (qbit q 3)) (body (repeat 2 ((apply (q) "
        "GroverG(3, 5)))) (measure q[2] _ () ()) (measure q[1] _ () ()) "
        "(measure q[0] _ () ())))");
  CHECK(dumpAst(buildBellStabilizer().program) ==
        "(program (inputs (qbit a 1) (qbit b 1)) (body (apply (a) H) "
        "(apply (a b) CNOT)))");
  // The canonical concrete syntax of the coin program.
  CHECK(printProgram(buildCoin()) ==
        "input r : qbit\n\nnew qbit q := 0\nq *= H\nmeasure q\ndiscard q\n");
}

TEST_CASE("signature bookkeeping per construct") {
  // NewBit doubles the branch count.
  Elaboration e1 = elaborateProgram(parse("input r : qbit\nnew bit b := 0"));
  CHECK(e1.op.inSig() == Signature({2}));
  CHECK(e1.op.outSig() == Signature({2, 2}));
  CHECK(e1.outputContext.entries().size() == 2);
  CHECK(e1.outputContext.entries()[0].name == "b");

  // NewQbit doubles every entry dimension.
  Elaboration e2 = elaborateProgram(parse("input r : qbit\nnew qbit q := 0"));
  CHECK(e2.op.outSig() == Signature({4}));

  // Measure splits the signature into two branches.
  Elaboration e3 = elaborateProgram(parse("input r : qbit\nmeasure r"));
  CHECK(e3.op.outSig() == Signature({2, 2}));
  CHECK(e3.outputContext.entries()[0].name.empty());

  // Qubit discard halves every entry dimension.
  Elaboration e4 = elaborateProgram(
      parse("input r : qbit\ninput s : qbit\ndiscard s"));
  CHECK(e4.op.inSig() == Signature({4}));
  CHECK(e4.op.outSig() == Signature({2}));

  // Bit discard halves the branch count.
  Elaboration e5 = elaborateProgram(
      parse("input c : bit\ninput r : qbit\ndiscard c"));
  CHECK(e5.op.inSig() == Signature({2, 2}));
  CHECK(e5.op.outSig() == Signature({2}));

  // The measurement outcome can be named and is a bit in context.
  Elaboration e6 = elaborateProgram(parse("input r : qbit\nmeasure r as c"));
  CHECK(e6.outputContext.entries()[0].name == "c");
  CHECK_FALSE(e6.outputContext.entries()[0].isQbit);
}

TEST_CASE("allocation semantics: injection into the declared value") {
  // new bit b := 1 puts all mass in the upper branch.
  Elaboration e = elaborateProgram(parse("input r : qbit\nnew bit b := 1"));
  DensityState in(Signature({2}), {basisState(2, 0)});
  DensityState out = applySuper(e.op, in);
  CHECK(trace(out.entries[0]).real() == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(trace(out.entries[1]).real() == doctest::Approx(1.0).epsilon(1e-12));

  // new qbit q := 1 makes q the most significant factor set to |1>.
  Elaboration e2 = elaborateProgram(parse("input r : qbit\nnew qbit q := 1"));
  DensityState out2 = applySuper(e2.op, in);
  // |1>(x)|0> is basis index 2 of the doubled space.
  CHECK(maxAbsDiff(out2.entries[0], basisState(4, 2)) <= 1e-14);
}

TEST_CASE("unitary application handles slots, registers, and literals") {
  RandomGen rng(7);
  // H twice is the identity extensionally.
  Elaboration hh = elaborateProgram(parse("input q : qbit\nq *= H\nq *= H"));
  for (int t = 0; t < 20; ++t) {
    DensityState s = rng.randomState(Signature({2}), true);
    DensityState out = applySuper(hh.op, s);
    CHECK(maxAbsDiff(out.entries[0], s.entries[0]) <= 1e-12);
  }

  // A matrix literal equal to X acts like the builtin.
  Elaboration lit = elaborateProgram(parse("input q : qbit\nq *= [[0, 1], [1, 0]]"));
  Elaboration bi = elaborateProgram(parse("input q : qbit\nq *= X"));
  CHECK(superChoiDistance(lit.op, bi.op) <= 1e-15);

  // Complex literal: Y as [[0, -1i], [1i, 0]].
  Elaboration y = elaborateProgram(
      parse("input q : qbit\nq *= [[0, -1i], [1i, 0]]"));
  Elaboration yb = elaborateProgram(parse("input q : qbit\nq *= Y"));
  CHECK(superChoiDistance(y.op, yb.op) <= 1e-15);

  // A bare register name expands to its qubits in order.
  Elaboration reg = elaborateProgram(parse("input q : qbit[2]\nq *= CNOT"));
  Elaboration idx = elaborateProgram(
      parse("input q : qbit[2]\nq[0], q[1] *= CNOT"));
  CHECK(superChoiDistance(reg.op, idx.op) <= 1e-15);

  // Reversed targets swap control and target: with b controlling, |a=0,b=1>
  // flips a.
  Elaboration rev = elaborateProgram(
      parse("input a : qbit\ninput b : qbit\nb, a *= CNOT"));
  DensityState in(Signature({4}), {basisState(4, 1)});  // |0 1>
  DensityState out = applySuper(rev.op, in);
  CHECK(maxAbsDiff(out.entries[0], basisState(4, 3)) <= 1e-14);  // |1 1>

  // Three-qubit permutation: control on slot 2, target slot 0.
  Elaboration perm = elaborateProgram(
      parse("input x : qbit\ninput y : qbit\ninput z : qbit\nz, x *= CNOT"));
  DensityState in3(Signature({8}), {basisState(8, 3)});  // |0 1 1>
  DensityState out3 = applySuper(perm.op, in3);
  CHECK(maxAbsDiff(out3.entries[0], basisState(8, 7)) <= 1e-14);  // |1 1 1>

  // IAM builtin matches the gate it names.
  Elaboration iam = elaborateProgram(parse("input q : qbit[2]\nq *= IAM(2)"));
  ComplexMatrix expected = gates::inversionAboutMean(2);
  CHECK(maxAbsDiff(iam.op.block(0, 0).kraus.at(0), expected) <= 1e-15);
}

TEST_CASE("type discipline rejects kind misuse and context drift") {
  auto codeOf = [](const std::string& text) {
    try {
      elaborateProgram(parse(text));
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::Internal;
  };
  CHECK(codeOf("input c : bit\nc *= H") == ErrorCode::TypeError);
  CHECK(codeOf("input c : bit\nmeasure c") == ErrorCode::TypeError);
  CHECK(codeOf("input q : qbit\nwhile q { discard q }") ==
        ErrorCode::TypeError);
  CHECK(codeOf("input q : qbit\nq *= CNOT") == ErrorCode::TypeError);
  CHECK(codeOf("input q : qbit\nq, q *= CNOT") == ErrorCode::TypeError);
  CHECK(codeOf("input q : qbit[2]\nmeasure q") == ErrorCode::TypeError);
  CHECK(codeOf("input q : qbit\nmerge") == ErrorCode::TypeError);
  CHECK(codeOf("input q : qbit\nq *= H\nmerge") == ErrorCode::TypeError);
  CHECK(codeOf("input q : qbit\nmeasure q { discard q } else {}") ==
        ErrorCode::TypeError);
  CHECK(codeOf("input c : bit\nrepeat 2 { new bit d := 0 }") ==
        ErrorCode::TypeError);
  CHECK(codeOf("input c : bit\nwhile c { new bit d := 0 }") ==
        ErrorCode::TypeError);
  CHECK(codeOf("rec f { new bit d := 0 }") == ErrorCode::TypeError);
  CHECK(codeOf("input q : qbit\nq *= [[1, 0], [0, 2]]") ==
        ErrorCode::ElaborationError);
  CHECK(codeOf("input q : qbit\nq *= [[1, 0, 0], [0, 1, 0], [0, 0, 1]]") ==
        ErrorCode::TypeError);
  CHECK(codeOf("input q : qbit[2]\nq *= Oracle(2, 7)") ==
        ErrorCode::ElaborationError);
  // merge directly after a measurement is fine and elaborates to identity.
  CHECK_NOTHROW(elaborateProgram(parse("input q : qbit\nmeasure q\nmerge")));
  // Mismatched explicit input context.
  CHECK(throwsCode(ErrorCode::TypeError, [] {
    elaborate(parse("input q : qbit\nq *= H"),
              TypingContext({{"x", true, 1}}));
  }));
}

TEST_CASE("repeat elaborates to iterated composition") {
  Program p0 = parse("input q : qbit\nrepeat 0 { q *= H }");
  Elaboration e0 = elaborateProgram(p0);
  CHECK(superChoiDistance(e0.op, Superoperator::identity(Signature({2}))) <=
        1e-15);

  Elaboration e3 = elaborateProgram(parse("input q : qbit\nrepeat 3 { q *= X }"));
  Elaboration x1 = elaborateProgram(parse("input q : qbit\nq *= X"));
  CHECK(superChoiDistance(e3.op, x1.op) <= 1e-12);

  Elaboration e2 = elaborateProgram(parse("input q : qbit\nrepeat 2 { q *= X }"));
  CHECK(superChoiDistance(e2.op, Superoperator::identity(Signature({2}))) <=
        1e-12);
}

TEST_CASE("coin program: forward halving and averaged precondition") {
  for (int width = 1; width <= 3; ++width) {
    CAPTURE(width);
    Program coin = buildCoin(width);
    Elaboration e = elaborateProgram(coin);
    const int d = 1 << width;
    CHECK(e.op.inSig() == Signature({d}));
    CHECK(e.op.outSig() == Signature({d, d}));

    RandomGen rng(101 + width);
    for (int t = 0; t < 10; ++t) {
      DensityState s = rng.randomState(Signature({d}), true);
      DensityState out = applySuper(e.op, s);
      // Both outcome branches carry exactly half the input state.
      CHECK(maxAbsDiff(out.entries[0], scale(Complex(0.5, 0.0), s.entries[0])) <=
            1e-12);
      CHECK(maxAbsDiff(out.entries[1], scale(Complex(0.5, 0.0), s.entries[0])) <=
            1e-12);
      CHECK(trace(out.entries[0]).real() == doctest::Approx(0.5).epsilon(1e-12));
      CHECK(trace(out.entries[1]).real() == doctest::Approx(0.5).epsilon(1e-12));

      // wp of M1 (+) M2 is the average (M1 + M2)/2, for any sizes.
      PredicateTuple post(Signature({d, d}),
                          {rng.randomPredicate(Signature({d})).entries[0],
                           rng.randomPredicate(Signature({d})).entries[0]});
      PredicateTuple pre = wpSuper(e.op, post);
      ComplexMatrix avg = scale(
          Complex(0.5, 0.0), add(post.entries[0], post.entries[1]));
      CHECK(maxAbsDiff(pre.entries[0], avg) <= 1e-12);
    }
  }
  CHECK(throwsCode(ErrorCode::OutOfRange, [] { buildCoin(0); }));
}

TEST_CASE("bell program: stabilizer preconditions") {
  BellStabilizer bell = buildBellStabilizer();
  Elaboration e = elaborateProgram(bell.program);
  CHECK(e.op.inSig() == Signature({4}));
  CHECK(e.op.outSig() == Signature({4}));
  // The single Kraus operator is CNOT (H (x) I).
  CHECK(maxAbsDiff(e.op.block(0, 0).kraus.at(0), bell.unitary) <= 1e-15);

  for (size_t k = 0; k < bell.generators.size(); ++k) {
    PredicateTuple post(Signature({4}), {bell.generators[k]});
    PredicateTuple pre = wpSuper(e.op, post);
    CHECK(maxAbsDiff(pre.entries[0], bell.expectedPre[k]) <= 1e-12);
  }

  // Forward from |00>: the Bell state, stabilized by both generators.
  DensityState in(Signature({4}), {basisState(4, 0)});
  DensityState out = applySuper(e.op, in);
  ComplexMatrix bellKet = ComplexMatrix::zero(4, 1);
  bellKet(0, 0) = Complex(1.0 / std::sqrt(2.0), 0.0);
  bellKet(3, 0) = Complex(1.0 / std::sqrt(2.0), 0.0);
  CHECK(maxAbsDiff(out.entries[0], pureState(bellKet)) <= 1e-12);
  CHECK(stabilizerCheck(bell.generators[0], bellKet));
  CHECK(stabilizerCheck(bell.generators[1], bellKet));
}

TEST_CASE("grover programs: forward success and projector preconditions") {
  // n = 2: success is exact.
  for (int s = 0; s < 4; ++s) {
    CAPTURE(s);
    Program g = buildGrover(2, s);
    Elaboration e = elaborateProgram(g);
    CHECK(e.op.inSig() == Signature({4}));
    CHECK(e.op.outSig().size() == 4);

    DensityState in(Signature({4}), {pureState(uniformKet(2))});
    DensityState out = applySuper(e.op, in);
    for (int i = 0; i < 4; ++i) {
      const double tr = trace(out.entries[i]).real();
      CHECK(tr == doctest::Approx(i == s ? 1.0 : 0.0).epsilon(1e-9));
    }

    std::vector<ComplexMatrix> postEntries(4, basisState(4, s));
    PredicateTuple post(e.op.outSig(), postEntries);
    PredicateTuple pre = wpSuper(e.op, post);
    CHECK(maxAbsDiff(pre.entries[0], pureState(uniformKet(2))) <= 1e-12);
  }

  // n = 1: one iteration, success 1/2.
  Elaboration g1 = elaborateProgram(buildGrover(1, 0));
  DensityState in1(Signature({2}), {pureState(uniformKet(1))});
  CHECK(trace(applySuper(g1.op, in1).entries[0]).real() ==
        doctest::Approx(0.5).epsilon(1e-9));

  // n = 3: two iterations, success 0.9453125 exactly.
  Elaboration g3 = elaborateProgram(buildGrover(3, 5));
  DensityState in3(Signature({8}), {pureState(uniformKet(3))});
  DensityState out3 = applySuper(g3.op, in3);
  CHECK(trace(out3.entries[5]).real() ==
        doctest::Approx(0.9453125).epsilon(1e-9));
  // wp expectation against the uniform input equals the forward probability.
  std::vector<ComplexMatrix> post3(8, basisState(8, 5));
  PredicateTuple pre3 = wpSuper(g3.op, PredicateTuple(g3.op.outSig(), post3));
  CHECK(expectation(in3, pre3) ==
        doctest::Approx(0.9453125).epsilon(1e-9));

  CHECK(throwsCode(ErrorCode::OutOfRange, [] { buildGrover(0, 0); }));
  CHECK(throwsCode(ErrorCode::OutOfRange, [] { buildGrover(6, 0); }));
  CHECK(throwsCode(ErrorCode::OutOfRange, [] { buildGrover(2, 4); }));
  CHECK(throwsCode(ErrorCode::OutOfRange, [] { buildGrover(2, -1); }));
}

TEST_CASE("flip loop: while elaboration terminates almost surely") {
  Program p = parse(kFlipWhile);
  Elaboration e = elaborateProgram(p);
  CHECK(e.op.inSig() == Signature({2}));
  CHECK(e.op.outSig() == Signature({2}));

  // wp of the identity postcondition is the identity within the truncation
  // tolerance: the loop terminates with probability one.
  PredicateTuple pre = wpSuper(e.op, PredicateTuple::identity(Signature({2})));
  CHECK(maxAbsDiff(pre.entries[0], ComplexMatrix::identity(2)) <= 1e-6);

  // The spectator qubit r passes through untouched.
  RandomGen rng(55);
  for (int t = 0; t < 5; ++t) {
    DensityState s = rng.randomState(Signature({2}), true);
    DensityState out = applySuper(e.op, s);
    CHECK(maxAbsDiff(out.entries[0], s.entries[0]) <= 1e-6);
  }

  // A tight iteration budget stops the truncation early.
  CHECK(throwsCode(ErrorCode::NonConvergent, [&p] {
    ElabOptions opts;
    opts.loopMaxIter = 2;
    elaborateProgram(p, opts);
  }));
}

TEST_CASE("flip loop: recursion agrees with the loop encoding") {
  Elaboration loop = elaborateProgram(parse(kFlipWhile));
  Elaboration rec = elaborateProgram(parse(kFlipRec));
  CHECK(rec.op.inSig() == Signature({2}));
  CHECK(rec.op.outSig() == Signature({2}));
  CHECK(superChoiDistance(rec.op, loop.op) <= 1e-6);
  CHECK(superChoiDistance(rec.op, Superoperator::identity(Signature({2}))) <=
        1e-6);

  // An immediately self-calling rec is the everywhere-zero map.
  Elaboration bottom = elaborateProgram(parse("input r : qbit\nrec f { call f }"));
  CHECK(superChoiMagnitude(bottom.op) == 0.0);

  // The fixpoint engine's iteration cap propagates.
  CHECK(throwsCode(ErrorCode::NonConvergent, [] {
    ElabOptions opts;
    opts.recMaxIter = 4;
    elaborateProgram(parse(kFlipRec), opts);
  }));
}

TEST_CASE("elaboration is compositional at statement boundaries") {
  const std::string full =
      "input r : qbit\nnew qbit q := 0\nq *= H\nmeasure q as c\ndiscard q\n"
      "discard c\n";
  Program p = parse(full);
  Elaboration whole = elaborateProgram(p);

  auto declFor = [](const TypingContext& ctx) {
    std::vector<InputDecl> decls;
    for (const ContextEntry& e : ctx.entries()) {
      decls.push_back({e.name, e.isQbit, e.width, {}});
    }
    return decls;
  };

  RandomGen rng(77);
  for (size_t cut = 0; cut <= p.body.size(); ++cut) {
    CAPTURE(cut);
    Program head;
    head.inputs = p.inputs;
    head.body.assign(p.body.begin(), p.body.begin() + cut);
    Elaboration first = elaborateProgram(head);

    Program tail;
    tail.inputs = declFor(first.outputContext);
    tail.body.assign(p.body.begin() + cut, p.body.end());
    Elaboration second = elaborateProgram(tail);

    Superoperator glued = seqCompose(first.op, second.op);
    CHECK(superChoiDistance(glued, whole.op) <= 1e-10);
    for (int t = 0; t < 10; ++t) {
      DensityState s = rng.randomState(whole.op.inSig(), true);
      DensityState viaGlued = applySuper(glued, s);
      DensityState viaWhole = applySuper(whole.op, s);
      for (int k = 0; k < viaWhole.sig.size(); ++k) {
        CHECK(maxAbsDiff(viaGlued.entries[k], viaWhole.entries[k]) <= 1e-10);
      }
    }
  }
}

TEST_CASE("every example program passes the duality check") {
  std::vector<Superoperator> ops;
  ops.push_back(elaborateProgram(buildCoin(1)).op);
  ops.push_back(elaborateProgram(buildCoin(2)).op);
  ops.push_back(elaborateProgram(buildGrover(1, 1)).op);
  ops.push_back(elaborateProgram(buildGrover(2, 3)).op);
  ops.push_back(elaborateProgram(buildGrover(3, 5)).op);
  ops.push_back(elaborateProgram(buildBellStabilizer().program).op);
  ops.push_back(elaborateProgram(parse(kFlipWhile)).op);
  ops.push_back(elaborateProgram(parse(kFlipRec)).op);
  for (size_t k = 0; k < ops.size(); ++k) {
    CAPTURE(k);
    DualityReport report = dualityCheck(ops[k], 100, 0x9e3779b9ULL + k);
    CHECK(report.pass);
    CHECK(report.maxResidual <= 1e-9);
    // Elaborated programs are valid maps.
    CHECK(validateSuper(ops[k]).pass);
  }
}
