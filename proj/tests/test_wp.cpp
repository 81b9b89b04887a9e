#include <cmath>
#include <vector>

#include "doctest.h"
#include "qwp/gates.hpp"
#include "qwp/random_gen.hpp"
#include "qwp/wp.hpp"

using namespace qwp;

namespace {

ComplexMatrix plusProjector() {
  return ComplexMatrix::fromRows({{0.5, 0.5}, {0.5, 0.5}});
}

// measure one qubit: branch v applies P_v.
Superoperator measureSuper() {
  return Superoperator(Signature({2}), Signature({2, 2}),
                       {{KrausChannel(2, 2, {gates::basisProjector(2, 0)})},
                        {KrausChannel(2, 2, {gates::basisProjector(2, 1)})}});
}

// discard the most significant qubit of a 2d-space: partial trace.
KrausChannel discardTopQubit(int d) {
  ComplexMatrix a0 = ComplexMatrix::zero(d, 2 * d);
  ComplexMatrix a1 = ComplexMatrix::zero(d, 2 * d);
  for (int i = 0; i < d; ++i) {
    a0(i, i) = 1.0;
    a1(i, d + i) = 1.0;
  }
  return KrausChannel(2 * d, d, {a0, a1});
}

// allocate a fresh most significant qubit in |v>.
KrausChannel allocTopQubit(int d, int v) {
  ComplexMatrix k = ComplexMatrix::zero(2 * d, d);
  for (int i = 0; i < d; ++i) k(v * d + i, i) = 1.0;
  return KrausChannel(d, 2 * d, {k});
}

Superoperator singleBlock(const KrausChannel& c) {
  return Superoperator(Signature({c.inDim}), Signature({c.outDim}), {{c}});
}

// Scalar flip-until-0 loop: enter unconditionally, each pass exits with
// weight 1/2 and feeds back with weight 1/2.
LoopDecomposition flipLoop() {
  double r = std::sqrt(0.5);
  Superoperator e11 = Superoperator::zero(Signature({1}), Signature({1}));
  Superoperator e12 = Superoperator::identity(Signature({1}));
  Superoperator e21 = singleBlock(
      KrausChannel(1, 1, {ComplexMatrix::fromRows({{r}})}));
  Superoperator e22 = singleBlock(
      KrausChannel(1, 1, {ComplexMatrix::fromRows({{r}})}));
  return LoopDecomposition::fromParts(e11, e12, e21, e22);
}

}  // namespace

TEST_CASE("wpChannel is the adjoint operator sum") {
  RandomGen rng(31);
  ComplexMatrix m = rng.randomPredicate(Signature({3})).entries[0];
  CHECK(maxAbsDiff(wpChannel(KrausChannel::identity(3), m), m) == 0.0);
  CHECK(maxAbs(wpChannel(KrausChannel::zero(3, 3), m)) == 0.0);  // wp(0) = 0

  ComplexMatrix pre = wpChannel(KrausChannel(2, 2, {gates::hadamard()}),
                                gates::basisProjector(2, 0));
  CHECK(maxAbsDiff(pre, plusProjector()) <= 1e-15);

  CHECK_THROWS_AS(wpChannel(KrausChannel::identity(2),
                            ComplexMatrix::identity(3)),
                  Error);
  CHECK_THROWS_AS(wpChannel(KrausChannel::identity(2),
                            ComplexMatrix::fromRows({{0.0, 1.0}, {0.0, 0.0}})),
                  Error);
}

TEST_CASE("wpChannel accepts Hermitian observables beyond predicates") {
  // X Z X = -Z: the postcondition has eigenvalue -1 and is still mapped
  // exactly, which the stabilizer workflow depends on.
  ComplexMatrix pre =
      wpChannel(KrausChannel(2, 2, {gates::pauliX()}), gates::pauliZ());
  CHECK(maxAbsDiff(pre, -1.0 * gates::pauliZ()) == 0.0);
}

TEST_CASE("wpSuper on measurement is the projector sandwich") {
  RandomGen rng(32);
  for (int t = 0; t < 20; ++t) {
    PredicateTuple post = rng.randomPredicate(Signature({2, 2}));
    PredicateTuple pre = wpSuper(measureSuper(), post);
    ComplexMatrix p0 = gates::basisProjector(2, 0);
    ComplexMatrix p1 = gates::basisProjector(2, 1);
    ComplexMatrix expected =
        p0 * post.entries[0] * p0 + p1 * post.entries[1] * p1;
    CHECK(pre.sig == Signature({2}));
    CHECK(maxAbsDiff(pre.entries[0], expected) <= 1e-12);
  }
}

TEST_CASE("wp of discarding a qubit doubles the predicate diagonally") {
  RandomGen rng(33);
  ComplexMatrix m = rng.randomPredicate(Signature({2})).entries[0];
  ComplexMatrix pre = wpChannel(discardTopQubit(2), m);
  ComplexMatrix expected = directSumEmbed({m, m});
  CHECK(maxAbsDiff(pre, expected) <= 1e-15);

  // Composed with a preceding measurement of that qubit, the sandwiched
  // corners cancel and the chain yields diag(M1, M2).
  Superoperator measureQ(
      Signature({4}), Signature({4, 4}),
      {{KrausChannel(4, 4, {tensor(gates::basisProjector(2, 0),
                                   ComplexMatrix::identity(2))})},
       {KrausChannel(4, 4, {tensor(gates::basisProjector(2, 1),
                                   ComplexMatrix::identity(2))})}});
  Superoperator discardBoth(
      Signature({4, 4}), Signature({2, 2}),
      {{discardTopQubit(2), KrausChannel::zero(4, 2)},
       {KrausChannel::zero(4, 2), discardTopQubit(2)}});
  Superoperator chain = seqCompose(measureQ, discardBoth);

  ComplexMatrix m1 = rng.randomPredicate(Signature({2})).entries[0];
  ComplexMatrix m2 = rng.randomPredicate(Signature({2})).entries[0];
  PredicateTuple pre2 = wpSuper(chain, PredicateTuple(Signature({2, 2}),
                                                      {m1, m2}));
  CHECK(maxAbsDiff(pre2.entries[0], directSumEmbed({m1, m2})) <= 1e-12);
}

TEST_CASE("wp of allocation reads the top-left block") {
  RandomGen rng(34);
  ComplexMatrix m1 = rng.randomPredicate(Signature({3})).entries[0];
  ComplexMatrix m2 = rng.randomPredicate(Signature({3})).entries[0];
  ComplexMatrix post = directSumEmbed({m1, m2});
  ComplexMatrix pre = wpChannel(allocTopQubit(3, 0), post);
  CHECK(maxAbsDiff(pre, m1) == 0.0);
  CHECK(maxAbsDiff(wpChannel(allocTopQubit(3, 1), post), m2) == 0.0);
}

TEST_CASE("isPrecondition compares against the weakest precondition") {
  RandomGen rng(35);
  Signature sig({2, 3});
  Superoperator f = rng.randomSuper(sig, sig, 2);
  PredicateTuple post = rng.randomPredicate(sig);
  PredicateTuple weakest = wpSuper(f, post);

  CHECK(isPrecondition(weakest, f, post));
  CHECK(isPrecondition(PredicateTuple::zero(sig), f, post));

  // Anything strictly above the weakest precondition is not a precondition.
  std::vector<ComplexMatrix> bumped;
  for (const auto& e : weakest.entries) {
    bumped.push_back(e + 1e-3 * ComplexMatrix::identity(e.rows()));
  }
  CHECK_FALSE(isPrecondition(PredicateTuple(sig, bumped), f, post));
  CHECK_THROWS_AS(
      isPrecondition(PredicateTuple::zero(Signature({5})), f, post), Error);
}

TEST_CASE("healthiness: wp outputs of valid superoperators are predicates") {
  RandomGen rng(36);
  for (int t = 0; t < 50; ++t) {
    Signature inSig({rng.uniformInt(2, 5)});
    Signature outSig({rng.uniformInt(2, 5), rng.uniformInt(2, 5)});
    Superoperator f = rng.randomSuper(inSig, outSig, 3);
    PredicateTuple pre = wpSuper(f, rng.randomPredicate(outSig));
    CHECK(validatePredicate(pre).pass);
  }
}

TEST_CASE("wp is monotone and linear") {
  RandomGen rng(37);
  for (int t = 0; t < 50; ++t) {
    int d = rng.uniformInt(2, 5);
    Signature sig({d});
    Superoperator f = rng.randomSuper(sig, sig, 3);

    ComplexMatrix m = rng.randomPredicate(sig).entries[0];
    ComplexMatrix gap = rng.randomPredicate(sig).entries[0];
    ComplexMatrix n = 0.5 * m + 0.5 * gap;  // m/2 <= n, both predicates
    ComplexMatrix wm = wpChannel(f.block(0, 0), 0.5 * m);
    ComplexMatrix wn = wpChannel(f.block(0, 0), n);
    CHECK(loewnerLeq(wm, wn, 1e-9));

    double a = rng.uniform(), b = 1.0 - a;
    ComplexMatrix combo = wpChannel(f.block(0, 0),
                                    ComplexMatrix(a * m + b * gap));
    ComplexMatrix split = ComplexMatrix(a * wpChannel(f.block(0, 0), m) +
                                        b * wpChannel(f.block(0, 0), gap));
    CHECK(maxAbsDiff(combo, split) <= 1e-10);
  }
}

TEST_CASE("sequential composition obeys the wp law") {
  RandomGen rng(38);
  Superoperator f = rng.randomSuper(Signature({2, 2}), Signature({3}), 2);
  Superoperator id = Superoperator::identity(Signature({3}));
  CHECK(superChoiDistance(seqCompose(f, id), f) <= 1e-12);

  // H then H is the identity in action.
  Superoperator h = singleBlock(KrausChannel(2, 2, {gates::hadamard()}));
  Superoperator hh = seqCompose(h, h);
  CHECK(superChoiDistance(hh, Superoperator::identity(Signature({2}))) <=
        1e-12);

  // Projective measurement is idempotent as a channel.
  KrausChannel meas(2, 2, {gates::basisProjector(2, 0),
                           gates::basisProjector(2, 1)});
  Superoperator m = singleBlock(meas);
  Superoperator mm = seqCompose(m, m);
  for (int t = 0; t < 10; ++t) {
    DensityState s = rng.randomState(Signature({2}));
    DensityState once = applySuper(m, s);
    DensityState twice = applySuper(mm, s);
    CHECK(maxAbsDiff(once.entries[0], twice.entries[0]) <= 1e-12);
  }

  for (int t = 0; t < 100; ++t) {
    Signature a({rng.uniformInt(2, 4)});
    Signature b({rng.uniformInt(2, 4), rng.uniformInt(2, 4)});
    Signature c({rng.uniformInt(2, 4)});
    Superoperator g1 = rng.randomSuper(a, b, 2);
    Superoperator g2 = rng.randomSuper(b, c, 2);
    PredicateTuple post = rng.randomPredicate(c);
    PredicateTuple direct = wpSuper(seqCompose(g1, g2), post);
    PredicateTuple nested = wpSuper(g1, wpSuper(g2, post));
    for (int k = 0; k < direct.sig.size(); ++k) {
      CHECK(maxAbsDiff(direct.entries[k], nested.entries[k]) <= 1e-9);
    }
  }
  CHECK_THROWS_AS(seqCompose(f, f), Error);
}

TEST_CASE("coproduct obeys the parallel wp law") {
  Superoperator id2 = Superoperator::identity(Signature({2}));
  CHECK(superChoiDistance(coproduct(id2, id2),
                          Superoperator::identity(Signature({2, 2}))) == 0.0);

  RandomGen rng(39);
  for (int t = 0; t < 100; ++t) {
    Signature a({rng.uniformInt(2, 4)}), b({rng.uniformInt(2, 4)});
    Signature c({rng.uniformInt(2, 4)}), d({rng.uniformInt(2, 4)});
    Superoperator f = rng.randomSuper(a, b, 2);
    Superoperator g = rng.randomSuper(c, d, 2);
    PredicateTuple m1 = rng.randomPredicate(b);
    PredicateTuple m2 = rng.randomPredicate(d);
    PredicateTuple joint = wpSuper(
        coproduct(f, g),
        PredicateTuple(Signature::concat(b, d),
                       {m1.entries[0], m2.entries[0]}));
    CHECK(maxAbsDiff(joint.entries[0], wpSuper(f, m1).entries[0]) <= 1e-12);
    CHECK(maxAbsDiff(joint.entries[1], wpSuper(g, m2).entries[0]) <= 1e-12);
  }
}

TEST_CASE("context extension by a classical bit duplicates the map") {
  RandomGen rng(40);
  Superoperator f = rng.randomSuper(Signature({2}), Signature({3}), 2);
  Superoperator lifted = extendClassicalBit(f);
  CHECK(lifted.inSig() == Signature({2, 2}));
  CHECK(lifted.outSig() == Signature({3, 3}));

  PredicateTuple m1 = rng.randomPredicate(Signature({3}));
  PredicateTuple m2 = rng.randomPredicate(Signature({3}));
  PredicateTuple pre = wpSuper(lifted,
                               PredicateTuple(Signature({3, 3}),
                                              {m1.entries[0], m2.entries[0]}));
  CHECK(maxAbsDiff(pre.entries[0], wpSuper(f, m1).entries[0]) <= 1e-12);
  CHECK(maxAbsDiff(pre.entries[1], wpSuper(f, m2).entries[0]) <= 1e-12);
}

TEST_CASE("context extension by a qubit acts on each block") {
  RandomGen rng(41);
  Superoperator id = Superoperator::identity(Signature({2}));
  CHECK(superChoiDistance(extendQuantumBit(id),
                          Superoperator::identity(Signature({4}))) == 0.0);

  Superoperator f = rng.randomSuper(Signature({2}), Signature({2}), 2);
  Superoperator lifted = extendQuantumBit(f);

  // Forward: each quadrant of the doubled space passes through f.
  ComplexMatrix g = rng.gaussianMatrix(4, 4);
  ComplexMatrix rho = ComplexMatrix((g.raw() * g.raw().adjoint()).eval());
  rho = ComplexMatrix((rho.raw() / rho.raw().trace().real()).eval());
  ComplexMatrix out = applyChannel(lifted.block(0, 0), rho);
  for (int bi = 0; bi < 2; ++bi) {
    for (int bj = 0; bj < 2; ++bj) {
      ComplexMatrix quad(2, 2), quadOut(2, 2);
      for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
          quad(i, j) = rho(2 * bi + i, 2 * bj + j);
          quadOut(i, j) = out(2 * bi + i, 2 * bj + j);
        }
      }
      CHECK(maxAbsDiff(applyChannel(f.block(0, 0), quad), quadOut) <= 1e-12);
    }
  }

  DualityReport rep = dualityCheck(lifted, 50, 404);
  CHECK(rep.pass);
}

TEST_CASE("duality holds for identity, measurement, and random channels") {
  DualityReport id = dualityCheck(Superoperator::identity(Signature({3})),
                                  50, 1);
  CHECK(id.maxResidual <= 1e-12);

  DualityReport meas = dualityCheck(measureSuper(), 100, 2);
  CHECK(meas.maxResidual <= 1e-10);

  RandomGen rng(42);
  DualityReport ch = dualityCheck(
      singleBlock(rng.randomChannel(4, 4, 3)), 200, 3);
  CHECK(ch.pass);
  CHECK(ch.maxResidual <= 1e-9);
  CHECK(ch.trials == 200);
}

TEST_CASE("transformerLeq decides the healthy-difference order") {
  PredicateTransformer id(Superoperator::identity(Signature({2})));
  PredicateTransformer halved(singleBlock(KrausChannel(
      2, 2, {std::sqrt(0.5) * ComplexMatrix::identity(2)})));
  PredicateTransformer zero(
      Superoperator::zero(Signature({2}), Signature({2})));

  CHECK(transformerLeq(id, id));
  CHECK(transformerLeq(zero, id));
  CHECK(transformerLeq(zero, halved));
  CHECK(transformerLeq(halved, id));
  CHECK_FALSE(transformerLeq(id, halved));

  // The adjoint-form Choi difference has eigenvalues {0, 0, 0, 1}.
  ComplexMatrix diff =
      choiMatrix(KrausChannel::identity(2)) -
      choiMatrix(KrausChannel(2, 2,
                              {std::sqrt(0.5) * ComplexMatrix::identity(2)}));
  EigenResult eig = hermEigen(diff);
  CHECK(eig.eigenvalues.front() == doctest::Approx(0.0));
  CHECK(eig.eigenvalues.back() == doctest::Approx(1.0));

  CHECK_THROWS_AS(
      transformerLeq(
          id, PredicateTransformer(Superoperator::identity(Signature({3})))),
      Error);
}

TEST_CASE("transformer healthiness mirrors channel validity") {
  PredicateTransformer t(measureSuper());
  CHECK(t.healthiness().pass);
  PredicateTransformer bad(singleBlock(
      KrausChannel(2, 2, {std::sqrt(2.0) * ComplexMatrix::identity(2)})));
  CHECK_FALSE(bad.healthiness().pass);
}

TEST_CASE("monoidal trace with dead feedback is a finite sum") {
  RandomGen rng(43);
  Superoperator e11 = rng.randomSuper(Signature({2}), Signature({2}), 2);
  Superoperator e12 = rng.randomSuper(Signature({2}), Signature({3}), 2);
  Superoperator e21 = rng.randomSuper(Signature({3}), Signature({2}), 2);
  Superoperator e22 = Superoperator::zero(Signature({3}), Signature({3}));

  // Scale down so e11 + e21 o e12 stays trace-nonincreasing.
  auto shrink = [](const Superoperator& f) {
    std::vector<std::vector<KrausChannel>> blocks;
    for (int j = 0; j < f.outSig().size(); ++j) {
      std::vector<KrausChannel> row;
      for (int i = 0; i < f.inSig().size(); ++i) {
        std::vector<ComplexMatrix> ops;
        for (const auto& e : f.block(j, i).kraus) {
          ops.push_back(std::sqrt(0.5) * e);
        }
        row.push_back(KrausChannel(f.block(j, i).inDim, f.block(j, i).outDim,
                                   std::move(ops)));
      }
      blocks.push_back(std::move(row));
    }
    return Superoperator(f.inSig(), f.outSig(), std::move(blocks));
  };
  e11 = shrink(e11);
  e12 = shrink(e12);

  LoopDecomposition loop = LoopDecomposition::fromParts(e11, e12, e21, e22);
  Superoperator traced = monoidalTrace(loop);
  Superoperator expected = addSuper(e11, seqCompose(e12, e21));
  CHECK(superChoiDistance(traced, expected) <= 1e-12);

  LoopDecomposition dead = LoopDecomposition::fromParts(
      Superoperator::zero(Signature({2}), Signature({2})),
      Superoperator::zero(Signature({2}), Signature({3})),
      Superoperator::zero(Signature({3}), Signature({2})),
      Superoperator::zero(Signature({3}), Signature({3})));
  CHECK(superChoiMagnitude(monoidalTrace(dead)) == 0.0);
}

TEST_CASE("flip-until-0 terminates with probability one") {
  LoopDecomposition loop = flipLoop();

  // Partial sums follow the geometric series 1 - 2^-k.
  for (int k = 1; k <= 10; ++k) {
    Superoperator partial = monoidalTraceTruncated(loop, k);
    double weight = choiMatrix(partial.block(0, 0))(0, 0).real();
    CHECK(weight == doctest::Approx(1.0 - std::pow(2.0, -k)).epsilon(1e-12));
  }

  Superoperator total = monoidalTrace(loop);
  PredicateTuple wp = wpSuper(total, PredicateTuple::identity(Signature({1})));
  CHECK(std::abs(wp.entries[0](0, 0).real() - 1.0) <= 1e-9);

  // Partial sums climb in transformer order and are dominated by the limit.
  for (int k = 0; k < 6; ++k) {
    PredicateTransformer lo(monoidalTraceTruncated(loop, k));
    PredicateTransformer hi(monoidalTraceTruncated(loop, k + 1));
    CHECK(transformerLeq(lo, hi, 1e-8));
    CHECK(transformerLeq(lo, PredicateTransformer(total), 1e-8));
  }
}

TEST_CASE("truncated trace equals manual unrolling") {
  Superoperator e11 = Superoperator::zero(Signature({2}), Signature({2}));
  Superoperator e12 = Superoperator::identity(Signature({2}));
  KrausChannel half(2, 2, {std::sqrt(0.5) * gates::hadamard()});
  Superoperator e21 = singleBlock(half);
  Superoperator e22 = singleBlock(
      KrausChannel(2, 2, {std::sqrt(0.5) * gates::pauliX()}));
  LoopDecomposition loop = LoopDecomposition::fromParts(e11, e12, e21, e22);

  for (int k : {0, 1, 2, 5, 9}) {
    Superoperator truncated = monoidalTraceTruncated(loop, k);
    Superoperator unrolled = e11;
    Superoperator feed = e12;
    for (int i = 0; i < k; ++i) {
      unrolled = addSuper(unrolled, seqCompose(feed, e21));
      feed = seqCompose(feed, e22);
    }
    CHECK(superChoiDistance(truncated, unrolled) <= 1e-10);
  }
}

TEST_CASE("monoidal trace reports non-convergent feedback") {
  Superoperator id = Superoperator::identity(Signature({2}));
  LoopDecomposition loop = LoopDecomposition::fromParts(
      Superoperator::zero(Signature({2}), Signature({2})), id, id, id);
  bool threw = false;
  try {
    monoidalTrace(loop, 1e-10, 25);
  } catch (const Error& e) {
    threw = true;
    CHECK(e.code() == ErrorCode::NonConvergent);
  }
  CHECK(threw);
  CHECK_THROWS_AS(monoidalTrace(loop, -1.0, 25), Error);
  CHECK_THROWS_AS(monoidalTrace(loop, 1e-10, 0), Error);
}

TEST_CASE("loop decomposition validates its partition") {
  Superoperator id = Superoperator::identity(Signature({2, 2}));
  CHECK_THROWS_AS(LoopDecomposition(id, {0}, {0}, {0}, {1}), Error);
  CHECK_THROWS_AS(LoopDecomposition(id, {0}, {}, {0}, {1}), Error);
  LoopDecomposition ok(id, {0}, {1}, {0}, {1});
  CHECK(ok.e11().inSig() == Signature({2}));
  CHECK(ok.e22().inSig() == Signature({2}));
}

TEST_CASE("recursive fixpoints via Kleene iteration") {
  Signature sig({2});
  RandomGen rng(45);
  Superoperator constant = rng.randomSuper(sig, sig, 2);

  RecursiveSpec constSpec{sig, sig, [&](const Superoperator&) {
    return constant;
  }};
  Superoperator fixed = recursiveFixpoint(constSpec);
  CHECK(superChoiDistance(fixed, constant) <= 1e-12);

  RecursiveSpec idSpec{sig, sig, [](const Superoperator& x) { return x; }};
  Superoperator bottom = recursiveFixpoint(idSpec);
  CHECK(superChoiMagnitude(bottom) == 0.0);  // least solution: divergence
}

TEST_CASE("the coin loop agrees between recursion and monoidal trace") {
  Signature sig({2});
  KrausChannel half(2, 2, {std::sqrt(0.5) * ComplexMatrix::identity(2)});
  Superoperator halfId = singleBlock(half);

  // Phi(X) = (Id + X) / 2: flip, exit on heads, retry on tails.
  RecursiveSpec spec{sig, sig, [&](const Superoperator& x) {
    return addSuper(halfId, seqCompose(halfId, x));
  }};
  Superoperator viaRecursion = recursiveFixpoint(spec, 1e-10, 100000);

  LoopDecomposition loop = LoopDecomposition::fromParts(
      Superoperator::zero(sig, sig), Superoperator::identity(sig), halfId,
      halfId);
  Superoperator viaTrace = monoidalTrace(loop);

  CHECK(superChoiDistance(viaRecursion, viaTrace) <= 1e-6);
  CHECK(superChoiDistance(viaRecursion, Superoperator::identity(sig)) <=
        1e-6);
}

TEST_CASE("recursion rejects non-monotone and non-convergent bodies") {
  Signature sig({2});
  Superoperator id = Superoperator::identity(sig);

  // Grows then collapses: the second iterate drops below the first.
  RecursiveSpec bad{sig, sig, [&](const Superoperator& x) {
    if (superChoiMagnitude(x) < 0.5) return id;
    return Superoperator::zero(sig, sig);
  }};
  bool threwMono = false;
  try {
    recursiveFixpoint(bad);
  } catch (const Error& e) {
    threwMono = true;
    CHECK(e.code() == ErrorCode::NonMonotone);
  }
  CHECK(threwMono);

  KrausChannel half(2, 2, {std::sqrt(0.5) * ComplexMatrix::identity(2)});
  Superoperator halfId = singleBlock(half);
  RecursiveSpec slow{sig, sig, [&](const Superoperator& x) {
    return addSuper(halfId, seqCompose(halfId, x));
  }};
  bool threwConv = false;
  try {
    recursiveFixpoint(slow, 1e-10, 5);
  } catch (const Error& e) {
    threwConv = true;
    CHECK(e.code() == ErrorCode::NonConvergent);
  }
  CHECK(threwConv);

  RecursiveSpec wrongSig{sig, sig, [&](const Superoperator&) {
    return Superoperator::identity(Signature({3}));
  }};
  CHECK_THROWS_AS(recursiveFixpoint(wrongSig), Error);
}

TEST_CASE("stabilizerCheck decides +1 eigenvectors") {
  RandomGen rng(46);
  ComplexMatrix psi = rng.randomPureKet(4);
  CHECK(stabilizerCheck(ComplexMatrix::identity(4), psi));

  ComplexMatrix bell = ComplexMatrix::columnVector(
      {std::sqrt(0.5), 0.0, 0.0, std::sqrt(0.5)});
  CHECK(stabilizerCheck(tensor(gates::pauliZ(), gates::pauliZ()), bell));
  CHECK(stabilizerCheck(tensor(gates::pauliX(), gates::pauliX()), bell));
  CHECK_FALSE(stabilizerCheck(tensor(gates::pauliZ(), gates::pauliX()), bell));

  ComplexMatrix zero2 = ComplexMatrix::columnVector({1.0, 0.0});
  CHECK_FALSE(stabilizerCheck(gates::pauliX(), zero2));
  CHECK(stabilizerCheck(gates::pauliZ(), zero2));

  CHECK_THROWS_AS(stabilizerCheck(2.0 * ComplexMatrix::identity(2), zero2),
                  Error);
  CHECK_THROWS_AS(
      stabilizerCheck(ComplexMatrix::identity(2),
                      ComplexMatrix::columnVector({0.5, 0.5})),
      Error);
}
