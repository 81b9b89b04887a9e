#include "qwp/programs.hpp"

#include "qwp/error.hpp"
#include "qwp/gates.hpp"

namespace qwp {

namespace {

Stmt applyStmt(std::vector<QubitRef> targets, UnitaryRef u) {
  Stmt s;
  s.kind = StmtKind::ApplyUnitary;
  s.targets = std::move(targets);
  s.unitary = std::move(u);
  return s;
}

UnitaryRef builtin(const char* name, std::vector<int> params = {}) {
  UnitaryRef u;
  u.kind = UnitaryRef::Kind::Builtin;
  u.name = name;
  u.params = std::move(params);
  return u;
}

}  // namespace

Program buildCoin(int registerQubits) {
  if (registerQubits < 1 || registerQubits > 8) {
    fail(ErrorCode::OutOfRange, "coin register width must be in [1, 8]");
  }
  Program p;
  p.inputs.push_back({"r", true, registerQubits, {}});

  Stmt alloc;
  alloc.kind = StmtKind::NewQbit;
  alloc.name = "q";
  alloc.value = 0;
  p.body.push_back(alloc);

  p.body.push_back(applyStmt({{"q", -1}}, builtin("H")));

  Stmt meas;
  meas.kind = StmtKind::Measure;
  meas.qubit = {"q", -1};
  p.body.push_back(meas);

  Stmt drop;
  drop.kind = StmtKind::Discard;
  drop.name = "q";
  p.body.push_back(drop);
  return p;
}

Program buildGrover(int n, int s) {
  if (n < 1 || n > 5) {
    fail(ErrorCode::OutOfRange, "grover register size must be in [1, 5]");
  }
  if (s < 0 || s >= (1 << n)) {
    fail(ErrorCode::OutOfRange, "marked state out of range");
  }
  Program p;
  p.inputs.push_back({"q", true, n, {}});

  Stmt loop;
  loop.kind = StmtKind::Repeat;
  loop.value = gates::groverIterationCount(n);
  loop.body.push_back(applyStmt({{"q", -1}}, builtin("GroverG", {n, s})));
  p.body.push_back(loop);

  // Measure from the least significant qubit up: each outcome becomes the
  // most significant branch bit, so the final branch index is the basis
  // index of the measured register.
  for (int k = n - 1; k >= 0; --k) {
    Stmt meas;
    meas.kind = StmtKind::Measure;
    meas.qubit = {"q", k};
    p.body.push_back(meas);
  }
  return p;
}

BellStabilizer buildBellStabilizer() {
  BellStabilizer b;
  b.program.inputs.push_back({"a", true, 1, {}});
  b.program.inputs.push_back({"b", true, 1, {}});
  b.program.body.push_back(applyStmt({{"a", -1}}, builtin("H")));
  b.program.body.push_back(applyStmt({{"a", -1}, {"b", -1}}, builtin("CNOT")));

  const ComplexMatrix id2 = ComplexMatrix::identity(2);
  b.unitary = multiply(gates::cnot(), tensor(gates::hadamard(), id2));
  b.generators = {tensor(gates::pauliZ(), gates::pauliZ()),
                  tensor(gates::pauliX(), gates::pauliX())};
  b.expectedPre = {tensor(id2, gates::pauliZ()),
                   tensor(gates::pauliZ(), id2)};
  return b;
}

}  // namespace qwp
