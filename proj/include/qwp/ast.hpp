#ifndef QWP_AST_HPP
#define QWP_AST_HPP

#include <string>
#include <vector>

#include "qwp/complex_matrix.hpp"

namespace qwp {

struct SourcePos {
  int line = 0;  // 1-based; 0 means synthesized (builder output)
  int col = 0;
};

// Reference to a unitary: a reserved builtin name with optional integer
// parameters, or an inline matrix literal.
struct UnitaryRef {
  enum class Kind { Builtin, Matrix };
  Kind kind = Kind::Builtin;
  std::string name;          // H, X, Y, Z, CNOT, IAM, Oracle, GroverG
  std::vector<int> params;   // IAM(n), Oracle(n, s), GroverG(n, s)
  ComplexMatrix matrix = ComplexMatrix::zero(1, 1);
};

// A qubit operand: a scalar name, a register element name[index], or a bare
// register name standing for all of its qubits in order.
struct QubitRef {
  std::string name;
  int index = -1;  // -1: the whole variable
};

enum class StmtKind {
  NewBit,        // new bit x := 0|1
  NewQbit,       // new qbit q := 0|1
  ApplyUnitary,  // targets *= U
  Measure,       // measure q [as b] [{ then } else { else }]
  Merge,         // merge
  Discard,       // discard x
  Repeat,        // repeat k { body }
  While,         // while b { body }
  CallRec,       // call f
  DefRec,        // rec f { body }
};

struct Stmt;
using Block = std::vector<Stmt>;

struct Stmt {
  StmtKind kind;
  SourcePos pos;
  std::string name;              // variable or procedure name
  int value = 0;                 // NewBit/NewQbit initial value, Repeat count
  std::vector<QubitRef> targets; // ApplyUnitary operands
  UnitaryRef unitary;            // ApplyUnitary
  QubitRef qubit;                // Measure target
  std::string outcomeName;       // Measure `as` binding; empty when anonymous
  Block thenBlock;               // Measure outcome-0 branch
  Block elseBlock;               // Measure outcome-1 branch
  Block body;                    // Repeat/While/DefRec
};

struct InputDecl {
  std::string name;
  bool isQbit = true;
  int width = 1;  // qbit[n] registers; bits and plain qbits have width 1
  SourcePos pos;
};

struct Program {
  std::vector<InputDecl> inputs;
  Block body;
};

// Canonical concrete syntax: headers first, one statement per line, blocks
// indented by two spaces, `} else {` joined. Reparses to an equal AST.
std::string printProgram(const Program& p);

// Structural equality ignoring source positions.
bool astEquals(const Program& a, const Program& b);

// Deterministic single-line S-expression dump, used for golden AST tests.
std::string dumpAst(const Program& p);

}  // namespace qwp

#endif
