#include "qwp/ast.hpp"

#include <cstdio>
#include <cstdlib>
#include <string>

namespace qwp {

namespace {

// Shortest decimal form that parses back to the same double.
std::string formatDouble(double v) {
  char buf[64];
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

std::string formatComplex(const Complex& z) {
  const double re = z.real(), im = z.imag();
  if (im == 0.0) return formatDouble(re);
  if (re == 0.0) return formatDouble(im) + "i";
  if (im < 0.0) return formatDouble(re) + "-" + formatDouble(-im) + "i";
  return formatDouble(re) + "+" + formatDouble(im) + "i";
}

std::string formatQubitRef(const QubitRef& q) {
  if (q.index < 0) return q.name;
  return q.name + "[" + std::to_string(q.index) + "]";
}

std::string formatMatrix(const ComplexMatrix& m) {
  std::string out = "[";
  for (int r = 0; r < m.rows(); ++r) {
    if (r) out += ", ";
    out += "[";
    for (int c = 0; c < m.cols(); ++c) {
      if (c) out += ", ";
      out += formatComplex(m(r, c));
    }
    out += "]";
  }
  return out + "]";
}

std::string formatUnitary(const UnitaryRef& u) {
  if (u.kind == UnitaryRef::Kind::Matrix) return formatMatrix(u.matrix);
  std::string out = u.name;
  if (!u.params.empty()) {
    out += "(";
    for (size_t i = 0; i < u.params.size(); ++i) {
      if (i) out += ", ";
      out += std::to_string(u.params[i]);
    }
    out += ")";
  }
  return out;
}

void printBlock(const Block& b, int indent, std::string& out);

void printStmt(const Stmt& s, int indent, std::string& out) {
  const std::string pad(2 * indent, ' ');
  out += pad;
  switch (s.kind) {
    case StmtKind::NewBit:
      out += "new bit " + s.name + " := " + std::to_string(s.value);
      break;
    case StmtKind::NewQbit:
      out += "new qbit " + s.name + " := " + std::to_string(s.value);
      break;
    case StmtKind::ApplyUnitary: {
      for (size_t i = 0; i < s.targets.size(); ++i) {
        if (i) out += ", ";
        out += formatQubitRef(s.targets[i]);
      }
      out += " *= " + formatUnitary(s.unitary);
      break;
    }
    case StmtKind::Measure: {
      out += "measure " + formatQubitRef(s.qubit);
      if (!s.outcomeName.empty()) out += " as " + s.outcomeName;
      if (!s.thenBlock.empty() || !s.elseBlock.empty()) {
        out += " ";
        printBlock(s.thenBlock, indent, out);
        out += " else ";
        printBlock(s.elseBlock, indent, out);
      }
      break;
    }
    case StmtKind::Merge:
      out += "merge";
      break;
    case StmtKind::Discard:
      out += "discard " + s.name;
      break;
    case StmtKind::Repeat:
      out += "repeat " + std::to_string(s.value) + " ";
      printBlock(s.body, indent, out);
      break;
    case StmtKind::While:
      out += "while " + s.name + " ";
      printBlock(s.body, indent, out);
      break;
    case StmtKind::CallRec:
      out += "call " + s.name;
      break;
    case StmtKind::DefRec:
      out += "rec " + s.name + " ";
      printBlock(s.body, indent, out);
      break;
  }
  out += "\n";
}

void printBlock(const Block& b, int indent, std::string& out) {
  if (b.empty()) {
    out += "{}";
    return;
  }
  out += "{\n";
  for (const Stmt& s : b) printStmt(s, indent + 1, out);
  out += std::string(2 * indent, ' ') + "}";
}

bool matrixEquals(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  return maxAbsDiff(a, b) == 0.0;
}

bool unitaryEquals(const UnitaryRef& a, const UnitaryRef& b) {
  if (a.kind != b.kind) return false;
  if (a.kind == UnitaryRef::Kind::Matrix) return matrixEquals(a.matrix, b.matrix);
  return a.name == b.name && a.params == b.params;
}

bool qubitRefEquals(const QubitRef& a, const QubitRef& b) {
  return a.name == b.name && a.index == b.index;
}

bool blockEquals(const Block& a, const Block& b);

bool stmtEquals(const Stmt& a, const Stmt& b) {
  if (a.kind != b.kind) return false;
  if (a.name != b.name || a.value != b.value) return false;
  if (a.targets.size() != b.targets.size()) return false;
  for (size_t i = 0; i < a.targets.size(); ++i) {
    if (!qubitRefEquals(a.targets[i], b.targets[i])) return false;
  }
  if (!unitaryEquals(a.unitary, b.unitary)) return false;
  if (!qubitRefEquals(a.qubit, b.qubit)) return false;
  if (a.outcomeName != b.outcomeName) return false;
  return blockEquals(a.thenBlock, b.thenBlock) &&
         blockEquals(a.elseBlock, b.elseBlock) && blockEquals(a.body, b.body);
}

bool blockEquals(const Block& a, const Block& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i) {
    if (!stmtEquals(a[i], b[i])) return false;
  }
  return true;
}

void dumpBlock(const Block& b, std::string& out);

void dumpStmt(const Stmt& s, std::string& out) {
  switch (s.kind) {
    case StmtKind::NewBit:
      out += "(new-bit " + s.name + " " + std::to_string(s.value) + ")";
      break;
    case StmtKind::NewQbit:
      out += "(new-qbit " + s.name + " " + std::to_string(s.value) + ")";
      break;
    case StmtKind::ApplyUnitary: {
      out += "(apply (";
      for (size_t i = 0; i < s.targets.size(); ++i) {
        if (i) out += " ";
        out += formatQubitRef(s.targets[i]);
      }
      out += ") ";
      if (s.unitary.kind == UnitaryRef::Kind::Matrix) {
        const ComplexMatrix& m = s.unitary.matrix;
        out += "(matrix " + std::to_string(m.rows()) + " " +
             std::to_string(m.cols());
        for (int r = 0; r < m.rows(); ++r) {
          for (int c = 0; c < m.cols(); ++c) {
            out += " " + formatComplex(m(r, c));
          }
        }
        out += ")";
      } else {
        out += formatUnitary(s.unitary);
      }
      out += ")";
      break;
    }
    case StmtKind::Measure:
      out += "(measure " + formatQubitRef(s.qubit) + " " +
             (s.outcomeName.empty() ? "_" : s.outcomeName) + " ";
      dumpBlock(s.thenBlock, out);
      out += " ";
      dumpBlock(s.elseBlock, out);
      out += ")";
      break;
    case StmtKind::Merge:
      out += "(merge)";
      break;
    case StmtKind::Discard:
      out += "(discard " + s.name + ")";
      break;
    case StmtKind::Repeat:
      out += "(repeat " + std::to_string(s.value) + " ";
      dumpBlock(s.body, out);
      out += ")";
      break;
    case StmtKind::While:
      out += "(while " + s.name + " ";
      dumpBlock(s.body, out);
      out += ")";
      break;
    case StmtKind::CallRec:
      out += "(call " + s.name + ")";
      break;
    case StmtKind::DefRec:
      out += "(rec " + s.name + " ";
      dumpBlock(s.body, out);
      out += ")";
      break;
  }
}

void dumpBlock(const Block& b, std::string& out) {
  out += "(";
  for (size_t i = 0; i < b.size(); ++i) {
    if (i) out += " ";
    dumpStmt(b[i], out);
  }
  out += ")";
}

}  // namespace

std::string printProgram(const Program& p) {
  std::string out;
  for (const InputDecl& d : p.inputs) {
    out += "input " + d.name + " : " + (d.isQbit ? "qbit" : "bit");
    if (d.isQbit && d.width > 1) out += "[" + std::to_string(d.width) + "]";
    out += "\n";
  }
  if (!p.inputs.empty() && !p.body.empty()) out += "\n";
  for (const Stmt& s : p.body) printStmt(s, 0, out);
  return out;
}

bool astEquals(const Program& a, const Program& b) {
  if (a.inputs.size() != b.inputs.size()) return false;
  for (size_t i = 0; i < a.inputs.size(); ++i) {
    const InputDecl& x = a.inputs[i];
    const InputDecl& y = b.inputs[i];
    if (x.name != y.name || x.isQbit != y.isQbit || x.width != y.width) {
      return false;
    }
  }
  return blockEquals(a.body, b.body);
}

std::string dumpAst(const Program& p) {
  std::string out = "(program (inputs";
  for (const InputDecl& d : p.inputs) {
    out += " (" + std::string(d.isQbit ? "qbit" : "bit") + " " + d.name;
    if (d.isQbit) out += " " + std::to_string(d.width);
    out += ")";
  }
  out += ") (body";
  for (const Stmt& s : p.body) {
    out += " ";
    dumpStmt(s, out);
  }
  return out + "))";
}

}  // namespace qwp
