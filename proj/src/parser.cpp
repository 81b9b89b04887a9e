#include "qwp/parser.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "qwp/error.hpp"

namespace qwp {

namespace {

enum class TokKind {
  Ident,
  Number,
  Imag,     // numeric literal with an immediate `i` suffix
  LBrace,
  RBrace,
  LBracket,
  RBracket,
  LParen,
  RParen,
  Comma,
  Colon,
  Plus,
  Minus,
  Assign,   // :=
  ApplyOp,  // *=
  Terminator,
  End,
};

struct Token {
  TokKind kind;
  std::string text;
  double value = 0.0;
  bool isInteger = false;
  long intValue = 0;
  int line = 1;
  int col = 1;
};

const std::set<std::string>& keywords() {
  static const std::set<std::string> kw = {
      "input", "new",     "bit",   "qbit", "measure", "as",   "else",
      "merge", "discard", "repeat", "while", "rec",    "call"};
  return kw;
}

const std::set<std::string>& builtinNames() {
  static const std::set<std::string> names = {"H",   "X",      "Y",      "Z",
                                              "CNOT", "IAM", "Oracle", "GroverG"};
  return names;
}

std::string describeToken(const Token& t) {
  switch (t.kind) {
    case TokKind::End: return "end of input";
    case TokKind::Terminator: return t.text == ";" ? "';'" : "end of line";
    case TokKind::Number:
    case TokKind::Imag:
    case TokKind::Ident: return "'" + t.text + "'";
    default: return "'" + t.text + "'";
  }
}

class Lexer {
 public:
  explicit Lexer(const std::string& text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      Token t = next();
      out.push_back(t);
      if (t.kind == TokKind::End) break;
    }
    return out;
  }

 private:
  [[noreturn]] void error(int line, int col, const std::string& what) {
    fail(ErrorCode::SyntaxError, "line " + std::to_string(line) + ", col " +
                                     std::to_string(col) + ": " + what);
  }

  char peek(size_t ahead = 0) const {
    return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
  }

  char advance() {
    char c = text_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  Token make(TokKind kind, std::string text, int line, int col) {
    Token t;
    t.kind = kind;
    t.text = std::move(text);
    t.line = line;
    t.col = col;
    return t;
  }

  Token next() {
    while (pos_ < text_.size()) {
      char c = peek();
      if (c == ' ' || c == '\t' || c == '\r') {
        advance();
        continue;
      }
      if (c == '/' && peek(1) == '/') {
        while (pos_ < text_.size() && peek() != '\n') advance();
        continue;
      }
      break;
    }
    const int line = line_, col = col_;
    if (pos_ >= text_.size()) return make(TokKind::End, "", line, col);
    char c = advance();
    switch (c) {
      case '\n': return make(TokKind::Terminator, "\\n", line, col);
      case ';': return make(TokKind::Terminator, ";", line, col);
      case '{': return make(TokKind::LBrace, "{", line, col);
      case '}': return make(TokKind::RBrace, "}", line, col);
      case '[': return make(TokKind::LBracket, "[", line, col);
      case ']': return make(TokKind::RBracket, "]", line, col);
      case '(': return make(TokKind::LParen, "(", line, col);
      case ')': return make(TokKind::RParen, ")", line, col);
      case ',': return make(TokKind::Comma, ",", line, col);
      case '+': return make(TokKind::Plus, "+", line, col);
      case '-': return make(TokKind::Minus, "-", line, col);
      case ':':
        if (peek() == '=') {
          advance();
          return make(TokKind::Assign, ":=", line, col);
        }
        return make(TokKind::Colon, ":", line, col);
      case '*':
        if (peek() == '=') {
          advance();
          return make(TokKind::ApplyOp, "*=", line, col);
        }
        error(line, col, "unexpected character '*'");
      default: break;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string word(1, c);
      while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_') {
        word += advance();
      }
      return make(TokKind::Ident, std::move(word), line, col);
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::string num(1, c);
      bool isInt = true;
      while (std::isdigit(static_cast<unsigned char>(peek()))) num += advance();
      if (peek() == '.' &&
          std::isdigit(static_cast<unsigned char>(peek(1)))) {
        isInt = false;
        num += advance();
        while (std::isdigit(static_cast<unsigned char>(peek()))) num += advance();
      }
      if (peek() == 'e' || peek() == 'E') {
        size_t look = 1;
        if (peek(1) == '+' || peek(1) == '-') look = 2;
        if (std::isdigit(static_cast<unsigned char>(peek(look)))) {
          isInt = false;
          num += advance();
          if (peek() == '+' || peek() == '-') num += advance();
          while (std::isdigit(static_cast<unsigned char>(peek()))) {
            num += advance();
          }
        }
      }
      Token t = make(TokKind::Number, num, line, col);
      t.value = std::strtod(num.c_str(), nullptr);
      if (!std::isfinite(t.value)) error(line, col, "number out of range");
      t.isInteger = isInt;
      if (isInt) t.intValue = std::strtol(num.c_str(), nullptr, 10);
      // An immediate `i` marks an imaginary literal: 2i, 0.5i, 1e-3i.
      if (peek() == 'i' && !std::isalnum(static_cast<unsigned char>(peek(1))) &&
          peek(1) != '_') {
        advance();
        t.kind = TokKind::Imag;
        t.text += "i";
      }
      return t;
    }
    if (c == '=') {
      error(line, col, "unexpected character '=' (assignment is ':=')");
    }
    error(line, col, std::string("unexpected character '") + c + "'");
  }

  const std::string& text_;
  size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  Program run() {
    Program p;
    bool sawStatement = false;
    while (true) {
      skipTerminators();
      if (peek().kind == TokKind::End) break;
      if (atIdent("input")) {
        if (sawStatement) {
          error(peek(), "input declarations must precede statements");
        }
        p.inputs.push_back(parseInput());
      } else {
        p.body.push_back(parseStmt());
        sawStatement = true;
      }
      endStatement();
    }
    return p;
  }

 private:
  [[noreturn]] void error(const Token& t, const std::string& what) {
    fail(ErrorCode::SyntaxError, "line " + std::to_string(t.line) + ", col " +
                                     std::to_string(t.col) + ": " + what);
  }

  const Token& peek(size_t ahead = 0) const {
    size_t i = pos_ + ahead;
    if (i >= toks_.size()) i = toks_.size() - 1;
    return toks_[i];
  }

  Token take() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

  bool atIdent(const char* word) const {
    return peek().kind == TokKind::Ident && peek().text == word;
  }

  Token expect(TokKind kind, const std::string& what) {
    if (peek().kind != kind) {
      error(peek(), "expected " + what + ", found " + describeToken(peek()));
    }
    return take();
  }

  void skipTerminators() {
    while (peek().kind == TokKind::Terminator) take();
  }

  // A statement ends at a terminator, a closing brace, or end of input.
  void endStatement() {
    if (peek().kind == TokKind::Terminator) {
      take();
      return;
    }
    if (peek().kind == TokKind::RBrace || peek().kind == TokKind::End) return;
    error(peek(), "expected end of statement, found " + describeToken(peek()));
  }

  std::string expectName(const char* what) {
    Token t = expect(TokKind::Ident, what);
    if (keywords().count(t.text)) {
      error(t, "'" + t.text + "' is a keyword and cannot name a " +
                   std::string(what));
    }
    if (builtinNames().count(t.text)) {
      error(t, "'" + t.text + "' is a reserved unitary name");
    }
    return t.text;
  }

  long expectInt(const char* what) {
    Token t = expect(TokKind::Number, what);
    if (!t.isInteger) error(t, std::string(what) + " must be an integer");
    return t.intValue;
  }

  InputDecl parseInput() {
    InputDecl d;
    d.pos = {peek().line, peek().col};
    take();  // input
    d.name = expectName("input name");
    expect(TokKind::Colon, "':'");
    Token kind = expect(TokKind::Ident, "'bit' or 'qbit'");
    if (kind.text == "bit") {
      d.isQbit = false;
    } else if (kind.text == "qbit") {
      d.isQbit = true;
      if (peek().kind == TokKind::LBracket) {
        take();
        long w = expectInt("register width");
        if (w < 1) error(kind, "register width must be at least 1");
        d.width = static_cast<int>(w);
        expect(TokKind::RBracket, "']'");
      }
    } else {
      error(kind, "expected 'bit' or 'qbit', found " + describeToken(kind));
    }
    return d;
  }

  QubitRef parseQubitRef() {
    QubitRef q;
    Token t = expect(TokKind::Ident, "qubit name");
    if (keywords().count(t.text) || builtinNames().count(t.text)) {
      error(t, "expected qubit name, found " + describeToken(t));
    }
    q.name = t.text;
    if (peek().kind == TokKind::LBracket) {
      take();
      long idx = expectInt("register index");
      if (idx < 0) error(t, "register index must be non-negative");
      q.index = static_cast<int>(idx);
      expect(TokKind::RBracket, "']'");
    }
    return q;
  }

  Complex parseComplexEntry() {
    double sign = 1.0;
    if (peek().kind == TokKind::Minus) {
      take();
      sign = -1.0;
    } else if (peek().kind == TokKind::Plus) {
      take();
    }
    Token first = peek();
    if (first.kind == TokKind::Imag) {
      take();
      return Complex(0.0, sign * first.value);
    }
    if (first.kind != TokKind::Number) {
      error(first, "expected matrix entry, found " + describeToken(first));
    }
    take();
    double re = sign * first.value;
    if (peek().kind == TokKind::Plus || peek().kind == TokKind::Minus) {
      double imSign = peek().kind == TokKind::Plus ? 1.0 : -1.0;
      take();
      Token im = expect(TokKind::Imag, "imaginary part");
      return Complex(re, imSign * im.value);
    }
    return Complex(re, 0.0);
  }

  ComplexMatrix parseMatrix() {
    Token open = expect(TokKind::LBracket, "'['");
    std::vector<std::vector<Complex>> rows;
    while (true) {
      expect(TokKind::LBracket, "'[' starting a matrix row");
      std::vector<Complex> row;
      row.push_back(parseComplexEntry());
      while (peek().kind == TokKind::Comma) {
        take();
        row.push_back(parseComplexEntry());
      }
      expect(TokKind::RBracket, "']'");
      if (!rows.empty() && row.size() != rows.front().size()) {
        error(open, "matrix rows must have equal length");
      }
      rows.push_back(std::move(row));
      if (peek().kind == TokKind::Comma) {
        take();
        continue;
      }
      break;
    }
    expect(TokKind::RBracket, "']' closing the matrix");
    return ComplexMatrix::fromRows(rows);
  }

  UnitaryRef parseUnitary() {
    UnitaryRef u;
    if (peek().kind == TokKind::LBracket) {
      u.kind = UnitaryRef::Kind::Matrix;
      u.matrix = parseMatrix();
      return u;
    }
    Token t = expect(TokKind::Ident, "unitary name or matrix literal");
    if (!builtinNames().count(t.text)) {
      error(t, "'" + t.text + "' is not a builtin unitary");
    }
    u.kind = UnitaryRef::Kind::Builtin;
    u.name = t.text;
    size_t arity = 0;
    if (t.text == "IAM") arity = 1;
    if (t.text == "Oracle" || t.text == "GroverG") arity = 2;
    if (arity > 0) {
      expect(TokKind::LParen, "'('");
      u.params.push_back(static_cast<int>(expectInt("unitary parameter")));
      while (peek().kind == TokKind::Comma) {
        take();
        u.params.push_back(static_cast<int>(expectInt("unitary parameter")));
      }
      expect(TokKind::RParen, "')'");
      if (u.params.size() != arity) {
        error(t, t.text + " takes " + std::to_string(arity) +
                     (arity == 1 ? " parameter" : " parameters"));
      }
    }
    return u;
  }

  Block parseBlock() {
    expect(TokKind::LBrace, "'{'");
    Block b;
    while (true) {
      skipTerminators();
      if (peek().kind == TokKind::RBrace) break;
      if (peek().kind == TokKind::End) {
        error(peek(), "expected '}', found end of input");
      }
      b.push_back(parseStmt());
      if (peek().kind == TokKind::Terminator) {
        take();
      } else if (peek().kind == TokKind::End) {
        error(peek(), "expected '}', found end of input");
      } else if (peek().kind != TokKind::RBrace) {
        error(peek(),
              "expected end of statement, found " + describeToken(peek()));
      }
    }
    take();  // }
    return b;
  }

  Stmt parseStmt() {
    Stmt s;
    s.pos = {peek().line, peek().col};
    if (atIdent("new")) {
      take();
      Token kind = expect(TokKind::Ident, "'bit' or 'qbit'");
      if (kind.text == "bit") {
        s.kind = StmtKind::NewBit;
      } else if (kind.text == "qbit") {
        s.kind = StmtKind::NewQbit;
      } else {
        error(kind, "expected 'bit' or 'qbit', found " + describeToken(kind));
      }
      s.name = expectName(s.kind == StmtKind::NewBit ? "bit name" : "qubit name");
      expect(TokKind::Assign, "':='");
      Token v = expect(TokKind::Number, "initial value");
      if (!v.isInteger || (v.intValue != 0 && v.intValue != 1)) {
        error(v, "initial value must be 0 or 1");
      }
      s.value = static_cast<int>(v.intValue);
      return s;
    }
    if (atIdent("measure")) {
      take();
      s.kind = StmtKind::Measure;
      s.qubit = parseQubitRef();
      if (atIdent("as")) {
        take();
        s.outcomeName = expectName("outcome bit name");
      }
      if (peek().kind == TokKind::LBrace) {
        s.thenBlock = parseBlock();
        skipTerminators();
        if (!atIdent("else")) {
          error(peek(), "expected 'else' after measurement branch, found " +
                            describeToken(peek()));
        }
        take();
        s.elseBlock = parseBlock();
      }
      return s;
    }
    if (atIdent("merge")) {
      take();
      s.kind = StmtKind::Merge;
      return s;
    }
    if (atIdent("discard")) {
      take();
      s.kind = StmtKind::Discard;
      s.name = expectName("variable name");
      return s;
    }
    if (atIdent("repeat")) {
      take();
      s.kind = StmtKind::Repeat;
      long k = expectInt("repetition count");
      if (k < 0) error(peek(), "repetition count must be non-negative");
      s.value = static_cast<int>(k);
      s.body = parseBlock();
      return s;
    }
    if (atIdent("while")) {
      take();
      s.kind = StmtKind::While;
      s.name = expectName("bit name");
      s.body = parseBlock();
      return s;
    }
    if (atIdent("rec")) {
      take();
      s.kind = StmtKind::DefRec;
      s.name = expectName("procedure name");
      s.body = parseBlock();
      return s;
    }
    if (atIdent("call")) {
      take();
      s.kind = StmtKind::CallRec;
      s.name = expectName("procedure name");
      return s;
    }
    if (peek().kind == TokKind::Ident) {
      if (keywords().count(peek().text)) {
        error(peek(), "unexpected keyword '" + peek().text + "'");
      }
      s.kind = StmtKind::ApplyUnitary;
      s.targets.push_back(parseQubitRef());
      while (peek().kind == TokKind::Comma) {
        take();
        s.targets.push_back(parseQubitRef());
      }
      expect(TokKind::ApplyOp, "'*='");
      s.unitary = parseUnitary();
      return s;
    }
    error(peek(), "expected a statement, found " + describeToken(peek()));
  }

  std::vector<Token> toks_;
  size_t pos_ = 0;
};

// Declaration kinds tracked by the scope pass. Kind discipline beyond name
// resolution (measuring bits, while on qubits) is left to the elaborator.
struct VarInfo {
  bool isQbit;
  int width;
};

class ScopeChecker {
 public:
  void run(const Program& p) {
    std::map<std::string, VarInfo> live;
    for (const InputDecl& d : p.inputs) {
      if (live.count(d.name)) {
        error(d.pos, "'" + d.name + "' is already in scope");
      }
      live[d.name] = {d.isQbit, d.width};
    }
    checkBlock(p.body, live);
  }

 private:
  [[noreturn]] void error(const SourcePos& pos, const std::string& what) {
    fail(ErrorCode::ScopeError, "line " + std::to_string(pos.line) + ", col " +
                                    std::to_string(pos.col) + ": " + what);
  }

  void checkRef(const QubitRef& q, const std::map<std::string, VarInfo>& live,
                const SourcePos& pos) {
    auto it = live.find(q.name);
    if (it == live.end()) {
      error(pos, "'" + q.name + "' is not in scope");
    }
    if (q.index >= 0 && q.index >= it->second.width) {
      error(pos, "index " + std::to_string(q.index) + " out of range for '" +
                     q.name + "' of width " +
                     std::to_string(it->second.width));
    }
  }

  void checkBlock(const Block& b, std::map<std::string, VarInfo>& live) {
    for (const Stmt& s : b) checkStmt(s, live);
  }

  void checkStmt(const Stmt& s, std::map<std::string, VarInfo>& live) {
    switch (s.kind) {
      case StmtKind::NewBit:
      case StmtKind::NewQbit: {
        if (live.count(s.name) || recs_.count(s.name)) {
          error(s.pos, "'" + s.name + "' is already in scope");
        }
        live[s.name] = {s.kind == StmtKind::NewQbit, 1};
        break;
      }
      case StmtKind::ApplyUnitary: {
        for (const QubitRef& q : s.targets) checkRef(q, live, s.pos);
        break;
      }
      case StmtKind::Measure: {
        checkRef(s.qubit, live, s.pos);
        std::map<std::string, VarInfo> thenLive = live;
        std::map<std::string, VarInfo> elseLive = live;
        checkBlock(s.thenBlock, thenLive);
        checkBlock(s.elseBlock, elseLive);
        // Branch context agreement is the elaborator's TypeError; resolve
        // names against the intersection so checking can continue.
        live.clear();
        for (const auto& kv : thenLive) {
          if (elseLive.count(kv.first)) live[kv.first] = kv.second;
        }
        if (!s.outcomeName.empty()) {
          if (live.count(s.outcomeName) || recs_.count(s.outcomeName)) {
            error(s.pos, "'" + s.outcomeName + "' is already in scope");
          }
          live[s.outcomeName] = {false, 1};
        }
        break;
      }
      case StmtKind::Merge:
        break;
      case StmtKind::Discard: {
        auto it = live.find(s.name);
        if (it == live.end()) {
          error(s.pos, "'" + s.name + "' is not in scope");
        }
        live.erase(it);
        break;
      }
      case StmtKind::Repeat:
      case StmtKind::While: {
        if (s.kind == StmtKind::While && !live.count(s.name)) {
          error(s.pos, "'" + s.name + "' is not in scope");
        }
        // Loop bodies must restore the context, so the entry scope carries on.
        std::map<std::string, VarInfo> inner = live;
        checkBlock(s.body, inner);
        break;
      }
      case StmtKind::CallRec: {
        if (!recs_.count(s.name)) {
          error(s.pos, "'" + s.name + "' is not an enclosing rec");
        }
        break;
      }
      case StmtKind::DefRec: {
        if (live.count(s.name) || recs_.count(s.name)) {
          error(s.pos, "'" + s.name + "' is already in scope");
        }
        recs_.insert(s.name);
        std::map<std::string, VarInfo> inner = live;
        checkBlock(s.body, inner);
        recs_.erase(s.name);
        break;
      }
    }
  }

  std::set<std::string> recs_;
};

}  // namespace

Program parse(const std::string& text) {
  Lexer lexer(text);
  Parser parser(lexer.run());
  Program p = parser.run();
  ScopeChecker checker;
  checker.run(p);
  return p;
}

}  // namespace qwp
