#ifndef QWP_PARSER_HPP
#define QWP_PARSER_HPP

#include <string>

#include "qwp/ast.hpp"

namespace qwp {

// Parses program text into an AST and scope-checks it: every name must be
// declared before use, declarations must not collide or shadow reserved
// words, register indices must stay in range, and `call` must refer to an
// enclosing `rec`. Throws SyntaxError (with line/col and the expected token)
// or ScopeError. Context and kind discipline is the elaborator's job.
Program parse(const std::string& text);

}  // namespace qwp

#endif
