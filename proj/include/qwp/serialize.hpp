#ifndef QWP_SERIALIZE_HPP
#define QWP_SERIALIZE_HPP

#include <string>

#include "json.hpp"
#include "qwp/domain.hpp"
#include "qwp/wp.hpp"

namespace qwp {

using Json = nlohmann::json;

// Wire formats. Matrices are row-major complex pairs:
//   {"rows": n, "cols": m, "entries": [[re, im], ...]}
// States and predicates share one tuple shape:
//   {"sig": [d0, ...], "entries": [<matrix>, ...]}
// Channels list Kraus operators:
//   {"in": d, "out": d', "kraus": [<matrix>, ...]}
// Superoperators are block matrices of channels, indexed blocks[j][i]:
//   {"in_sig": [...], "out_sig": [...], "blocks": [[<channel>, ...], ...]}
// Reports flatten to {"pass", "max_residual", "trials", "violations"}.
Json toJson(const ComplexMatrix& m);
Json toJson(const DensityState& s);
Json toJson(const PredicateTuple& p);
Json toJson(const KrausChannel& c);
Json toJson(const Superoperator& f);
Json toJson(const DualityReport& r);
// trials records how many objects the validation walked; reports built from a
// single object pass 1.
Json toJson(const ValidationReport& r, int trials);

// Readers throw FormatError naming the offending field. Extra fields are
// ignored so reports that embed these shapes stay readable.
ComplexMatrix matrixFromJson(const Json& j);
DensityState stateFromJson(const Json& j);
PredicateTuple predicateFromJson(const Json& j);
KrausChannel channelFromJson(const Json& j);
Superoperator superFromJson(const Json& j);

// Compact dump with lexicographically ordered keys and shortest round-trip
// number formatting; equal values always dump to equal bytes.
std::string canonicalDump(const Json& j);

// File IO. Open or read failure throws IoError; unparseable JSON throws
// FormatError with the path prefixed.
Json readJsonFile(const std::string& path);
void writeTextFile(const std::string& path, const std::string& content);
std::string readTextFile(const std::string& path);

}  // namespace qwp

#endif
