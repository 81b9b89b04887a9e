#include "qwp/serialize.hpp"

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "qwp/error.hpp"

namespace qwp {

namespace {

[[noreturn]] void formatFail(const std::string& message) {
  fail(ErrorCode::FormatError, message);
}

const Json& field(const Json& j, const char* key, const char* what) {
  if (!j.is_object()) {
    formatFail(std::string(what) + " must be a JSON object");
  }
  auto it = j.find(key);
  if (it == j.end()) {
    formatFail(std::string(what) + ": missing field \"" + key + "\"");
  }
  return *it;
}

int positiveInt(const Json& j, const char* key, const char* what) {
  const Json& v = field(j, key, what);
  if (!v.is_number_integer() || v.get<long long>() < 1) {
    formatFail(std::string(what) + ": field \"" + key +
               "\" must be a positive integer");
  }
  return v.get<int>();
}

Signature signatureField(const Json& j, const char* key, const char* what) {
  const Json& v = field(j, key, what);
  if (!v.is_array() || v.empty()) {
    formatFail(std::string(what) + ": field \"" + key +
               "\" must be a non-empty array");
  }
  std::vector<int> dims;
  for (const Json& d : v) {
    if (!d.is_number_integer() || d.get<long long>() < 1) {
      formatFail(std::string(what) + ": field \"" + key +
                 "\" must list positive integers");
    }
    dims.push_back(d.get<int>());
  }
  return Signature(dims);
}

Json signatureToJson(const Signature& sig) {
  return Json(sig.dims());
}

std::string indexed(const char* what, size_t k) {
  std::ostringstream out;
  out << what << " " << k;
  return out.str();
}

ComplexMatrix matrixFrom(const Json& j, const std::string& what) {
  if (!j.is_object()) {
    formatFail(what + " must be a JSON object");
  }
  const int rows = positiveInt(j, "rows", what.c_str());
  const int cols = positiveInt(j, "cols", what.c_str());
  const Json& entries = field(j, "entries", what.c_str());
  if (!entries.is_array() ||
      entries.size() != static_cast<size_t>(rows) * static_cast<size_t>(cols)) {
    formatFail(what + ": \"entries\" must hold rows*cols complex pairs");
  }
  ComplexMatrix m = ComplexMatrix::zero(rows, cols);
  size_t k = 0;
  for (const Json& e : entries) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() ||
        !e[1].is_number()) {
      formatFail(what + ": entry " + std::to_string(k) +
                 " must be a [re, im] pair of numbers");
    }
    m(static_cast<int>(k) / cols, static_cast<int>(k) % cols) =
        Complex(e[0].get<double>(), e[1].get<double>());
    ++k;
  }
  return m;
}

struct TupleParts {
  Signature sig;
  std::vector<ComplexMatrix> entries;
};

TupleParts tupleFrom(const Json& j, const char* what) {
  TupleParts parts{signatureField(j, "sig", what), {}};
  const Json& entries = field(j, "entries", what);
  if (!entries.is_array() ||
      entries.size() != static_cast<size_t>(parts.sig.size())) {
    formatFail(std::string(what) +
               ": \"entries\" must hold one matrix per signature entry");
  }
  for (size_t k = 0; k < entries.size(); ++k) {
    ComplexMatrix m = matrixFrom(entries[k], indexed("entry", k));
    const int d = parts.sig.dim(static_cast<int>(k));
    if (m.rows() != d || m.cols() != d) {
      formatFail(indexed("entry", k) + " is " + std::to_string(m.rows()) +
                 "x" + std::to_string(m.cols()) +
                 " but the signature says " + std::to_string(d));
    }
    parts.entries.push_back(std::move(m));
  }
  return parts;
}

Json tupleToJson(const Signature& sig,
                 const std::vector<ComplexMatrix>& entries) {
  Json j;
  j["sig"] = signatureToJson(sig);
  Json list = Json::array();
  for (const ComplexMatrix& m : entries) list.push_back(toJson(m));
  j["entries"] = std::move(list);
  return j;
}

KrausChannel channelFrom(const Json& j, const std::string& what) {
  const int in = positiveInt(j, "in", what.c_str());
  const int out = positiveInt(j, "out", what.c_str());
  const Json& kraus = field(j, "kraus", what.c_str());
  if (!kraus.is_array()) {
    formatFail(what + ": field \"kraus\" must be an array");
  }
  std::vector<ComplexMatrix> ops;
  for (size_t k = 0; k < kraus.size(); ++k) {
    ComplexMatrix m = matrixFrom(kraus[k], what + ", " + indexed("operator", k));
    if (m.rows() != out || m.cols() != in) {
      formatFail(what + ", " + indexed("operator", k) + " is " +
                 std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                 " but the channel maps " + std::to_string(in) + " -> " +
                 std::to_string(out));
    }
    ops.push_back(std::move(m));
  }
  return KrausChannel(in, out, std::move(ops));
}

}  // namespace

Json toJson(const ComplexMatrix& m) {
  Json j;
  j["rows"] = m.rows();
  j["cols"] = m.cols();
  Json entries = Json::array();
  for (int r = 0; r < m.rows(); ++r) {
    for (int c = 0; c < m.cols(); ++c) {
      entries.push_back(Json::array({m(r, c).real(), m(r, c).imag()}));
    }
  }
  j["entries"] = std::move(entries);
  return j;
}

Json toJson(const DensityState& s) { return tupleToJson(s.sig, s.entries); }

Json toJson(const PredicateTuple& p) { return tupleToJson(p.sig, p.entries); }

Json toJson(const KrausChannel& c) {
  Json j;
  j["in"] = c.inDim;
  j["out"] = c.outDim;
  Json ops = Json::array();
  for (const ComplexMatrix& m : c.kraus) ops.push_back(toJson(m));
  j["kraus"] = std::move(ops);
  return j;
}

Json toJson(const Superoperator& f) {
  Json j;
  j["in_sig"] = signatureToJson(f.inSig());
  j["out_sig"] = signatureToJson(f.outSig());
  Json rows = Json::array();
  for (int out = 0; out < f.outSig().size(); ++out) {
    Json row = Json::array();
    for (int in = 0; in < f.inSig().size(); ++in) {
      row.push_back(toJson(f.block(out, in)));
    }
    rows.push_back(std::move(row));
  }
  j["blocks"] = std::move(rows);
  return j;
}

Json toJson(const DualityReport& r) {
  Json j;
  j["pass"] = r.pass;
  j["max_residual"] = r.maxResidual;
  j["trials"] = r.trials;
  j["violations"] = Json::array();
  return j;
}

Json toJson(const ValidationReport& r, int trials) {
  Json j;
  j["pass"] = r.pass;
  j["max_residual"] = r.maxWitness();
  j["trials"] = trials;
  Json list = Json::array();
  for (const Violation& v : r.violations) {
    Json item;
    item["code"] = v.code;
    item["message"] = v.message;
    item["witness"] = v.witness;
    list.push_back(std::move(item));
  }
  j["violations"] = std::move(list);
  return j;
}

ComplexMatrix matrixFromJson(const Json& j) { return matrixFrom(j, "matrix"); }

DensityState stateFromJson(const Json& j) {
  TupleParts parts = tupleFrom(j, "state");
  return DensityState(std::move(parts.sig), std::move(parts.entries));
}

PredicateTuple predicateFromJson(const Json& j) {
  TupleParts parts = tupleFrom(j, "predicate");
  return PredicateTuple(std::move(parts.sig), std::move(parts.entries));
}

KrausChannel channelFromJson(const Json& j) { return channelFrom(j, "channel"); }

Superoperator superFromJson(const Json& j) {
  Signature inSig = signatureField(j, "in_sig", "superoperator");
  Signature outSig = signatureField(j, "out_sig", "superoperator");
  const Json& blocks = field(j, "blocks", "superoperator");
  if (!blocks.is_array() ||
      blocks.size() != static_cast<size_t>(outSig.size())) {
    formatFail("superoperator: \"blocks\" must hold one row per output entry");
  }
  std::vector<std::vector<KrausChannel>> rows;
  for (size_t out = 0; out < blocks.size(); ++out) {
    const Json& row = blocks[out];
    if (!row.is_array() || row.size() != static_cast<size_t>(inSig.size())) {
      formatFail("superoperator: block row " + std::to_string(out) +
                 " must hold one channel per input entry");
    }
    std::vector<KrausChannel> chans;
    for (size_t in = 0; in < row.size(); ++in) {
      std::ostringstream what;
      what << "block [" << out << "][" << in << "]";
      KrausChannel c = channelFrom(row[in], what.str());
      if (c.inDim != inSig.dim(static_cast<int>(in)) ||
          c.outDim != outSig.dim(static_cast<int>(out))) {
        formatFail(what.str() + " maps " + std::to_string(c.inDim) + " -> " +
                   std::to_string(c.outDim) +
                   " but the signatures require " +
                   std::to_string(inSig.dim(static_cast<int>(in))) + " -> " +
                   std::to_string(outSig.dim(static_cast<int>(out))));
      }
      chans.push_back(std::move(c));
    }
    rows.push_back(std::move(chans));
  }
  return Superoperator(std::move(inSig), std::move(outSig), std::move(rows));
}

std::string canonicalDump(const Json& j) { return j.dump(); }

Json readJsonFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    fail(ErrorCode::IoError, "cannot open file: " + path);
  }
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    formatFail(path + ": " + e.what());
  }
}

void writeTextFile(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    fail(ErrorCode::IoError, "cannot open file for writing: " + path);
  }
  out << content;
  if (!out) {
    fail(ErrorCode::IoError, "write failed: " + path);
  }
}

std::string readTextFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    fail(ErrorCode::IoError, "cannot open file: " + path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) {
    fail(ErrorCode::IoError, "read failed: " + path);
  }
  return buf.str();
}

}  // namespace qwp
