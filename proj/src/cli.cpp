#include "qwp/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qwp/elaborate.hpp"
#include "qwp/error.hpp"
#include "qwp/gates.hpp"
#include "qwp/parser.hpp"
#include "qwp/programs.hpp"
#include "qwp/serialize.hpp"
#include "qwp/wp.hpp"

namespace qwp {

namespace {

int exitCodeFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::SyntaxError:
    case ErrorCode::ScopeError:
    case ErrorCode::TypeError:
    case ErrorCode::ElaborationError:
      return 2;
    case ErrorCode::NonConvergent:
    case ErrorCode::NonMonotone:
      return 4;
    case ErrorCode::InvalidThreshold:
      return 5;
    default:
      return 3;  // IO, format, signature, and semantic validation failures
  }
}

void emitJson(std::ostream& out, const Json& j) {
  out << canonicalDump(j) << "\n";
}

void emitErrorBody(std::ostream& out, const std::string& code,
                   const std::string& message) {
  Json j;
  j["error"] = code;
  j["message"] = message;
  emitJson(out, j);
}

// Semantic validation failure: error body embeds the full report.
int failValidation(std::ostream& out, const std::string& code,
                   const std::string& what, const ValidationReport& report) {
  Json j;
  j["error"] = code;
  std::string message = what + " failed validation";
  if (!report.violations.empty()) {
    message += ": " + report.violations.front().message;
  }
  j["message"] = message;
  j["report"] = toJson(report, 1);
  emitJson(out, j);
  return 3;
}

std::string g6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string complexText(Complex z) {
  std::string s = g6(z.real());
  s += (z.imag() < 0.0 ? "" : "+") + g6(z.imag()) + "i";
  return s;
}

void tupleText(std::ostream& out, const Signature& sig,
               const std::vector<ComplexMatrix>& entries) {
  out << "sig: [";
  for (int k = 0; k < sig.size(); ++k) {
    out << (k ? ", " : "") << sig.dim(k);
  }
  out << "]\n";
  for (size_t k = 0; k < entries.size(); ++k) {
    const ComplexMatrix& m = entries[k];
    out << "entry " << k << ":\n";
    for (int r = 0; r < m.rows(); ++r) {
      out << "  [";
      for (int c = 0; c < m.cols(); ++c) {
        out << (c ? "  " : " ") << complexText(m(r, c));
      }
      out << " ]\n";
    }
  }
}

// Writes the payload to --out when given, otherwise to the output stream.
void deliver(const RunConfig& config, std::ostream& out, const Json& json,
             const std::string& text) {
  std::string payload =
      config.format == "text" ? text : canonicalDump(json) + "\n";
  if (config.outPath.empty()) {
    out << payload;
  } else {
    writeTextFile(config.outPath, payload);
  }
}

std::string fnv1aDigest(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv1a:%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

ElabOptions elabOptionsFor(const RunConfig& config) {
  ElabOptions opts;
  opts.loopTol = config.tol;
  opts.loopMaxIter = config.maxIter;
  opts.recTol = config.tol;
  opts.recMaxIter = config.maxIter;
  return opts;
}

Elaboration loadProgram(const std::string& path, const RunConfig& config) {
  return elaborateProgram(parse(readTextFile(path)), elabOptionsFor(config));
}

// Postconditions may be any Hermitian observable tuple (stabilizer
// generators have eigenvalue -1), so only shape and Hermiticity are
// enforced here; PSD and the unit bound are `validate predicate`'s job.
PredicateTuple loadObservable(const std::string& path,
                              const Signature& expected) {
  PredicateTuple post = predicateFromJson(readJsonFile(path));
  if (post.sig != expected) {
    fail(ErrorCode::SignatureMismatch,
         "postcondition signature " + post.sig.describe() +
             " does not match the program output signature " +
             expected.describe());
  }
  for (size_t k = 0; k < post.entries.size(); ++k) {
    if (!isHermitian(post.entries[k])) {
      fail(ErrorCode::InvalidPredicate,
           "postcondition entry " + std::to_string(k) + " is not Hermitian");
    }
  }
  return post;
}

int cmdWp(const std::string& programPath, const std::string& postPath,
          const RunConfig& config, std::ostream& out) {
  Elaboration prog = loadProgram(programPath, config);
  PredicateTuple post = loadObservable(postPath, prog.op.outSig());
  PredicateTuple pre = wpSuper(prog.op, post);
  std::ostringstream text;
  tupleText(text, pre.sig, pre.entries);
  deliver(config, out, toJson(pre), text.str());
  return 0;
}

int cmdRun(const std::string& programPath, const std::string& statePath,
           const RunConfig& config, std::ostream& out) {
  Elaboration prog = loadProgram(programPath, config);
  DensityState state = stateFromJson(readJsonFile(statePath));
  if (state.sig != prog.op.inSig()) {
    fail(ErrorCode::SignatureMismatch,
         "state signature " + state.sig.describe() +
             " does not match the program input signature " +
             prog.op.inSig().describe());
  }
  ValidationReport report = validateState(state, config.psdTol);
  if (!report.pass) {
    return failValidation(out, "invalid_state", "input state", report);
  }
  DensityState result = applySuper(prog.op, state);
  Json j = toJson(result);
  Json traces = Json::array();
  for (const ComplexMatrix& m : result.entries) {
    traces.push_back(trace(m).real());
  }
  j["traces"] = std::move(traces);
  std::ostringstream text;
  tupleText(text, result.sig, result.entries);
  text << "traces: [";
  for (size_t k = 0; k < result.entries.size(); ++k) {
    text << (k ? ", " : "") << g6(trace(result.entries[k]).real());
  }
  text << "]\n";
  deliver(config, out, j, text.str());
  return 0;
}

int cmdCheck(const std::string& programPath, const std::string& postPath,
             const std::string& statePath, double threshold,
             const RunConfig& config, std::ostream& out) {
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    fail(ErrorCode::InvalidThreshold,
         "threshold must lie in [0, 1], got " + g6(threshold));
  }
  Elaboration prog = loadProgram(programPath, config);
  PredicateTuple post = loadObservable(postPath, prog.op.outSig());
  DensityState state = stateFromJson(readJsonFile(statePath));
  if (state.sig != prog.op.inSig()) {
    fail(ErrorCode::SignatureMismatch,
         "state signature " + state.sig.describe() +
             " does not match the program input signature " +
             prog.op.inSig().describe());
  }
  ValidationReport stateReport = validateState(state, config.psdTol);
  if (!stateReport.pass) {
    return failValidation(out, "invalid_state", "input state", stateReport);
  }

  PredicateTuple pre = wpSuper(prog.op, post);
  const double value = expectation(state, pre);
  // The slack keeps analytically exact cases (value == threshold) passing
  // under floating point.
  const bool pass = value >= threshold - 1e-9;
  DualityReport duality = dualityCheck(prog.op, 100, config.seed);

  Json j;
  j["program"] = programPath;
  j["post_digest"] = fnv1aDigest(canonicalDump(toJson(post)));
  j["precondition"] = toJson(pre);
  j["expectation"] = value;
  j["threshold"] = threshold;
  j["verdict"] = pass ? "pass" : "fail";
  j["duality_residual"] = duality.maxResidual;
  j["seed"] = config.seed;
  j["trials"] = duality.trials;

  std::ostringstream text;
  text << "program: " << programPath << "\n";
  text << "post_digest: " << j["post_digest"].get<std::string>() << "\n";
  text << "expectation: " << g6(value) << "\n";
  text << "threshold: " << g6(threshold) << "\n";
  text << "verdict: " << (pass ? "pass" : "fail") << "\n";
  text << "duality_residual: " << g6(duality.maxResidual) << "\n";
  text << "seed: " << config.seed << "\n";
  text << "trials: " << duality.trials << "\n";
  text << "precondition:\n";
  tupleText(text, pre.sig, pre.entries);
  deliver(config, out, j, text.str());
  return 0;
}

int cmdValidate(const std::string& kind, const std::string& path,
                const RunConfig& config, std::ostream& out) {
  Json doc = readJsonFile(path);
  ValidationReport report;
  if (kind == "state") {
    report = validateState(stateFromJson(doc), config.psdTol);
  } else if (kind == "predicate") {
    report = validatePredicate(predicateFromJson(doc), config.psdTol);
  } else if (kind == "channel") {
    report = validateChannel(channelFromJson(doc), config.psdTol);
  } else {
    report = validateSuper(superFromJson(doc), config.psdTol);
  }
  Json j = toJson(report, 1);
  std::ostringstream text;
  text << "pass: " << (report.pass ? "true" : "false") << "\n";
  text << "max_residual: " << g6(report.maxWitness()) << "\n";
  text << "trials: 1\n";
  text << "violations:\n";
  for (const Violation& v : report.violations) {
    text << "  " << v.code << ": " << v.message << " (witness "
         << g6(v.witness) << ")\n";
  }
  deliver(config, out, j, text.str());
  return report.pass ? 0 : 3;
}

struct ExampleFiles {
  std::string base;
  Program program;
  PredicateTuple post;
  DensityState state;
};

ExampleFiles buildExample(const std::string& name,
                          const std::vector<int>& params) {
  ExampleFiles ex;
  if (name == "coin") {
    if (params.size() > 1) {
      fail(ErrorCode::OutOfRange,
           "coin takes at most one parameter: the register width");
    }
    const int width = params.empty() ? 1 : params[0];
    ex.program = buildCoin(width);
    ex.base = width == 1 ? "coin" : "coin" + std::to_string(width);
    const int d = 1 << width;
    // Postcondition (P0, 0): the all-zeros projector in the 0 branch.
    ex.post = PredicateTuple(
        Signature({d, d}),
        {gates::basisProjector(d, 0), ComplexMatrix::zero(d, d)});
    ex.state = DensityState(Signature({d}), {gates::basisProjector(d, 0)});
  } else if (name == "grover") {
    if (params.size() != 2) {
      fail(ErrorCode::OutOfRange,
           "grover takes two parameters: register size and marked state");
    }
    const int n = params[0];
    const int s = params[1];
    ex.program = buildGrover(n, s);
    ex.base = "grover" + std::to_string(n);
    const int d = 1 << n;
    std::vector<int> dims(static_cast<size_t>(d), d);
    std::vector<ComplexMatrix> postEntries(static_cast<size_t>(d),
                                           gates::basisProjector(d, s));
    ex.post = PredicateTuple(Signature(dims), std::move(postEntries));
    ComplexMatrix uniform = ComplexMatrix::zero(d, 1);
    for (int i = 0; i < d; ++i) {
      uniform(i, 0) = Complex(1.0 / std::sqrt(d), 0.0);
    }
    ex.state =
        DensityState(Signature({d}), {multiply(uniform, adjoint(uniform))});
  } else {
    if (!params.empty()) {
      fail(ErrorCode::OutOfRange, "bell takes no parameters");
    }
    BellStabilizer bell = buildBellStabilizer();
    ex.program = bell.program;
    ex.base = "bell";
    ex.post = PredicateTuple(Signature({4}), {bell.generators[0]});
    ex.state = DensityState(Signature({4}), {gates::basisProjector(4, 0)});
  }
  return ex;
}

int cmdExample(const std::string& name, const std::vector<int>& params,
               const std::string& dir, const RunConfig& config,
               std::ostream& out) {
  ExampleFiles ex = buildExample(name, params);
  namespace fs = std::filesystem;
  const fs::path root(dir.empty() ? "." : dir);
  const std::string programPath = (root / (ex.base + ".qpl")).string();
  const std::string postPath = (root / (ex.base + ".post.json")).string();
  const std::string statePath = (root / (ex.base + ".state.json")).string();
  writeTextFile(programPath, printProgram(ex.program));
  writeTextFile(postPath, canonicalDump(toJson(ex.post)) + "\n");
  writeTextFile(statePath, canonicalDump(toJson(ex.state)) + "\n");

  Json j;
  j["written"] = Json::array({programPath, postPath, statePath});
  std::ostringstream text;
  text << "wrote " << programPath << "\n";
  text << "wrote " << postPath << "\n";
  text << "wrote " << statePath << "\n";
  deliver(config, out, j, text.str());
  return 0;
}

// The --tol default honors QWP_TOL; an explicit flag wins over the
// environment.
double resolveTol(bool flagGiven, double flagValue) {
  if (flagGiven) return flagValue;
  const char* env = std::getenv("QWP_TOL");
  if (env == nullptr || *env == '\0') return flagValue;
  char* end = nullptr;
  const double v = std::strtod(env, &end);
  if (end == nullptr || *end != '\0' || !(v > 0.0) || !std::isfinite(v)) {
    fail(ErrorCode::FormatError,
         std::string("QWP_TOL must be a positive number, got \"") + env +
             "\"");
  }
  return v;
}

}  // namespace

int runCli(std::vector<std::string> args, std::ostream& out) {
  CLI::App app{"weakest-precondition verifier for quantum programs"};
  app.require_subcommand(1);

  RunConfig config;
  std::string programPath, postPath, statePath, objectPath;
  std::string kind, exampleName, exampleDir = ".";
  std::vector<int> exampleParams;
  double threshold = 0.0;

  auto addCommon = [&](CLI::App* cmd, bool withSeed) {
    cmd->add_option("--tol", config.tol,
                    "loop/recursion truncation tolerance");
    cmd->add_option("--max-iter", config.maxIter,
                    "iteration cap for loops and recursion");
    cmd->add_option("--out", config.outPath, "write the result to this file");
    cmd->add_option("--format", config.format, "output format")
        ->check(CLI::IsMember({"json", "text"}));
    if (withSeed) {
      cmd->add_option("--seed", config.seed, "duality sampling seed");
    }
  };

  CLI::App* wp = app.add_subcommand(
      "wp", "compute the weakest precondition of a postcondition");
  wp->add_option("--program", programPath, "program file")->required();
  wp->add_option("--post", postPath, "postcondition JSON file")->required();
  addCommon(wp, false);

  CLI::App* run =
      app.add_subcommand("run", "apply the program to an input state");
  run->add_option("--program", programPath, "program file")->required();
  run->add_option("--state", statePath, "input state JSON file")->required();
  addCommon(run, false);

  CLI::App* check = app.add_subcommand(
      "check", "decide whether the state satisfies the precondition");
  check->add_option("--program", programPath, "program file")->required();
  check->add_option("--post", postPath, "postcondition JSON file")->required();
  check->add_option("--state", statePath, "input state JSON file")->required();
  check->add_option("--threshold", threshold, "satisfaction threshold in [0, 1]")
      ->required();
  addCommon(check, true);

  CLI::App* validate =
      app.add_subcommand("validate", "check an object's semantic invariants");
  validate->add_option("kind", kind, "object kind")
      ->required()
      ->check(CLI::IsMember({"state", "predicate", "channel", "superop"}));
  validate->add_option("path", objectPath, "JSON file")->required();
  addCommon(validate, false);

  CLI::App* example =
      app.add_subcommand("example", "write a canonical example program");
  example->add_option("name", exampleName, "example name")
      ->required()
      ->check(CLI::IsMember({"coin", "grover", "bell"}));
  example->add_option("params", exampleParams, "example parameters");
  example->add_option("--dir", exampleDir, "output directory");
  addCommon(example, false);

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    config.tol = resolveTol(wp->count("--tol") || run->count("--tol") ||
                                check->count("--tol") ||
                                validate->count("--tol") ||
                                example->count("--tol"),
                            config.tol);
    if (!(config.tol > 0.0) || !(config.psdTol > 0.0)) {
      fail(ErrorCode::OutOfRange, "tolerances must be positive");
    }
    if (config.maxIter < 1) {
      fail(ErrorCode::OutOfRange, "--max-iter must be at least 1");
    }
    if (app.got_subcommand(wp)) {
      return cmdWp(programPath, postPath, config, out);
    }
    if (app.got_subcommand(run)) {
      return cmdRun(programPath, statePath, config, out);
    }
    if (app.got_subcommand(check)) {
      return cmdCheck(programPath, postPath, statePath, threshold, config,
                      out);
    }
    if (app.got_subcommand(validate)) {
      return cmdValidate(kind, objectPath, config, out);
    }
    return cmdExample(exampleName, exampleParams, exampleDir, config, out);
  } catch (const Error& e) {
    emitErrorBody(out, errorCodeName(e.code()), e.what());
    return exitCodeFor(e.code());
  } catch (const std::exception& e) {
    emitErrorBody(out, "internal", e.what());
    return 3;
  }
}

}  // namespace qwp
