#ifndef QWP_PROGRAMS_HPP
#define QWP_PROGRAMS_HPP

#include <vector>

#include "qwp/ast.hpp"

namespace qwp {

// Fair coin toss against a spectator register r of the given width: allocate
// a fresh qubit, rotate it into the uniform superposition, measure, and drop
// it. The outcome branch pair is the program's result.
Program buildCoin(int registerQubits = 1);

// Search over n qubits for marked basis state s. The register arrives as
// program input (callers prepare the uniform superposition); the body applies
// the search iteration round(arccos(1/sqrt(N))/theta) times and finishes with
// a full register measurement, one binary measure per qubit from the least
// significant up so that branch index equals basis index.
Program buildGrover(int n, int s);

// Bell pair preparation with its stabilizer data: u maps |00> to the Bell
// state, generators stabilize the Bell state, and expectedPre[k] is the
// weakest precondition of generators[k] under conjugation by u.
struct BellStabilizer {
  Program program;  // input a, b; a *= H; a, b *= CNOT
  ComplexMatrix unitary;
  std::vector<ComplexMatrix> generators;
  std::vector<ComplexMatrix> expectedPre;
};

BellStabilizer buildBellStabilizer();

}  // namespace qwp

#endif
