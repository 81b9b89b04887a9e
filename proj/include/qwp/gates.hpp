#ifndef QWP_GATES_HPP
#define QWP_GATES_HPP

#include "qwp/complex_matrix.hpp"

namespace qwp::gates {

ComplexMatrix pauliX();
ComplexMatrix pauliY();
ComplexMatrix pauliZ();
ComplexMatrix hadamard();
// Control on the most significant qubit, target on the least significant.
ComplexMatrix cnot();

// |k><k| on a d-dimensional space.
ComplexMatrix basisProjector(int dim, int k);
// Basis column vector |k>.
ComplexMatrix basisKet(int dim, int k);

// Inversion about the mean on n qubits: (2/N) sum_ij |i><j| - I.
ComplexMatrix inversionAboutMean(int numQubits);
// Phase oracle marking basis state s: I - 2|s><s|.
ComplexMatrix phaseOracle(int numQubits, int marked);
// One search iteration: oracle first, then inversion about the mean.
ComplexMatrix groverOperator(int numQubits, int marked);
// Iterations needed to rotate the uniform state onto |marked>:
// round(arccos(1/sqrt(N)) / theta) with sin(theta) = 2*sqrt(N-1)/N.
int groverIterationCount(int numQubits);

bool isUnitary(const ComplexMatrix& u, double tol = 1e-9);

}  // namespace qwp::gates

#endif
