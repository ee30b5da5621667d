#pragma once
// Gate set of the optical construction: H, X, CNOT, HWP(theta), PHASE(alpha)
// and the non-unitary polarizer projector POLPROJ(theta). Gates carry their
// own matrix so application code never special-cases by name.

#include <string>
#include <vector>

#include "pvq/qcore/state.hpp"

namespace pvq::qcore {

struct Gate {
    std::string name;           // H, X, CNOT, HWP, PHASE, POLPROJ
    std::vector<cplx> matrix;   // row-major, 2x2 (1 target) or 4x4 (2 targets)
    std::vector<int> targets;   // CNOT order: {control, target}
    bool unitary = true;
};

Gate gate_h(int target);
Gate gate_x(int target);
Gate gate_cnot(int control, int target);
// Half-wave plate at angle theta: [[cos 2t, sin 2t], [sin 2t, -cos 2t]].
// HWP(pi/4) swaps H and V; HWP(0) is a Z flip.
Gate gate_hwp(double theta, int target);
// diag(1, e^{i alpha}).
Gate gate_phase(double alpha, int target);
// Rank-1 projector |theta><theta| with |theta> = cos t |H> + sin t |V>.
// Not unitary; apply_gate rejects it.
Gate gate_polproj(double theta, int target);

bool is_unitary(const std::vector<cplx>& matrix, std::size_t dim,
                double tol = kAlgebraTol);

// Applies the gate's matrix on its target qubits. Targets must be distinct
// and in range; non-unitary gates are rejected (projective conditioning goes
// through project_renormalize instead). Norm is preserved within kAlgebraTol.
StateVector apply_gate(const StateVector& psi, const Gate& g);

// Kronecker products; operand `a` supplies the leftmost (most significant)
// qubits. Combined size above kMaxQubits is rejected.
StateVector tensor(const StateVector& a, const StateVector& b);
DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b);

// Full 2^n x 2^n matrix of `g` embedded on its targets, by explicit index
// bookkeeping. Intentionally independent of apply_gate so the two can serve
// as oracles for each other.
std::vector<cplx> embed_gate_matrix(int n_qubits, const Gate& g);

}  // namespace pvq::qcore
