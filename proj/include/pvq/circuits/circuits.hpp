#pragma once
// The specific states the protocols run on, each available as a direct
// amplitude list and (where a construction exists) as a gate circuit, plus a
// brute-force unitary oracle to prove the two forms agree.

#include <array>
#include <vector>

#include "pvq/qcore/gates.hpp"
#include "pvq/qcore/state.hpp"

namespace pvq::circuits {

using qcore::cplx;
using qcore::Gate;
using qcore::StateVector;

struct Circuit {
    StateVector initial_state;
    std::vector<Gate> gates;

    int n_qubits() const noexcept { return initial_state.n_qubits(); }
    // Applies the gates in order. Every gate must be unitary.
    StateVector evaluate() const;
};

enum class Bell { PhiPlus, PhiMinus, PsiPlus, PsiMinus };

StateVector bell_state(Bell kind);

// Four-qubit parity state: (1/2 sqrt 2) (+|0000> - |0011> + |0101> + |0110>
// - |1001> - |1010> + |1100> - |1111>). Each bit string that can be observed
// has even parity and probability 1/8.
StateVector prepare_psi_abcd();

// Same state built the way the optics build it: a |Psi+> polarization pair
// plus two path qubits born |00>, through PBS splits (CNOTs), beam splitters
// (Hadamards) and the two half-wave-plate sign flips. Equals
// prepare_psi_abcd() exactly.
StateVector prepare_psi_abcd_optical();
Circuit psi_abcd_optical_circuit();

// Companion state for live entanglement verification: the optical circuit
// without its half-wave-plate stage. Every observable record satisfies
// x_A xor x_B = 1.
StateVector prepare_phi_abcd();
Circuit phi_abcd_circuit();

// Uniform-phase member of the even-parity family: +1/(2 sqrt 2) on all eight
// even-parity kets. Equals prepare_general_phi4 with all phases zero.
StateVector prepare_parity_state_uniform();
Circuit parity_state_uniform_circuit();

// Phases on the even-parity kets beyond |0000>, in ket order
// |0011>, |0101>, |0110>, |1001>, |1010>, |1100>, |1111>.
struct PhaseVector {
    std::array<double, 7> alpha{};
};

// The published reading of the general state assigns alpha[0] to both |0011>
// and |1100> and never uses alpha[5]; kept available for comparison. The
// default treats all seven phases as independent.
enum class GeneralPhi4Reading { independent, duplicated_alpha1 };

// Most general state with (a) even parity support and (b) all eight outcome
// probabilities equal: amplitude 1/(2 sqrt 2) on |0000> and
// (1/2 sqrt 2) e^{i alpha_k} on the other seven even-parity kets.
StateVector prepare_general_phi4(const PhaseVector& phases,
                                 GeneralPhi4Reading reading = GeneralPhi4Reading::independent);

// Phases reproducing prepare_psi_abcd(): (pi, 0, 0, pi, pi, 0, pi).
PhaseVector psi_abcd_phases();

// Full 2^n x 2^n product of the embedded gate matrices in application order.
// Built from embed_gate_matrix, not apply_gate, so it is an independent
// oracle for the state constructors. Rejects non-unitary gates.
std::vector<cplx> circuit_unitary(const Circuit& c);

std::vector<cplx> apply_unitary(const std::vector<cplx>& u, const StateVector& psi);

// Multiplies `candidate` by the unit phase that aligns it with `reference`
// at the largest-magnitude reference amplitude (lowest index on ties).
StateVector align_global_phase(const StateVector& reference, const StateVector& candidate);

double max_entry_distance(const StateVector& a, const StateVector& b);

}  // namespace pvq::circuits
