#include "pvq/circuits/circuits.hpp"

#include <cmath>
#include <stdexcept>

#include "pvq/qcore/linalg.hpp"

namespace pvq::circuits {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kQuarter = 0.35355339059327376220;  // 1/(2 sqrt 2)

StateVector four_qubit_from(const std::vector<std::pair<std::size_t, cplx>>& terms) {
    std::vector<cplx> amps(16, cplx{0.0, 0.0});
    for (const auto& [index, amp] : terms) amps[index] = amp;
    return StateVector(4, std::move(amps));
}

StateVector pair_with_fresh_paths() {
    return qcore::tensor(bell_state(Bell::PsiPlus), StateVector::basis(2, 0));
}

}  // namespace

StateVector Circuit::evaluate() const {
    StateVector state = initial_state;
    for (const Gate& g : gates) state = qcore::apply_gate(state, g);
    return state;
}

StateVector bell_state(Bell kind) {
    switch (kind) {
        case Bell::PhiPlus:  return StateVector(2, {kInvSqrt2, 0.0, 0.0, kInvSqrt2});
        case Bell::PhiMinus: return StateVector(2, {kInvSqrt2, 0.0, 0.0, -kInvSqrt2});
        case Bell::PsiPlus:  return StateVector(2, {0.0, kInvSqrt2, kInvSqrt2, 0.0});
        case Bell::PsiMinus: return StateVector(2, {0.0, kInvSqrt2, -kInvSqrt2, 0.0});
    }
    throw std::invalid_argument("unknown Bell state kind");
}

StateVector prepare_psi_abcd() {
    return four_qubit_from({{0b0000, kQuarter},
                            {0b0011, -kQuarter},
                            {0b0101, kQuarter},
                            {0b0110, kQuarter},
                            {0b1001, -kQuarter},
                            {0b1010, -kQuarter},
                            {0b1100, kQuarter},
                            {0b1111, -kQuarter}});
}

Circuit psi_abcd_optical_circuit() {
    // PBS1/PBS2 copy the polarizations onto the path qubits, the beam
    // splitters mix the paths, and the two half-wave plates realize
    // "flip A where C = 0" (X then CNOT commute; both only XOR into A)
    // and "flip B where D = 1".
    return Circuit{pair_with_fresh_paths(),
                   {qcore::gate_cnot(0, 2), qcore::gate_cnot(1, 3), qcore::gate_h(2),
                    qcore::gate_h(3), qcore::gate_x(0), qcore::gate_cnot(2, 0),
                    qcore::gate_cnot(3, 1)}};
}

StateVector prepare_psi_abcd_optical() { return psi_abcd_optical_circuit().evaluate(); }

StateVector prepare_phi_abcd() {
    return four_qubit_from({{0b1000, kQuarter},
                            {0b0100, kQuarter},
                            {0b1010, -kQuarter},
                            {0b0110, kQuarter},
                            {0b1001, kQuarter},
                            {0b0101, -kQuarter},
                            {0b1011, -kQuarter},
                            {0b0111, -kQuarter}});
}

Circuit phi_abcd_circuit() {
    return Circuit{pair_with_fresh_paths(),
                   {qcore::gate_cnot(0, 2), qcore::gate_cnot(1, 3), qcore::gate_h(2),
                    qcore::gate_h(3)}};
}

StateVector prepare_parity_state_uniform() {
    return four_qubit_from({{0b0000, kQuarter},
                            {0b0011, kQuarter},
                            {0b0101, kQuarter},
                            {0b0110, kQuarter},
                            {0b1001, kQuarter},
                            {0b1010, kQuarter},
                            {0b1100, kQuarter},
                            {0b1111, kQuarter}});
}

Circuit parity_state_uniform_circuit() {
    return Circuit{StateVector::basis(4, 0),
                   {qcore::gate_h(0), qcore::gate_cnot(0, 3), qcore::gate_h(1),
                    qcore::gate_cnot(1, 3), qcore::gate_h(2), qcore::gate_cnot(2, 3)}};
}

StateVector prepare_general_phi4(const PhaseVector& phases, GeneralPhi4Reading reading) {
    static constexpr std::size_t kets[7] = {0b0011, 0b0101, 0b0110, 0b1001,
                                            0b1010, 0b1100, 0b1111};
    std::vector<std::pair<std::size_t, cplx>> terms{{0b0000, cplx{kQuarter, 0.0}}};
    for (std::size_t k = 0; k < 7; ++k) {
        double alpha = phases.alpha[k];
        if (reading == GeneralPhi4Reading::duplicated_alpha1 && kets[k] == 0b1100)
            alpha = phases.alpha[0];
        terms.emplace_back(kets[k], kQuarter * std::polar(1.0, alpha));
    }
    return four_qubit_from(terms);
}

PhaseVector psi_abcd_phases() {
    constexpr double pi = 3.14159265358979323846;
    return PhaseVector{{pi, 0.0, 0.0, pi, pi, 0.0, pi}};
}

std::vector<cplx> circuit_unitary(const Circuit& c) {
    const std::size_t dim = std::size_t{1} << c.n_qubits();
    std::vector<cplx> u(dim * dim, cplx{0.0, 0.0});
    for (std::size_t k = 0; k < dim; ++k) u[k * dim + k] = 1.0;
    for (const Gate& g : c.gates) {
        if (!g.unitary || !qcore::is_unitary(g.matrix, g.matrix.size() == 4 ? 2 : 4))
            throw std::invalid_argument("circuit_unitary: non-unitary gate " + g.name);
        u = qcore::matmul(qcore::embed_gate_matrix(c.n_qubits(), g), u, dim);
    }
    return u;
}

std::vector<cplx> apply_unitary(const std::vector<cplx>& u, const StateVector& psi) {
    const std::size_t dim = psi.dim();
    if (u.size() != dim * dim)
        throw std::invalid_argument("apply_unitary: dimension mismatch");
    std::vector<cplx> out(dim, cplx{0.0, 0.0});
    for (std::size_t r = 0; r < dim; ++r)
        for (std::size_t c = 0; c < dim; ++c) out[r] += u[r * dim + c] * psi[c];
    return out;
}

StateVector align_global_phase(const StateVector& reference, const StateVector& candidate) {
    if (reference.dim() != candidate.dim())
        throw std::invalid_argument("align_global_phase: dimension mismatch");
    std::size_t anchor = 0;
    for (std::size_t k = 1; k < reference.dim(); ++k)
        if (std::abs(reference[k]) > std::abs(reference[anchor])) anchor = k;
    const cplx num = reference[anchor] * std::conj(candidate[anchor]);
    if (std::abs(num) < qcore::kAlgebraTol) return candidate;  // nothing to align against
    const cplx phase = num / std::abs(num);
    std::vector<cplx> amps(candidate.amplitudes());
    for (cplx& a : amps) a *= phase;
    return StateVector(candidate.n_qubits(), std::move(amps));
}

double max_entry_distance(const StateVector& a, const StateVector& b) {
    if (a.dim() != b.dim())
        throw std::invalid_argument("max_entry_distance: dimension mismatch");
    double worst = 0.0;
    for (std::size_t k = 0; k < a.dim(); ++k)
        worst = std::max(worst, std::abs(a[k] - b[k]));
    return worst;
}

}  // namespace pvq::circuits
