#include "pvq/noise/noise.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "pvq/circuits/circuits.hpp"
#include "pvq/qcore/gates.hpp"
#include "pvq/qcore/linalg.hpp"

namespace pvq::noise {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

void check_probability(double p, const char* what) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument(std::string(what) + ": probability outside [0, 1]");
}

const std::vector<cplx>& record_circuit_unitary() {
    static const std::vector<cplx> u =
        circuits::circuit_unitary(circuits::psi_abcd_optical_circuit());
    return u;
}

}  // namespace

DensityMatrix depolarize(const StateVector& pure, double p) {
    check_probability(p, "depolarize");
    const std::size_t dim = pure.dim();
    const double floor = p / static_cast<double>(dim);
    std::vector<cplx> entries(dim * dim);
    for (std::size_t r = 0; r < dim; ++r) {
        for (std::size_t c = 0; c < dim; ++c) {
            cplx v = (1.0 - p) * pure[r] * std::conj(pure[c]);
            if (r == c) v += floor;
            entries[r * dim + c] = v;
        }
    }
    return DensityMatrix(pure.n_qubits(), std::move(entries));
}

DensityMatrix depolarize_pair(const StateVector& pure2, double p) {
    if (pure2.n_qubits() != 2) throw std::invalid_argument("depolarize_pair: expected a two-qubit state");
    return depolarize(pure2, p);
}

StateVector nonmaximal_pair(double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("nonmaximal_pair: alpha outside [0, 1]");
    const double beta = std::sqrt(1.0 - alpha * alpha);
    return StateVector(2, {cplx{0.0, 0.0}, cplx{alpha, 0.0}, cplx{beta, 0.0}, cplx{0.0, 0.0}});
}

StateVector hwp_rotated_pair(double theta_h) {
    if (!(theta_h >= 0.0 && theta_h <= M_PI / 8.0 + 1e-12)) {
        throw std::invalid_argument("hwp_rotated_pair: theta_h outside [0, pi/8]");
    }
    const double c = std::cos(2.0 * theta_h);
    const double s = std::sin(2.0 * theta_h);
    // cos |Psi-> + sin |Phi+> written out in the computational basis.
    return StateVector(2, {cplx{s * kInvSqrt2, 0.0}, cplx{c * kInvSqrt2, 0.0},
                           cplx{-c * kInvSqrt2, 0.0}, cplx{s * kInvSqrt2, 0.0}});
}

DensityMatrix propagate_four_qubit(const DensityMatrix& source2) {
    if (source2.n_qubits() != 2) throw std::invalid_argument("propagate_four_qubit: expected a two-qubit source");
    const DensityMatrix injected =
        qcore::tensor(source2, DensityMatrix::from_pure(StateVector::basis(2, 0)));
    std::vector<cplx> rotated = qcore::conjugate_with(record_circuit_unitary(), injected.entries(), 16);
    return DensityMatrix(4, std::move(rotated));
}

double qber_predicted(double p) {
    check_probability(p, "qber_predicted");
    return p / 2.0;
}

DensityMatrix post_measurement_states(const DensityMatrix& state, const std::vector<int>& measured,
                                      std::size_t outcome) {
    return qcore::project_renormalize(state, measured, outcome);
}

DensityMatrix source_state(const NoiseConfig& cfg) {
    StateVector pair = nonmaximal_pair(cfg.alpha);
    if (cfg.theta_h != 0.0) pair = qcore::apply_gate(pair, qcore::gate_hwp(cfg.theta_h, 0));
    return depolarize_pair(pair, cfg.p);
}

DensityMatrix record_state(const NoiseConfig& cfg) {
    return propagate_four_qubit(source_state(cfg));
}

}  // namespace pvq::noise
