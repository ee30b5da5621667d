#pragma once
// Imperfection models applied at the two-qubit source, and their propagation
// through the path-encoding circuit into four-qubit record statistics.

#include <vector>

#include "pvq/qcore/ops.hpp"
#include "pvq/qcore/state.hpp"

namespace pvq::noise {

using qcore::cplx;
using qcore::DensityMatrix;
using qcore::StateVector;

// One knob per imperfection. Defaults reproduce the ideal source exactly.
// theta_p is consumed by detection-side post-selection, not by the source.
struct NoiseConfig {
    double p = 0.0;                          // depolarizing mixing probability
    double alpha = 0.70710678118654752440;   // |HV> amplitude, beta = sqrt(1 - alpha^2)
    double theta_h = 0.0;                    // half-wave-plate angle on arm A, radians
    double theta_p = 0.0;                    // polarizer angle on arm B, radians
};

// (1-p) |psi><psi| + p/2^n I on the qubit count of `pure`.
DensityMatrix depolarize(const StateVector& pure, double p);

// Two-qubit restriction of depolarize; rejects inputs that are not two qubits.
DensityMatrix depolarize_pair(const StateVector& pure2, double p);

// alpha |HV> + sqrt(1-alpha^2) |VH>, alpha in [0, 1].
StateVector nonmaximal_pair(double alpha);

// Half-wave plate at angle theta_h inserted in arm A of |Psi+>:
// cos(2 theta_h) |Psi-> + sin(2 theta_h) |Phi+>, theta_h in [0, pi/8].
StateVector hwp_rotated_pair(double theta_h);

// Sends a two-qubit source state through the path-encoding interferometer:
// U (rho otimes |00><00|) U dagger, with U the circuit unitary. The ideal
// source maps to the eight-term even-parity record state.
DensityMatrix propagate_four_qubit(const DensityMatrix& source2);

// Fraction of parity-violating records for a depolarized source: p/2.
double qber_predicted(double p);

// Conditional state of the unmeasured qubits given an observed outcome on the
// measured ones. For the propagated four-qubit depolarized state this yields
// the closed-form conditionals: fixing A = 0 leaves a depolarized three-qubit
// GHZ-class state, fixing A = 0, B = 0 leaves a depolarized |Phi->.
DensityMatrix post_measurement_states(const DensityMatrix& state, const std::vector<int>& measured,
                                      std::size_t outcome);

// Source state implied by a NoiseConfig: the non-maximal pair, then the wave
// plate when theta_h > 0 (a zero angle means no plate inserted, keeping the
// defaults-ideal contract), then depolarization. theta_p is ignored here.
DensityMatrix source_state(const NoiseConfig& cfg);

// propagate_four_qubit(source_state(cfg)).
DensityMatrix record_state(const NoiseConfig& cfg);

}  // namespace pvq::noise
