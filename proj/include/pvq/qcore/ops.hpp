#pragma once
// Measurement, conditioning and comparison primitives shared by every module.

#include <stdexcept>
#include <vector>

#include "pvq/qcore/rng.hpp"
#include "pvq/qcore/state.hpp"

namespace pvq::qcore {

// Conditioning on an outcome whose probability is zero.
struct impossible_outcome_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Computational-basis outcome distribution (the |amplitude|^2 row, or the
// diagonal of a density matrix).
std::vector<double> outcome_probabilities(const StateVector& psi);
std::vector<double> outcome_probabilities(const DensityMatrix& rho);

// Projective measurement of all qubits; returns the sampled basis index.
std::size_t measure_all(const StateVector& psi, Rng& rng);
std::size_t measure_all(const DensityMatrix& rho, Rng& rng);

// Reduced state over `keep` (ascending, nonempty strict subset of qubits).
// Kept qubits retain their relative order.
DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep);

// Conditions on measuring computational `outcome` on the `measured` qubits
// (ascending; strict subset) and returns the normalized state of the
// remaining qubits. Bit i of `outcome`, counted from the most significant of
// measured.size() bits, belongs to measured[i]. Zero-probability outcomes
// raise impossible_outcome_error.
StateVector project_renormalize(const StateVector& psi,
                                const std::vector<int>& measured,
                                std::size_t outcome);
DensityMatrix project_renormalize(const DensityMatrix& rho,
                                  const std::vector<int>& measured,
                                  std::size_t outcome);

// Probability of the above outcome, for callers that need to branch without
// catching exceptions.
double outcome_probability(const DensityMatrix& rho,
                           const std::vector<int>& measured,
                           std::size_t outcome);

// Uhlmann fidelity F(a,b) = (tr sqrt(sqrt(a) b sqrt(a)))^2, clamped to [0,1].
// Symmetric; equals <psi|b|psi> when a is the pure state |psi><psi|.
double fidelity(const DensityMatrix& a, const DensityMatrix& b);

}  // namespace pvq::qcore
