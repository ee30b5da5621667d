#include "pvq/qcore/ops.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace pvq::qcore {

namespace {

// Validates an ascending qubit list and returns its complement. The list must
// be strict (leave at least one qubit) unless allow_full is set.
std::vector<int> complement_of(const std::vector<int>& subset, int n_qubits,
                               const char* what, bool allow_full = false) {
    if (subset.empty())
        throw std::invalid_argument(std::string(what) + ": qubit list is empty");
    const int max_size = allow_full ? n_qubits : n_qubits - 1;
    if (static_cast<int>(subset.size()) > max_size)
        throw std::invalid_argument(std::string(what) + ": list must be a strict subset");
    for (std::size_t k = 0; k < subset.size(); ++k) {
        if (subset[k] < 0 || subset[k] >= n_qubits)
            throw std::invalid_argument(std::string(what) + ": qubit index out of range");
        if (k > 0 && subset[k] <= subset[k - 1])
            throw std::invalid_argument(std::string(what) + ": list must be ascending");
    }
    std::vector<int> rest;
    for (int q = 0; q < n_qubits; ++q)
        if (!std::binary_search(subset.begin(), subset.end(), q)) rest.push_back(q);
    return rest;
}

// Scatters the bits of `pattern` (qubits[0] receiving the most significant
// bit) into a full basis index.
std::size_t scatter(std::size_t pattern, const std::vector<int>& qubits, int n_qubits) {
    std::size_t full = 0;
    for (std::size_t k = 0; k < qubits.size(); ++k) {
        const std::size_t bit = (pattern >> (qubits.size() - 1 - k)) & 1;
        full |= bit << (n_qubits - 1 - qubits[k]);
    }
    return full;
}

Eigen::MatrixXcd to_eigen(const DensityMatrix& rho) {
    const auto dim = static_cast<long>(rho.dim());
    Eigen::MatrixXcd m(dim, dim);
    for (long r = 0; r < dim; ++r)
        for (long c = 0; c < dim; ++c)
            m(r, c) = rho.at(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
    return m;
}

std::size_t sample_index(const std::vector<double>& probs, Rng& rng) {
    const double u = rng.uniform01();
    double acc = 0.0;
    for (std::size_t k = 0; k < probs.size(); ++k) {
        acc += probs[k];
        if (u < acc) return k;
    }
    return probs.size() - 1;  // guards against total probability < 1 by rounding
}

}  // namespace

std::vector<double> outcome_probabilities(const StateVector& psi) {
    std::vector<double> probs(psi.dim());
    for (std::size_t k = 0; k < psi.dim(); ++k) probs[k] = psi.probability(k);
    return probs;
}

std::vector<double> outcome_probabilities(const DensityMatrix& rho) {
    std::vector<double> probs(rho.dim());
    for (std::size_t k = 0; k < rho.dim(); ++k) probs[k] = std::real(rho.at(k, k));
    return probs;
}

std::size_t measure_all(const StateVector& psi, Rng& rng) {
    return sample_index(outcome_probabilities(psi), rng);
}

std::size_t measure_all(const DensityMatrix& rho, Rng& rng) {
    return sample_index(outcome_probabilities(rho), rng);
}

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep) {
    const int n = rho.n_qubits();
    const std::vector<int> traced = complement_of(keep, n, "partial_trace");
    const std::size_t dk = std::size_t{1} << keep.size();
    const std::size_t dt = std::size_t{1} << traced.size();

    std::vector<cplx> entries(dk * dk, cplx{0.0, 0.0});
    for (std::size_t i = 0; i < dk; ++i) {
        const std::size_t si = scatter(i, keep, n);
        for (std::size_t j = 0; j < dk; ++j) {
            const std::size_t sj = scatter(j, keep, n);
            cplx acc = 0.0;
            for (std::size_t t = 0; t < dt; ++t) {
                const std::size_t st = scatter(t, traced, n);
                acc += rho.at(si | st, sj | st);
            }
            entries[i * dk + j] = acc;
        }
    }
    return DensityMatrix(static_cast<int>(keep.size()), std::move(entries));
}

double outcome_probability(const DensityMatrix& rho, const std::vector<int>& measured,
                           std::size_t outcome) {
    const int n = rho.n_qubits();
    const std::vector<int> rest = complement_of(measured, n, "outcome_probability", true);
    if (outcome >= (std::size_t{1} << measured.size()))
        throw std::invalid_argument("outcome_probability: outcome out of range");
    const std::size_t so = scatter(outcome, measured, n);
    double prob = 0.0;
    for (std::size_t r = 0; r < (std::size_t{1} << rest.size()); ++r) {
        const std::size_t full = so | scatter(r, rest, n);
        prob += std::real(rho.at(full, full));
    }
    return prob;
}

StateVector project_renormalize(const StateVector& psi, const std::vector<int>& measured,
                                std::size_t outcome) {
    const int n = psi.n_qubits();
    const std::vector<int> rest = complement_of(measured, n, "project_renormalize");
    if (outcome >= (std::size_t{1} << measured.size()))
        throw std::invalid_argument("project_renormalize: outcome out of range");
    const std::size_t so = scatter(outcome, measured, n);
    const std::size_t dr = std::size_t{1} << rest.size();

    std::vector<cplx> amps(dr);
    double prob = 0.0;
    for (std::size_t r = 0; r < dr; ++r) {
        amps[r] = psi[so | scatter(r, rest, n)];
        prob += std::norm(amps[r]);
    }
    if (prob < kAlgebraTol)
        throw impossible_outcome_error("conditioning on a zero-probability outcome");
    const double inv = 1.0 / std::sqrt(prob);
    for (cplx& a : amps) a *= inv;
    return StateVector(static_cast<int>(rest.size()), std::move(amps));
}

DensityMatrix project_renormalize(const DensityMatrix& rho, const std::vector<int>& measured,
                                  std::size_t outcome) {
    const int n = rho.n_qubits();
    const std::vector<int> rest = complement_of(measured, n, "project_renormalize");
    if (outcome >= (std::size_t{1} << measured.size()))
        throw std::invalid_argument("project_renormalize: outcome out of range");
    const std::size_t so = scatter(outcome, measured, n);
    const std::size_t dr = std::size_t{1} << rest.size();

    std::vector<cplx> entries(dr * dr);
    double prob = 0.0;
    for (std::size_t i = 0; i < dr; ++i) {
        const std::size_t si = so | scatter(i, rest, n);
        for (std::size_t j = 0; j < dr; ++j) {
            const std::size_t sj = so | scatter(j, rest, n);
            entries[i * dr + j] = rho.at(si, sj);
        }
        prob += std::real(entries[i * dr + i]);
    }
    if (prob < kAlgebraTol)
        throw impossible_outcome_error("conditioning on a zero-probability outcome");
    for (cplx& e : entries) e /= prob;
    return DensityMatrix(static_cast<int>(rest.size()), std::move(entries));
}

double fidelity(const DensityMatrix& a, const DensityMatrix& b) {
    if (a.dim() != b.dim())
        throw std::invalid_argument("fidelity: dimension mismatch");

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> sa(to_eigen(a));
    if (sa.info() != Eigen::Success)
        throw std::runtime_error("fidelity: eigenvalue decomposition failed");
    Eigen::VectorXd root = sa.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    const Eigen::MatrixXcd sqrt_a =
        sa.eigenvectors() * root.asDiagonal() * sa.eigenvectors().adjoint();

    const Eigen::MatrixXcd inner = sqrt_a * to_eigen(b) * sqrt_a;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> si(inner, Eigen::EigenvaluesOnly);
    if (si.info() != Eigen::Success)
        throw std::runtime_error("fidelity: eigenvalue decomposition failed");

    double tr = 0.0;
    for (long k = 0; k < si.eigenvalues().size(); ++k)
        tr += std::sqrt(std::max(0.0, si.eigenvalues()[k]));
    return std::clamp(tr * tr, 0.0, 1.0);
}

}  // namespace pvq::qcore
