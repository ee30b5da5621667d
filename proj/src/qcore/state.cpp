#include "pvq/qcore/state.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <string>

namespace pvq::qcore {

namespace {

std::size_t dim_for(int n_qubits) {
    if (n_qubits < 1 || n_qubits > kMaxQubits)
        throw std::invalid_argument("qubit count must be in [1," +
                                    std::to_string(kMaxQubits) + "], got " +
                                    std::to_string(n_qubits));
    return std::size_t{1} << n_qubits;
}

Eigen::MatrixXcd to_eigen(const std::vector<cplx>& entries, std::size_t dim) {
    Eigen::MatrixXcd m(dim, dim);
    for (std::size_t r = 0; r < dim; ++r)
        for (std::size_t c = 0; c < dim; ++c) m(r, c) = entries[r * dim + c];
    return m;
}

}  // namespace

StateVector::StateVector(int n_qubits, std::vector<cplx> amplitudes)
    : n_qubits_(n_qubits), amps_(std::move(amplitudes)) {
    const std::size_t dim = dim_for(n_qubits);
    if (amps_.size() != dim)
        throw std::invalid_argument("amplitude count " + std::to_string(amps_.size()) +
                                    " does not match dimension " + std::to_string(dim));
    double norm_sq = 0.0;
    for (const cplx& a : amps_) norm_sq += std::norm(a);
    if (std::abs(norm_sq - 1.0) > kEigenvalueTol)
        throw std::invalid_argument("state vector is not normalized: |psi|^2 = " +
                                    std::to_string(norm_sq));
}

StateVector StateVector::basis(int n_qubits, std::size_t index) {
    const std::size_t dim = dim_for(n_qubits);
    if (index >= dim) throw std::invalid_argument("basis index out of range");
    std::vector<cplx> amps(dim, cplx{0.0, 0.0});
    amps[index] = 1.0;
    return StateVector(n_qubits, std::move(amps));
}

DensityMatrix::DensityMatrix(int n_qubits, std::vector<cplx> entries)
    : n_qubits_(n_qubits), dim_(dim_for(n_qubits)), entries_(std::move(entries)) {
    if (entries_.size() != dim_ * dim_)
        throw std::invalid_argument("entry count does not match dimension");
    for (std::size_t r = 0; r < dim_; ++r)
        for (std::size_t c = r; c < dim_; ++c) {
            const cplx diff = entries_[r * dim_ + c] - std::conj(entries_[c * dim_ + r]);
            if (std::abs(diff) > kEigenvalueTol)
                throw std::invalid_argument("matrix is not Hermitian");
        }
    cplx tr = 0.0;
    for (std::size_t r = 0; r < dim_; ++r) tr += entries_[r * dim_ + r];
    if (std::abs(tr - cplx{1.0, 0.0}) > kEigenvalueTol)
        throw std::invalid_argument("matrix trace is not 1");
    for (double ev : eigenvalues())
        if (ev < -kEigenvalueTol)
            throw std::invalid_argument("matrix has a negative eigenvalue: " +
                                        std::to_string(ev));
}

DensityMatrix DensityMatrix::from_pure(const StateVector& psi) {
    const std::size_t dim = psi.dim();
    std::vector<cplx> entries(dim * dim);
    for (std::size_t r = 0; r < dim; ++r)
        for (std::size_t c = 0; c < dim; ++c)
            entries[r * dim + c] = psi[r] * std::conj(psi[c]);
    return DensityMatrix(psi.n_qubits(), std::move(entries));
}

DensityMatrix DensityMatrix::maximally_mixed(int n_qubits) {
    const std::size_t dim = dim_for(n_qubits);
    std::vector<cplx> entries(dim * dim, cplx{0.0, 0.0});
    for (std::size_t r = 0; r < dim; ++r) entries[r * dim + r] = 1.0 / static_cast<double>(dim);
    return DensityMatrix(n_qubits, std::move(entries));
}

cplx DensityMatrix::trace() const noexcept {
    cplx tr = 0.0;
    for (std::size_t r = 0; r < dim_; ++r) tr += entries_[r * dim_ + r];
    return tr;
}

std::vector<double> DensityMatrix::eigenvalues() const {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(to_eigen(entries_, dim_),
                                                           Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("eigenvalue decomposition failed");
    std::vector<double> evs(dim_);
    for (std::size_t k = 0; k < dim_; ++k) evs[k] = solver.eigenvalues()[static_cast<long>(k)];
    return evs;
}

}  // namespace pvq::qcore
