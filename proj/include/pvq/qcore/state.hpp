#pragma once
// Pure states and density matrices at fixed small dimension (1 to 4 qubits).
// Qubit 0 is subsystem A, the leftmost bit of a ket label; a basis index is
// the label read as a binary number, so |0110> has index 6.

#include <complex>
#include <cstddef>
#include <vector>

namespace pvq::qcore {

using cplx = std::complex<double>;

inline constexpr int kMaxQubits = 4;
// Tolerance for algebraic identities (norms, Hermiticity, trace).
inline constexpr double kAlgebraTol = 1e-12;
// Slack for eigenvalue positivity, which loses more precision than entrywise checks.
inline constexpr double kEigenvalueTol = 1e-10;

// Normalized complex amplitude vector. Immutable after construction; the
// constructor enforces length 2^n and unit norm within kAlgebraTol.
class StateVector {
public:
    StateVector(int n_qubits, std::vector<cplx> amplitudes);

    static StateVector basis(int n_qubits, std::size_t index);

    int n_qubits() const noexcept { return n_qubits_; }
    std::size_t dim() const noexcept { return amps_.size(); }
    const std::vector<cplx>& amplitudes() const noexcept { return amps_; }
    const cplx& operator[](std::size_t k) const noexcept { return amps_[k]; }
    double probability(std::size_t k) const noexcept { return std::norm(amps_[k]); }

private:
    int n_qubits_;
    std::vector<cplx> amps_;
};

// Hermitian, trace-1, positive-semidefinite matrix, row-major storage.
// The constructor enforces all three invariants (positivity within
// kEigenvalueTol) and rejects anything else.
class DensityMatrix {
public:
    DensityMatrix(int n_qubits, std::vector<cplx> entries);

    static DensityMatrix from_pure(const StateVector& psi);
    static DensityMatrix maximally_mixed(int n_qubits);

    int n_qubits() const noexcept { return n_qubits_; }
    std::size_t dim() const noexcept { return dim_; }
    const std::vector<cplx>& entries() const noexcept { return entries_; }
    const cplx& at(std::size_t row, std::size_t col) const noexcept {
        return entries_[row * dim_ + col];
    }
    cplx trace() const noexcept;

    // Real spectrum in ascending order.
    std::vector<double> eigenvalues() const;

private:
    int n_qubits_;
    std::size_t dim_;
    std::vector<cplx> entries_;
};

}  // namespace pvq::qcore
