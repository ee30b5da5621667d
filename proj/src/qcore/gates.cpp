#include "pvq/qcore/gates.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pvq::qcore {

namespace {

void check_targets(const Gate& g, int n_qubits) {
    const std::size_t expected = g.matrix.size() == 4 ? 1 : 2;
    if (g.targets.size() != expected)
        throw std::invalid_argument("gate " + g.name + " has wrong target count");
    for (int t : g.targets)
        if (t < 0 || t >= n_qubits)
            throw std::invalid_argument("gate " + g.name + " target out of range");
    if (g.targets.size() == 2 && g.targets[0] == g.targets[1])
        throw std::invalid_argument("gate " + g.name + " targets must be distinct");
}

std::size_t matrix_dim(const Gate& g) {
    if (g.matrix.size() == 4) return 2;
    if (g.matrix.size() == 16) return 4;
    throw std::invalid_argument("gate " + g.name + " matrix must be 2x2 or 4x4");
}

}  // namespace

Gate gate_h(int target) {
    const double s = 1.0 / std::sqrt(2.0);
    return Gate{"H", {s, s, s, -s}, {target}, true};
}

Gate gate_x(int target) {
    return Gate{"X", {0.0, 1.0, 1.0, 0.0}, {target}, true};
}

Gate gate_cnot(int control, int target) {
    if (control == target) throw std::invalid_argument("gate_cnot: control and target must differ");
    return Gate{"CNOT",
                {1, 0, 0, 0,
                 0, 1, 0, 0,
                 0, 0, 0, 1,
                 0, 0, 1, 0},
                {control, target},
                true};
}

Gate gate_hwp(double theta, int target) {
    const double c = std::cos(2.0 * theta), s = std::sin(2.0 * theta);
    return Gate{"HWP", {c, s, s, -c}, {target}, true};
}

Gate gate_phase(double alpha, int target) {
    return Gate{"PHASE", {1.0, 0.0, 0.0, std::polar(1.0, alpha)}, {target}, true};
}

Gate gate_polproj(double theta, int target) {
    const double c = std::cos(theta), s = std::sin(theta);
    return Gate{"POLPROJ", {c * c, c * s, s * c, s * s}, {target}, false};
}

bool is_unitary(const std::vector<cplx>& matrix, std::size_t dim, double tol) {
    if (matrix.size() != dim * dim) return false;
    for (std::size_t r = 0; r < dim; ++r)
        for (std::size_t c = 0; c < dim; ++c) {
            cplx dot = 0.0;  // (U† U)(r,c)
            for (std::size_t k = 0; k < dim; ++k)
                dot += std::conj(matrix[k * dim + r]) * matrix[k * dim + c];
            const cplx expect = r == c ? cplx{1.0, 0.0} : cplx{0.0, 0.0};
            if (std::abs(dot - expect) > tol) return false;
        }
    return true;
}

StateVector apply_gate(const StateVector& psi, const Gate& g) {
    const int n = psi.n_qubits();
    check_targets(g, n);
    const std::size_t mdim = matrix_dim(g);
    if (!g.unitary || !is_unitary(g.matrix, mdim))
        throw std::invalid_argument("gate " + g.name +
                                    " is not unitary; use project_renormalize");

    std::vector<cplx> out(psi.dim());
    if (mdim == 2) {
        const std::size_t stride = std::size_t{1} << (n - 1 - g.targets[0]);
        const cplx m00 = g.matrix[0], m01 = g.matrix[1];
        const cplx m10 = g.matrix[2], m11 = g.matrix[3];
        for (std::size_t i = 0; i < psi.dim(); ++i) {
            if (i & stride) continue;
            const cplx a0 = psi[i], a1 = psi[i | stride];
            out[i] = m00 * a0 + m01 * a1;
            out[i | stride] = m10 * a0 + m11 * a1;
        }
    } else {
        // Row/column order of the 4x4 matrix: (first target bit, second target bit).
        const std::size_t s0 = std::size_t{1} << (n - 1 - g.targets[0]);
        const std::size_t s1 = std::size_t{1} << (n - 1 - g.targets[1]);
        for (std::size_t i = 0; i < psi.dim(); ++i) {
            if ((i & s0) || (i & s1)) continue;
            const std::size_t idx[4] = {i, i | s1, i | s0, i | s0 | s1};
            for (std::size_t r = 0; r < 4; ++r) {
                cplx acc = 0.0;
                for (std::size_t c = 0; c < 4; ++c) acc += g.matrix[r * 4 + c] * psi[idx[c]];
                out[idx[r]] = acc;
            }
        }
    }
    return StateVector(n, std::move(out));
}

StateVector tensor(const StateVector& a, const StateVector& b) {
    if (a.n_qubits() + b.n_qubits() > kMaxQubits)
        throw std::invalid_argument("tensor product exceeds the supported qubit count");
    std::vector<cplx> amps(a.dim() * b.dim());
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < b.dim(); ++j) amps[i * b.dim() + j] = a[i] * b[j];
    return StateVector(a.n_qubits() + b.n_qubits(), std::move(amps));
}

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
    if (a.n_qubits() + b.n_qubits() > kMaxQubits)
        throw std::invalid_argument("tensor product exceeds the supported qubit count");
    const std::size_t da = a.dim(), db = b.dim(), dim = da * db;
    std::vector<cplx> entries(dim * dim);
    for (std::size_t ra = 0; ra < da; ++ra)
        for (std::size_t ca = 0; ca < da; ++ca)
            for (std::size_t rb = 0; rb < db; ++rb)
                for (std::size_t cb = 0; cb < db; ++cb)
                    entries[(ra * db + rb) * dim + (ca * db + cb)] = a.at(ra, ca) * b.at(rb, cb);
    return DensityMatrix(a.n_qubits() + b.n_qubits(), std::move(entries));
}

std::vector<cplx> embed_gate_matrix(int n_qubits, const Gate& g) {
    check_targets(g, n_qubits);
    const std::size_t mdim = matrix_dim(g);
    const std::size_t dim = std::size_t{1} << n_qubits;

    // full[r][c] = m[target bits of r][target bits of c] when the non-target
    // bits of r and c agree, else 0.
    std::vector<cplx> full(dim * dim, cplx{0.0, 0.0});
    std::size_t rest_mask = dim - 1;
    for (int t : g.targets) rest_mask &= ~(std::size_t{1} << (n_qubits - 1 - t));
    for (std::size_t r = 0; r < dim; ++r) {
        for (std::size_t c = 0; c < dim; ++c) {
            if ((r & rest_mask) != (c & rest_mask)) continue;
            std::size_t mr = 0, mc = 0;
            for (std::size_t k = 0; k < g.targets.size(); ++k) {
                const std::size_t bit = std::size_t{1} << (n_qubits - 1 - g.targets[k]);
                mr = (mr << 1) | ((r & bit) ? 1 : 0);
                mc = (mc << 1) | ((c & bit) ? 1 : 0);
            }
            full[r * dim + c] = g.matrix[mr * mdim + mc];
        }
    }
    return full;
}

}  // namespace pvq::qcore
