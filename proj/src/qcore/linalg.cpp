#include "pvq/qcore/linalg.hpp"

#include <stdexcept>

namespace pvq::qcore {

namespace {

void check_dims(const std::vector<cplx>& m, std::size_t dim, const char* what) {
    if (m.size() != dim * dim) throw std::invalid_argument(std::string(what) + ": size does not match dim*dim");
}

}  // namespace

std::vector<cplx> matmul(const std::vector<cplx>& a, const std::vector<cplx>& b,
                         std::size_t dim) {
    check_dims(a, dim, "matmul lhs");
    check_dims(b, dim, "matmul rhs");
    std::vector<cplx> out(dim * dim, cplx{0.0, 0.0});
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t k = 0; k < dim; ++k) {
            const cplx aik = a[i * dim + k];
            if (aik == cplx{0.0, 0.0}) continue;
            for (std::size_t j = 0; j < dim; ++j) {
                out[i * dim + j] += aik * b[k * dim + j];
            }
        }
    }
    return out;
}

std::vector<cplx> dagger(const std::vector<cplx>& m, std::size_t dim) {
    check_dims(m, dim, "dagger");
    std::vector<cplx> out(dim * dim);
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = 0; j < dim; ++j) {
            out[j * dim + i] = std::conj(m[i * dim + j]);
        }
    }
    return out;
}

std::vector<cplx> conjugate_with(const std::vector<cplx>& u, const std::vector<cplx>& m,
                                 std::size_t dim) {
    return matmul(matmul(u, m, dim), dagger(u, dim), dim);
}

}  // namespace pvq::qcore
