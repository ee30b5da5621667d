#pragma once
// Dense square-matrix helpers for the 16-dimensional bookkeeping. Row-major
// storage throughout, matching DensityMatrix.

#include <vector>

#include "pvq/qcore/state.hpp"

namespace pvq::qcore {

std::vector<cplx> matmul(const std::vector<cplx>& a, const std::vector<cplx>& b,
                         std::size_t dim);

std::vector<cplx> dagger(const std::vector<cplx>& m, std::size_t dim);

// U M U†.
std::vector<cplx> conjugate_with(const std::vector<cplx>& u, const std::vector<cplx>& m,
                                 std::size_t dim);

}  // namespace pvq::qcore
