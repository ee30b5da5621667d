#include <bit>
#include <cmath>
#include <complex>
#include <vector>

#include "doctest.h"
#include "pvq/circuits/circuits.hpp"
#include "pvq/noise/noise.hpp"
#include "pvq/qcore/gates.hpp"
#include "pvq/qcore/ops.hpp"

using namespace pvq::noise;
using pvq::circuits::Bell;
using pvq::circuits::bell_state;
using pvq::circuits::prepare_psi_abcd;

namespace {

double odd_parity_weight(const DensityMatrix& dm) {
    const auto probs = pvq::qcore::outcome_probabilities(dm);
    double w = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        if (std::popcount(i) % 2 == 1) w += probs[i];
    }
    return w;
}

void check_entrywise(const DensityMatrix& got, const DensityMatrix& expect, double tol = 1e-12) {
    REQUIRE(got.dim() == expect.dim());
    for (std::size_t r = 0; r < got.dim(); ++r)
        for (std::size_t c = 0; c < got.dim(); ++c) CHECK(std::abs(got.at(r, c) - expect.at(r, c)) < tol);
}

}  // namespace

TEST_SUITE("noise") {

TEST_CASE("depolarized pair has the expected spectrum") {
    const DensityMatrix dm = depolarize_pair(bell_state(Bell::PsiPlus), 0.5);
    const auto evs = dm.eigenvalues();  // ascending
    CHECK(evs[0] == doctest::Approx(0.125).epsilon(1e-12));
    CHECK(evs[1] == doctest::Approx(0.125).epsilon(1e-12));
    CHECK(evs[2] == doctest::Approx(0.125).epsilon(1e-12));
    CHECK(evs[3] == doctest::Approx(0.625).epsilon(1e-12));
}

TEST_CASE("depolarizing limits: identity at p=0, flat at p=1") {
    const auto psi = bell_state(Bell::PsiPlus);
    check_entrywise(depolarize_pair(psi, 0.0), DensityMatrix::from_pure(psi));
    check_entrywise(depolarize_pair(psi, 1.0), DensityMatrix::maximally_mixed(2));
    CHECK_THROWS_AS(depolarize_pair(psi, -0.1), std::invalid_argument);
    CHECK_THROWS_AS(depolarize_pair(psi, 1.1), std::invalid_argument);
    CHECK_THROWS_AS(depolarize_pair(pvq::qcore::StateVector::basis(1, 0), 0.1), std::invalid_argument);
}

TEST_CASE("depolarize handles any register width") {
    const auto four = depolarize(prepare_psi_abcd(), 1.0);
    check_entrywise(four, DensityMatrix::maximally_mixed(4));
}

TEST_CASE("non-maximal pair amplitudes") {
    const auto balanced = nonmaximal_pair(M_SQRT1_2);
    CHECK(pvq::circuits::max_entry_distance(balanced, bell_state(Bell::PsiPlus)) < 1e-15);

    const auto vh = nonmaximal_pair(0.0);
    CHECK(std::abs(vh[0b10] - cplx{1.0, 0.0}) < 1e-15);

    const auto skew = nonmaximal_pair(0.6);
    CHECK(std::abs(skew[0b01] - cplx{0.6, 0.0}) < 1e-15);
    CHECK(std::abs(skew[0b10] - cplx{0.8, 0.0}) < 1e-15);

    CHECK_THROWS_AS(nonmaximal_pair(-0.2), std::invalid_argument);
    CHECK_THROWS_AS(nonmaximal_pair(1.2), std::invalid_argument);
}

TEST_CASE("wave plate interpolates between the odd Bell states") {
    CHECK(pvq::circuits::max_entry_distance(hwp_rotated_pair(0.0), bell_state(Bell::PsiMinus)) < 1e-15);

    // the closed form matches applying the plate matrix to arm A
    for (double theta : {0.0, M_PI / 32.0, M_PI / 16.0, M_PI / 8.0}) {
        const auto direct = hwp_rotated_pair(theta);
        const auto gated = pvq::qcore::apply_gate(bell_state(Bell::PsiPlus), pvq::qcore::gate_hwp(theta, 0));
        CHECK(pvq::circuits::max_entry_distance(direct, gated) < 1e-12);
    }
    CHECK_THROWS_AS(hwp_rotated_pair(-0.1), std::invalid_argument);
    CHECK_THROWS_AS(hwp_rotated_pair(M_PI / 4.0), std::invalid_argument);
}

TEST_CASE("propagation maps the ideal pair to the eight-term record state") {
    const DensityMatrix got = propagate_four_qubit(DensityMatrix::from_pure(bell_state(Bell::PsiPlus)));
    check_entrywise(got, DensityMatrix::from_pure(prepare_psi_abcd()));
}

TEST_CASE("propagating a flat source floods all sixteen outcomes evenly") {
    const DensityMatrix got = propagate_four_qubit(DensityMatrix::maximally_mixed(2));
    const auto probs = pvq::qcore::outcome_probabilities(got);
    for (double p : probs) CHECK(p == doctest::Approx(1.0 / 16.0).epsilon(1e-12));
}

TEST_CASE("parity violation of a depolarized source is exactly p/2") {
    for (double p : {0.0, 0.042, 0.25, 0.5, 1.0}) {
        const DensityMatrix records = record_state(NoiseConfig{.p = p});
        CHECK(odd_parity_weight(records) == doctest::Approx(p / 2.0).epsilon(1e-12));
        CHECK(qber_predicted(p) == doctest::Approx(p / 2.0).epsilon(1e-15));
    }
    CHECK_THROWS_AS(qber_predicted(1.5), std::invalid_argument);
}

TEST_CASE("conditioning a depolarized record state gives the closed-form residues") {
    using pvq::qcore::StateVector;
    const StateVector theta3(3, {cplx{0.5, 0.0}, cplx{0.0, 0.0}, cplx{0.0, 0.0}, cplx{-0.5, 0.0},
                                 cplx{0.0, 0.0}, cplx{0.5, 0.0}, cplx{0.5, 0.0}, cplx{0.0, 0.0}});
    const StateVector phi_minus = bell_state(Bell::PhiMinus);

    for (double p : {0.0, 0.25, 0.5, 1.0}) {
        const DensityMatrix rho4 = depolarize(prepare_psi_abcd(), p);

        const DensityMatrix cond_a = post_measurement_states(rho4, {0}, 0);
        check_entrywise(cond_a, depolarize(theta3, p));

        const DensityMatrix cond_ab = post_measurement_states(rho4, {0, 1}, 0b00);
        check_entrywise(cond_ab, depolarize_pair(phi_minus, p));
    }
}

TEST_CASE("propagated non-maximal pairs weight the two pattern families by alpha and beta") {
    const double alpha = 0.6, beta = 0.8;
    const DensityMatrix records = propagate_four_qubit(DensityMatrix::from_pure(nonmaximal_pair(alpha)));
    const auto probs = pvq::qcore::outcome_probabilities(records);

    for (std::size_t idx : {0b1100u, 0b1001u, 0b0110u, 0b0011u}) {
        CHECK(probs[idx] == doctest::Approx(alpha * alpha / 4.0).epsilon(1e-12));
    }
    for (std::size_t idx : {0b0000u, 0b0101u, 0b1010u, 0b1111u}) {
        CHECK(probs[idx] == doctest::Approx(beta * beta / 4.0).epsilon(1e-12));
    }

    // both two-detector pairings see {01,10} at alpha^2/2 and {00,11} at beta^2/2
    for (const std::vector<int>& pairing : {std::vector<int>{0, 2}, std::vector<int>{1, 3}}) {
        CHECK(pvq::qcore::outcome_probability(records, pairing, 0b01) == doctest::Approx(alpha * alpha / 2.0).epsilon(1e-12));
        CHECK(pvq::qcore::outcome_probability(records, pairing, 0b10) == doctest::Approx(alpha * alpha / 2.0).epsilon(1e-12));
        CHECK(pvq::qcore::outcome_probability(records, pairing, 0b00) == doctest::Approx(beta * beta / 2.0).epsilon(1e-12));
        CHECK(pvq::qcore::outcome_probability(records, pairing, 0b11) == doctest::Approx(beta * beta / 2.0).epsilon(1e-12));
    }
}

TEST_CASE("a rotated wave plate leaks weight into odd-parity records as sin^2") {
    for (double theta : {0.0, M_PI / 16.0, M_PI / 8.0}) {
        const DensityMatrix records = propagate_four_qubit(DensityMatrix::from_pure(hwp_rotated_pair(theta)));
        const double s = std::sin(2.0 * theta);
        CHECK(odd_parity_weight(records) == doctest::Approx(s * s).epsilon(1e-12));
    }
}

TEST_CASE("default configuration reproduces the ideal record state") {
    check_entrywise(record_state(NoiseConfig{}), DensityMatrix::from_pure(prepare_psi_abcd()));
}

}  // TEST_SUITE
