#pragma once
// Bit-level statistical test battery: ten p-value tests (frequency, block
// frequency, runs, longest run, cumulative sums both directions, serial pair,
// approximate entropy, spectral), plus entropy and mutual-information
// estimators. Bits are passed as one 0/1 byte per element.

#include <cstdint>
#include <string>
#include <vector>

namespace pvq::randtests {

using Bits = std::vector<std::uint8_t>;

struct TestResult {
    std::string name;
    double p_value = 0.0;    // NaN when not applicable
    bool pass = false;       // p_value >= alpha; true for inapplicable rows
    bool applicable = true;  // false when the sequence is below the test's minimum length
    std::string note;        // parameters used, or the reason a row is inapplicable
};

struct BatteryParams {
    std::size_t block_frequency_block = 128;  // M for the block-frequency test
    int serial_m = 16;                        // block length for the serial pair
    int apen_m = 10;                          // block length for approximate entropy
    double alpha = 0.01;                      // per-test significance level
};

struct TestReport {
    std::vector<TestResult> results;
    bool all_pass = false;  // every row passes (inapplicable rows never fail)
    std::size_t n_bits = 0;
};

// Runs the full ten-row battery. Rows whose minimum length exceeds n are
// marked inapplicable rather than failed.
TestReport run_battery(const Bits& bits, const BatteryParams& params = {});

// Individual statistics. These compute whenever the arithmetic is defined,
// regardless of the battery's minimum-length policy, so short published
// worked examples can be checked directly.
double frequency_p(const Bits& bits);
double block_frequency_p(const Bits& bits, std::size_t block_len);
double runs_p(const Bits& bits);
double longest_run_p(const Bits& bits);
// reverse = true prepends the partial sums from the end of the sequence
double cusum_p(const Bits& bits, bool reverse);

struct SerialP {
    double p1 = 0.0;  // first-difference statistic
    double p2 = 0.0;  // second-difference statistic
};
SerialP serial_p(const Bits& bits, int m);

double approximate_entropy_p(const Bits& bits, int m);
double spectral_p(const Bits& bits);

// Shannon entropy of the empirical 0/1 distribution, in bits per symbol.
double shannon_entropy(const Bits& bits);

// Plug-in mutual information between two equal-length bit columns, in bits.
double mutual_information(const Bits& x, const Bits& y);

}  // namespace pvq::randtests
