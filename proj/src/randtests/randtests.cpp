#include "pvq/randtests/randtests.hpp"

#include <fftw3.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <limits>
#include <mutex>
#include <stdexcept>

#include <boost/math/special_functions/gamma.hpp>

namespace pvq::randtests {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

double igamc(double a, double x) { return boost::math::gamma_q(a, x); }

double std_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

void validate_bits(const Bits& bits, const char* what) {
    if (bits.empty()) throw std::invalid_argument(std::string(what) + ": empty bit sequence");
    for (const std::uint8_t b : bits) {
        if (b > 1) throw std::invalid_argument(std::string(what) + ": bits must be 0 or 1");
    }
}

// Occurrence counts of all circular m-bit windows, one counter per pattern.
std::vector<std::uint32_t> window_counts(const Bits& bits, int m) {
    const std::size_t n = bits.size();
    std::vector<std::uint32_t> counts(std::size_t{1} << m, 0);
    const std::size_t mask = (std::size_t{1} << m) - 1;

    Bits padded(bits);
    padded.insert(padded.end(), bits.begin(), bits.begin() + (m - 1));

    std::size_t idx = 0;
    for (int i = 0; i < m - 1; ++i) idx = ((idx << 1) | padded[static_cast<std::size_t>(i)]) & mask;
    for (std::size_t start = 0; start < n; ++start) {
        idx = ((idx << 1) | padded[start + static_cast<std::size_t>(m) - 1]) & mask;
        ++counts[idx];
    }
    return counts;
}

double psi_squared(const Bits& bits, int m) {
    if (m <= 0) return 0.0;
    const double n = static_cast<double>(bits.size());
    const auto counts = window_counts(bits, m);
    double sum_sq = 0.0;
    for (const std::uint32_t c : counts) sum_sq += static_cast<double>(c) * static_cast<double>(c);
    return std::ldexp(1.0, m) / n * sum_sq - n;
}

double phi_statistic(const Bits& bits, int m) {
    if (m <= 0) return 0.0;
    const double n = static_cast<double>(bits.size());
    const auto counts = window_counts(bits, m);
    double phi = 0.0;
    for (const std::uint32_t c : counts) {
        if (c == 0) continue;
        const double f = static_cast<double>(c) / n;
        phi += f * std::log(f);
    }
    return phi;
}

TestResult make_inapplicable(std::string name, std::string why) {
    return TestResult{std::move(name), kNan, true, false, std::move(why)};
}

TestResult make_result(std::string name, double p, double alpha, std::string note = {}) {
    return TestResult{std::move(name), p, p >= alpha, true, std::move(note)};
}

}  // namespace

double frequency_p(const Bits& bits) {
    validate_bits(bits, "frequency_p");
    const double n = static_cast<double>(bits.size());
    long long s = 0;
    for (const std::uint8_t b : bits) s += 2 * b - 1;
    const double s_obs = std::abs(static_cast<double>(s)) / std::sqrt(n);
    return std::erfc(s_obs / std::sqrt(2.0));
}

double block_frequency_p(const Bits& bits, std::size_t block_len) {
    validate_bits(bits, "block_frequency_p");
    if (block_len == 0) throw std::invalid_argument("block_frequency_p: block length must be positive");
    const std::size_t n_blocks = bits.size() / block_len;
    if (n_blocks == 0) throw std::invalid_argument("block_frequency_p: sequence shorter than one block");
    double chi = 0.0;
    for (std::size_t b = 0; b < n_blocks; ++b) {
        std::size_t ones = 0;
        for (std::size_t i = 0; i < block_len; ++i) ones += bits[b * block_len + i];
        const double dev = static_cast<double>(ones) / static_cast<double>(block_len) - 0.5;
        chi += dev * dev;
    }
    chi *= 4.0 * static_cast<double>(block_len);
    return igamc(static_cast<double>(n_blocks) / 2.0, chi / 2.0);
}

double runs_p(const Bits& bits) {
    validate_bits(bits, "runs_p");
    const double n = static_cast<double>(bits.size());
    std::size_t ones = 0;
    for (const std::uint8_t b : bits) ones += b;
    const double pi = static_cast<double>(ones) / n;
    // frequency prerequisite: a biased sequence fails outright
    if (std::abs(pi - 0.5) >= 2.0 / std::sqrt(n)) return 0.0;
    if (pi == 0.0 || pi == 1.0) return 0.0;
    std::size_t v = 1;
    for (std::size_t k = 0; k + 1 < bits.size(); ++k) v += (bits[k] != bits[k + 1]);
    const double expected = 2.0 * n * pi * (1.0 - pi);
    return std::erfc(std::abs(static_cast<double>(v) - expected) /
                     (2.0 * std::sqrt(2.0 * n) * pi * (1.0 - pi)));
}

double longest_run_p(const Bits& bits) {
    validate_bits(bits, "longest_run_p");
    const std::size_t n = bits.size();
    if (n < 128) throw std::invalid_argument("longest_run_p: needs at least 128 bits");

    std::size_t block_len;
    int k;       // degrees of freedom; k+1 classes
    int lo;      // run length mapped to class 0
    std::vector<double> pi;
    if (n < 6272) {
        block_len = 8;
        k = 3;
        lo = 1;
        // exact class probabilities for 8-bit blocks
        pi = {55.0 / 256.0, 94.0 / 256.0, 59.0 / 256.0, 48.0 / 256.0};
    } else if (n < 750000) {
        block_len = 128;
        k = 5;
        lo = 4;
        pi = {0.1174, 0.2430, 0.2493, 0.1752, 0.1027, 0.1124};
    } else {
        block_len = 10000;
        k = 6;
        lo = 10;
        pi = {0.0882, 0.2092, 0.2483, 0.1933, 0.1208, 0.0675, 0.0727};
    }

    const std::size_t n_blocks = n / block_len;
    std::vector<std::size_t> v(static_cast<std::size_t>(k) + 1, 0);
    for (std::size_t b = 0; b < n_blocks; ++b) {
        int longest = 0, current = 0;
        for (std::size_t i = 0; i < block_len; ++i) {
            current = bits[b * block_len + i] ? current + 1 : 0;
            longest = std::max(longest, current);
        }
        const int cls = std::clamp(longest - lo, 0, k);
        ++v[static_cast<std::size_t>(cls)];
    }

    double chi = 0.0;
    for (int i = 0; i <= k; ++i) {
        const double expect = static_cast<double>(n_blocks) * pi[static_cast<std::size_t>(i)];
        const double dev = static_cast<double>(v[static_cast<std::size_t>(i)]) - expect;
        chi += dev * dev / expect;
    }
    return igamc(static_cast<double>(k) / 2.0, chi / 2.0);
}

double cusum_p(const Bits& bits, bool reverse) {
    validate_bits(bits, "cusum_p");
    const std::size_t n = bits.size();
    long long s = 0, z = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const std::uint8_t b = reverse ? bits[n - 1 - i] : bits[i];
        s += 2 * b - 1;
        z = std::max(z, std::llabs(s));
    }
    if (z == 0) return 0.0;  // constant alternation balance never reaches zero max for n >= 1

    const double sqrt_n = std::sqrt(static_cast<double>(n));
    const double zd = static_cast<double>(z);
    const long long t = static_cast<long long>(n) / z;  // truncating division, as in the reference
    double sum1 = 0.0;
    for (long long kk = (-t + 1) / 4; kk <= (t - 1) / 4; ++kk) {
        sum1 += std_normal_cdf((4.0 * kk + 1.0) * zd / sqrt_n) - std_normal_cdf((4.0 * kk - 1.0) * zd / sqrt_n);
    }
    double sum2 = 0.0;
    for (long long kk = (-t - 3) / 4; kk <= (t - 1) / 4; ++kk) {
        sum2 += std_normal_cdf((4.0 * kk + 3.0) * zd / sqrt_n) - std_normal_cdf((4.0 * kk + 1.0) * zd / sqrt_n);
    }
    return 1.0 - sum1 + sum2;
}

SerialP serial_p(const Bits& bits, int m) {
    validate_bits(bits, "serial_p");
    if (m < 2 || m > 24) throw std::invalid_argument("serial_p: block length outside [2, 24]");
    const double pm = psi_squared(bits, m);
    const double pm1 = psi_squared(bits, m - 1);
    const double pm2 = psi_squared(bits, m - 2);
    const double d1 = pm - pm1;
    const double d2 = pm - 2.0 * pm1 + pm2;
    SerialP out;
    out.p1 = igamc(std::ldexp(1.0, m - 2), d1 / 2.0);
    out.p2 = igamc(std::ldexp(1.0, m - 3), d2 / 2.0);
    return out;
}

double approximate_entropy_p(const Bits& bits, int m) {
    validate_bits(bits, "approximate_entropy_p");
    if (m < 1 || m > 24) throw std::invalid_argument("approximate_entropy_p: block length outside [1, 24]");
    const double n = static_cast<double>(bits.size());
    const double apen = phi_statistic(bits, m) - phi_statistic(bits, m + 1);
    const double chi = 2.0 * n * (std::log(2.0) - apen);
    return igamc(std::ldexp(1.0, m - 1), chi / 2.0);
}

double spectral_p(const Bits& bits) {
    validate_bits(bits, "spectral_p");
    const std::size_t n = bits.size();
    if (n < 2) throw std::invalid_argument("spectral_p: needs at least 2 bits");

    std::vector<double> in(n);
    for (std::size_t i = 0; i < n; ++i) in[i] = 2.0 * bits[i] - 1.0;
    std::vector<std::complex<double>> out(n / 2 + 1);

    // FFTW planning is not thread-safe; execution of a private plan is.
    static std::mutex plan_mutex;
    fftw_plan plan;
    {
        const std::lock_guard<std::mutex> lock(plan_mutex);
        plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), in.data(),
                                    reinterpret_cast<fftw_complex*>(out.data()), FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        const std::lock_guard<std::mutex> lock(plan_mutex);
        fftw_destroy_plan(plan);
    }

    // bins 0 .. n/2 - 1, the zero-frequency bin included
    const double threshold = std::sqrt(std::log(1.0 / 0.05) * static_cast<double>(n));
    std::size_t below = 0;
    for (std::size_t j = 0; j < n / 2; ++j) below += (std::abs(out[j]) < threshold);

    const double expected = 0.95 * static_cast<double>(n) / 2.0;
    const double d = (static_cast<double>(below) - expected) /
                     std::sqrt(static_cast<double>(n) * 0.95 * 0.05 / 4.0);
    return std::erfc(std::abs(d) / std::sqrt(2.0));
}

double shannon_entropy(const Bits& bits) {
    validate_bits(bits, "shannon_entropy");
    const double n = static_cast<double>(bits.size());
    std::size_t ones = 0;
    for (const std::uint8_t b : bits) ones += b;
    double h = 0.0;
    for (const double f : {static_cast<double>(ones) / n, static_cast<double>(bits.size() - ones) / n}) {
        if (f > 0.0) h -= f * std::log2(f);
    }
    return h;
}

double mutual_information(const Bits& x, const Bits& y) {
    validate_bits(x, "mutual_information");
    validate_bits(y, "mutual_information");
    if (x.size() != y.size()) throw std::invalid_argument("mutual_information: length mismatch");
    const double n = static_cast<double>(x.size());
    double joint[2][2] = {{0.0, 0.0}, {0.0, 0.0}};
    for (std::size_t i = 0; i < x.size(); ++i) joint[x[i]][y[i]] += 1.0;
    double mi = 0.0;
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
            const double pxy = joint[a][b] / n;
            if (pxy == 0.0) continue;
            const double px = (joint[a][0] + joint[a][1]) / n;
            const double py = (joint[0][b] + joint[1][b]) / n;
            mi += pxy * std::log2(pxy / (px * py));
        }
    }
    return mi;
}

TestReport run_battery(const Bits& bits, const BatteryParams& params) {
    validate_bits(bits, "run_battery");
    const std::size_t n = bits.size();
    const int log2n = static_cast<int>(std::floor(std::log2(static_cast<double>(n))));

    TestReport report;
    report.n_bits = n;
    auto& rows = report.results;

    if (n >= 100) {
        rows.push_back(make_result("frequency", frequency_p(bits), params.alpha));
    } else {
        rows.push_back(make_inapplicable("frequency", "needs at least 100 bits"));
    }

    if (n >= 100 && n >= params.block_frequency_block) {
        rows.push_back(make_result("block_frequency", block_frequency_p(bits, params.block_frequency_block),
                                   params.alpha, "M=" + std::to_string(params.block_frequency_block)));
    } else {
        rows.push_back(make_inapplicable("block_frequency", "needs at least 100 bits and one full block"));
    }

    if (n >= 100) {
        rows.push_back(make_result("runs", runs_p(bits), params.alpha));
    } else {
        rows.push_back(make_inapplicable("runs", "needs at least 100 bits"));
    }

    if (n >= 128) {
        rows.push_back(make_result("longest_run", longest_run_p(bits), params.alpha));
    } else {
        rows.push_back(make_inapplicable("longest_run", "needs at least 128 bits"));
    }

    if (n >= 100) {
        rows.push_back(make_result("cusum_forward", cusum_p(bits, false), params.alpha));
        rows.push_back(make_result("cusum_reverse", cusum_p(bits, true), params.alpha));
    } else {
        rows.push_back(make_inapplicable("cusum_forward", "needs at least 100 bits"));
        rows.push_back(make_inapplicable("cusum_reverse", "needs at least 100 bits"));
    }

    if (params.serial_m >= 2 && params.serial_m <= log2n - 3) {
        const SerialP sp = serial_p(bits, params.serial_m);
        const std::string note = "m=" + std::to_string(params.serial_m);
        rows.push_back(make_result("serial_1", sp.p1, params.alpha, note));
        rows.push_back(make_result("serial_2", sp.p2, params.alpha, note));
    } else {
        const std::string why = "block length too long for the sequence";
        rows.push_back(make_inapplicable("serial_1", why));
        rows.push_back(make_inapplicable("serial_2", why));
    }

    if (params.apen_m >= 1 && params.apen_m <= log2n - 6) {
        rows.push_back(make_result("approximate_entropy", approximate_entropy_p(bits, params.apen_m),
                                   params.alpha, "m=" + std::to_string(params.apen_m)));
    } else {
        rows.push_back(make_inapplicable("approximate_entropy", "block length too long for the sequence"));
    }

    if (n >= 1000) {
        rows.push_back(make_result("spectral", spectral_p(bits), params.alpha));
    } else {
        rows.push_back(make_inapplicable("spectral", "needs at least 1000 bits"));
    }

    report.all_pass = std::all_of(rows.begin(), rows.end(), [](const TestResult& r) { return r.pass; });
    return report;
}

}  // namespace pvq::randtests
