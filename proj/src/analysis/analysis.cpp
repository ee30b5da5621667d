#include "pvq/analysis/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "pvq/noise/noise.hpp"
#include "pvq/photonics/photonics.hpp"
#include "pvq/qcore/ops.hpp"
#include "pvq/qcore/rng.hpp"
#include "pvq/randtests/randtests.hpp"

namespace pvq::analysis {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kInvSqrt2 = 0.70710678118654752440;

void check_pair(const DensityMatrix& pair, const char* what) {
    if (pair.n_qubits() != 2) throw std::invalid_argument(std::string(what) + ": state must be two qubits");
}

void check_finite_grid(const std::vector<double>& grid, double lo, double hi, const char* what) {
    if (grid.empty()) throw std::invalid_argument(std::string(what) + ": empty grid");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!std::isfinite(grid[i]) || grid[i] < lo || grid[i] > hi)
            throw std::invalid_argument(std::string(what) + ": grid value out of range");
        if (i > 0 && grid[i] <= grid[i - 1])
            throw std::invalid_argument(std::string(what) + ": grid must be strictly increasing");
    }
}

// Golden-section minimum of f over [lo, hi].
template <typename F>
double golden_min(F f, double lo, double hi) {
    constexpr double kInvPhi = 0.61803398874989484820;
    double a = lo, b = hi;
    double c = b - kInvPhi * (b - a);
    double d = a + kInvPhi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > 1e-10) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - kInvPhi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + kInvPhi * (b - a);
            fd = f(d);
        }
    }
    return f(0.5 * (a + b));
}

double nominal_secure_kbps(double pump_power_mw) {
    const photonics::SourceConfig reference;
    const double rate = reference.pair_rate_per_mw_hz * pump_power_mw * reference.coincidence_efficiency;
    return 4.0 * rate / 1000.0 / 2.0;
}

void append_cell(std::string& out, double value) {
    if (std::isfinite(value)) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.12g", value);
        out += buf;
    }
    out += ',';
}

}  // namespace

double projector_probability(const DensityMatrix& pair, double theta_1, double theta_2) {
    check_pair(pair, "projector_probability");
    const double c1 = std::cos(theta_1), s1 = std::sin(theta_1);
    const double c2 = std::cos(theta_2), s2 = std::sin(theta_2);
    const double v[4] = {c1 * c2, c1 * s2, s1 * c2, s1 * s2};
    double p = 0.0;
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) p += v[r] * v[c] * pair.at(r, c).real();
    return std::clamp(p, 0.0, 1.0);
}

double correlator(const DensityMatrix& pair, double theta_1, double theta_2) {
    const double t1o = theta_1 + kPi / 2, t2o = theta_2 + kPi / 2;
    return projector_probability(pair, theta_1, theta_2) + projector_probability(pair, t1o, t2o) -
           projector_probability(pair, theta_1, t2o) - projector_probability(pair, t1o, theta_2);
}

AnalyzerSettings psi_plus_optimal() { return {0.0, kPi / 4, 3 * kPi / 8, kPi / 8}; }

AnalyzerSettings hv_fixed_settings() { return {0.0, kPi / 4, kPi / 8, 3 * kPi / 8}; }

double chsh_s(const DensityMatrix& pair, const AnalyzerSettings& settings) {
    return std::abs(correlator(pair, settings.a, settings.b) - correlator(pair, settings.a, settings.b_prime) +
                    correlator(pair, settings.a_prime, settings.b) +
                    correlator(pair, settings.a_prime, settings.b_prime));
}

double visibility(const DensityMatrix& pair, double theta_1) {
    check_pair(pair, "visibility");
    const auto fringe = [&](double t2) { return projector_probability(pair, theta_1, t2); };

    // coarse scan, then golden-section refinement around both extrema
    const double step = kPi / 360.0;
    double best_max = -1.0, best_min = 2.0, at_max = 0.0, at_min = 0.0;
    for (double t = 0.0; t < kPi; t += step) {
        const double p = fringe(t);
        if (p > best_max) {
            best_max = p;
            at_max = t;
        }
        if (p < best_min) {
            best_min = p;
            at_min = t;
        }
    }
    const double vmax = -golden_min([&](double t) { return -fringe(t); }, at_max - step, at_max + step);
    const double vmin = golden_min(fringe, at_min - step, at_min + step);
    const double denom = vmax + vmin;
    if (denom < 1e-15) return 0.0;
    return (vmax - vmin) / denom;
}

std::string SweepTable::to_csv() const {
    std::string out = "parameter,S,V,pass_fraction,bitrate,tests_passed\n";
    for (const SweepRow& row : rows) {
        append_cell(out, row.parameter);
        append_cell(out, row.s_value);
        append_cell(out, row.visibility);
        append_cell(out, row.pass_fraction);
        append_cell(out, row.bitrate_kbps);
        if (row.tests_passed >= 0) out += std::to_string(row.tests_passed);
        out += '\n';
    }
    return out;
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
    if (n == 0) throw std::invalid_argument("linspace: need at least one point");
    if (!std::isfinite(lo) || !std::isfinite(hi) || hi < lo)
        throw std::invalid_argument("linspace: bad interval");
    if (n == 1) return {lo};
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    return out;
}

std::vector<double> default_depolarizing_grid() { return linspace(0.0, 1.0, 11); }
std::vector<double> default_hwp_grid() { return linspace(0.0, kPi / 8, 9); }
std::vector<double> default_polarizer_grid() { return linspace(0.0, kPi / 2, 9); }

SweepTable sweep_depolarizing(const std::vector<double>& p_grid, const SweepConfig& cfg) {
    check_finite_grid(p_grid, 0.0, 1.0, "sweep_depolarizing");
    const AnalyzerSettings settings = psi_plus_optimal();
    const double bitrate = nominal_secure_kbps(cfg.pump_power_mw);
    SweepTable table;
    table.rows.reserve(p_grid.size());
    for (const double p : p_grid) {
        const DensityMatrix pair = noise::depolarize_pair(noise::nonmaximal_pair(kInvSqrt2), p);
        SweepRow row;
        row.parameter = p;
        row.s_value = chsh_s(pair, settings);
        row.visibility = visibility(pair, kPi / 4);
        row.pass_fraction = 1.0 - p / 2.0;
        row.bitrate_kbps = bitrate;
        table.rows.push_back(row);
    }
    return table;
}

SweepTable sweep_hwp(const std::vector<double>& theta_grid, const SweepConfig& cfg) {
    check_finite_grid(theta_grid, 0.0, kPi / 8 + 1e-12, "sweep_hwp");
    if (cfg.samples_per_row == 0) throw std::invalid_argument("sweep_hwp: samples_per_row must be positive");
    const AnalyzerSettings settings = hv_fixed_settings();
    const double bitrate = nominal_secure_kbps(cfg.pump_power_mw);
    SweepTable table;
    table.rows.reserve(theta_grid.size());
    for (std::size_t i = 0; i < theta_grid.size(); ++i) {
        noise::NoiseConfig noise_cfg;
        noise_cfg.theta_h = theta_grid[i];
        const DensityMatrix pair = qcore::DensityMatrix::from_pure(noise::hwp_rotated_pair(theta_grid[i]));
        const DensityMatrix records = noise::record_state(noise_cfg);

        qcore::Rng rng = qcore::Rng::child(cfg.seed, i);
        std::size_t even = 0;
        for (std::size_t k = 0; k < cfg.samples_per_row; ++k) {
            const std::size_t outcome = qcore::measure_all(records, rng);
            const unsigned bits = static_cast<unsigned>(outcome);
            const unsigned parity = (bits ^ (bits >> 1) ^ (bits >> 2) ^ (bits >> 3)) & 1u;
            even += 1u - parity;
        }

        SweepRow row;
        row.parameter = theta_grid[i];
        row.s_value = chsh_s(pair, settings);
        row.visibility = visibility(pair, kPi / 4);
        row.pass_fraction = static_cast<double>(even) / static_cast<double>(cfg.samples_per_row);
        row.bitrate_kbps = bitrate;
        table.rows.push_back(row);
    }
    return table;
}

SweepTable sweep_polarizer(const std::vector<double>& theta_grid, const SweepConfig& cfg) {
    check_finite_grid(theta_grid, 0.0, kPi / 2 + 1e-12, "sweep_polarizer");
    if (cfg.battery_bits == 0) throw std::invalid_argument("sweep_polarizer: battery_bits must be positive");

    // One shared ideal stream, sized so the heaviest post-selection still
    // leaves a full battery's worth of bits.
    photonics::SourceConfig src;
    src.pump_power_mw = cfg.pump_power_mw;
    src.seed = cfg.seed;
    src.accidental_rate_hz = 0.0;
    const double rate = src.pair_rate_per_mw_hz * src.pump_power_mw * src.coincidence_efficiency;
    const double target_records = 2.2 * static_cast<double>(cfg.battery_bits);
    src.duration_s = target_records / rate;

    const noise::NoiseConfig ideal;
    const auto streams = photonics::simulate_detections(src, noise::record_state(ideal));
    const photonics::BitRecordStream base = photonics::coincidence_postselect(streams, src.coincidence_window_s);

    const double s_source = chsh_s(noise::depolarize_pair(noise::nonmaximal_pair(kInvSqrt2), 0.0), psi_plus_optimal());

    SweepTable table;
    table.rows.reserve(theta_grid.size());
    for (std::size_t i = 0; i < theta_grid.size(); ++i) {
        const std::uint64_t row_seed =
            qcore::Rng::derive_stream_seed(cfg.seed, 0x8000000000000000ull + i);
        const photonics::BitRecordStream kept = photonics::polarizer_postselect(base, theta_grid[i], row_seed);

        std::size_t even = 0;
        for (const auto& rec : kept.records) even += rec.even_parity() ? 1 : 0;

        auto arm_b = photonics::column_bits(kept, 1);
        if (arm_b.size() > cfg.battery_bits) arm_b.resize(cfg.battery_bits);
        const randtests::TestReport battery = randtests::run_battery(arm_b);
        int passed = 0;
        for (const auto& r : battery.results) passed += r.pass ? 1 : 0;

        SweepRow row;
        row.parameter = theta_grid[i];
        row.s_value = s_source;
        row.visibility = 1.0;
        row.pass_fraction = kept.records.empty() ? 0.0
                                                 : static_cast<double>(even) / static_cast<double>(kept.size());
        row.bitrate_kbps = photonics::rate_summary(kept, src.duration_s).collective_kbps;
        row.tests_passed = passed;
        table.rows.push_back(row);
    }
    return table;
}

}  // namespace pvq::analysis
