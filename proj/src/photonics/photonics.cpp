#include "pvq/photonics/photonics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "pvq/qcore/ops.hpp"

namespace pvq::photonics {

namespace {

// Chunk length in seconds. Each chunk owns a block of derived rng streams:
// 4*chunk + 0 drives pair emission, +1 and +2 the two accidental processes.
constexpr double kChunkSeconds = 0.125;

void validate_config(const SourceConfig& cfg) {
    if (!(cfg.pump_power_mw >= 0.0)) throw std::invalid_argument("simulate_detections: pump power must be >= 0");
    if (!(cfg.pair_rate_per_mw_hz >= 0.0)) throw std::invalid_argument("simulate_detections: pair rate must be >= 0");
    if (!(cfg.coincidence_efficiency >= 0.0 && cfg.coincidence_efficiency <= 1.0))
        throw std::invalid_argument("simulate_detections: efficiency outside [0, 1]");
    if (!(cfg.coincidence_window_s > 0.0)) throw std::invalid_argument("simulate_detections: window must be > 0");
    if (!(cfg.duration_s > 0.0)) throw std::invalid_argument("simulate_detections: duration must be > 0");
}

struct ChunkOutput {
    std::vector<DetectionEvent> alice;
    std::vector<DetectionEvent> bob;
};

// Cumulative outcome distribution; the final entry is forced to 1 so that the
// sampling walk cannot fall off the end by rounding.
std::vector<double> outcome_cdf(const std::vector<double>& probs) {
    std::vector<double> cdf(probs.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        acc += probs[i];
        cdf[i] = acc;
    }
    cdf.back() = 1.0;
    return cdf;
}

std::size_t sample_cdf(const std::vector<double>& cdf, double u) {
    return static_cast<std::size_t>(std::lower_bound(cdf.begin(), cdf.end(), u,
                                                     [](double lhs, double rhs) { return lhs <= rhs; }) -
                                    cdf.begin());
}

void append_accidentals(std::vector<DetectionEvent>& side, double t0, double t1, double rate,
                        qcore::Rng rng) {
    if (rate <= 0.0) return;
    double t = t0;
    for (;;) {
        t += rng.exponential(rate);
        if (t >= t1) break;
        side.push_back(DetectionEvent{t, static_cast<std::uint8_t>(rng.below(4))});
    }
}

ChunkOutput simulate_chunk(const SourceConfig& cfg, const std::vector<double>& cdf,
                           std::uint64_t chunk_index) {
    const double t0 = static_cast<double>(chunk_index) * kChunkSeconds;
    const double t1 = std::min(t0 + kChunkSeconds, cfg.duration_s);
    const double pair_rate = cfg.pump_power_mw * cfg.pair_rate_per_mw_hz;
    const double acc_rate = effective_accidental_rate(cfg);

    ChunkOutput out;
    const auto expected = static_cast<std::size_t>((pair_rate + acc_rate) * (t1 - t0) * 1.1) + 16;
    out.alice.reserve(expected);
    out.bob.reserve(expected);

    if (pair_rate > 0.0) {
        qcore::Rng rng = qcore::Rng::child(cfg.seed, chunk_index * 4);
        double t = t0;
        for (;;) {
            t += rng.exponential(pair_rate);
            if (t >= t1) break;
            if (!rng.bernoulli(cfg.coincidence_efficiency)) continue;
            const std::size_t outcome = sample_cdf(cdf, rng.uniform01());
            const BitRecord rec{static_cast<std::uint8_t>(outcome)};
            out.alice.push_back(DetectionEvent{t, rec.alice_detector()});
            out.bob.push_back(DetectionEvent{t, rec.bob_detector()});
        }
    }

    std::vector<DetectionEvent> acc_a, acc_b;
    append_accidentals(acc_a, t0, t1, acc_rate, qcore::Rng::child(cfg.seed, chunk_index * 4 + 1));
    append_accidentals(acc_b, t0, t1, acc_rate, qcore::Rng::child(cfg.seed, chunk_index * 4 + 2));

    const auto by_time = [](const DetectionEvent& lhs, const DetectionEvent& rhs) {
        return lhs.timestamp_s < rhs.timestamp_s;
    };
    if (!acc_a.empty()) {
        std::vector<DetectionEvent> merged(out.alice.size() + acc_a.size());
        std::merge(out.alice.begin(), out.alice.end(), acc_a.begin(), acc_a.end(), merged.begin(), by_time);
        out.alice = std::move(merged);
    }
    if (!acc_b.empty()) {
        std::vector<DetectionEvent> merged(out.bob.size() + acc_b.size());
        std::merge(out.bob.begin(), out.bob.end(), acc_b.begin(), acc_b.end(), merged.begin(), by_time);
        out.bob = std::move(merged);
    }
    return out;
}

DetectionStreams simulate_impl(const SourceConfig& cfg, const std::vector<double>& probs,
                               unsigned workers) {
    validate_config(cfg);
    if (probs.size() != 16) throw std::invalid_argument("simulate_detections: expected a four-qubit state");
    const std::vector<double> cdf = outcome_cdf(probs);

    const auto n_chunks = static_cast<std::uint64_t>(std::ceil(cfg.duration_s / kChunkSeconds));
    std::vector<ChunkOutput> chunks(n_chunks);

    if (workers <= 1 || n_chunks <= 1) {
        for (std::uint64_t i = 0; i < n_chunks; ++i) chunks[i] = simulate_chunk(cfg, cdf, i);
    } else {
        std::atomic<std::uint64_t> next{0};
        auto worker = [&] {
            for (;;) {
                const std::uint64_t i = next.fetch_add(1);
                if (i >= n_chunks) return;
                chunks[i] = simulate_chunk(cfg, cdf, i);
            }
        };
        std::vector<std::thread> pool;
        const unsigned n_threads = std::min<unsigned>(workers, static_cast<unsigned>(n_chunks));
        pool.reserve(n_threads);
        for (unsigned w = 0; w < n_threads; ++w) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    DetectionStreams out;
    std::size_t total_a = 0, total_b = 0;
    for (const auto& c : chunks) {
        total_a += c.alice.size();
        total_b += c.bob.size();
    }
    out.alice.reserve(total_a);
    out.bob.reserve(total_b);
    for (auto& c : chunks) {
        out.alice.insert(out.alice.end(), c.alice.begin(), c.alice.end());
        out.bob.insert(out.bob.end(), c.bob.begin(), c.bob.end());
    }
    return out;
}

}  // namespace

double effective_accidental_rate(const SourceConfig& cfg) {
    if (cfg.accidental_rate_hz >= 0.0) return cfg.accidental_rate_hz;
    const double scale = cfg.pump_power_mw / 0.15;
    return 16.0 * scale * scale;
}

std::vector<std::uint8_t> column_bits(const BitRecordStream& stream, int qubit) {
    if (qubit < 0 || qubit > 3) throw std::invalid_argument("column_bits: qubit outside [0, 3]");
    std::vector<std::uint8_t> out(stream.records.size());
    for (std::size_t i = 0; i < stream.records.size(); ++i)
        out[i] = static_cast<std::uint8_t>(stream.records[i].bit(qubit));
    return out;
}

DetectionStreams simulate_detections(const SourceConfig& cfg, const qcore::DensityMatrix& state4,
                                     unsigned workers) {
    if (state4.n_qubits() != 4) throw std::invalid_argument("simulate_detections: expected a four-qubit state");
    return simulate_impl(cfg, qcore::outcome_probabilities(state4), workers);
}

DetectionStreams simulate_detections(const SourceConfig& cfg, const qcore::StateVector& state4,
                                     unsigned workers) {
    if (state4.n_qubits() != 4) throw std::invalid_argument("simulate_detections: expected a four-qubit state");
    return simulate_impl(cfg, qcore::outcome_probabilities(state4), workers);
}

std::vector<std::pair<std::size_t, std::size_t>> pair_timestamps(const std::vector<double>& alice,
                                                                 const std::vector<double>& bob,
                                                                 double window_s) {
    if (!(window_s >= 0.0)) throw std::invalid_argument("pair_timestamps: window must be >= 0");
    std::vector<std::pair<std::size_t, std::size_t>> matched;
    matched.reserve(std::min(alice.size(), bob.size()));
    std::size_t i = 0, j = 0;
    while (i < alice.size() && j < bob.size()) {
        const double dt = bob[j] - alice[i];
        if (std::abs(dt) <= window_s) {
            matched.emplace_back(i, j);
            ++i;
            ++j;
        } else if (alice[i] < bob[j]) {
            ++i;
        } else {
            ++j;
        }
    }
    return matched;
}

BitRecordStream coincidence_postselect(const DetectionStreams& streams, double window_s) {
    std::vector<double> ta(streams.alice.size()), tb(streams.bob.size());
    for (std::size_t i = 0; i < ta.size(); ++i) ta[i] = streams.alice[i].timestamp_s;
    for (std::size_t j = 0; j < tb.size(); ++j) tb[j] = streams.bob[j].timestamp_s;

    const auto matched = pair_timestamps(ta, tb, window_s);
    BitRecordStream out;
    out.records.reserve(matched.size());
    out.timestamps.reserve(matched.size());
    for (const auto& [i, j] : matched) {
        out.records.push_back(BitRecord::from_detectors(streams.alice[i].detector, streams.bob[j].detector));
        out.timestamps.push_back(streams.alice[i].timestamp_s);
    }
    return out;
}

BitRecordStream polarizer_postselect(const BitRecordStream& stream, double theta_p,
                                     std::uint64_t seed) {
    if (!(theta_p >= 0.0 && theta_p <= M_PI / 2.0 + 1e-12))
        throw std::invalid_argument("polarizer_postselect: theta_p outside [0, pi/2]");
    const double keep_prob = std::cos(theta_p) * std::cos(theta_p);

    qcore::Rng rng(seed);
    BitRecordStream out;
    out.records.reserve(stream.records.size());
    if (stream.has_timestamps()) out.timestamps.reserve(stream.records.size());
    for (std::size_t i = 0; i < stream.records.size(); ++i) {
        const BitRecord rec = stream.records[i];
        // the rng is consulted only for x_B = 0 records, so the kept x_B = 1
        // subsequence is independent of the angle
        if (rec.b() == 0 && !rng.bernoulli(keep_prob)) continue;
        out.records.push_back(rec);
        if (stream.has_timestamps()) out.timestamps.push_back(stream.timestamps[i]);
    }
    return out;
}

RateReport rate_summary(const BitRecordStream& stream, double duration_s) {
    if (!(duration_s > 0.0)) throw std::invalid_argument("rate_summary: duration must be > 0");
    RateReport report;
    report.n_records = stream.size();
    report.coincidences_per_s = static_cast<double>(stream.size()) / duration_s;
    report.per_string_kbps = report.coincidences_per_s / 1000.0;
    report.collective_kbps = 4.0 * report.per_string_kbps;
    report.secure_kbps = report.collective_kbps / 2.0;
    return report;
}

}  // namespace pvq::photonics
