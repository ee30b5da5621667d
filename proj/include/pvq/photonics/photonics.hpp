#pragma once
// Photon-pair emission and detection: Poissonian pair arrivals sampled from a
// four-qubit record state, accidental singles, time-tag coincidence matching,
// and the packed four-bit record stream consumed by every downstream stage.

#include <cstdint>
#include <utility>
#include <vector>

#include "pvq/qcore/rng.hpp"
#include "pvq/qcore/state.hpp"

namespace pvq::photonics {

// Source and detection parameters. Defaults model the reference source:
// 16,400 pairs/s/mW, 91.5% of emitted pairs yielding a coincidence.
struct SourceConfig {
    double pump_power_mw = 1.0;
    double pair_rate_per_mw_hz = 16400.0;
    double coincidence_efficiency = 0.915;
    // Accidental single-detection rate per side, in counts/s. A negative
    // value derives the default pump-power scaling 16 (P / 0.15 mW)^2.
    double accidental_rate_hz = -1.0;
    double coincidence_window_s = 1e-9;
    double duration_s = 1.0;
    std::uint64_t seed = 1;
};

double effective_accidental_rate(const SourceConfig& cfg);

// One detector firing on one side. detector packs (polarization << 1) | path:
// Alice sees (x_A, x_C), Bob sees (x_B, x_D).
struct DetectionEvent {
    double timestamp_s = 0.0;
    std::uint8_t detector = 0;
};

struct DetectionStreams {
    std::vector<DetectionEvent> alice;
    std::vector<DetectionEvent> bob;
};

// One post-selected record. bits packs x_A x_B x_C x_D from most to least
// significant nibble bit, matching the four-qubit basis-index convention.
struct BitRecord {
    std::uint8_t bits = 0;

    static constexpr BitRecord from_bits(int a, int b, int c, int d) {
        return BitRecord{static_cast<std::uint8_t>((a << 3) | (b << 2) | (c << 1) | d)};
    }
    static constexpr BitRecord from_detectors(std::uint8_t alice, std::uint8_t bob) {
        return from_bits((alice >> 1) & 1, (bob >> 1) & 1, alice & 1, bob & 1);
    }

    constexpr int a() const { return (bits >> 3) & 1; }
    constexpr int b() const { return (bits >> 2) & 1; }
    constexpr int c() const { return (bits >> 1) & 1; }
    constexpr int d() const { return bits & 1; }
    constexpr int bit(int qubit) const { return (bits >> (3 - qubit)) & 1; }

    constexpr std::uint8_t alice_detector() const { return static_cast<std::uint8_t>((a() << 1) | c()); }
    constexpr std::uint8_t bob_detector() const { return static_cast<std::uint8_t>((b() << 1) | d()); }

    constexpr bool even_parity() const { return ((bits >> 3) ^ (bits >> 2) ^ (bits >> 1) ^ bits) % 2 == 0; }

    friend constexpr bool operator==(BitRecord lhs, BitRecord rhs) { return lhs.bits == rhs.bits; }
};

// Ordered records with an optional parallel timestamp column (empty, or one
// entry per record).
struct BitRecordStream {
    std::vector<BitRecord> records;
    std::vector<double> timestamps;

    std::size_t size() const { return records.size(); }
    bool has_timestamps() const { return !timestamps.empty(); }
};

// Per-qubit column of a stream, one 0/1 byte per record; qubit in [0, 3].
std::vector<std::uint8_t> column_bits(const BitRecordStream& stream, int qubit);

// Simulates both detection sides over cfg.duration_s. Time is cut into fixed
// 0.125 s chunks, each drawing from substreams derived from cfg.seed, so the
// output is byte-identical for any worker count, and removing the accidental
// processes never perturbs the genuine pair events.
DetectionStreams simulate_detections(const SourceConfig& cfg, const qcore::DensityMatrix& state4,
                                     unsigned workers = 1);
DetectionStreams simulate_detections(const SourceConfig& cfg, const qcore::StateVector& state4,
                                     unsigned workers = 1);

// Greedy monotone matching of two time-sorted tag lists: the earlier
// unconsumed tag either pairs with the first opposite tag within the window
// or is dropped; every tag is used at most once.
std::vector<std::pair<std::size_t, std::size_t>> pair_timestamps(const std::vector<double>& alice,
                                                                 const std::vector<double>& bob,
                                                                 double window_s);

// Coincidence post-selection; each record keeps the Alice-side timestamp.
BitRecordStream coincidence_postselect(const DetectionStreams& streams, double window_s);

// Polarizer at theta_p in arm B: records with x_B = 1 always pass, records
// with x_B = 0 pass with probability cos^2(theta_p). theta_p in [0, pi/2].
BitRecordStream polarizer_postselect(const BitRecordStream& stream, double theta_p,
                                     std::uint64_t seed);

struct RateReport {
    std::size_t n_records = 0;
    double coincidences_per_s = 0.0;
    double per_string_kbps = 0.0;  // one bit per record per string
    double collective_kbps = 0.0;  // all four strings together
    double secure_kbps = 0.0;      // private half of the collective rate
};

RateReport rate_summary(const BitRecordStream& stream, double duration_s);

}  // namespace pvq::photonics
