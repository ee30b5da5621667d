#pragma once
// Record-level consistency checks and the public verification pipeline:
// parity/continuity predicates, sampled error estimation, and the split of a
// verified stream into a published column and the private key columns.

#include <cstdint>
#include <vector>

#include "pvq/photonics/photonics.hpp"

namespace pvq::verify {

using photonics::BitRecord;
using photonics::BitRecordStream;

// Ideal records satisfy x_A + x_B + x_C + x_D = 0 (mod 2).
bool parity_check(BitRecord record);

// Records of the intermediate state without the wave plates satisfy
// x_A + x_B = 1 (mod 2).
bool continuity_check(BitRecord record);

enum class CheckMode { parity, continuity };

struct VerificationReport {
    std::size_t n_records = 0;    // records inspected
    std::size_t n_violations = 0;
    double qber = 0.0;           // n_violations / n_records
    double pass_fraction = 0.0;   // 1 - qber
    bool pass = false;
    // indices of the inspected (and therefore consumed) records, ascending;
    // empty when the whole stream was inspected in place
    std::vector<std::size_t> sampled_indices;
};

// Applies the chosen check to every record. pass uses the default threshold
// of 0.95 on the pass fraction.
VerificationReport qber_estimate(const BitRecordStream& stream, CheckMode mode);

struct EntanglementVerification {
    VerificationReport report;
    BitRecordStream surviving;  // records not consumed by the sampled check
};

// Samples ceil(sample_fraction * n) records without replacement, checks their
// parity, and passes when the sampled pass fraction reaches `threshold`.
// Sampled records are consumed: they never appear in `surviving`.
// sample_fraction must lie in (0, 1) and the stream must be non-empty.
EntanglementVerification entanglement_verification(const BitRecordStream& stream,
                                                   double sample_fraction, double threshold,
                                                   std::uint64_t seed);

enum class Role : std::uint8_t { A = 0, B = 1, C = 2, D = 3 };

// Which column is published, which is discarded, and which two are kept.
struct RolePartition {
    Role verify_role = Role::A;
    Role discard_role = Role::D;
    Role keep_1 = Role::B;
    Role keep_2 = Role::C;
};

// Fills the keep roles with the two remaining columns in letter order.
RolePartition make_role_partition(Role verify, Role discard);

struct PipelineResult {
    std::vector<std::uint8_t> public_bits;  // the published verify column
    std::vector<std::uint8_t> keep_bits_1;
    std::vector<std::uint8_t> keep_bits_2;
    // record-order interleave (keep_1[0], keep_2[0], keep_1[1], ...)
    std::vector<std::uint8_t> merged_bits;
    RolePartition roles;
    std::size_t n_records = 0;
};

PipelineResult public_verification_pipeline(const BitRecordStream& stream,
                                            const RolePartition& roles);

}  // namespace pvq::verify
