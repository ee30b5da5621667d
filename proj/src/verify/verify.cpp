#include "pvq/verify/verify.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pvq/qcore/rng.hpp"

namespace pvq::verify {

namespace {

constexpr double kDefaultThreshold = 0.95;

bool check_record(BitRecord r, CheckMode mode) {
    return mode == CheckMode::parity ? parity_check(r) : continuity_check(r);
}

}  // namespace

bool parity_check(BitRecord record) { return record.even_parity(); }

bool continuity_check(BitRecord record) { return (record.a() ^ record.b()) == 1; }

VerificationReport qber_estimate(const BitRecordStream& stream, CheckMode mode) {
    if (stream.records.empty()) throw std::invalid_argument("qber_estimate: empty stream");
    VerificationReport report;
    report.n_records = stream.records.size();
    for (const BitRecord r : stream.records) {
        if (!check_record(r, mode)) ++report.n_violations;
    }
    report.qber = static_cast<double>(report.n_violations) / static_cast<double>(report.n_records);
    report.pass_fraction = 1.0 - report.qber;
    report.pass = report.pass_fraction >= kDefaultThreshold;
    return report;
}

EntanglementVerification entanglement_verification(const BitRecordStream& stream,
                                                   double sample_fraction, double threshold,
                                                   std::uint64_t seed) {
    const std::size_t n = stream.records.size();
    if (n == 0) throw std::invalid_argument("entanglement_verification: empty stream");
    if (!(sample_fraction > 0.0 && sample_fraction < 1.0))
        throw std::invalid_argument("entanglement_verification: sample fraction outside (0, 1)");
    if (!(threshold >= 0.0 && threshold <= 1.0))
        throw std::invalid_argument("entanglement_verification: threshold outside [0, 1]");

    const auto k = static_cast<std::size_t>(std::ceil(sample_fraction * static_cast<double>(n)));
    if (k > n) throw std::invalid_argument("entanglement_verification: sample larger than stream");

    // partial Fisher-Yates: after k swaps the prefix is a uniform sample
    // without replacement
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    qcore::Rng rng(seed);
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
        std::swap(order[i], order[j]);
    }

    EntanglementVerification out;
    out.report.n_records = k;
    out.report.sampled_indices.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k));
    std::sort(out.report.sampled_indices.begin(), out.report.sampled_indices.end());

    for (const std::size_t idx : out.report.sampled_indices) {
        if (!parity_check(stream.records[idx])) ++out.report.n_violations;
    }
    out.report.qber = static_cast<double>(out.report.n_violations) / static_cast<double>(k);
    out.report.pass_fraction = 1.0 - out.report.qber;
    out.report.pass = out.report.pass_fraction >= threshold;

    out.surviving.records.reserve(n - k);
    if (stream.has_timestamps()) out.surviving.timestamps.reserve(n - k);
    std::size_t next_sampled = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (next_sampled < k && out.report.sampled_indices[next_sampled] == i) {
            ++next_sampled;
            continue;
        }
        out.surviving.records.push_back(stream.records[i]);
        if (stream.has_timestamps()) out.surviving.timestamps.push_back(stream.timestamps[i]);
    }
    return out;
}

RolePartition make_role_partition(Role verify, Role discard) {
    if (verify == discard) throw std::invalid_argument("make_role_partition: roles must be distinct");
    RolePartition out;
    out.verify_role = verify;
    out.discard_role = discard;
    std::vector<Role> keeps;
    for (const Role r : {Role::A, Role::B, Role::C, Role::D}) {
        if (r != verify && r != discard) keeps.push_back(r);
    }
    out.keep_1 = keeps[0];
    out.keep_2 = keeps[1];
    return out;
}

PipelineResult public_verification_pipeline(const BitRecordStream& stream,
                                            const RolePartition& roles) {
    const Role all[4] = {roles.verify_role, roles.discard_role, roles.keep_1, roles.keep_2};
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            if (all[i] == all[j])
                throw std::invalid_argument("public_verification_pipeline: roles must be a permutation");

    PipelineResult out;
    out.roles = roles;
    out.n_records = stream.size();
    out.public_bits = photonics::column_bits(stream, static_cast<int>(roles.verify_role));
    out.keep_bits_1 = photonics::column_bits(stream, static_cast<int>(roles.keep_1));
    out.keep_bits_2 = photonics::column_bits(stream, static_cast<int>(roles.keep_2));
    out.merged_bits.reserve(2 * out.n_records);
    for (std::size_t i = 0; i < out.n_records; ++i) {
        out.merged_bits.push_back(out.keep_bits_1[i]);
        out.merged_bits.push_back(out.keep_bits_2[i]);
    }
    return out;
}

}  // namespace pvq::verify
