#include "pvq/io/formats.hpp"

#include <algorithm>

namespace pvq::io {

namespace {

constexpr char kRecordMagic[4] = {'P', 'V', 'Q', '4'};
constexpr char kBitMagic[4] = {'P', 'V', 'Q', '1'};
constexpr std::uint8_t kRecordVersion = 1;

void check_magic(ByteReader& reader, const char (&magic)[4], const char* what) {
    const auto got = reader.bytes(4);
    if (!std::equal(got.begin(), got.end(), magic))
        throw format_error(std::string(what) + ": bad magic");
}

}  // namespace

void write_record_file(const std::string& path, const photonics::BitRecordStream& stream) {
    if (stream.has_timestamps() && stream.timestamps.size() != stream.records.size())
        throw format_error("write_record_file: timestamp column length mismatch");

    std::vector<std::uint8_t> out;
    const std::size_t n = stream.records.size();
    out.reserve(4 + 1 + 8 + (n + 1) / 2 + 1 + (stream.has_timestamps() ? 8 * n : 0));
    out.insert(out.end(), kRecordMagic, kRecordMagic + 4);
    append_u8(out, kRecordVersion);
    append_u64_le(out, n);
    for (std::size_t i = 0; i < n; i += 2) {
        std::uint8_t packed = static_cast<std::uint8_t>(stream.records[i].bits << 4);
        if (i + 1 < n) packed |= stream.records[i + 1].bits;
        out.push_back(packed);
    }
    append_u8(out, stream.has_timestamps() ? 1 : 0);
    if (stream.has_timestamps()) {
        for (const double t : stream.timestamps) append_f64_le(out, t);
    }
    write_file_bytes(path, out);
}

photonics::BitRecordStream read_record_file(const std::string& path) {
    const auto raw = read_file_bytes(path);
    ByteReader reader(raw);
    check_magic(reader, kRecordMagic, "record file");
    const std::uint8_t version = reader.u8();
    if (version != kRecordVersion) throw format_error("record file: unsupported version");
    const std::uint64_t n = reader.u64_le();

    photonics::BitRecordStream stream;
    stream.records.reserve(n);
    const auto packed = reader.bytes((n + 1) / 2);
    for (std::uint64_t i = 0; i < n; ++i) {
        const std::uint8_t byte = packed[i / 2];
        const std::uint8_t nibble = (i % 2 == 0) ? (byte >> 4) : (byte & 0x0F);
        stream.records.push_back(photonics::BitRecord{nibble});
    }
    if (n % 2 == 1 && (packed[n / 2] & 0x0F) != 0)
        throw format_error("record file: nonzero padding nibble");

    const std::uint8_t has_ts = reader.u8();
    if (has_ts > 1) throw format_error("record file: bad timestamp flag");
    if (has_ts == 1) {
        stream.timestamps.reserve(n);
        for (std::uint64_t i = 0; i < n; ++i) stream.timestamps.push_back(reader.f64_le());
    }
    if (reader.remaining() != 0) throw format_error("record file: trailing bytes");
    return stream;
}

void write_bit_file(const std::string& path, const std::vector<std::uint8_t>& bits) {
    std::vector<std::uint8_t> out;
    out.reserve(4 + 8 + (bits.size() + 7) / 8);
    out.insert(out.end(), kBitMagic, kBitMagic + 4);
    append_u64_le(out, bits.size());
    const auto packed = pack_bits_msb(bits);
    out.insert(out.end(), packed.begin(), packed.end());
    write_file_bytes(path, out);
}

std::vector<std::uint8_t> read_bit_file(const std::string& path) {
    const auto raw = read_file_bytes(path);
    ByteReader reader(raw);
    check_magic(reader, kBitMagic, "bit file");
    const std::uint64_t n_bits = reader.u64_le();
    const auto packed = reader.bytes((n_bits + 7) / 8);
    if (reader.remaining() != 0) throw format_error("bit file: trailing bytes");
    return unpack_bits_msb(packed, n_bits);
}

std::string sniff_magic(const std::string& path) {
    const auto raw = read_file_bytes(path);
    return std::string(raw.begin(), raw.begin() + std::min<std::size_t>(4, raw.size()));
}

}  // namespace pvq::io
