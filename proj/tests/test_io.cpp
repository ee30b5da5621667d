#include <cmath>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "doctest.h"
#include "pvq/io/formats.hpp"
#include "pvq/io/io.hpp"

using namespace pvq::io;
using pvq::photonics::BitRecord;
using pvq::photonics::BitRecordStream;

namespace {

// per-suite scratch directory; suites may run concurrently under ctest
struct TempDir {
    std::filesystem::path path;
    TempDir() : path(std::filesystem::temp_directory_path() / "pvq_io_tests") {
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_SUITE("io") {

TEST_CASE("little-endian append and read are inverses") {
    std::vector<std::uint8_t> buf;
    append_u8(buf, 0xAB);
    append_u64_le(buf, 0x0102030405060708ull);
    append_f64_le(buf, -1234.5677490234375);
    append_f64_le(buf, 0.0);

    // layout is little endian byte for byte
    CHECK(buf[0] == 0xAB);
    CHECK(buf[1] == 0x08);
    CHECK(buf[8] == 0x01);

    ByteReader reader(buf);
    CHECK(reader.u8() == 0xAB);
    CHECK(reader.u64_le() == 0x0102030405060708ull);
    CHECK(reader.f64_le() == -1234.5677490234375);
    CHECK(reader.f64_le() == 0.0);
    CHECK(reader.remaining() == 0);
}

TEST_CASE("readers refuse to run past the end") {
    const std::vector<std::uint8_t> seven(7, 0xFF);
    ByteReader reader(seven);
    CHECK_THROWS_WITH_AS(reader.u64_le(), "truncated input", format_error);

    ByteReader again(seven);
    CHECK(again.bytes(7).size() == 7);
    CHECK_THROWS_AS(again.u8(), format_error);
}

TEST_CASE("bit packing is MSB first with zero padding") {
    const std::vector<std::uint8_t> bits{1, 0, 1, 1, 0, 1, 0, 1, 1, 1};
    const auto packed = pack_bits_msb(bits);
    REQUIRE(packed.size() == 2);
    CHECK(packed[0] == 0xB5);
    CHECK(packed[1] == 0xC0);
    CHECK(unpack_bits_msb(packed, bits.size()) == bits);

    CHECK(pack_bits_msb({}).empty());
    CHECK(unpack_bits_msb({}, 0).empty());
    CHECK_THROWS_AS(pack_bits_msb({0, 2}), format_error);
    CHECK_THROWS_AS(unpack_bits_msb(packed, 17), format_error);
}

TEST_CASE("record files round trip with and without timestamps") {
    const TempDir tmp;
    BitRecordStream stream;
    for (int i = 0; i < 5; ++i) {
        stream.records.push_back(BitRecord{static_cast<std::uint8_t>((i * 5) & 0xF)});
        stream.timestamps.push_back(0.0625 * i + 1e-9);
    }

    const std::string with_ts = tmp.file("with_ts.pvq4");
    write_record_file(with_ts, stream);
    const BitRecordStream back = read_record_file(with_ts);
    REQUIRE(back.size() == 5);
    CHECK(back.records == stream.records);
    CHECK(back.timestamps == stream.timestamps);  // f64 payload is bit exact

    BitRecordStream bare;
    bare.records = stream.records;
    const std::string no_ts = tmp.file("no_ts.pvq4");
    write_record_file(no_ts, bare);
    const BitRecordStream back2 = read_record_file(no_ts);
    CHECK(back2.records == stream.records);
    CHECK_FALSE(back2.has_timestamps());

    const std::string empty = tmp.file("empty.pvq4");
    write_record_file(empty, BitRecordStream{});
    CHECK(read_record_file(empty).size() == 0);

    BitRecordStream mismatched;
    mismatched.records = stream.records;
    mismatched.timestamps = {1.0};
    CHECK_THROWS_AS(write_record_file(tmp.file("bad.pvq4"), mismatched), format_error);
}

TEST_CASE("record files have the documented byte layout") {
    const TempDir tmp;
    BitRecordStream stream;
    stream.records = {BitRecord{0b1010}, BitRecord{0b0110}, BitRecord{0b1111}};
    const std::string path = tmp.file("layout.pvq4");
    write_record_file(path, stream);

    const auto raw = read_file_bytes(path);
    const std::vector<std::uint8_t> expected{
        'P', 'V', 'Q', '4', 1,                       // magic, version
        3,   0,   0,   0,   0, 0, 0, 0,              // count, little endian
        0xA6, 0xF0,                                  // nibbles high first, zero pad
        0};                                          // no timestamps
    CHECK(raw == expected);
}

TEST_CASE("corrupted record files are rejected") {
    const TempDir tmp;
    BitRecordStream stream;
    stream.records = {BitRecord{0b1010}, BitRecord{0b0110}, BitRecord{0b1111}};
    const std::string path = tmp.file("mutate.pvq4");

    const auto mutate = [&](std::size_t index, std::uint8_t value) {
        write_record_file(path, stream);
        auto raw = read_file_bytes(path);
        raw[index] = value;
        write_file_bytes(path, raw);
    };

    mutate(0, 'X');  // magic
    CHECK_THROWS_AS(read_record_file(path), format_error);
    mutate(4, 2);  // version
    CHECK_THROWS_WITH_AS(read_record_file(path), "record file: unsupported version", format_error);
    mutate(14, 0xF1);  // padding nibble of the odd final record byte
    CHECK_THROWS_WITH_AS(read_record_file(path), "record file: nonzero padding nibble", format_error);
    mutate(15, 2);  // timestamp presence flag
    CHECK_THROWS_WITH_AS(read_record_file(path), "record file: bad timestamp flag", format_error);

    // trailing garbage
    write_record_file(path, stream);
    auto raw = read_file_bytes(path);
    raw.push_back(0);
    write_file_bytes(path, raw);
    CHECK_THROWS_WITH_AS(read_record_file(path), "record file: trailing bytes", format_error);

    // truncation inside the count field
    raw.resize(9);
    write_file_bytes(path, raw);
    CHECK_THROWS_WITH_AS(read_record_file(path), "truncated input", format_error);
}

TEST_CASE("bit files round trip and validate") {
    const TempDir tmp;
    const std::vector<std::uint8_t> bits{0, 1, 1, 0, 1, 0, 0, 1, 1};
    const std::string path = tmp.file("bits.pvq1");
    write_bit_file(path, bits);
    CHECK(read_bit_file(path) == bits);

    write_bit_file(path, {});
    CHECK(read_bit_file(path).empty());

    write_bit_file(path, bits);
    auto raw = read_file_bytes(path);
    raw.push_back(0xFF);
    write_file_bytes(path, raw);
    CHECK_THROWS_WITH_AS(read_bit_file(path), "bit file: trailing bytes", format_error);

    raw[0] = 'Q';
    raw.pop_back();
    write_file_bytes(path, raw);
    CHECK_THROWS_AS(read_bit_file(path), format_error);
}

TEST_CASE("magic sniffing distinguishes the containers") {
    const TempDir tmp;
    const std::string rec = tmp.file("a.pvq4");
    const std::string bit = tmp.file("b.pvq1");
    write_record_file(rec, BitRecordStream{});
    write_bit_file(bit, {1, 0});
    CHECK(sniff_magic(rec) == "PVQ4");
    CHECK(sniff_magic(bit) == "PVQ1");

    const std::string shorty = tmp.file("tiny.bin");
    write_file_bytes(shorty, {'P', 'V'});
    CHECK(sniff_magic(shorty) == "PV");

    CHECK_THROWS_AS(sniff_magic(tmp.file("missing.bin")), format_error);
    CHECK_THROWS_AS(read_file_bytes(tmp.file("missing.bin")), format_error);
}

}  // TEST_SUITE
