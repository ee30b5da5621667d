#include "pvq/io/io.hpp"

#include <bit>
#include <cstring>
#include <fstream>

namespace pvq::io {

std::vector<std::uint8_t> read_file_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw format_error("cannot open for reading: " + path);
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw format_error("read failed: " + path);
    return bytes;
}

void write_file_bytes(const std::string& path, const std::vector<std::uint8_t>& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw format_error("cannot open for writing: " + path);
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw format_error("write failed: " + path);
}

void append_u8(std::vector<std::uint8_t>& out, std::uint8_t value) { out.push_back(value); }

void append_u64_le(std::vector<std::uint8_t>& out, std::uint64_t value) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(value >> (8 * i)));
}

void append_f64_le(std::vector<std::uint8_t>& out, double value) {
    std::uint64_t raw;
    static_assert(sizeof(raw) == sizeof(value));
    std::memcpy(&raw, &value, sizeof(raw));
    append_u64_le(out, raw);
}

void ByteReader::need(std::size_t count) const {
    if (size_ - pos_ < count) throw format_error("truncated input");
}

std::uint8_t ByteReader::u8() {
    need(1);
    return data_[pos_++];
}

std::uint64_t ByteReader::u64_le() {
    need(8);
    std::uint64_t value = 0;
    for (int i = 0; i < 8; ++i) value |= static_cast<std::uint64_t>(data_[pos_ + static_cast<std::size_t>(i)]) << (8 * i);
    pos_ += 8;
    return value;
}

double ByteReader::f64_le() {
    const std::uint64_t raw = u64_le();
    double value;
    std::memcpy(&value, &raw, sizeof(value));
    return value;
}

std::vector<std::uint8_t> ByteReader::bytes(std::size_t count) {
    need(count);
    std::vector<std::uint8_t> out(data_ + pos_, data_ + pos_ + count);
    pos_ += count;
    return out;
}

std::vector<std::uint8_t> pack_bits_msb(const std::vector<std::uint8_t>& bits) {
    std::vector<std::uint8_t> packed((bits.size() + 7) / 8, 0);
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i] > 1) throw format_error("pack_bits_msb: bits must be 0 or 1");
        packed[i / 8] |= static_cast<std::uint8_t>(bits[i] << (7 - i % 8));
    }
    return packed;
}

std::vector<std::uint8_t> unpack_bits_msb(const std::vector<std::uint8_t>& bytes, std::uint64_t n_bits) {
    if (n_bits > bytes.size() * 8) throw format_error("unpack_bits_msb: not enough bytes");
    std::vector<std::uint8_t> bits(n_bits);
    for (std::uint64_t i = 0; i < n_bits; ++i) bits[i] = (bytes[i / 8] >> (7 - i % 8)) & 1;
    return bits;
}

}  // namespace pvq::io
