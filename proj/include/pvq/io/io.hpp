#pragma once
// Byte-level plumbing shared by the on-disk containers and the session wire
// format: little-endian packing, whole-file IO, MSB-first bit packing, and
// the format error type.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace pvq::io {

struct format_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<std::uint8_t> read_file_bytes(const std::string& path);
void write_file_bytes(const std::string& path, const std::vector<std::uint8_t>& bytes);

void append_u8(std::vector<std::uint8_t>& out, std::uint8_t value);
void append_u64_le(std::vector<std::uint8_t>& out, std::uint64_t value);
void append_f64_le(std::vector<std::uint8_t>& out, double value);

// Sequential reader over a byte span; any read past the end throws
// format_error.
class ByteReader {
public:
    ByteReader(const std::uint8_t* data, std::size_t size) : data_(data), size_(size) {}
    explicit ByteReader(const std::vector<std::uint8_t>& bytes) : ByteReader(bytes.data(), bytes.size()) {}

    std::uint8_t u8();
    std::uint64_t u64_le();
    double f64_le();
    std::vector<std::uint8_t> bytes(std::size_t count);
    std::size_t remaining() const { return size_ - pos_; }

private:
    void need(std::size_t count) const;

    const std::uint8_t* data_;
    std::size_t size_;
    std::size_t pos_ = 0;
};

// One 0/1 byte per bit <-> packed bytes, most significant bit first; the last
// byte is zero-padded.
std::vector<std::uint8_t> pack_bits_msb(const std::vector<std::uint8_t>& bits);
std::vector<std::uint8_t> unpack_bits_msb(const std::vector<std::uint8_t>& bytes, std::uint64_t n_bits);

}  // namespace pvq::io
