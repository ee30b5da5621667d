#pragma once
// Record and bit-string containers.
//
// 'PVQ4' record stream: magic "PVQ4", version byte 1, u64-le record count,
// packed nibbles (record 2i in the high nibble, x_A as each nibble's most
// significant bit), then a presence byte and, when set, one f64-le timestamp
// per record.
//
// 'PVQ1' bit string: magic "PVQ1", u64-le bit count, packed bytes MSB-first.

#include <string>
#include <vector>

#include "pvq/io/io.hpp"
#include "pvq/photonics/photonics.hpp"

namespace pvq::io {

void write_record_file(const std::string& path, const photonics::BitRecordStream& stream);
photonics::BitRecordStream read_record_file(const std::string& path);

void write_bit_file(const std::string& path, const std::vector<std::uint8_t>& bits);
std::vector<std::uint8_t> read_bit_file(const std::string& path);

// Magic of an existing file, e.g. "PVQ4"; shorter files yield what they hold.
std::string sniff_magic(const std::string& path);

}  // namespace pvq::io
