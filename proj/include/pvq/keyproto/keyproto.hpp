#pragma once
// Key protocol: column-split key derivation, the XOR cipher with its
// published key column, parity-based key recovery, file encryption, and the
// two-endpoint timing-exchange session.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "pvq/noise/noise.hpp"
#include "pvq/photonics/photonics.hpp"

namespace pvq::keyproto {

using Bits = std::vector<std::uint8_t>;

// Column split of a record stream. Alice holds X_A (private) and X_C
// (publishable); Bob holds X_B and X_D. `consumed` tracks how many leading
// key bits encrypt() has already spent; spent bits are never reused.
struct KeyBundle {
    Bits alice_private;  // X_A
    Bits alice_public;   // X_C
    Bits bob_private_1;  // X_B
    Bits bob_private_2;  // X_D
    std::size_t consumed = 0;

    std::size_t size() const { return alice_private.size(); }
    std::size_t available() const { return size() - consumed; }
};

KeyBundle derive_keys(const photonics::BitRecordStream& stream);

struct Ciphertext {
    Bits payload;     // message xor X_A
    Bits public_key;  // X_C, truncated to the message length
};

// Spends message.size() fresh key bits from the bundle; a message longer
// than the remaining key material is rejected, never wrapped around.
Ciphertext encrypt(const Bits& message, KeyBundle& bundle);

// x_A = x_B xor x_C xor x_D, index-wise.
Bits recover_private(const Bits& x_b, const Bits& x_c, const Bits& x_d);

// Recovers X_A from the published column and Bob's two columns, then strips
// the pad. Bob's columns may be longer than the payload; the leading bits
// are used.
Bits decrypt(const Ciphertext& ct, const Bits& bob_private_1, const Bits& bob_private_2);

// Bytes to bits (most significant bit of each byte first) and back; the bit
// count is padded up to a whole byte with zeros.
Bits bytes_to_bits(const std::vector<std::uint8_t>& bytes);
std::vector<std::uint8_t> bits_to_bytes(const Bits& bits);

// 'PVQC' container: magic "PVQC", version byte 1, u64-le original bit
// length, packed payload bytes, packed public-key bytes.
void write_ciphertext_file(const std::string& path, const Ciphertext& ct);
Ciphertext read_ciphertext_file(const std::string& path);

void encrypt_file(const std::string& plain_path, const std::string& cipher_path, KeyBundle& bundle);
void decrypt_file(const std::string& cipher_path, const std::string& plain_path,
                  const Bits& bob_private_1, const Bits& bob_private_2);

// ---- two-endpoint session ----

struct protocol_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Wire frames: type byte, u64-le payload length, payload.
//   timestamps: u64-le count, then count f64-le detection times
//   ciphertext: u64-le bit count, packed payload bits MSB-first
//   public_key: u64-le bit count, packed bits MSB-first
//   ack:        u64-le matched-pair count, u64-le FNV-1a digest of the pairs
//   fail:       UTF-8 reason
enum class FrameType : std::uint8_t {
    timestamps = 1,
    ciphertext = 2,
    public_key = 3,
    ack = 4,
    fail = 5,
};

struct Frame {
    FrameType type = FrameType::fail;
    std::vector<std::uint8_t> payload;
};

std::vector<std::uint8_t> encode_frame(const Frame& frame);
Frame decode_frame(const std::vector<std::uint8_t>& wire);

std::uint64_t fnv1a64(const std::vector<std::uint8_t>& bytes);

// One entry of the channel log: who put the frame on the wire, and the frame.
struct TranscriptEntry {
    std::string sender;  // "alice" or "bob"
    Frame frame;
};

enum class SenderRole { alice, bob };

struct EndpointConfig {
    photonics::SourceConfig source;
    noise::NoiseConfig noise;  // state preparation for this endpoint's simulation
    double window_s = 1e-9;
};

struct SessionResult {
    bool success = false;
    std::string failure_reason;
    // the complete channel view, which is exactly what an eavesdropper sees
    std::vector<TranscriptEntry> transcript;
    Bits decrypted;  // empty unless success
    std::size_t n_matched = 0;
};

// Runs the protocol over an in-process ordered reliable channel: each side
// simulates its own detections, timestamp lists are exchanged, both sides
// compute the coincidence matching independently and cross-check it through
// count+digest acknowledgements, then the sender's payload and public column
// are transmitted and the receiver solves the parity relation for its
// missing column. A matching mismatch aborts before any ciphertext is sent.
SessionResult session_run(const EndpointConfig& alice, const EndpointConfig& bob,
                          const Bits& message, SenderRole sender = SenderRole::alice);

}  // namespace pvq::keyproto
