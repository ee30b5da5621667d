#include "pvq/keyproto/keyproto.hpp"

#include <algorithm>

#include "pvq/io/io.hpp"
#include "pvq/noise/noise.hpp"

namespace pvq::keyproto {

namespace {

constexpr char kCipherMagic[4] = {'P', 'V', 'Q', 'C'};
constexpr std::uint8_t kCipherVersion = 1;

void validate_bit_values(const Bits& bits, const char* what) {
    for (const std::uint8_t b : bits) {
        if (b > 1) throw std::invalid_argument(std::string(what) + ": bits must be 0 or 1");
    }
}

Bits xor_bits(const Bits& a, const Bits& b) {
    Bits out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] ^ b[i];
    return out;
}

std::vector<std::uint8_t> digest_input(const std::vector<std::pair<std::size_t, std::size_t>>& pairs) {
    std::vector<std::uint8_t> buf;
    buf.reserve(pairs.size() * 16);
    for (const auto& [i, j] : pairs) {
        io::append_u64_le(buf, i);
        io::append_u64_le(buf, j);
    }
    return buf;
}

Frame timestamps_frame(const std::vector<photonics::DetectionEvent>& events) {
    Frame f;
    f.type = FrameType::timestamps;
    io::append_u64_le(f.payload, events.size());
    for (const auto& e : events) io::append_f64_le(f.payload, e.timestamp_s);
    return f;
}

std::vector<double> read_timestamps_frame(const Frame& f) {
    io::ByteReader reader(f.payload);
    const std::uint64_t n = reader.u64_le();
    std::vector<double> times(n);
    for (std::uint64_t i = 0; i < n; ++i) times[i] = reader.f64_le();
    return times;
}

Frame bits_frame(FrameType type, const Bits& bits) {
    Frame f;
    f.type = type;
    io::append_u64_le(f.payload, bits.size());
    const auto packed = io::pack_bits_msb(bits);
    f.payload.insert(f.payload.end(), packed.begin(), packed.end());
    return f;
}

Bits read_bits_frame(const Frame& f) {
    io::ByteReader reader(f.payload);
    const std::uint64_t n = reader.u64_le();
    return io::unpack_bits_msb(reader.bytes((n + 7) / 8), n);
}

Frame ack_frame(std::size_t count, std::uint64_t digest) {
    Frame f;
    f.type = FrameType::ack;
    io::append_u64_le(f.payload, count);
    io::append_u64_le(f.payload, digest);
    return f;
}

Frame fail_frame(const std::string& reason) {
    Frame f;
    f.type = FrameType::fail;
    f.payload.assign(reason.begin(), reason.end());
    return f;
}

// Bits held by one endpoint after matching: its own detector's polarization
// and path columns, in matched order.
struct MatchedColumns {
    Bits polarization;  // x_A on Alice's side, x_B on Bob's
    Bits path;          // x_C on Alice's side, x_D on Bob's
};

MatchedColumns own_columns(const std::vector<photonics::DetectionEvent>& events,
                           const std::vector<std::pair<std::size_t, std::size_t>>& matched,
                           bool alice_side) {
    MatchedColumns out;
    out.polarization.reserve(matched.size());
    out.path.reserve(matched.size());
    for (const auto& [i, j] : matched) {
        const std::uint8_t det = events[alice_side ? i : j].detector;
        out.polarization.push_back((det >> 1) & 1);
        out.path.push_back(det & 1);
    }
    return out;
}

}  // namespace

KeyBundle derive_keys(const photonics::BitRecordStream& stream) {
    if (stream.records.empty()) throw std::invalid_argument("derive_keys: empty stream");
    KeyBundle bundle;
    bundle.alice_private = photonics::column_bits(stream, 0);
    bundle.bob_private_1 = photonics::column_bits(stream, 1);
    bundle.alice_public = photonics::column_bits(stream, 2);
    bundle.bob_private_2 = photonics::column_bits(stream, 3);
    return bundle;
}

Ciphertext encrypt(const Bits& message, KeyBundle& bundle) {
    validate_bit_values(message, "encrypt");
    if (message.size() > bundle.available())
        throw std::invalid_argument("encrypt: message longer than the remaining key material");
    Ciphertext ct;
    ct.payload.resize(message.size());
    ct.public_key.resize(message.size());
    for (std::size_t i = 0; i < message.size(); ++i) {
        const std::size_t k = bundle.consumed + i;
        ct.payload[i] = message[i] ^ bundle.alice_private[k];
        ct.public_key[i] = bundle.alice_public[k];
    }
    bundle.consumed += message.size();
    return ct;
}

Bits recover_private(const Bits& x_b, const Bits& x_c, const Bits& x_d) {
    if (x_b.size() != x_c.size() || x_b.size() != x_d.size())
        throw std::invalid_argument("recover_private: length mismatch");
    Bits out(x_b.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = x_b[i] ^ x_c[i] ^ x_d[i];
    return out;
}

Bits decrypt(const Ciphertext& ct, const Bits& bob_private_1, const Bits& bob_private_2) {
    if (ct.payload.size() != ct.public_key.size())
        throw std::invalid_argument("decrypt: payload and public key length mismatch");
    if (bob_private_1.size() < ct.payload.size() || bob_private_2.size() < ct.payload.size())
        throw std::invalid_argument("decrypt: key columns shorter than the payload");
    const Bits b(bob_private_1.begin(), bob_private_1.begin() + static_cast<std::ptrdiff_t>(ct.payload.size()));
    const Bits d(bob_private_2.begin(), bob_private_2.begin() + static_cast<std::ptrdiff_t>(ct.payload.size()));
    const Bits x_a = recover_private(b, ct.public_key, d);
    return xor_bits(ct.payload, x_a);
}

Bits bytes_to_bits(const std::vector<std::uint8_t>& bytes) {
    return io::unpack_bits_msb(bytes, bytes.size() * 8);
}

std::vector<std::uint8_t> bits_to_bytes(const Bits& bits) { return io::pack_bits_msb(bits); }

void write_ciphertext_file(const std::string& path, const Ciphertext& ct) {
    if (ct.payload.size() != ct.public_key.size())
        throw std::invalid_argument("write_ciphertext_file: payload and public key length mismatch");
    std::vector<std::uint8_t> out;
    out.insert(out.end(), kCipherMagic, kCipherMagic + 4);
    io::append_u8(out, kCipherVersion);
    io::append_u64_le(out, ct.payload.size());
    const auto payload = io::pack_bits_msb(ct.payload);
    const auto pubkey = io::pack_bits_msb(ct.public_key);
    out.insert(out.end(), payload.begin(), payload.end());
    out.insert(out.end(), pubkey.begin(), pubkey.end());
    io::write_file_bytes(path, out);
}

Ciphertext read_ciphertext_file(const std::string& path) {
    const auto raw = io::read_file_bytes(path);
    io::ByteReader reader(raw);
    const auto magic = reader.bytes(4);
    if (!std::equal(magic.begin(), magic.end(), kCipherMagic))
        throw io::format_error("ciphertext file: bad magic");
    if (reader.u8() != kCipherVersion) throw io::format_error("ciphertext file: unsupported version");
    const std::uint64_t n_bits = reader.u64_le();
    const std::size_t n_bytes = (n_bits + 7) / 8;
    Ciphertext ct;
    ct.payload = io::unpack_bits_msb(reader.bytes(n_bytes), n_bits);
    ct.public_key = io::unpack_bits_msb(reader.bytes(n_bytes), n_bits);
    if (reader.remaining() != 0) throw io::format_error("ciphertext file: trailing bytes");
    return ct;
}

void encrypt_file(const std::string& plain_path, const std::string& cipher_path, KeyBundle& bundle) {
    const auto bytes = io::read_file_bytes(plain_path);
    if (bytes.size() * 8 > bundle.available())
        throw std::invalid_argument("encrypt_file: not enough key material for the file");
    const Ciphertext ct = encrypt(bytes_to_bits(bytes), bundle);
    write_ciphertext_file(cipher_path, ct);
}

void decrypt_file(const std::string& cipher_path, const std::string& plain_path,
                  const Bits& bob_private_1, const Bits& bob_private_2) {
    const Ciphertext ct = read_ciphertext_file(cipher_path);
    if (ct.payload.size() % 8 != 0)
        throw io::format_error("decrypt_file: bit length is not byte-aligned");
    io::write_file_bytes(plain_path, bits_to_bytes(decrypt(ct, bob_private_1, bob_private_2)));
}

std::vector<std::uint8_t> encode_frame(const Frame& frame) {
    std::vector<std::uint8_t> out;
    out.reserve(1 + 8 + frame.payload.size());
    io::append_u8(out, static_cast<std::uint8_t>(frame.type));
    io::append_u64_le(out, frame.payload.size());
    out.insert(out.end(), frame.payload.begin(), frame.payload.end());
    return out;
}

Frame decode_frame(const std::vector<std::uint8_t>& wire) {
    io::ByteReader reader(wire);
    const std::uint8_t type = reader.u8();
    if (type < 1 || type > 5) throw io::format_error("frame: unknown type");
    const std::uint64_t length = reader.u64_le();
    Frame frame;
    frame.type = static_cast<FrameType>(type);
    frame.payload = reader.bytes(length);
    if (reader.remaining() != 0) throw io::format_error("frame: trailing bytes");
    return frame;
}

std::uint64_t fnv1a64(const std::vector<std::uint8_t>& bytes) {
    std::uint64_t hash = 0xcbf29ce484222325ull;
    for (const std::uint8_t b : bytes) {
        hash ^= b;
        hash *= 0x100000001b3ull;
    }
    return hash;
}

SessionResult session_run(const EndpointConfig& alice, const EndpointConfig& bob,
                          const Bits& message, SenderRole sender) {
    validate_bit_values(message, "session_run");

    SessionResult result;
    auto log = [&result](const char* who, const Frame& frame) {
        result.transcript.push_back(TranscriptEntry{who, frame});
    };

    // Each endpoint simulates its own half. Under a shared configuration the
    // two simulations are identical, which is what the ack digests certify.
    const photonics::DetectionStreams alice_sim =
        photonics::simulate_detections(alice.source, noise::record_state(alice.noise));
    const photonics::DetectionStreams bob_sim =
        photonics::simulate_detections(bob.source, noise::record_state(bob.noise));
    const auto& alice_events = alice_sim.alice;
    const auto& bob_events = bob_sim.bob;

    // 1. timing information crosses the channel in both directions
    const Frame alice_ts = timestamps_frame(alice_events);
    const Frame bob_ts = timestamps_frame(bob_events);
    log("alice", alice_ts);
    log("bob", bob_ts);

    std::vector<double> alice_own(alice_events.size()), bob_own(bob_events.size());
    for (std::size_t i = 0; i < alice_own.size(); ++i) alice_own[i] = alice_events[i].timestamp_s;
    for (std::size_t j = 0; j < bob_own.size(); ++j) bob_own[j] = bob_events[j].timestamp_s;

    // 2. both sides match independently: own tags against the received list
    const auto alice_matched = photonics::pair_timestamps(alice_own, read_timestamps_frame(bob_ts), alice.window_s);
    const auto bob_matched = photonics::pair_timestamps(read_timestamps_frame(alice_ts), bob_own, bob.window_s);

    const std::uint64_t alice_digest = fnv1a64(digest_input(alice_matched));
    const std::uint64_t bob_digest = fnv1a64(digest_input(bob_matched));

    // 3. cross-check the matchings before any key material is spent
    log("alice", ack_frame(alice_matched.size(), alice_digest));
    log("bob", ack_frame(bob_matched.size(), bob_digest));
    if (alice_matched.size() != bob_matched.size() || alice_digest != bob_digest) {
        log("alice", fail_frame("coincidence sets disagree"));
        result.failure_reason = "coincidence sets disagree";
        return result;
    }
    result.n_matched = alice_matched.size();

    const bool alice_sends = sender == SenderRole::alice;
    const MatchedColumns sender_cols =
        own_columns(alice_sends ? alice_events : bob_events,
                    alice_sends ? alice_matched : bob_matched, alice_sends);
    const MatchedColumns receiver_cols =
        own_columns(alice_sends ? bob_events : alice_events,
                    alice_sends ? bob_matched : alice_matched, !alice_sends);

    if (message.size() > sender_cols.polarization.size())
        throw protocol_error("session_run: message longer than the matched key material");

    // 4. payload and the sender's path column cross the channel
    Bits payload(message.size());
    for (std::size_t i = 0; i < message.size(); ++i) payload[i] = message[i] ^ sender_cols.polarization[i];
    Bits public_bits(sender_cols.path.begin(), sender_cols.path.begin() + static_cast<std::ptrdiff_t>(message.size()));

    const char* sender_name = alice_sends ? "alice" : "bob";
    const Frame ct_frame = bits_frame(FrameType::ciphertext, payload);
    const Frame pk_frame = bits_frame(FrameType::public_key, public_bits);
    log(sender_name, ct_frame);
    log(sender_name, pk_frame);

    // 5. the receiver solves the parity relation for the sender's
    // polarization bit: the four columns of every record XOR to zero
    const Bits wire_payload = read_bits_frame(ct_frame);
    const Bits wire_public = read_bits_frame(pk_frame);
    Bits decrypted(wire_payload.size());
    for (std::size_t i = 0; i < wire_payload.size(); ++i) {
        const std::uint8_t missing = static_cast<std::uint8_t>(
            receiver_cols.polarization[i] ^ receiver_cols.path[i] ^ wire_public[i]);
        decrypted[i] = wire_payload[i] ^ missing;
    }

    result.success = true;
    result.decrypted = std::move(decrypted);
    return result;
}

}  // namespace pvq::keyproto
