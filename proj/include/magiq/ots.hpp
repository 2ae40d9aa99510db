#pragma once

#include <array>
#include <cstdint>

#include "magiq/crypto.hpp"
#include "magiq/errors.hpp"
#include "magiq/rng.hpp"

namespace magiq {

/// Lamport one-time signatures over 256-bit message digests. Signing
/// hashes the message first, then reveals one of the two secret values per
/// digest bit. A key pair signs exactly once.

struct OtsPublicKey {
    // pk[bit][b] = H(sk[bit][b])
    std::array<std::array<Digest, 2>, 256> pk;

    friend bool operator==(const OtsPublicKey&, const OtsPublicKey&) = default;

    Bytes serialize() const {
        Bytes out;
        out.reserve(256 * 2 * 32);
        for (const auto& pair : pk)
            for (const auto& d : pair) append(out, std::span(d.v));
        return out;
    }

    static OtsPublicKey deserialize(const Bytes& b) {
        if (b.size() != 256 * 2 * 32) throw WireError("ots public key of wrong size");
        OtsPublicKey out;
        std::size_t off = 0;
        for (auto& pair : out.pk)
            for (auto& d : pair) {
                std::copy(b.begin() + off, b.begin() + off + 32, d.v.begin());
                off += 32;
            }
        return out;
    }

    /// Compact identity of the key, used as Merkle leaf and for reuse
    /// tracking.
    Digest digest() const { return hash(serialize()); }
};

struct OtsSignature {
    std::array<Digest, 256> revealed;

    Bytes serialize() const {
        Bytes out;
        out.reserve(256 * 32);
        for (const auto& d : revealed) append(out, std::span(d.v));
        return out;
    }

    static OtsSignature deserialize(const Bytes& b) {
        if (b.size() != 256 * 32) throw WireError("ots signature of wrong size");
        OtsSignature out;
        std::size_t off = 0;
        for (auto& d : out.revealed) {
            std::copy(b.begin() + off, b.begin() + off + 32, d.v.begin());
            off += 32;
        }
        return out;
    }
};

struct OtsKeyPair {
    std::array<std::array<Digest, 2>, 256> secret;
    OtsPublicKey public_key;
    bool used = false;
};

inline OtsKeyPair ots_keygen(DetRng& rng) {
    OtsKeyPair kp;
    for (int bit = 0; bit < 256; ++bit)
        for (int b = 0; b < 2; ++b) {
            kp.secret[bit][b] = rng.next_digest();
            kp.public_key.pk[bit][b] = hash(to_bytes(kp.secret[bit][b]));
        }
    return kp;
}

inline int ots_message_bit(const Digest& md, int bit) {
    return (md.v[bit / 8] >> (7 - bit % 8)) & 1;
}

inline Outcome<OtsSignature> ots_sign(OtsKeyPair& kp, const Bytes& message) {
    if (kp.used) return err(Errc::key_reuse, Party::none, "ots key pair already used");
    kp.used = true;
    Digest md = hash(message);
    OtsSignature sig;
    for (int bit = 0; bit < 256; ++bit)
        sig.revealed[bit] = kp.secret[bit][ots_message_bit(md, bit)];
    return sig;
}

/// Per-bit preimage check against the published key halves.
inline bool ots_verify(const OtsPublicKey& pk, const Bytes& message, const OtsSignature& sig) {
    Digest md = hash(message);
    for (int bit = 0; bit < 256; ++bit) {
        int b = ots_message_bit(md, bit);
        if (hash(to_bytes(sig.revealed[bit])) != pk.pk[bit][b]) return false;
    }
    return true;
}

} // namespace magiq
