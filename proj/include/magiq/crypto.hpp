#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string_view>

#include "magiq/bytes.hpp"
#include "magiq/encoding.hpp"
#include "magiq/sha256.hpp"

namespace magiq {

inline Digest hash(std::span<const std::uint8_t> data) { return sha256(data); }
inline Digest hash(const Bytes& data) { return sha256(std::span(data)); }
inline Digest hash(std::string_view s) {
    return sha256(std::span(reinterpret_cast<const std::uint8_t*>(s.data()), s.size()));
}

struct EmptyKeyError : std::invalid_argument {
    EmptyKeyError() : std::invalid_argument("hmac key must be non-empty") {}
};

/// HMAC over the 256-bit hash: H(k XOR opad || H(k XOR ipad || m)).
/// Verification is recomputation plus constant-time comparison.
inline Digest hmac(std::span<const std::uint8_t> key, std::span<const std::uint8_t> msg) {
    if (key.empty()) throw EmptyKeyError();
    constexpr std::size_t block = 64;
    std::uint8_t k[block] = {};
    if (key.size() > block) {
        Digest kd = sha256(key);
        std::copy(kd.v.begin(), kd.v.end(), k);
    } else {
        std::copy(key.begin(), key.end(), k);
    }
    std::uint8_t ipad[block], opad[block];
    for (std::size_t i = 0; i < block; ++i) {
        ipad[i] = k[i] ^ 0x36;
        opad[i] = k[i] ^ 0x5c;
    }
    Sha256 inner;
    inner.update(std::span(ipad, block));
    inner.update(msg);
    Digest inner_d = inner.finish();
    Sha256 outer;
    outer.update(std::span(opad, block));
    outer.update(std::span(inner_d.v));
    return outer.finish();
}

inline Digest hmac(const Bytes& key, const Bytes& msg) {
    return hmac(std::span(key), std::span(msg));
}

inline bool hmac_verify(const Bytes& key, const Bytes& msg, const Digest& tag) {
    return ct_equal(hmac(key, msg), tag);
}

/// Chain-seed PRF. The key is the owning agent's secret chain-seed key;
/// the remaining arguments pin the seed to one session, ordered agent
/// pair, and chain index.
inline Digest prf(const Bytes& key, const Bytes& sid, std::string_view aid_a,
                  std::string_view aid_b, std::uint64_t addr) {
    Encoder enc;
    enc.field(std::string_view("chain-seed"))
        .field(sid)
        .field(aid_a)
        .field(aid_b)
        .field_u64(addr);
    return hmac(key, enc.bytes());
}

} // namespace magiq
