#pragma once

#include <cstdint>
#include <string_view>

#include "magiq/bytes.hpp"
#include "magiq/crypto.hpp"

namespace magiq {

/// Deterministic byte generator (hash in counter mode). All protocol
/// randomness in simulations flows through one of these so that a run is a
/// pure function of its seed.
class DetRng {
public:
    DetRng() : DetRng(0, "default") {}

    DetRng(std::uint64_t seed, std::string_view stream_label) {
        Encoder enc;
        enc.field_u64(seed).field(stream_label);
        key_ = to_bytes(hash(enc.bytes()));
    }

    /// Derives an independent child stream; children of distinct labels
    /// never overlap.
    DetRng fork(std::string_view label) const {
        DetRng child;
        Encoder enc;
        enc.field(key_).field(label);
        child.key_ = to_bytes(hash(enc.bytes()));
        child.counter_ = 0;
        return child;
    }

    Bytes next_bytes(std::size_t n) {
        Bytes out;
        out.reserve(n);
        while (out.size() < n) {
            Encoder enc;
            enc.field(key_).field_u64(counter_++);
            Digest block = hash(enc.bytes());
            std::size_t take = std::min<std::size_t>(n - out.size(), block.size());
            out.insert(out.end(), block.v.begin(), block.v.begin() + take);
        }
        return out;
    }

    Digest next_digest() {
        Encoder enc;
        enc.field(key_).field_u64(counter_++);
        return hash(enc.bytes());
    }

    std::uint64_t next_u64() {
        Digest d = next_digest();
        std::uint64_t x = 0;
        for (int i = 0; i < 8; ++i) x = (x << 8) | d.v[i];
        return x;
    }

private:
    Bytes key_;
    std::uint64_t counter_ = 0;
};

} // namespace magiq
