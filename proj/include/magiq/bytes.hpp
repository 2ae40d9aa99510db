#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace magiq {

using Bytes = std::vector<std::uint8_t>;

/// Fixed 32-octet hash output. Every digest in the protocol is exactly
/// this wide; anything else is a wire error, not a Digest.
struct Digest {
    std::array<std::uint8_t, 32> v{};

    static constexpr std::size_t size() { return 32; }

    friend bool operator==(const Digest&, const Digest&) = default;
    friend auto operator<=>(const Digest&, const Digest&) = default;

    bool is_zero() const {
        return std::all_of(v.begin(), v.end(), [](std::uint8_t b) { return b == 0; });
    }
};

inline Bytes to_bytes(const Digest& d) { return Bytes(d.v.begin(), d.v.end()); }

inline Bytes to_bytes(std::string_view s) {
    return Bytes(s.begin(), s.end());
}

inline std::string to_string(const Bytes& b) {
    return std::string(b.begin(), b.end());
}

inline Digest digest_from_bytes(std::span<const std::uint8_t> b) {
    if (b.size() != Digest::size())
        throw std::invalid_argument("digest must be exactly 32 octets");
    Digest d;
    std::copy(b.begin(), b.end(), d.v.begin());
    return d;
}

/// Constant-time equality for authentication tags.
inline bool ct_equal(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b) {
    if (a.size() != b.size()) return false;
    std::uint8_t acc = 0;
    for (std::size_t i = 0; i < a.size(); ++i) acc |= a[i] ^ b[i];
    return acc == 0;
}

inline bool ct_equal(const Digest& a, const Digest& b) {
    return ct_equal(std::span(a.v), std::span(b.v));
}

inline std::string to_hex(std::span<const std::uint8_t> b) {
    static constexpr char tab[] = "0123456789abcdef";
    std::string out;
    out.reserve(b.size() * 2);
    for (std::uint8_t x : b) {
        out.push_back(tab[x >> 4]);
        out.push_back(tab[x & 0xf]);
    }
    return out;
}

inline std::string to_hex(const Digest& d) { return to_hex(std::span(d.v)); }

inline Bytes from_hex(std::string_view s) {
    auto nib = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        return -1;
    };
    if (s.size() % 2 != 0) throw std::invalid_argument("odd-length hex string");
    Bytes out;
    out.reserve(s.size() / 2);
    for (std::size_t i = 0; i < s.size(); i += 2) {
        int hi = nib(s[i]), lo = nib(s[i + 1]);
        if (hi < 0 || lo < 0) throw std::invalid_argument("invalid hex digit");
        out.push_back(static_cast<std::uint8_t>(hi << 4 | lo));
    }
    return out;
}

inline Digest digest_from_hex(std::string_view s) {
    return digest_from_bytes(from_hex(s));
}

inline void append(Bytes& dst, std::span<const std::uint8_t> src) {
    dst.insert(dst.end(), src.begin(), src.end());
}

} // namespace magiq
