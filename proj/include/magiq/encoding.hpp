#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

#include "magiq/bytes.hpp"

namespace magiq {

/// Canonical field encoding, used bit-exactly for every hashed, signed, or
/// wire-transmitted structure: each field is prefixed with a 4-octet
/// big-endian length and fields are concatenated in declared order.
/// Integer fields encode as 8-octet big-endian content.

struct WireError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline void put_u32_be(Bytes& out, std::uint32_t x) {
    out.push_back(static_cast<std::uint8_t>(x >> 24));
    out.push_back(static_cast<std::uint8_t>(x >> 16));
    out.push_back(static_cast<std::uint8_t>(x >> 8));
    out.push_back(static_cast<std::uint8_t>(x));
}

inline void put_u64_be(Bytes& out, std::uint64_t x) {
    for (int i = 7; i >= 0; --i)
        out.push_back(static_cast<std::uint8_t>(x >> (8 * i)));
}

class Encoder {
public:
    Encoder& field(std::span<const std::uint8_t> content) {
        if (content.size() > 0xffffffffull) throw WireError("field too large");
        put_u32_be(out_, static_cast<std::uint32_t>(content.size()));
        append(out_, content);
        return *this;
    }

    Encoder& field(const Bytes& b) { return field(std::span(b)); }
    Encoder& field(const Digest& d) { return field(std::span(d.v)); }
    Encoder& field(std::string_view s) {
        return field(std::span(reinterpret_cast<const std::uint8_t*>(s.data()), s.size()));
    }

    Encoder& field_u64(std::uint64_t x) {
        Bytes tmp;
        put_u64_be(tmp, x);
        return field(tmp);
    }

    const Bytes& bytes() const& { return out_; }
    Bytes bytes() && { return std::move(out_); }

private:
    Bytes out_;
};

/// Sequential reader over a canonical encoding. Bounds-checked; malformed
/// input throws WireError rather than reading out of range.
class Decoder {
public:
    explicit Decoder(std::span<const std::uint8_t> data) : data_(data) {}

    Bytes field() {
        if (pos_ + 4 > data_.size()) throw WireError("truncated field length");
        std::uint32_t len = (std::uint32_t(data_[pos_]) << 24) |
                            (std::uint32_t(data_[pos_ + 1]) << 16) |
                            (std::uint32_t(data_[pos_ + 2]) << 8) |
                            std::uint32_t(data_[pos_ + 3]);
        pos_ += 4;
        if (pos_ + len > data_.size()) throw WireError("truncated field content");
        Bytes out(data_.begin() + static_cast<std::ptrdiff_t>(pos_),
                  data_.begin() + static_cast<std::ptrdiff_t>(pos_ + len));
        pos_ += len;
        return out;
    }

    std::string field_string() { return to_string(field()); }

    Digest field_digest() {
        Bytes b = field();
        if (b.size() != Digest::size()) throw WireError("digest field of wrong width");
        return digest_from_bytes(b);
    }

    std::uint64_t field_u64() {
        Bytes b = field();
        if (b.size() != 8) throw WireError("integer field of wrong width");
        std::uint64_t x = 0;
        for (std::uint8_t byte : b) x = (x << 8) | byte;
        return x;
    }

    bool at_end() const { return pos_ == data_.size(); }

    void expect_end() const {
        if (!at_end()) throw WireError("trailing bytes after last field");
    }

private:
    std::span<const std::uint8_t> data_;
    std::size_t pos_ = 0;
};

/// Splits a canonical encoding into its top-level fields. Used by the
/// adversary harness to mutate the k-th field of arbitrary frames.
inline std::vector<Bytes> split_fields(std::span<const std::uint8_t> data) {
    std::vector<Bytes> fields;
    Decoder dec(data);
    while (!dec.at_end()) fields.push_back(dec.field());
    return fields;
}

inline Bytes join_fields(const std::vector<Bytes>& fields) {
    Encoder enc;
    for (const auto& f : fields) enc.field(f);
    return std::move(enc).bytes();
}

} // namespace magiq
