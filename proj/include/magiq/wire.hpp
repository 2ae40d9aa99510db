#pragma once

#include <cstdint>
#include <string_view>

#include "magiq/encoding.hpp"
#include "magiq/errors.hpp"
#include "magiq/policy.hpp"

namespace magiq {

/// Wire framing: a 1-octet message-type tag followed by the canonical
/// encoding of the message fields. Service responses mirror requests with
/// a status octet (0 = ok) and either a payload or a 4-octet error code.

enum class MsgType : std::uint8_t {
    register_user = 0x01,
    register_agent = 0x02,
    update_policy = 0x03,
    discover = 0x04,
    service_response = 0x05,
    handshake_init = 0x10,
    handshake_resp = 0x11,
    task_request = 0x12,
    task_response = 0x13,
    session_terminal = 0x14,
};

inline std::string_view msg_type_name(MsgType t) {
    switch (t) {
        case MsgType::register_user: return "register_user";
        case MsgType::register_agent: return "register_agent";
        case MsgType::update_policy: return "update_policy";
        case MsgType::discover: return "discover";
        case MsgType::service_response: return "service_response";
        case MsgType::handshake_init: return "handshake_init";
        case MsgType::handshake_resp: return "handshake_resp";
        case MsgType::task_request: return "task_request";
        case MsgType::task_response: return "task_response";
        case MsgType::session_terminal: return "session_terminal";
    }
    return "unknown";
}

inline Bytes frame(MsgType type, const Bytes& body) {
    Bytes out;
    out.reserve(body.size() + 1);
    out.push_back(static_cast<std::uint8_t>(type));
    append(out, std::span(body));
    return out;
}

struct ParsedFrame {
    MsgType type;
    Bytes body;
};

inline Outcome<ParsedFrame> parse_frame(const Bytes& raw) {
    if (raw.empty()) return err(Errc::malformed_frame, Party::none, "empty frame");
    return ParsedFrame{static_cast<MsgType>(raw[0]), Bytes(raw.begin() + 1, raw.end())};
}

inline Bytes ok_response(const Bytes& payload) {
    Bytes body;
    body.push_back(0x00);
    append(body, std::span(payload));
    return frame(MsgType::service_response, body);
}

inline Bytes error_response(Errc code) {
    Bytes body;
    body.push_back(0x01);
    put_u32_be(body, static_cast<std::uint32_t>(code));
    return frame(MsgType::service_response, body);
}

/// Decodes a service response into a payload or the carried error code.
inline Outcome<Bytes> parse_service_response(const Bytes& raw) {
    auto parsed = parse_frame(raw);
    if (!parsed.ok()) return parsed.error();
    if (parsed.value().type != MsgType::service_response)
        return err(Errc::malformed_frame, Party::provider, "expected service response");
    const Bytes& body = parsed.value().body;
    if (body.empty()) return err(Errc::malformed_frame, Party::provider, "empty response body");
    if (body[0] == 0x00) return Bytes(body.begin() + 1, body.end());
    if (body.size() != 5) return err(Errc::malformed_frame, Party::provider, "bad error frame");
    std::uint32_t code = (std::uint32_t(body[1]) << 24) | (std::uint32_t(body[2]) << 16) |
                         (std::uint32_t(body[3]) << 8) | std::uint32_t(body[4]);
    return err(static_cast<Errc>(code), Party::provider);
}

inline Bytes encode_contact_policy(const ContactPolicy& cp) {
    Encoder enc;
    enc.field_u64(cp.rules.size());
    for (const auto& r : cp.rules) {
        enc.field_u64(r.direction == Direction::send ? 0 : 1);
        enc.field(r.pattern);
        enc.field_u64(r.budget);
    }
    return std::move(enc).bytes();
}

inline ContactPolicy decode_contact_policy(const Bytes& b) {
    Decoder dec(b);
    ContactPolicy cp;
    std::uint64_t count = dec.field_u64();
    if (count > 4096) throw WireError("implausibly many contact rules");
    for (std::uint64_t i = 0; i < count; ++i) {
        ContactRule r;
        r.direction = dec.field_u64() == 0 ? Direction::send : Direction::receive;
        r.pattern = dec.field_string();
        r.budget = dec.field_u64();
        cp.rules.push_back(std::move(r));
    }
    dec.expect_end();
    return cp;
}

} // namespace magiq
