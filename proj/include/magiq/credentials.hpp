#pragma once

#include <string>

#include "magiq/encoding.hpp"
#include "magiq/errors.hpp"
#include "magiq/policy.hpp"
#include "magiq/signature.hpp"

namespace magiq {

/// Identity certificate: the trusted key directory's signature binding a
/// subject id to a public key.
struct Cert {
    std::string subject;
    Bytes public_key;
    Bytes ca_sig;

    friend bool operator==(const Cert&, const Cert&) = default;
};

inline Bytes cert_payload(std::string_view subject, const Bytes& pk) {
    Encoder enc;
    enc.field(subject).field(pk);
    return std::move(enc).bytes();
}

inline Outcome<Cert> make_cert(SignatureKeyPair& ca_kp, std::string_view subject,
                               const Bytes& pk) {
    auto sig = sig_sign(ca_kp, cert_payload(subject, pk));
    if (!sig.ok()) return sig.error();
    return Cert{std::string(subject), pk, std::move(sig.value())};
}

inline bool verify_cert(const Bytes& ca_pk, const Cert& cert) {
    return sig_verify(ca_pk, cert_payload(cert.subject, cert.public_key), cert.ca_sig);
}

inline Bytes encode_cert(const Cert& c) {
    Encoder enc;
    enc.field(c.subject).field(c.public_key).field(c.ca_sig);
    return std::move(enc).bytes();
}

inline Cert decode_cert(const Bytes& b) {
    Decoder dec(b);
    Cert c;
    c.subject = dec.field_string();
    c.public_key = dec.field();
    c.ca_sig = dec.field();
    dec.expect_end();
    return c;
}

/// Agent endpoint descriptor ED_A = (device, ip, port).
struct EndpointDescriptor {
    std::string device;
    std::string ip;
    std::uint64_t port = 0;

    friend bool operator==(const EndpointDescriptor&, const EndpointDescriptor&) = default;

    std::string key() const { return device + "/" + ip + ":" + std::to_string(port); }
};

inline Bytes encode_endpoint(const EndpointDescriptor& ed) {
    Encoder enc;
    enc.field(ed.device).field(ed.ip).field_u64(ed.port);
    return std::move(enc).bytes();
}

inline EndpointDescriptor decode_endpoint(const Bytes& b) {
    Decoder dec(b);
    EndpointDescriptor ed;
    ed.device = dec.field_string();
    ed.ip = dec.field_string();
    ed.port = dec.field_u64();
    dec.expect_end();
    return ed;
}

/// Registry metadata M_A = (ED_A, transport certificate, transport pk,
/// identity pk).
struct AgentMetadata {
    EndpointDescriptor endpoint;
    Cert tls_cert;
    Bytes tls_pk;
    Bytes identity_pk;

    friend bool operator==(const AgentMetadata&, const AgentMetadata&) = default;
};

inline Bytes encode_metadata(const AgentMetadata& m) {
    Encoder enc;
    enc.field(encode_endpoint(m.endpoint))
        .field(encode_cert(m.tls_cert))
        .field(m.tls_pk)
        .field(m.identity_pk);
    return std::move(enc).bytes();
}

inline AgentMetadata decode_metadata(const Bytes& b) {
    Decoder dec(b);
    AgentMetadata m;
    m.endpoint = decode_endpoint(dec.field());
    m.tls_cert = decode_cert(dec.field());
    m.tls_pk = dec.field();
    m.identity_pk = dec.field();
    dec.expect_end();
    return m;
}

/// Signed payload of the owner's identity binding: (aid, pk_A).
inline Bytes agent_identity_payload(std::string_view aid, const Bytes& identity_pk) {
    Encoder enc;
    enc.field(aid).field(identity_pk);
    return std::move(enc).bytes();
}

/// Signed payload binding the agent to its endpoint, transport key, and
/// chosen provider: (aid, ED, pk_tls_A, provider tls pk, provider pk).
inline Bytes agent_binding_payload(std::string_view aid, const EndpointDescriptor& ed,
                                   const Bytes& tls_pk, const Bytes& provider_tls_pk,
                                   const Bytes& provider_pk) {
    Encoder enc;
    enc.field(aid)
        .field(encode_endpoint(ed))
        .field(tls_pk)
        .field(provider_tls_pk)
        .field(provider_pk);
    return std::move(enc).bytes();
}

/// An agent's self-description bundle carried in handshakes:
/// (owner id certificate, aid, metadata, owner signatures).
struct AgentInfo {
    Cert user_cert;
    std::string aid;
    AgentMetadata metadata;
    Bytes sig_id;    // owner's signature over agent_identity_payload
    Bytes sig_agent; // owner's signature over agent_binding_payload

    friend bool operator==(const AgentInfo&, const AgentInfo&) = default;
};

inline Bytes encode_agent_info(const AgentInfo& info) {
    Encoder enc;
    enc.field(encode_cert(info.user_cert))
        .field(info.aid)
        .field(encode_metadata(info.metadata))
        .field(info.sig_id)
        .field(info.sig_agent);
    return std::move(enc).bytes();
}

inline AgentInfo decode_agent_info(const Bytes& b) {
    Decoder dec(b);
    AgentInfo info;
    info.user_cert = decode_cert(dec.field());
    info.aid = dec.field_string();
    info.metadata = decode_metadata(dec.field());
    info.sig_id = dec.field();
    info.sig_agent = dec.field();
    dec.expect_end();
    return info;
}

/// Verifies an agent's info bundle: the owner certificate under the
/// directory key, then both owner signatures.
inline Status verify_agent_info(const AgentInfo& info, const Bytes& ca_pk,
                                const Bytes& provider_tls_pk, const Bytes& provider_pk,
                                Party blame) {
    if (!verify_cert(ca_pk, info.user_cert))
        return err(Errc::bad_certificate, blame, "owner certificate does not verify");
    if (!sig_verify(info.user_cert.public_key,
                    agent_identity_payload(info.aid, info.metadata.identity_pk), info.sig_id))
        return err(Errc::bad_user_sig, blame, "identity binding signature");
    if (!sig_verify(info.user_cert.public_key,
                    agent_binding_payload(info.aid, info.metadata.endpoint, info.metadata.tls_pk,
                                          provider_tls_pk, provider_pk),
                    info.sig_agent))
        return err(Errc::bad_user_sig, blame, "agent binding signature");
    return {};
}

} // namespace magiq
