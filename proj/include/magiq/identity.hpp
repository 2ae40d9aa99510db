#pragma once

#include <string>

#include "magiq/credentials.hpp"
#include "magiq/provider.hpp"
#include "magiq/rng.hpp"
#include "magiq/signature.hpp"

namespace magiq {

/// Local trusted key directory standing in for the certificate authority.
/// Issues identity and transport certificates; also keeps first-write-wins
/// registrations for the simulator.
class CertificateAuthority {
public:
    CertificateAuthority() = default;
    CertificateAuthority(DetRng rng, std::uint32_t sig_height = 8) : rng_(rng.fork("ca")) {
        kp_ = sig_keygen("mss-sha256-h" + std::to_string(sig_height), rng_).value();
    }

    const Bytes& public_key() const { return kp_.public_key; }

    Cert issue(std::string_view subject, const Bytes& pk) {
        return make_cert(kp_, subject, pk).value();
    }

private:
    DetRng rng_;
    SignatureKeyPair kp_;
};

/// User-side key material. The signing entry point models user-authorized
/// software: session commitments (the per-chain signatures) go through
/// sign(), which tests can replace with a refusing hook.
struct UserIdentity {
    std::string uid;
    std::string pwd;
    SignatureKeyPair identity_kp;
    Cert id_cert;
    Bytes tls_pk;

    static UserIdentity create(CertificateAuthority& ca, std::string_view uid,
                               std::string_view pwd, DetRng& rng, std::uint32_t sig_height) {
        UserIdentity u;
        u.uid = std::string(uid);
        u.pwd = std::string(pwd);
        DetRng stream = rng.fork("user:" + u.uid);
        u.identity_kp = sig_keygen("mss-sha256-h" + std::to_string(sig_height), stream).value();
        u.id_cert = ca.issue(uid, u.identity_kp.public_key);
        u.tls_pk = stream.next_bytes(32);
        return u;
    }

    Outcome<Bytes> sign(const Bytes& payload) { return sig_sign(identity_kp, payload); }
};

/// Agent-side key material plus the owner signatures prepared for
/// registration. The chain-seed key is the agent's secret PRF key for
/// deriving personalized chain seeds.
struct AgentIdentity {
    std::string aid;
    std::string owner_uid;
    SignatureKeyPair identity_kp;
    Bytes tls_pk;
    Cert tls_cert;
    EndpointDescriptor endpoint;
    Bytes chain_seed_key;
    Cert owner_cert;
    Bytes sig_id;
    Bytes sig_agent;

    static AgentIdentity create(CertificateAuthority& ca, UserIdentity& owner,
                                std::string_view name, const EndpointDescriptor& ed,
                                const Bytes& provider_tls_pk, const Bytes& provider_pk,
                                DetRng& rng, std::uint32_t sig_height) {
        AgentIdentity a;
        a.aid = owner.uid + ":" + std::string(name);
        a.owner_uid = owner.uid;
        DetRng stream = rng.fork("agent:" + a.aid);
        a.identity_kp = sig_keygen("mss-sha256-h" + std::to_string(sig_height), stream).value();
        a.tls_pk = stream.next_bytes(32);
        a.tls_cert = ca.issue(a.aid, a.tls_pk);
        a.endpoint = ed;
        a.chain_seed_key = stream.next_bytes(32);
        a.owner_cert = owner.id_cert;
        a.sig_id =
            owner.sign(agent_identity_payload(a.aid, a.identity_kp.public_key)).value();
        a.sig_agent = owner
                          .sign(agent_binding_payload(a.aid, ed, a.tls_pk, provider_tls_pk,
                                                      provider_pk))
                          .value();
        return a;
    }

    AgentMetadata metadata() const {
        return AgentMetadata{endpoint, tls_cert, tls_pk, identity_kp.public_key};
    }

    AgentInfo info() const {
        return AgentInfo{owner_cert, aid, metadata(), sig_id, sig_agent};
    }
};

} // namespace magiq
