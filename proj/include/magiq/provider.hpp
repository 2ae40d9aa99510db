#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <utility>

#include "magiq/credentials.hpp"
#include "magiq/crypto.hpp"
#include "magiq/errors.hpp"
#include "magiq/policy.hpp"
#include "magiq/rng.hpp"
#include "magiq/signature.hpp"
#include "magiq/wire.hpp"

namespace magiq {

struct UserRecord {
    std::string uid;
    Digest pwd_hash;
    Cert id_cert;
};

struct AgentRecord {
    std::string aid;
    std::string owner_uid;
    AgentMetadata metadata;
    ContactPolicy cp;
    Bytes sig_id;
    Bytes sig_agent;
};

/// Discovery grant: the registry's signature over the responder's full
/// record plus the initiator's identity, carrying a freshness nonce.
struct AuthorizationToken {
    Bytes nonce; // 16 octets, never reused by the issuer
    Cert responder_user_cert;
    std::string responder_aid;
    AgentMetadata responder_metadata;
    Bytes responder_sig_id;
    Bytes responder_sig_agent;
    std::string initiator_aid;
    Bytes initiator_pk;
    Bytes provider_sig;

    Bytes signed_payload() const {
        Encoder enc;
        enc.field(nonce)
            .field(encode_cert(responder_user_cert))
            .field(responder_aid)
            .field(encode_metadata(responder_metadata))
            .field(responder_sig_id)
            .field(responder_sig_agent)
            .field(initiator_aid)
            .field(initiator_pk);
        return std::move(enc).bytes();
    }
};

inline Bytes encode_authorization_token(const AuthorizationToken& t) {
    Encoder enc;
    enc.field(t.nonce)
        .field(encode_cert(t.responder_user_cert))
        .field(t.responder_aid)
        .field(encode_metadata(t.responder_metadata))
        .field(t.responder_sig_id)
        .field(t.responder_sig_agent)
        .field(t.initiator_aid)
        .field(t.initiator_pk)
        .field(t.provider_sig);
    return std::move(enc).bytes();
}

inline AuthorizationToken decode_authorization_token(const Bytes& b) {
    Decoder dec(b);
    AuthorizationToken t;
    t.nonce = dec.field();
    t.responder_user_cert = decode_cert(dec.field());
    t.responder_aid = dec.field_string();
    t.responder_metadata = decode_metadata(dec.field());
    t.responder_sig_id = dec.field();
    t.responder_sig_agent = dec.field();
    t.initiator_aid = dec.field_string();
    t.initiator_pk = dec.field();
    t.provider_sig = dec.field();
    dec.expect_end();
    return t;
}

/// The three-signature authorization check run by whoever receives a
/// token: owner certificate against the directory key, both owner
/// signatures on the responder's record, then the issuer signature over
/// the whole grant.
inline Status verify_authorization(const AuthorizationToken& t, const Bytes& provider_pk,
                                   const Bytes& provider_tls_pk, const Bytes& ca_pk,
                                   std::string_view expected_responder_aid) {
    if (t.responder_aid != expected_responder_aid)
        return err(Errc::bad_provider_sig, Party::provider, "token names another responder");
    if (!verify_cert(ca_pk, t.responder_user_cert))
        return err(Errc::bad_certificate, Party::provider, "responder owner certificate");
    const Bytes& pk_user = t.responder_user_cert.public_key;
    if (!sig_verify(pk_user,
                    agent_binding_payload(t.responder_aid, t.responder_metadata.endpoint,
                                          t.responder_metadata.tls_pk, provider_tls_pk,
                                          provider_pk),
                    t.responder_sig_agent))
        return err(Errc::bad_user_sig, Party::provider, "responder binding signature");
    if (!sig_verify(pk_user, agent_identity_payload(t.responder_aid, t.responder_metadata.identity_pk),
                    t.responder_sig_id))
        return err(Errc::bad_user_sig, Party::provider, "responder identity signature");
    if (!sig_verify(provider_pk, t.signed_payload(), t.provider_sig))
        return err(Errc::bad_provider_sig, Party::provider, "grant signature");
    return {};
}

/// The registry service. Honest-but-curious: follows the protocol,
/// enforces contact policies and per-pair session budgets, and never
/// issues more grants than the resolved budget even under concurrent
/// discovery. All mutating entry points are serialized on one lock.
class Provider {
public:
    Provider() = default;

    Provider(const Bytes& ca_pk, DetRng rng, std::uint32_t sig_height = 8)
        : ca_pk_(ca_pk), rng_(rng.fork("provider")) {
        identity_ = sig_keygen("mss-sha256-h" + std::to_string(sig_height), rng_).value();
        tls_pk_ = rng_.next_bytes(32);
    }

    Provider(const Provider& other) {
        std::lock_guard lock(other.mu_);
        copy_state_from(other);
    }

    Provider& operator=(const Provider& other) {
        if (this == &other) return *this;
        std::scoped_lock lock(mu_, other.mu_);
        copy_state_from(other);
        return *this;
    }

    const Bytes& public_key() const { return identity_.public_key; }
    const Bytes& tls_public_key() const { return tls_pk_; }

    /// Binds an append-only log file. With replay=true, existing records
    /// are folded into the registry before new ones are appended.
    Status attach_log(const std::string& path, bool replay) {
        std::lock_guard lock(mu_);
        log_path_ = path;
        if (!replay) return {};
        std::ifstream in(path, std::ios::binary);
        if (!in.good()) return {}; // nothing persisted yet
        Bytes all((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        std::size_t pos = 0;
        while (pos + 4 <= all.size()) {
            std::uint32_t len = (std::uint32_t(all[pos]) << 24) | (std::uint32_t(all[pos + 1]) << 16) |
                                (std::uint32_t(all[pos + 2]) << 8) | std::uint32_t(all[pos + 3]);
            pos += 4;
            if (pos + len > all.size())
                return err(Errc::malformed_frame, Party::provider, "truncated log record");
            apply_record(Bytes(all.begin() + static_cast<std::ptrdiff_t>(pos),
                               all.begin() + static_cast<std::ptrdiff_t>(pos + len)));
            pos += len;
        }
        return {};
    }

    Status register_user(std::string_view uid, std::string_view pwd, const Cert& id_cert) {
        std::lock_guard lock(mu_);
        if (users_.count(std::string(uid)))
            return err(Errc::duplicate_uid, Party::user, std::string(uid));
        if (id_cert.subject != uid || !verify_cert(ca_pk_, id_cert))
            return err(Errc::bad_certificate, Party::user, "identity certificate rejected");
        // external identity verification is out of band and always accepts
        UserRecord rec{std::string(uid), hash(pwd), id_cert};
        users_.emplace(rec.uid, rec);
        log_record(user_record_bytes(rec));
        return {};
    }

    Outcome<Bytes> register_agent(std::string_view uid, std::string_view pwd,
                                  std::string_view aid, const EndpointDescriptor& ed,
                                  const ContactPolicy& cp, const Cert& tls_cert,
                                  const Bytes& identity_pk, const Bytes& sig_id,
                                  const Bytes& sig_agent) {
        std::lock_guard lock(mu_);
        const UserRecord* user = authenticate(uid, pwd);
        if (!user) return err(Errc::auth_failed, Party::user);
        auto parsed = parse_aid(aid);
        if (!parsed.ok()) return parsed.error();
        if (std::string(aid).rfind(std::string(uid) + ":", 0) != 0)
            return err(Errc::malformed_aid, Party::user, "aid must extend the owner uid");
        if (agents_.count(std::string(aid)))
            return err(Errc::duplicate_aid, Party::user, std::string(aid));
        if (endpoints_.count(ed.key()))
            return err(Errc::duplicate_endpoint, Party::user, ed.key());
        if (tls_cert.subject != aid || !verify_cert(ca_pk_, tls_cert))
            return err(Errc::bad_certificate, Party::user, "transport certificate rejected");
        const Bytes& pk_user = user->id_cert.public_key;
        if (!sig_verify(pk_user,
                        agent_binding_payload(aid, ed, tls_cert.public_key,
                                              tls_pk_, identity_.public_key),
                        sig_agent))
            return err(Errc::bad_signature, Party::user, "agent binding signature");
        if (!sig_verify(pk_user, agent_identity_payload(aid, identity_pk), sig_id))
            return err(Errc::bad_signature, Party::user, "agent identity signature");

        AgentRecord rec;
        rec.aid = std::string(aid);
        rec.owner_uid = std::string(uid);
        rec.metadata = AgentMetadata{ed, tls_cert, tls_cert.public_key, identity_pk};
        rec.cp = cp;
        rec.sig_id = sig_id;
        rec.sig_agent = sig_agent;
        agents_.emplace(rec.aid, rec);
        endpoints_.insert(ed.key());
        log_record(agent_record_bytes(rec));

        Encoder conf;
        conf.field(aid)
            .field(encode_cert(tls_cert))
            .field(encode_endpoint(ed))
            .field(identity_pk)
            .field(sig_agent);
        auto sig = sig_sign(identity_, conf.bytes());
        if (!sig.ok()) return sig.error();
        return sig.value();
    }

    /// Registration confirmation check for the agent's owner.
    static bool verify_registration_confirmation(const Bytes& provider_pk, std::string_view aid,
                                                 const Cert& tls_cert,
                                                 const EndpointDescriptor& ed,
                                                 const Bytes& identity_pk, const Bytes& sig_agent,
                                                 const Bytes& confirmation_sig) {
        Encoder conf;
        conf.field(aid)
            .field(encode_cert(tls_cert))
            .field(encode_endpoint(ed))
            .field(identity_pk)
            .field(sig_agent);
        return sig_verify(provider_pk, conf.bytes(), confirmation_sig);
    }

    Status update_policy(std::string_view uid, std::string_view pwd, std::string_view aid,
                         const ContactPolicy& cp) {
        std::lock_guard lock(mu_);
        if (!authenticate(uid, pwd)) return err(Errc::auth_failed, Party::user);
        auto it = agents_.find(std::string(aid));
        if (it == agents_.end()) return err(Errc::unknown_agent, Party::user, std::string(aid));
        if (it->second.owner_uid != uid)
            return err(Errc::auth_failed, Party::user, "not the owner of this agent");
        it->second.cp = cp;
        // live pair counters keep their remaining budget; the new policy
        // applies when a counter is re-created
        log_record(policy_record_bytes(it->second.aid, cp));
        return {};
    }

    Outcome<AuthorizationToken> discover(std::string_view aid_i, std::string_view aid_r) {
        std::lock_guard lock(mu_);
        auto it_i = agents_.find(std::string(aid_i));
        auto it_r = agents_.find(std::string(aid_r));
        if (it_i == agents_.end() || it_r == agents_.end())
            return err(Errc::unknown_agent, Party::initiator);

        auto key = std::make_pair(std::string(aid_r), std::string(aid_i));
        auto ctr = counters_.find(key);
        if (ctr == counters_.end()) {
            std::int64_t budget = resolve_budget(it_r->second.cp, it_i->second.cp, aid_r, aid_i);
            if (budget < 0)
                return err(Errc::not_authorized, Party::initiator, "no matching contact rule");
            ctr = counters_.emplace(key, budget).first;
        }
        if (ctr->second == 0) return err(Errc::budget_exhausted, Party::initiator);
        --ctr->second;
        log_record(counter_record_bytes(key.first, key.second, ctr->second));

        AuthorizationToken token;
        do {
            token.nonce = rng_.next_bytes(16);
        } while (!issued_nonces_.insert(token.nonce).second);
        log_record(nonce_record_bytes(token.nonce));
        const UserRecord& owner = users_.at(it_r->second.owner_uid);
        token.responder_user_cert = owner.id_cert;
        token.responder_aid = it_r->second.aid;
        token.responder_metadata = it_r->second.metadata;
        token.responder_sig_id = it_r->second.sig_id;
        token.responder_sig_agent = it_r->second.sig_agent;
        token.initiator_aid = it_i->second.aid;
        token.initiator_pk = it_i->second.metadata.identity_pk;
        auto sig = sig_sign(identity_, token.signed_payload());
        if (!sig.ok()) return sig.error();
        token.provider_sig = sig.value();
        return token;
    }

    std::optional<std::int64_t> counter(std::string_view aid_r, std::string_view aid_i) const {
        std::lock_guard lock(mu_);
        auto it = counters_.find(std::make_pair(std::string(aid_r), std::string(aid_i)));
        if (it == counters_.end()) return std::nullopt;
        return it->second;
    }

    std::optional<AgentRecord> agent_record(std::string_view aid) const {
        std::lock_guard lock(mu_);
        auto it = agents_.find(std::string(aid));
        if (it == agents_.end()) return std::nullopt;
        return it->second;
    }

    std::set<Bytes> issued_nonces() const {
        std::lock_guard lock(mu_);
        return issued_nonces_;
    }

    /// Digest of the full registry state; equal digests mean a reloaded
    /// instance is indistinguishable from the original.
    Digest state_digest() const {
        std::lock_guard lock(mu_);
        Encoder enc;
        enc.field_u64(users_.size());
        for (const auto& [uid, rec] : users_) enc.field(user_record_bytes(rec));
        enc.field_u64(agents_.size());
        for (const auto& [aid, rec] : agents_) enc.field(agent_record_bytes(rec));
        enc.field_u64(counters_.size());
        for (const auto& [key, remaining] : counters_)
            enc.field(counter_record_bytes(key.first, key.second, remaining));
        enc.field_u64(issued_nonces_.size());
        for (const auto& nu : issued_nonces_) enc.field(nu);
        return hash(enc.bytes());
    }

    /// Service entry point: one request frame in, one response frame out.
    Bytes handle_frame(const Bytes& raw) {
        auto parsed = parse_frame(raw);
        if (!parsed.ok()) return error_response(parsed.error().code);
        try {
            switch (parsed.value().type) {
                case MsgType::register_user: {
                    Decoder dec(parsed.value().body);
                    std::string uid = dec.field_string();
                    std::string pwd = dec.field_string();
                    Cert cert = decode_cert(dec.field());
                    dec.expect_end();
                    Status st = register_user(uid, pwd, cert);
                    return st.ok() ? ok_response({}) : error_response(st.error().code);
                }
                case MsgType::register_agent: {
                    Decoder dec(parsed.value().body);
                    std::string uid = dec.field_string();
                    std::string pwd = dec.field_string();
                    std::string aid = dec.field_string();
                    EndpointDescriptor ed = decode_endpoint(dec.field());
                    ContactPolicy cp = decode_contact_policy(dec.field());
                    Cert tls_cert = decode_cert(dec.field());
                    Bytes pk = dec.field();
                    Bytes sig_id = dec.field();
                    Bytes sig_agent = dec.field();
                    dec.expect_end();
                    auto out = register_agent(uid, pwd, aid, ed, cp, tls_cert, pk, sig_id, sig_agent);
                    return out.ok() ? ok_response(out.value()) : error_response(out.error().code);
                }
                case MsgType::update_policy: {
                    Decoder dec(parsed.value().body);
                    std::string uid = dec.field_string();
                    std::string pwd = dec.field_string();
                    std::string aid = dec.field_string();
                    ContactPolicy cp = decode_contact_policy(dec.field());
                    dec.expect_end();
                    Status st = update_policy(uid, pwd, aid, cp);
                    return st.ok() ? ok_response({}) : error_response(st.error().code);
                }
                case MsgType::discover: {
                    Decoder dec(parsed.value().body);
                    std::string aid_i = dec.field_string();
                    std::string aid_r = dec.field_string();
                    dec.expect_end();
                    auto out = discover(aid_i, aid_r);
                    return out.ok() ? ok_response(encode_authorization_token(out.value()))
                                    : error_response(out.error().code);
                }
                default:
                    return error_response(Errc::malformed_frame);
            }
        } catch (const WireError&) {
            return error_response(Errc::malformed_frame);
        }
    }

private:
    const UserRecord* authenticate(std::string_view uid, std::string_view pwd) const {
        auto it = users_.find(std::string(uid));
        if (it == users_.end()) return nullptr;
        if (!ct_equal(hash(pwd), it->second.pwd_hash)) return nullptr;
        return &it->second;
    }

    void copy_state_from(const Provider& other) {
        ca_pk_ = other.ca_pk_;
        rng_ = other.rng_;
        identity_ = other.identity_;
        tls_pk_ = other.tls_pk_;
        users_ = other.users_;
        agents_ = other.agents_;
        endpoints_ = other.endpoints_;
        counters_ = other.counters_;
        issued_nonces_ = other.issued_nonces_;
        log_path_.clear(); // a copy does not inherit the log binding
    }

    static Bytes user_record_bytes(const UserRecord& rec) {
        Encoder enc;
        enc.field(std::string_view("user")).field(rec.uid).field(rec.pwd_hash).field(encode_cert(rec.id_cert));
        return std::move(enc).bytes();
    }

    static Bytes agent_record_bytes(const AgentRecord& rec) {
        Encoder enc;
        enc.field(std::string_view("agent"))
            .field(rec.aid)
            .field(rec.owner_uid)
            .field(encode_metadata(rec.metadata))
            .field(encode_contact_policy(rec.cp))
            .field(rec.sig_id)
            .field(rec.sig_agent);
        return std::move(enc).bytes();
    }

    static Bytes policy_record_bytes(const std::string& aid, const ContactPolicy& cp) {
        Encoder enc;
        enc.field(std::string_view("policy")).field(aid).field(encode_contact_policy(cp));
        return std::move(enc).bytes();
    }

    static Bytes counter_record_bytes(const std::string& aid_r, const std::string& aid_i,
                                      std::int64_t remaining) {
        Encoder enc;
        enc.field(std::string_view("counter"))
            .field(aid_r)
            .field(aid_i)
            .field_u64(static_cast<std::uint64_t>(remaining));
        return std::move(enc).bytes();
    }

    static Bytes nonce_record_bytes(const Bytes& nu) {
        Encoder enc;
        enc.field(std::string_view("nonce")).field(nu);
        return std::move(enc).bytes();
    }

    void log_record(const Bytes& record) {
        if (log_path_.empty()) return;
        std::ofstream out(log_path_, std::ios::binary | std::ios::app);
        Bytes framed;
        put_u32_be(framed, static_cast<std::uint32_t>(record.size()));
        append(framed, std::span(record));
        out.write(reinterpret_cast<const char*>(framed.data()),
                  static_cast<std::streamsize>(framed.size()));
    }

    void apply_record(const Bytes& record) {
        Decoder dec(record);
        std::string kind = dec.field_string();
        if (kind == "user") {
            UserRecord rec;
            rec.uid = dec.field_string();
            rec.pwd_hash = dec.field_digest();
            rec.id_cert = decode_cert(dec.field());
            users_[rec.uid] = rec;
        } else if (kind == "agent") {
            AgentRecord rec;
            rec.aid = dec.field_string();
            rec.owner_uid = dec.field_string();
            rec.metadata = decode_metadata(dec.field());
            rec.cp = decode_contact_policy(dec.field());
            rec.sig_id = dec.field();
            rec.sig_agent = dec.field();
            endpoints_.insert(rec.metadata.endpoint.key());
            agents_[rec.aid] = rec;
        } else if (kind == "policy") {
            std::string aid = dec.field_string();
            ContactPolicy cp = decode_contact_policy(dec.field());
            auto it = agents_.find(aid);
            if (it != agents_.end()) it->second.cp = cp;
        } else if (kind == "counter") {
            std::string aid_r = dec.field_string();
            std::string aid_i = dec.field_string();
            std::int64_t remaining = static_cast<std::int64_t>(dec.field_u64());
            counters_[std::make_pair(aid_r, aid_i)] = remaining;
        } else if (kind == "nonce") {
            issued_nonces_.insert(dec.field());
        }
    }

    Bytes ca_pk_;
    DetRng rng_;
    SignatureKeyPair identity_;
    Bytes tls_pk_;
    std::map<std::string, UserRecord> users_;
    std::map<std::string, AgentRecord> agents_;
    std::set<std::string> endpoints_;
    std::map<std::pair<std::string, std::string>, std::int64_t> counters_;
    std::set<Bytes> issued_nonces_;
    std::string log_path_;
    mutable std::mutex mu_;
};

} // namespace magiq
