#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>

namespace magiq {

/// Role held accountable for a failure, as reported by the verifying
/// honest peer.
enum class Party {
    none,
    initiator,
    responder,
    provider,
    user,
    network,
};

inline std::string_view party_name(Party p) {
    switch (p) {
        case Party::none: return "none";
        case Party::initiator: return "initiator";
        case Party::responder: return "responder";
        case Party::provider: return "provider";
        case Party::user: return "user";
        case Party::network: return "network";
    }
    return "none";
}

enum class Errc {
    // crypto / key state
    zero_length_chain,
    empty_leaves,
    index_out_of_range,
    key_exhausted,
    key_reuse,
    unknown_scheme,
    // policy
    malformed_aid,
    too_many_responders,
    // provider registry
    duplicate_uid,
    bad_certificate,
    auth_failed,
    duplicate_aid,
    duplicate_endpoint,
    bad_signature,
    unknown_agent,
    not_authorized,
    budget_exhausted,
    // a-session
    user_refused,
    bad_provider_sig,
    bad_initiator_sig,
    bad_user_sig,
    bad_token,
    bad_proof,
    replayed_nonce,
    bad_tag,
    counter_mismatch,
    own_budget_exhausted,
    peer_budget_exhausted,
    quota_exhausted,
    session_expired,
    session_not_open,
    // c-session
    no_chain_left,
    chains_exhausted,
    delegated_key_reuse,
    global_quota_exhausted,
    global_expired,
    // runtime
    malformed_frame,
    delivery_timeout,
    scenario_parse_error,
};

inline std::string_view errc_name(Errc e) {
    switch (e) {
        case Errc::zero_length_chain: return "ZeroLength";
        case Errc::empty_leaves: return "EmptyLeaves";
        case Errc::index_out_of_range: return "IndexOutOfRange";
        case Errc::key_exhausted: return "KeyExhausted";
        case Errc::key_reuse: return "KeyReuse";
        case Errc::unknown_scheme: return "UnknownScheme";
        case Errc::malformed_aid: return "MalformedAid";
        case Errc::too_many_responders: return "TooManyResponders";
        case Errc::duplicate_uid: return "DuplicateUid";
        case Errc::bad_certificate: return "BadCertificate";
        case Errc::auth_failed: return "AuthFailed";
        case Errc::duplicate_aid: return "DuplicateAid";
        case Errc::duplicate_endpoint: return "DuplicateEndpoint";
        case Errc::bad_signature: return "BadSignature";
        case Errc::unknown_agent: return "UnknownAgent";
        case Errc::not_authorized: return "NotAuthorized";
        case Errc::budget_exhausted: return "BudgetExhausted";
        case Errc::user_refused: return "UserRefused";
        case Errc::bad_provider_sig: return "BadProviderSig";
        case Errc::bad_initiator_sig: return "BadInitiatorSig";
        case Errc::bad_user_sig: return "BadUserSig";
        case Errc::bad_token: return "BadToken";
        case Errc::bad_proof: return "BadProof";
        case Errc::replayed_nonce: return "ReplayedNonce";
        case Errc::bad_tag: return "BadTag";
        case Errc::counter_mismatch: return "CounterMismatch";
        case Errc::own_budget_exhausted: return "OwnBudgetExhausted";
        case Errc::peer_budget_exhausted: return "PeerBudgetExhausted";
        case Errc::quota_exhausted: return "QuotaExhausted";
        case Errc::session_expired: return "SessionExpired";
        case Errc::session_not_open: return "SessionNotOpen";
        case Errc::no_chain_left: return "NoChainLeft";
        case Errc::chains_exhausted: return "ChainsExhausted";
        case Errc::delegated_key_reuse: return "DelegatedKeyReuse";
        case Errc::global_quota_exhausted: return "GlobalQuotaExhausted";
        case Errc::global_expired: return "GlobalExpired";
        case Errc::malformed_frame: return "MalformedFrame";
        case Errc::delivery_timeout: return "DeliveryTimeout";
        case Errc::scenario_parse_error: return "ScenarioParseError";
    }
    return "Unknown";
}

struct Error {
    Errc code;
    Party accountable = Party::none;
    std::string detail;

    std::string to_string() const {
        std::string s(errc_name(code));
        if (accountable != Party::none) {
            s += " [";
            s += party_name(accountable);
            s += "]";
        }
        if (!detail.empty()) {
            s += ": ";
            s += detail;
        }
        return s;
    }
};

inline Error err(Errc c, Party p = Party::none, std::string detail = {}) {
    return Error{c, p, std::move(detail)};
}

/// Minimal result type: a value or an Error.
template <typename T>
class Outcome {
public:
    Outcome(T value) : v_(std::move(value)) {}
    Outcome(Error e) : v_(std::move(e)) {}

    bool ok() const { return std::holds_alternative<T>(v_); }
    explicit operator bool() const { return ok(); }

    T& value() {
        if (!ok()) throw std::logic_error("Outcome::value on error: " + error().to_string());
        return std::get<T>(v_);
    }
    const T& value() const {
        if (!ok()) throw std::logic_error("Outcome::value on error: " + error().to_string());
        return std::get<T>(v_);
    }
    const Error& error() const { return std::get<Error>(v_); }

private:
    std::variant<T, Error> v_;
};

/// Result of an operation with no payload.
class Status {
public:
    Status() = default;
    Status(Error e) : e_(std::move(e)) {}

    static Status ok_status() { return Status(); }

    bool ok() const { return !e_.has_value(); }
    explicit operator bool() const { return ok(); }
    const Error& error() const { return *e_; }

private:
    std::optional<Error> e_;
};

} // namespace magiq
