#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "magiq/errors.hpp"

namespace magiq {

/// Agent ids follow "user@domain:name". Contact-rule patterns come in
/// three classes: exact "user@domain:name", domain wildcard
/// "*@domain:name", and global "*"; wildcards apply to the user part only.

struct AgentId {
    std::string user;   // "alice"
    std::string domain; // "example.com"
    std::string name;   // "shopper"

    std::string full() const { return user + "@" + domain + ":" + name; }
};

inline Outcome<AgentId> parse_aid(std::string_view aid) {
    auto at = aid.find('@');
    auto colon = aid.find(':', at == std::string_view::npos ? 0 : at);
    if (at == std::string_view::npos || colon == std::string_view::npos || at == 0 ||
        colon <= at + 1 || colon + 1 >= aid.size())
        return err(Errc::malformed_aid, Party::none, std::string(aid));
    AgentId id;
    id.user = std::string(aid.substr(0, at));
    id.domain = std::string(aid.substr(at + 1, colon - at - 1));
    id.name = std::string(aid.substr(colon + 1));
    if (id.user.find('*') != std::string::npos)
        return err(Errc::malformed_aid, Party::none, "wildcard in concrete aid");
    return id;
}

enum class Direction { send, receive };

inline std::string_view direction_name(Direction d) {
    return d == Direction::send ? "send" : "receive";
}

/// Pattern specificity: exact(2) > domain wildcard(1) > global(0).
/// Returns nullopt for patterns outside the three classes.
inline std::optional<int> pattern_specificity(std::string_view pattern) {
    if (pattern == "*") return 0;
    if (pattern.rfind("*@", 0) == 0) {
        auto rest = pattern.substr(2);
        if (rest.find('*') != std::string_view::npos) return std::nullopt;
        if (rest.find('@') != std::string_view::npos) return std::nullopt;
        if (rest.find(':') == std::string_view::npos) return std::nullopt;
        return 1;
    }
    if (pattern.find('*') != std::string_view::npos) return std::nullopt;
    if (!parse_aid(pattern).ok()) return std::nullopt;
    return 2;
}

inline bool pattern_matches(std::string_view pattern, const AgentId& aid) {
    if (pattern == "*") return true;
    if (pattern.rfind("*@", 0) == 0)
        return pattern.substr(2) == aid.domain + ":" + aid.name;
    return pattern == aid.full();
}

struct ContactRule {
    Direction direction = Direction::receive;
    std::string pattern;
    std::uint64_t budget = 0; // max A-sessions
};

struct ContactPolicy {
    std::vector<ContactRule> rules;
};

/// Most specific matching rule; among equal specificity the
/// first-declared rule wins. Returns nullopt when nothing matches.
inline Outcome<std::optional<ContactRule>> match_rule(const ContactPolicy& policy,
                                                      Direction direction,
                                                      std::string_view peer_aid) {
    auto parsed = parse_aid(peer_aid);
    if (!parsed.ok()) return parsed.error();
    const AgentId& aid = parsed.value();

    std::optional<ContactRule> best;
    int best_spec = -1;
    for (const auto& rule : policy.rules) {
        if (rule.direction != direction) continue;
        auto spec = pattern_specificity(rule.pattern);
        if (!spec) continue;
        if (!pattern_matches(rule.pattern, aid)) continue;
        if (*spec > best_spec) {
            best = rule;
            best_spec = *spec;
        }
    }
    return best;
}

/// Provider-side pair budget: -1 when either side has no matching rule
/// (distinguishing "never authorized" from "budget spent"), otherwise the
/// min of the two matched budgets.
inline std::int64_t resolve_budget(const ContactPolicy& cp_r, const ContactPolicy& cp_i,
                                   std::string_view aid_r, std::string_view aid_i) {
    auto r = match_rule(cp_r, Direction::receive, aid_i);
    auto i = match_rule(cp_i, Direction::send, aid_r);
    if (!r.ok() || !i.ok()) return -1;
    if (!r.value().has_value() || !i.value().has_value()) return -1;
    std::uint64_t b = std::min(r.value()->budget, i.value()->budget);
    return static_cast<std::int64_t>(b);
}

/// Per-session task-msg budget of a responder toward one initiator.
struct ResponderPolicy {
    std::string responder_aid;
    std::string initiator_aid;
    std::uint64_t q = 1;     // task-msg budget
    std::uint64_t delta = 1; // time budget in clock ticks
};

/// Total budget of an initiator/orchestrator, factored into m chains of
/// length n with q_tot = m * n.
struct InitiatorPolicy {
    std::string initiator_aid;
    std::uint64_t q_tot = 1;
    std::uint64_t delta_tot = 1;
    std::uint64_t chain_count = 1; // m
    std::uint64_t chain_len = 1;   // n
};

/// Effective per-session budgets: componentwise min of the two sides.
inline std::pair<std::uint64_t, std::uint64_t> effective_session_policy(std::uint64_t q_i,
                                                                        std::uint64_t delta_i,
                                                                        std::uint64_t q_r,
                                                                        std::uint64_t delta_r) {
    return {std::min(q_i, q_r), std::min(delta_i, delta_r)};
}

struct ChainAssignment {
    std::uint64_t responder_slot = 0;
    std::vector<std::uint64_t> chain_indices;
    std::uint64_t chain_len = 0;
};

/// Deterministic round-robin split of the m chains across t planned
/// responders. Requires m >= t so every responder gets at least one chain.
inline Outcome<std::vector<ChainAssignment>> split_icp(const InitiatorPolicy& icp,
                                                       std::uint64_t t) {
    if (t == 0 || t > icp.chain_count)
        return err(Errc::too_many_responders, Party::none,
                   "need chain_count >= responder count >= 1");
    std::vector<ChainAssignment> out(t);
    for (std::uint64_t r = 0; r < t; ++r) {
        out[r].responder_slot = r;
        out[r].chain_len = icp.chain_len;
    }
    for (std::uint64_t c = 0; c < icp.chain_count; ++c)
        out[c % t].chain_indices.push_back(c);
    return out;
}

} // namespace magiq
