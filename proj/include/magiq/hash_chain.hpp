#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "magiq/crypto.hpp"
#include "magiq/errors.hpp"

namespace magiq {

/// One link step of a personalized chain. Every link binds the position,
/// the session id, and the peer agent id, so a token can be spent neither
/// out of order, nor in another session, nor against another peer.
inline Digest chain_link(const Digest& prev, std::uint64_t position, const Bytes& sid,
                         std::string_view peer_aid) {
    Encoder enc;
    enc.field(prev).field_u64(position).field(sid).field(peer_aid);
    return hash(enc.bytes());
}

/// Message-count token chain. links[0] is the PRF-derived seed and
/// links[j] = chain_link(links[j-1], j, sid, peer_aid). The terminal
/// links[n] is what gets committed (signed directly, or aggregated under
/// a Merkle root); preimages are revealed top-down, one per task-msg.
struct PersonalizedHashChain {
    Bytes sid;
    std::string peer_aid;
    std::uint64_t addr = 0;
    std::vector<Digest> links; // links.size() == length + 1

    std::uint64_t length() const { return links.empty() ? 0 : links.size() - 1; }
    const Digest& seed() const { return links.front(); }
    const Digest& terminal() const { return links.back(); }
};

inline PersonalizedHashChain chain_build(const Bytes& key, const Bytes& sid,
                                         std::string_view self_aid, std::string_view peer_aid,
                                         std::uint64_t addr, std::uint64_t n) {
    if (n < 1) throw std::invalid_argument("chain length must be at least 1");
    PersonalizedHashChain c;
    c.sid = sid;
    c.peer_aid = std::string(peer_aid);
    c.addr = addr;
    c.links.reserve(n + 1);
    c.links.push_back(prf(key, sid, self_aid, peer_aid, addr));
    for (std::uint64_t j = 1; j <= n; ++j)
        c.links.push_back(chain_link(c.links.back(), j, sid, peer_aid));
    return c;
}

/// The next unrevealed preimage, consumed one per task-msg. At the first
/// presentation the terminal rides along so the verifier can anchor the
/// commitment check.
struct NextTok {
    std::uint64_t index = 0;
    Digest value;
    std::optional<Digest> terminal;
};

/// True iff applying one chain step to the presented token reproduces the
/// previously accepted link. Pure; no state change.
inline bool chain_verify_step(const Digest& expected, const NextTok& tok, const Bytes& sid,
                              std::string_view peer_aid) {
    return chain_link(tok.value, tok.index + 1, sid, peer_aid) == expected;
}

/// Seed acceptance at exhaustion. Counterparties cannot evaluate the
/// owner's PRF, so the check degrades to chain closure: the revealed value
/// at index 0 must close the chain against the last accepted link.
inline bool chain_verify_seed(const Digest& last_accepted, const Digest& revealed_seed,
                              const Bytes& sid, std::string_view peer_aid) {
    return chain_verify_step(last_accepted, NextTok{0, revealed_seed, std::nullopt}, sid,
                             peer_aid);
}

/// Sender-side chain state. Reveals preimages in descending order and
/// erases each spent link once the next one is out, so no spent preimage
/// lingers in memory.
class SenderChain {
public:
    SenderChain() = default;
    explicit SenderChain(PersonalizedHashChain chain)
        : chain_(std::move(chain)), next_(chain_.length() == 0 ? 0 : chain_.length() - 1),
          remaining_(chain_.length()) {}

    std::uint64_t remaining() const { return remaining_; }
    bool exhausted() const { return remaining_ == 0; }
    const Digest& terminal() const { return chain_.links.back(); }
    const Bytes& sid() const { return chain_.sid; }
    const std::string& peer_aid() const { return chain_.peer_aid; }
    std::uint64_t addr() const { return chain_.addr; }

    /// Opens the next preimage. First call returns index n-1 together with
    /// the terminal; later calls walk down to index 0.
    Outcome<NextTok> reveal() {
        if (remaining_ == 0) return err(Errc::own_budget_exhausted);
        NextTok tok;
        tok.index = next_;
        tok.value = chain_.links[next_];
        if (next_ + 1 == chain_.length()) tok.terminal = chain_.links.back();
        // scrub the spent link above this one
        if (next_ + 1 < chain_.links.size()) chain_.links[next_ + 1] = Digest{};
        if (next_ > 0) --next_;
        --remaining_;
        return tok;
    }

    /// Indices of preimages still held. Inspection hook for the deletion
    /// invariant: nothing above the last revealed index may remain.
    std::vector<std::uint64_t> retained_indices() const {
        std::vector<std::uint64_t> out;
        for (std::uint64_t j = 0; j < chain_.links.size(); ++j)
            if (!chain_.links[j].is_zero()) out.push_back(j);
        return out;
    }

private:
    PersonalizedHashChain chain_;
    std::uint64_t next_ = 0;
    std::uint64_t remaining_ = 0;
};

/// Verifier-side chain state: the last accepted link and its index.
/// Anchored at the committed terminal, consumes tokens strictly in order.
class ChainCursor {
public:
    ChainCursor() = default;
    ChainCursor(Digest terminal, std::uint64_t length, Bytes sid, std::string peer_aid)
        : expected_(terminal), index_(length), sid_(std::move(sid)),
          peer_aid_(std::move(peer_aid)) {}

    std::uint64_t accepted() const { return accepted_; }
    std::uint64_t index() const { return index_; }
    bool exhausted() const { return index_ == 0; }
    const Digest& head() const { return expected_; }

    /// Accepts the token iff it is the immediate preimage of the last
    /// accepted link at the expected position.
    Status consume(const NextTok& tok) {
        if (index_ == 0) return err(Errc::bad_token, Party::none, "chain already exhausted");
        if (tok.index != index_ - 1)
            return err(Errc::bad_token, Party::none, "token index out of order");
        if (!chain_verify_step(expected_, tok, sid_, peer_aid_))
            return err(Errc::bad_token, Party::none, "preimage does not close the chain");
        expected_ = tok.value;
        index_ = tok.index;
        ++accepted_;
        return {};
    }

private:
    Digest expected_;
    std::uint64_t index_ = 0;
    std::uint64_t accepted_ = 0;
    Bytes sid_;
    std::string peer_aid_;
};

} // namespace magiq
