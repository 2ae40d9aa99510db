#include "catch_amalgamated.hpp"

#include <fstream>

#include "magiq/hash_chain.hpp"
#include "magiq/rng.hpp"

using namespace magiq;

namespace {

std::vector<Digest> read_digest_lines(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::vector<Digest> out;
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) out.push_back(digest_from_hex(line));
    return out;
}

const Bytes kKey = to_bytes(std::string_view("fixture chain-seed key"));
const Bytes kSid = to_bytes(std::string_view("fixture-sid-0001"));
const std::string kSelf = "alice@example.com:planner";
const std::string kPeer = "bob@example.com:solver";

} // namespace

TEST_CASE("chain links match the independently generated fixtures", "[chain]") {
    auto expected = read_digest_lines(std::string(MAGIQ_FIXTURE_DIR) + "/chain_links.hex");
    REQUIRE(expected.size() == 9);
    auto chain = chain_build(kKey, kSid, kSelf, kPeer, 0, 8);
    REQUIRE(chain.links.size() == expected.size());
    for (std::size_t j = 0; j < expected.size(); ++j) CHECK(chain.links[j] == expected[j]);
}

TEST_CASE("single-step chain unrolls by hand", "[chain]") {
    auto chain = chain_build(kKey, kSid, kSelf, kPeer, 0, 1);
    REQUIRE(chain.links.size() == 2);
    Digest s0 = prf(kKey, kSid, kSelf, kPeer, 0);
    CHECK(chain.links[0] == s0);
    // recompute the single link without chain_link
    Encoder enc;
    enc.field(s0).field_u64(1).field(kSid).field(kPeer);
    CHECK(chain.links[1] == hash(enc.bytes()));
}

TEST_CASE("terminal of a 3-link chain matches a standalone loop", "[chain]") {
    auto chain = chain_build(kKey, kSid, kSelf, kPeer, 0, 3);
    Digest cur = prf(kKey, kSid, kSelf, kPeer, 0);
    for (std::uint64_t j = 1; j <= 3; ++j) {
        Encoder enc;
        enc.field(cur).field_u64(j).field(kSid).field(kPeer);
        cur = hash(enc.bytes());
    }
    CHECK(chain.terminal() == cur);
}

TEST_CASE("peer binding separates chains from the first link on", "[chain]") {
    auto a = chain_build(kKey, kSid, kSelf, "bob@example.com:solver", 0, 4);
    auto b = chain_build(kKey, kSid, kSelf, "eve@example.com:solver", 0, 4);
    for (std::size_t j = 0; j < a.links.size(); ++j) CHECK(a.links[j] != b.links[j]);
}

TEST_CASE("chain_build rejects zero length", "[chain]") {
    CHECK_THROWS_AS(chain_build(kKey, kSid, kSelf, kPeer, 0, 0), std::invalid_argument);
}

TEST_CASE("verify_step accepts genuine consecutive links only", "[chain]") {
    auto chain = chain_build(kKey, kSid, kSelf, kPeer, 0, 3);
    NextTok tok{2, chain.links[2], std::nullopt};
    CHECK(chain_verify_step(chain.links[3], tok, kSid, kPeer));

    NextTok forged = tok;
    forged.value = hash(std::string_view("not a preimage"));
    CHECK_FALSE(chain_verify_step(chain.links[3], forged, kSid, kPeer));

    // genuine link, wrong peer in verification
    CHECK_FALSE(chain_verify_step(chain.links[3], tok, kSid, "eve@example.com:solver"));
}

TEST_CASE("chain soundness: in-order consumption succeeds, violations fail", "[chain]") {
    constexpr std::uint64_t n = 4;
    auto chain = chain_build(kKey, kSid, kSelf, kPeer, 0, n);
    SenderChain sender(chain);
    ChainCursor cursor(chain.terminal(), n, kSid, kPeer);

    for (std::uint64_t i = 0; i < n; ++i) {
        auto tok = sender.reveal();
        REQUIRE(tok.ok());
        CHECK(cursor.consume(tok.value()).ok());
    }
    CHECK(cursor.exhausted());
    CHECK(sender.exhausted());
    CHECK(!sender.reveal().ok());

    // out-of-order: skipping one link
    SenderChain sender2(chain);
    ChainCursor cursor2(chain.terminal(), n, kSid, kPeer);
    auto first = sender2.reveal().value();
    auto second = sender2.reveal().value();
    CHECK_FALSE(cursor2.consume(second).ok()); // index n-2 before n-1
    CHECK(cursor2.consume(first).ok());

    // repeat presentation
    CHECK_FALSE(cursor2.consume(first).ok());

    // foreign value at the right index
    NextTok foreign = second;
    foreign.value = hash(std::string_view("foreign"));
    CHECK_FALSE(cursor2.consume(foreign).ok());
}

TEST_CASE("chain binding: no reuse across peers or sessions", "[chain]") {
    constexpr std::uint64_t n = 4;
    auto chain = chain_build(kKey, kSid, kSelf, kPeer, 0, n);
    Bytes sid2 = to_bytes(std::string_view("fixture-sid-0002"));

    for (std::uint64_t idx = 0; idx < n; ++idx) {
        NextTok tok{idx, chain.links[idx], std::nullopt};
        const Digest& expected = chain.links[idx + 1];
        CHECK(chain_verify_step(expected, tok, kSid, kPeer));
        CHECK_FALSE(chain_verify_step(expected, tok, kSid, "eve@example.com:solver"));
        CHECK_FALSE(chain_verify_step(expected, tok, sid2, kPeer));
    }
}

TEST_CASE("full consumption flags exhaustion and the seed closes the chain", "[chain]") {
    auto chain = chain_build(kKey, kSid, kSelf, kPeer, 0, 3);
    ChainCursor cursor(chain.terminal(), 3, kSid, kPeer);
    CHECK(cursor.consume(NextTok{2, chain.links[2], std::nullopt}).ok());
    CHECK(cursor.consume(NextTok{1, chain.links[1], std::nullopt}).ok());
    CHECK_FALSE(cursor.exhausted());
    CHECK(chain_verify_seed(cursor.head(), chain.links[0], kSid, kPeer));
    CHECK_FALSE(chain_verify_seed(cursor.head(), hash(std::string_view("junk")), kSid, kPeer));
    CHECK(cursor.consume(NextTok{0, chain.links[0], std::nullopt}).ok());
    CHECK(cursor.exhausted());
    // nothing left to present
    CHECK_FALSE(cursor.consume(NextTok{0, chain.links[0], std::nullopt}).ok());
}

TEST_CASE("sender erases spent preimages", "[chain]") {
    auto chain = chain_build(kKey, kSid, kSelf, kPeer, 0, 4);
    SenderChain sender(chain);
    sender.reveal(); // opens index 3
    sender.reveal(); // opens index 2, erases 3
    auto retained = sender.retained_indices();
    for (auto idx : retained) CHECK(idx <= 2);
    sender.reveal(); // opens 1, erases 2
    retained = sender.retained_indices();
    for (auto idx : retained) CHECK(idx <= 1);
}
