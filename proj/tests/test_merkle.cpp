#include "catch_amalgamated.hpp"

#include <fstream>
#include <functional>

#include "magiq/merkle.hpp"
#include "magiq/rng.hpp"

using namespace magiq;

namespace {

std::vector<Digest> fixture_leaves(std::size_t count) {
    std::vector<Digest> leaves;
    for (std::size_t i = 0; i < count; ++i) {
        Bytes buf = to_bytes(std::string_view("leaf"));
        put_u64_be(buf, i);
        leaves.push_back(hash(buf));
    }
    return leaves;
}

// Standalone recursive recomputation; shares no code with MerkleTree.
Digest oracle_root(const std::vector<Digest>& hashed, std::size_t lo, std::size_t hi) {
    if (hi - lo == 1) return hashed[lo];
    // split at the largest power of two strictly less than the width,
    // mirroring level-by-level pairing with odd-node duplication
    std::vector<Digest> level(hashed.begin() + static_cast<std::ptrdiff_t>(lo),
                              hashed.begin() + static_cast<std::ptrdiff_t>(hi));
    while (level.size() > 1) {
        std::vector<Digest> next;
        for (std::size_t i = 0; i < level.size(); i += 2) {
            Bytes buf;
            buf.push_back(0x01);
            append(buf, std::span(level[i].v));
            const Digest& right = (i + 1 < level.size()) ? level[i + 1] : level[i];
            append(buf, std::span(right.v));
            next.push_back(hash(buf));
        }
        level = next;
    }
    return level[0];
}

Digest oracle_root(const std::vector<Digest>& leaves) {
    std::vector<Digest> hashed;
    for (const auto& l : leaves) {
        Bytes buf;
        buf.push_back(0x00);
        append(buf, std::span(l.v));
        hashed.push_back(hash(buf));
    }
    return oracle_root(hashed, 0, hashed.size());
}

} // namespace

TEST_CASE("roots for 1..16 leaves match the independent fixtures", "[merkle]") {
    std::ifstream in(std::string(MAGIQ_FIXTURE_DIR) + "/merkle_roots.hex");
    REQUIRE(in.good());
    std::string line;
    std::size_t count = 1;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto tree = merkle_build(fixture_leaves(count));
        CHECK(tree.root() == digest_from_hex(line));
        ++count;
    }
    CHECK(count == 17);
}

TEST_CASE("degenerate tree: one leaf", "[merkle]") {
    Digest leaf = hash(std::string_view("solo"));
    auto tree = merkle_build({leaf});
    Bytes buf;
    buf.push_back(0x00);
    append(buf, std::span(leaf.v));
    CHECK(tree.root() == hash(buf));
    auto proof = tree.prove(0).value();
    CHECK(proof.siblings.empty());
    CHECK(merkle_verify(tree.root(), leaf, proof));
}

TEST_CASE("proof sizes are logarithmic", "[merkle]") {
    auto four = merkle_build(fixture_leaves(4));
    for (std::uint64_t i = 0; i < 4; ++i) CHECK(four.prove(i).value().siblings.size() == 2);

    auto eight = merkle_build(fixture_leaves(8));
    for (std::uint64_t i = 0; i < 8; ++i) {
        auto proof = eight.prove(i).value();
        CHECK(proof.siblings.size() == 3);
        CHECK(merkle_verify(eight.root(), fixture_leaves(8)[i], proof));
    }
}

TEST_CASE("odd leaf counts agree with the recursive oracle", "[merkle]") {
    for (std::size_t count : {3u, 5u, 7u, 11u, 13u}) {
        auto leaves = fixture_leaves(count);
        CHECK(merkle_build(leaves).root() == oracle_root(leaves));
    }
}

TEST_CASE("completeness and soundness on all trees with 1..16 leaves", "[merkle]") {
    for (std::size_t count = 1; count <= 16; ++count) {
        auto leaves = fixture_leaves(count);
        auto tree = merkle_build(leaves);
        for (std::uint64_t i = 0; i < count; ++i) {
            auto proof = tree.prove(i).value();
            REQUIRE(merkle_verify(tree.root(), leaves[i], proof));

            // wrong leaf value
            CHECK_FALSE(merkle_verify(tree.root(), hash(std::string_view("other")), proof));

            // wrong root
            Digest bad_root = tree.root();
            bad_root.v[0] ^= 1;
            CHECK_FALSE(merkle_verify(bad_root, leaves[i], proof));

            for (std::size_t s = 0; s < proof.siblings.size(); ++s) {
                // mutated sibling digest
                auto mutated = proof;
                mutated.siblings[s].first.v[7] ^= 1;
                CHECK_FALSE(merkle_verify(tree.root(), leaves[i], mutated));

                // flipped side flag (skip positions where the sibling is a
                // duplicate of the running node, which are side-symmetric)
                auto flipped = proof;
                flipped.siblings[s].second = !flipped.siblings[s].second;
                Digest running = merkle_leaf_node(leaves[i]);
                for (std::size_t t = 0; t < s; ++t)
                    running = proof.siblings[t].second
                                  ? merkle_internal_node(running, proof.siblings[t].first)
                                  : merkle_internal_node(proof.siblings[t].first, running);
                if (proof.siblings[s].first != running)
                    CHECK_FALSE(merkle_verify(tree.root(), leaves[i], flipped));

                // truncated proof
                auto truncated = proof;
                truncated.siblings.pop_back();
                CHECK_FALSE(merkle_verify(tree.root(), leaves[i], truncated));
            }
        }
    }
}

TEST_CASE("a proof does not transfer to another leaf", "[merkle]") {
    auto leaves = fixture_leaves(4);
    auto tree = merkle_build(leaves);
    auto proof0 = tree.prove(0).value();
    CHECK_FALSE(merkle_verify(tree.root(), leaves[1], proof0));
}

TEST_CASE("construction and proving reject bad inputs", "[merkle]") {
    CHECK_THROWS_AS(merkle_build({}), std::invalid_argument);
    auto tree = merkle_build(fixture_leaves(4));
    auto out = tree.prove(4);
    REQUIRE_FALSE(out.ok());
    CHECK(out.error().code == Errc::index_out_of_range);
}

TEST_CASE("proof encoding round-trips", "[merkle]") {
    auto tree = merkle_build(fixture_leaves(6));
    for (std::uint64_t i = 0; i < 6; ++i) {
        auto proof = tree.prove(i).value();
        auto decoded = decode_merkle_proof(encode_merkle_proof(proof));
        CHECK(decoded.leaf_index == proof.leaf_index);
        CHECK(decoded.siblings == proof.siblings);
    }
}
