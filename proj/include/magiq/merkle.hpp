#pragma once

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "magiq/crypto.hpp"
#include "magiq/errors.hpp"

namespace magiq {

/// Merkle aggregation over digests with leaf/internal domain separation:
/// leaf node = H(0x00 || leaf), internal node = H(0x01 || left || right).
/// An odd node at any level is paired with a copy of itself.

inline Digest merkle_leaf_node(const Digest& leaf) {
    Bytes buf;
    buf.push_back(0x00);
    append(buf, std::span(leaf.v));
    return hash(buf);
}

inline Digest merkle_internal_node(const Digest& left, const Digest& right) {
    Bytes buf;
    buf.push_back(0x01);
    append(buf, std::span(left.v));
    append(buf, std::span(right.v));
    return hash(buf);
}

struct MerkleProof {
    std::uint64_t leaf_index = 0;
    /// (sibling digest, sibling-is-right flag), leaf level first.
    std::vector<std::pair<Digest, bool>> siblings;
};

class MerkleTree {
public:
    MerkleTree() = default;

    /// levels_[0] holds the hashed leaf nodes; the last level is the root.
    static MerkleTree build(const std::vector<Digest>& leaves) {
        if (leaves.empty()) throw std::invalid_argument("merkle tree needs at least one leaf");
        MerkleTree t;
        t.leaves_ = leaves;
        std::vector<Digest> level;
        level.reserve(leaves.size());
        for (const auto& l : leaves) level.push_back(merkle_leaf_node(l));
        t.levels_.push_back(level);
        while (t.levels_.back().size() > 1) {
            const auto& prev = t.levels_.back();
            std::vector<Digest> next;
            next.reserve((prev.size() + 1) / 2);
            for (std::size_t i = 0; i < prev.size(); i += 2) {
                const Digest& left = prev[i];
                const Digest& right = (i + 1 < prev.size()) ? prev[i + 1] : prev[i];
                next.push_back(merkle_internal_node(left, right));
            }
            t.levels_.push_back(std::move(next));
        }
        return t;
    }

    const Digest& root() const { return levels_.back().front(); }
    std::size_t leaf_count() const { return leaves_.size(); }
    const std::vector<Digest>& leaves() const { return leaves_; }

    Outcome<MerkleProof> prove(std::uint64_t index) const {
        if (index >= leaves_.size()) return err(Errc::index_out_of_range);
        MerkleProof proof;
        proof.leaf_index = index;
        std::uint64_t pos = index;
        for (std::size_t lvl = 0; lvl + 1 < levels_.size(); ++lvl) {
            const auto& nodes = levels_[lvl];
            std::uint64_t sib = pos ^ 1;
            bool sibling_right = (pos % 2 == 0);
            const Digest& sibling = (sib < nodes.size()) ? nodes[sib] : nodes[pos];
            proof.siblings.emplace_back(sibling, sibling_right);
            pos /= 2;
        }
        return proof;
    }

private:
    std::vector<Digest> leaves_;
    std::vector<std::vector<Digest>> levels_;
};

inline MerkleTree merkle_build(const std::vector<Digest>& leaves) {
    return MerkleTree::build(leaves);
}

/// Pure recomputation: walks the siblings from the claimed leaf and
/// compares against the root.
inline bool merkle_verify(const Digest& root, const Digest& leaf, const MerkleProof& proof) {
    Digest node = merkle_leaf_node(leaf);
    for (const auto& [sibling, sibling_right] : proof.siblings)
        node = sibling_right ? merkle_internal_node(node, sibling)
                             : merkle_internal_node(sibling, node);
    return node == root;
}

inline Bytes encode_merkle_proof(const MerkleProof& proof) {
    Encoder enc;
    enc.field_u64(proof.leaf_index);
    enc.field_u64(proof.siblings.size());
    for (const auto& [d, right] : proof.siblings) {
        enc.field(d);
        enc.field_u64(right ? 1 : 0);
    }
    return std::move(enc).bytes();
}

inline MerkleProof decode_merkle_proof(const Bytes& b) {
    Decoder dec(b);
    MerkleProof proof;
    proof.leaf_index = dec.field_u64();
    std::uint64_t count = dec.field_u64();
    if (count > 64) throw WireError("merkle proof implausibly deep");
    for (std::uint64_t i = 0; i < count; ++i) {
        Digest d = dec.field_digest();
        bool right = dec.field_u64() != 0;
        proof.siblings.emplace_back(d, right);
    }
    dec.expect_end();
    return proof;
}

} // namespace magiq
