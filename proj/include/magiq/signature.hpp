#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <string_view>

#include "magiq/crypto.hpp"
#include "magiq/errors.hpp"
#include "magiq/merkle.hpp"
#include "magiq/rng.hpp"

namespace magiq {

/// Stateful hash-based many-time signatures: a Merkle tree over 2^h
/// Lamport-style one-time leaf keys, consumed sequentially. The public key
/// is the tree root; a signature carries the leaf index, the revealed
/// secret halves, the full leaf public key, and the authentication path.
///
/// Scheme ids take the form "mss-sha256-h<height>". The secret state is a
/// 32-octet seed from which leaf secrets are derived on demand, so only
/// the leaf-node digests are cached.

namespace mss {

inline Digest leaf_secret(const Bytes& seed, std::uint64_t leaf, std::uint32_t bit,
                          std::uint32_t half) {
    Encoder enc;
    enc.field(seed).field_u64(leaf).field_u64(bit).field_u64(half);
    return hash(enc.bytes());
}

/// Serialized Lamport public key of one leaf (2 x 256 digests).
inline Bytes leaf_public(const Bytes& seed, std::uint64_t leaf) {
    Bytes out;
    out.reserve(256 * 2 * 32);
    for (std::uint32_t bit = 0; bit < 256; ++bit)
        for (std::uint32_t half = 0; half < 2; ++half) {
            Digest pk = hash(to_bytes(leaf_secret(seed, leaf, bit, half)));
            append(out, std::span(pk.v));
        }
    return out;
}

} // namespace mss

struct SignatureKeyPair {
    std::string scheme_id;
    Bytes secret_seed;
    Bytes public_key; // canonical: (scheme_id, height, root)
    std::uint32_t height = 0;
    std::uint64_t next_leaf = 0;
    MerkleTree leaf_tree;

    std::uint64_t uses_remaining() const { return (1ull << height) - next_leaf; }
};

inline Bytes encode_mss_public(std::string_view scheme_id, std::uint32_t height,
                               const Digest& root) {
    Encoder enc;
    enc.field(scheme_id).field_u64(height).field(root);
    return std::move(enc).bytes();
}

inline Outcome<SignatureKeyPair> sig_keygen(std::string_view scheme_id, DetRng& rng) {
    constexpr std::string_view prefix = "mss-sha256-h";
    if (scheme_id.substr(0, prefix.size()) != prefix)
        return err(Errc::unknown_scheme, Party::none, std::string(scheme_id));
    std::uint32_t height = 0;
    for (char c : scheme_id.substr(prefix.size())) {
        if (c < '0' || c > '9') return err(Errc::unknown_scheme, Party::none, std::string(scheme_id));
        height = height * 10 + static_cast<std::uint32_t>(c - '0');
    }
    if (height == 0 || height > 20)
        return err(Errc::unknown_scheme, Party::none, "unsupported tree height");

    SignatureKeyPair kp;
    kp.scheme_id = std::string(scheme_id);
    kp.height = height;
    kp.secret_seed = rng.next_bytes(32);
    std::uint64_t leaves = 1ull << height;
    std::vector<Digest> leaf_digests;
    leaf_digests.reserve(leaves);
    for (std::uint64_t i = 0; i < leaves; ++i)
        leaf_digests.push_back(hash(mss::leaf_public(kp.secret_seed, i)));
    kp.leaf_tree = MerkleTree::build(leaf_digests);
    kp.public_key = encode_mss_public(scheme_id, height, kp.leaf_tree.root());
    return kp;
}

inline Outcome<Bytes> sig_sign(SignatureKeyPair& kp, const Bytes& message) {
    if (kp.next_leaf >= (1ull << kp.height))
        return err(Errc::key_exhausted, Party::none, "all one-time leaves consumed");
    std::uint64_t leaf = kp.next_leaf++;

    Digest md = hash(message);
    Encoder enc;
    enc.field_u64(leaf);
    Bytes revealed;
    revealed.reserve(256 * 32);
    for (std::uint32_t bit = 0; bit < 256; ++bit) {
        std::uint32_t half = (md.v[bit / 8] >> (7 - bit % 8)) & 1;
        Digest s = mss::leaf_secret(kp.secret_seed, leaf, bit, half);
        append(revealed, std::span(s.v));
    }
    enc.field(revealed);
    enc.field(mss::leaf_public(kp.secret_seed, leaf));
    enc.field(encode_merkle_proof(kp.leaf_tree.prove(leaf).value()));
    return std::move(enc).bytes();
}

inline bool sig_verify(const Bytes& public_key, const Bytes& message, const Bytes& signature) {
    try {
        Decoder pk_dec(public_key);
        std::string scheme = pk_dec.field_string();
        std::uint64_t height = pk_dec.field_u64();
        Digest root = pk_dec.field_digest();
        pk_dec.expect_end();
        if (scheme.rfind("mss-sha256-h", 0) != 0 || height == 0 || height > 20) return false;

        Decoder dec(signature);
        std::uint64_t leaf_index = dec.field_u64();
        Bytes revealed = dec.field();
        Bytes leaf_pk = dec.field();
        MerkleProof proof = decode_merkle_proof(dec.field());
        dec.expect_end();
        if (revealed.size() != 256 * 32 || leaf_pk.size() != 256 * 2 * 32) return false;
        if (leaf_index >= (1ull << height) || proof.leaf_index != leaf_index) return false;
        if (proof.siblings.size() != height) return false;

        Digest md = hash(message);
        for (std::uint32_t bit = 0; bit < 256; ++bit) {
            std::uint32_t half = (md.v[bit / 8] >> (7 - bit % 8)) & 1;
            Digest s = digest_from_bytes(std::span(revealed).subspan(bit * 32, 32));
            Digest expect =
                digest_from_bytes(std::span(leaf_pk).subspan((bit * 2 + half) * 32, 32));
            if (hash(to_bytes(s)) != expect) return false;
        }
        return merkle_verify(root, hash(leaf_pk), proof);
    } catch (const WireError&) {
        return false;
    } catch (const std::invalid_argument&) {
        return false;
    }
}

} // namespace magiq
