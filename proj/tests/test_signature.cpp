#include "catch_amalgamated.hpp"

#include "magiq/ots.hpp"
#include "magiq/rng.hpp"
#include "magiq/signature.hpp"

using namespace magiq;

TEST_CASE("sign/verify round-trip and mutation rejection", "[signature]") {
    DetRng rng(1, "sig");
    auto kp = sig_keygen("mss-sha256-h4", rng).value();
    Bytes msg = to_bytes(std::string_view("attest this"));
    Bytes sig = sig_sign(kp, msg).value();

    CHECK(sig_verify(kp.public_key, msg, sig));

    Bytes msg2 = msg;
    msg2.push_back(0x00);
    CHECK_FALSE(sig_verify(kp.public_key, msg2, sig));

    Bytes sig2 = sig;
    sig2[100] ^= 1;
    CHECK_FALSE(sig_verify(kp.public_key, msg, sig2));

    Bytes pk2 = kp.public_key;
    pk2.back() ^= 1;
    CHECK_FALSE(sig_verify(pk2, msg, sig));
}

TEST_CASE("height-4 keys sign exactly 16 times", "[signature]") {
    DetRng rng(2, "sig-exhaust");
    auto kp = sig_keygen("mss-sha256-h4", rng).value();
    CHECK(kp.uses_remaining() == 16);
    Bytes msg = to_bytes(std::string_view("m"));
    for (int i = 0; i < 16; ++i) {
        auto sig = sig_sign(kp, msg);
        REQUIRE(sig.ok());
        CHECK(sig_verify(kp.public_key, msg, sig.value()));
        CHECK(kp.uses_remaining() == 16u - static_cast<unsigned>(i) - 1);
    }
    auto overflow = sig_sign(kp, msg);
    REQUIRE_FALSE(overflow.ok());
    CHECK(overflow.error().code == Errc::key_exhausted);
}

TEST_CASE("distinct leaves produce distinct but valid signatures", "[signature]") {
    DetRng rng(3, "sig-leaves");
    auto kp = sig_keygen("mss-sha256-h4", rng).value();
    Bytes msg = to_bytes(std::string_view("same message"));
    Bytes a = sig_sign(kp, msg).value();
    Bytes b = sig_sign(kp, msg).value();
    CHECK(a != b);
    CHECK(sig_verify(kp.public_key, msg, a));
    CHECK(sig_verify(kp.public_key, msg, b));
}

TEST_CASE("unknown schemes are rejected", "[signature]") {
    DetRng rng(4, "sig-scheme");
    CHECK(sig_keygen("rsa-2048", rng).error().code == Errc::unknown_scheme);
    CHECK(sig_keygen("mss-sha256-hx", rng).error().code == Errc::unknown_scheme);
    CHECK(sig_keygen("mss-sha256-h0", rng).error().code == Errc::unknown_scheme);
}

TEST_CASE("random forgeries never verify", "[signature]") {
    DetRng rng(5, "sig-forge");
    auto kp = sig_keygen("mss-sha256-h4", rng).value();
    Bytes msg = to_bytes(std::string_view("target"));
    Bytes genuine = sig_sign(kp, msg).value();

    DetRng forge(6, "forge");
    for (int i = 0; i < 1000; ++i) {
        // random messages against a genuine signature, and random bytes of
        // the genuine signature's size against the real message
        Bytes rand_msg = forge.next_bytes(16 + i % 32);
        if (rand_msg != msg) CHECK_FALSE(sig_verify(kp.public_key, rand_msg, genuine));
        Bytes rand_sig = forge.next_bytes(genuine.size());
        CHECK_FALSE(sig_verify(kp.public_key, msg, rand_sig));
    }
}

TEST_CASE("ots round-trip, reuse, and bit sensitivity", "[signature]") {
    DetRng rng(7, "ots");
    auto kp = ots_keygen(rng);
    Bytes msg = to_bytes(std::string_view("one shot"));
    auto sig = ots_sign(kp, msg);
    REQUIRE(sig.ok());
    CHECK(ots_verify(kp.public_key, msg, sig.value()));

    auto again = ots_sign(kp, msg);
    REQUIRE_FALSE(again.ok());
    CHECK(again.error().code == Errc::key_reuse);

    // flip single bits across the message; verification must fail for all
    for (std::size_t bit : {0u, 1u, 7u, 8u, 31u, 63u}) {
        Bytes tampered = msg;
        tampered[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
        CHECK_FALSE(ots_verify(kp.public_key, tampered, sig.value()));
    }
}

TEST_CASE("ots public key serialization round-trips", "[signature]") {
    DetRng rng(8, "ots-ser");
    auto kp = ots_keygen(rng);
    auto decoded = OtsPublicKey::deserialize(kp.public_key.serialize());
    CHECK(decoded == kp.public_key);
    CHECK(decoded.digest() == kp.public_key.digest());
}
