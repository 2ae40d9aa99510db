#!/usr/bin/env python3
"""Regenerates the hex fixture files from an independent implementation.

Uses hashlib/hmac only, so the values cross-check the C++ library rather
than restating it. Field encoding: 4-byte big-endian length prefix per
field; integers are 8-byte big-endian field content.
"""

import hashlib
import hmac as hmac_mod
import pathlib

HERE = pathlib.Path(__file__).parent


def enc(field: bytes) -> bytes:
    return len(field).to_bytes(4, "big") + field


def enc_u64(x: int) -> bytes:
    return enc(x.to_bytes(8, "big"))


def sha256(b: bytes) -> bytes:
    return hashlib.sha256(b).digest()


def prf(key: bytes, sid: bytes, aid_a: str, aid_b: str, addr: int) -> bytes:
    msg = (
        enc(b"chain-seed")
        + enc(sid)
        + enc(aid_a.encode())
        + enc(aid_b.encode())
        + enc_u64(addr)
    )
    return hmac_mod.new(key, msg, hashlib.sha256).digest()


def chain_links(key: bytes, sid: bytes, self_aid: str, peer_aid: str, addr: int, n: int):
    links = [prf(key, sid, self_aid, peer_aid, addr)]
    for j in range(1, n + 1):
        links.append(sha256(enc(links[-1]) + enc_u64(j) + enc(sid) + enc(peer_aid.encode())))
    return links


def merkle_root(leaves):
    level = [sha256(b"\x00" + leaf) for leaf in leaves]
    while len(level) > 1:
        nxt = []
        for i in range(0, len(level), 2):
            left = level[i]
            right = level[i + 1] if i + 1 < len(level) else level[i]
            nxt.append(sha256(b"\x01" + left + right))
        level = nxt
    return level[0]


def main():
    key = b"fixture chain-seed key"
    sid = b"fixture-sid-0001"
    links = chain_links(key, sid, "alice@example.com:planner", "bob@example.com:solver", 0, 8)
    (HERE / "chain_links.hex").write_text("".join(l.hex() + "\n" for l in links))

    roots = []
    for count in range(1, 17):
        leaves = [sha256(b"leaf" + i.to_bytes(8, "big")) for i in range(count)]
        roots.append(merkle_root(leaves))
    (HERE / "merkle_roots.hex").write_text("".join(r.hex() + "\n" for r in roots))


if __name__ == "__main__":
    main()
