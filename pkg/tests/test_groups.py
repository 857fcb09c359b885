import hashlib

import pytest
from hypothesis import given, settings, strategies as st

from osig.groups import (BLS_R, DecodeError, backend_from_tag, get_backend,
                         hash_to_int, seeded_rng)

TOY = get_backend("toy")
PROD = get_backend("production")

# standard compressed generators of BLS12-381
G1_GEN = ("97f1d3a73197d7942695638c4fa9ac0fc3688c4f9774b905a14e3a3f171bac58"
          "6c55e83ff97a1aeffb3af00adb22c6bb")
G2_GEN = ("93e02b6052719f607dacd3a088274f65596bd0d09920b61ab5da61bbdc7f5049"
          "334cf11213945d57e5ac7d055d042b7e024aa2b2f08f0a91260805272dc51051"
          "c6e47ad4fa403b02b4510b647ae3d1770bac0326a805bbefd48056c8c121bdb8")


def test_toy_parameters_match_plain_arithmetic():
    # 64 generates the order-101 subgroup of Z_607^*
    assert pow(64, 101, 607) == 1 and 64 != 1
    assert (607 - 1) % 101 == 0
    assert TOY.order == 101
    assert {int.from_bytes(bytes(x), "big") for x in TOY.G1.elements()} == \
        {pow(64, i, 607) for i in range(101)}


def test_production_generators_are_standard():
    assert bytes(PROD.g1).hex() == G1_GEN
    assert bytes(PROD.g2).hex() == G2_GEN
    assert PROD.order == BLS_R


def test_hash_to_int_matches_hashlib():
    def ref(tag, data):
        out = b""
        for ctr in range(2):
            h = hashlib.sha256()
            for p in (tag, data, ctr.to_bytes(4, "big")):
                h.update(len(p).to_bytes(4, "big") + p)
            out += h.digest()
        return int.from_bytes(out, "big")
    assert hash_to_int(b"t", b"abc") == ref(b"t", b"abc")
    assert hash_to_int(b"", b"") == ref(b"", b"")


@pytest.mark.parametrize("bk", [TOY, PROD], ids=["toy", "production"])
def test_power_composes(bk):
    rng = seeded_rng(1, "pow", bk.name)
    for _ in range(20):
        x = bk.G1.random(rng)
        k1, k2 = bk.random_scalar(rng), bk.random_scalar(rng)
        assert (x ** k1) ** k2 == x ** (k1 * k2 % bk.order)
        y = bk.G2.random(rng)
        assert (y ** k1) ** k2 == y ** (k1 * k2 % bk.order)


@given(st.integers(0, 100), st.integers(0, 100))
def test_toy_power_composes_everywhere(k1, k2):
    x = TOY.g1 ** 7
    assert (x ** k1) ** k2 == x ** (k1 * k2 % 101)


@pytest.mark.parametrize("bk,n", [(TOY, 1000), (PROD, 200)],
                         ids=["toy", "production"])
def test_encoding_round_trip(bk, n):
    rng = seeded_rng(2, "enc", bk.name)
    for _ in range(n):
        x = bk.G1.random(rng)
        assert bk.G1.decode(bytes(x)) == x
        k = bk.random_scalar(rng)
        assert bk.decode_scalar(bk.encode_scalar(k)) == k
    y = bk.G2.random(rng)
    assert bk.G2.decode(bytes(y)) == y


def test_toy_encoding_widths():
    assert len(bytes(TOY.g1)) == 2
    assert len(TOY.encode_scalar(100)) == 1


def test_toy_pairing_bilinear():
    rng = seeded_rng(3, "pair")
    g = TOY.g1
    for _ in range(100):
        a, b, c = (rng.randrange(101) for _ in range(3))
        lhs = TOY.pairing(g ** a * g ** b, g ** c)
        assert lhs == TOY.pairing(g ** a, g ** c) * TOY.pairing(g ** b, g ** c)
        assert TOY.pairing(g ** a, g ** b) == TOY.GT.generator ** (a * b % 101)


def test_production_pairing_bilinear():
    rng = seeded_rng(4, "pair")
    for _ in range(3):
        a, b = PROD.random_scalar(rng), PROD.random_scalar(rng)
        e = PROD.pairing(PROD.g1 ** a, PROD.g2 ** b)
        assert e == PROD.pairing(PROD.g1, PROD.g2) ** (a * b % PROD.order)
        assert e == PROD.pairing(PROD.g1 ** b, PROD.g2 ** a)


@pytest.mark.parametrize("bk", [TOY, PROD], ids=["toy", "production"])
def test_group_laws(bk):
    # the same algebraic suite runs on both backends
    rng = seeded_rng(5, "laws", bk.name)
    for _ in range(20):
        x, y, z = bk.G1.random(rng), bk.G1.random(rng), bk.G1.random(rng)
        assert (x * y) * z == x * (y * z)
        assert x * y == y * x
        assert x * x.inverse() == bk.G1.identity
        assert x ** bk.order == bk.G1.identity


def test_decode_rejects_garbage():
    with pytest.raises(DecodeError):
        TOY.G1.decode(b"\x00\x02")  # 2 is not in the subgroup
    with pytest.raises(DecodeError):
        TOY.G1.decode(b"\x01")
    with pytest.raises(DecodeError):
        PROD.G1.decode(b"\x00" * 48)
    with pytest.raises(DecodeError):
        TOY.decode_scalar(bytes([101]))
    with pytest.raises(DecodeError):
        backend_from_tag(9)


@settings(max_examples=50)
@given(st.integers(0, 99))
def test_toy_message_codec(v):
    m = bytes([v])
    assert TOY.decode_message(TOY.encode_message(m)) == m


def test_toy_message_codec_edges():
    assert TOY.encode_message(b"") == TOY.g1 ** 0
    assert TOY.encode_message(b"\x00") == TOY.g1
    with pytest.raises(ValueError):
        TOY.encode_message(b"\x64")
    assert len(TOY.message_space()) == 101


@settings(max_examples=20, deadline=None)
@given(st.binary(max_size=45))
def test_production_message_codec(m):
    assert PROD.decode_message(PROD.encode_message(m)) == m


def test_seeded_rng_is_reproducible():
    a = seeded_rng(7, "x", 1)
    b = seeded_rng(7, "x", 1)
    assert [a.randrange(1000) for _ in range(5)] == \
        [b.randrange(1000) for _ in range(5)]
