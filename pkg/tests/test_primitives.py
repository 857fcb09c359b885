import gc
import math

import pytest
from hypothesis import given, settings, strategies as st

from osig.groups import DecodeError, get_backend, seeded_rng
from osig.primitives import (
    ClassSSignature, ElGamalEnc, PaillierEnc, bls_keygen, bls_sign, bls_verify,
    class_c_compute, class_s_compute, dem_decrypt, dem_encrypt,
    elgamal_decrypt, elgamal_encrypt, elgamal_keygen, kem_decap, kem_encap,
    paillier_decrypt_full, paillier_encrypt, paillier_keygen, pedersen_commit,
    pedersen_params, decode_paillier, encode_paillier)
from osig.sigma import nth_power

TOY = get_backend("toy")
PROD = get_backend("production")


def test_class_s_toy_exhaustive():
    rng = seeded_rng(0, "class-s")
    sk, pk = bls_keygen(TOY, rng)
    for m in (b"", b"\x05", b"\x63"):
        sig = bls_sign(TOY, sk, m)
        f, I = class_s_compute(TOY, pk, m)
        assert f(sig.s) == I
        # exactly one group element satisfies f(s) = I
        assert [s for s in TOY.G1.elements() if f(s) == I] == [sig.s]


def test_bls_oracle_toy():
    # toy BLS is g^(H(m) sk): check against the discrete log directly
    rng = seeded_rng(1, "bls")
    sk, pk = bls_keygen(TOY, rng)
    m = b"\x11"
    h = TOY.G1.dlog(TOY.hash_to_g1(m))
    assert bls_sign(TOY, sk, m).s == TOY.g1 ** (h * sk % 101)


@pytest.mark.parametrize("bk", [TOY, PROD], ids=["toy", "production"])
def test_bls_sign_verify(bk):
    rng = seeded_rng(2, "bls", bk.name)
    sk, pk = bls_keygen(bk, rng)
    sig = bls_sign(bk, sk, b"\x01")
    assert bls_verify(bk, pk, b"\x01", sig)
    if bk is PROD:
        assert not bls_verify(bk, pk, b"\x02", sig)
        assert not bls_verify(bk, pk, b"\x01", ClassSSignature(sig.s, b"x"))


@pytest.mark.parametrize("bk,n", [(TOY, 1000), (PROD, 1000)],
                         ids=["toy", "production"])
def test_class_e_homomorphism(bk, n):
    rng = seeded_rng(3, "class-e", bk.name)
    sk, pk = elgamal_keygen(bk, rng)
    enc = ElGamalEnc(bk, pk)
    one = enc.encrypt(bk.G1.identity, 0)
    assert one.c == bk.G1.identity and one.e == bk.G1.identity
    for i in range(n):
        M1, M2 = bk.G1.random(rng), bk.G1.random(rng)
        a1, a2 = enc.random_rand(rng), enc.random_rand(rng)
        c1, c2 = enc.encrypt(M1, a1), enc.encrypt(M2, a2)
        # product of ciphertexts encrypts the product under a1 + a2
        assert enc.ct_op(c1, c2) == enc.encrypt(M1 * M2, enc.rand_op(a1, a2))
        if i < 20:
            c3 = enc.encrypt(bk.G1.random(rng), enc.random_rand(rng))
            assert enc.ct_op(enc.ct_op(c1, c2), c3) == \
                enc.ct_op(c1, enc.ct_op(c2, c3))
            assert enc.ct_op(c1, one) == c1
            assert elgamal_decrypt(sk, c1) == M1


@settings(max_examples=200)
@given(st.integers(0, 100), st.integers(0, 100), st.integers(1, 100))
def test_elgamal_round_trip_toy(x, a, sk):
    pk = TOY.g1 ** sk
    M = TOY.g1 ** x
    assert elgamal_decrypt(sk, elgamal_encrypt(TOY, pk, M, a)) == M


def test_class_c_homomorphism():
    for bk in (TOY, PROD):
        pp = pedersen_params(bk)
        rng = seeded_rng(4, "class-c", bk.name)
        f, _ = class_c_compute(pp, pp.g, 0)
        for _ in range(1000 if bk is TOY else 200):
            r1, r2 = bk.random_scalar(rng), bk.random_scalar(rng)
            assert f((r1 + r2) % bk.order) == f(r1) * f(r2)


def test_pedersen_toy_oracle():
    # h = g^17, so commit(m, r) = g^(m + 17 r)
    pp = pedersen_params(TOY)
    for m, r in [(0, 0), (3, 5), (100, 100), (42, 7)]:
        c = pedersen_commit(pp, m, r)
        assert TOY.G1.dlog(c) == (m + 17 * r) % 101
    f, I = class_c_compute(pp, pedersen_commit(pp, 9, 33), 9)
    assert f(33) == I


def test_dem_inv_ot_exhaustive():
    G = TOY.G1.elements()
    for s in G[:10]:
        outs = [dem_encrypt(k, s) for k in G]
        assert len(set(outs)) == len(G)
    for k in G[:10]:
        assert len({dem_encrypt(k, s) for s in G}) == len(G)
        for s in G[:10]:
            assert dem_decrypt(k, dem_encrypt(k, s)) == s


def test_kem_round_trip(bk):
    rng = seeded_rng(5, "kem", bk.name)
    sk, pk = elgamal_keygen(bk, rng)
    c, k = kem_encap(bk, pk, bk.random_scalar(rng))
    assert kem_decap(sk, c) == k


def _textbook_decrypt(p, q, c):
    n = p * q
    lam = math.lcm(p - 1, q - 1)
    L = (pow(c, lam, n * n) - 1) // n
    mu = pow((pow(n + 1, lam, n * n) - 1) // n, -1, n)
    return L * mu % n


def test_paillier_against_textbook():
    rng = seeded_rng(6, "paillier")
    sk, pk = paillier_keygen(rng, 128)
    for _ in range(50):
        m = rng.randrange(pk.n)
        r = rng.randrange(1, pk.n)
        while math.gcd(r, pk.n) != 1:
            r = rng.randrange(1, pk.n)
        c = paillier_encrypt(pk, m, r)
        assert _textbook_decrypt(sk.p, sk.q, c) == m
        assert paillier_decrypt_full(sk, c) == (m, r)
        assert decode_paillier(pk, encode_paillier(pk, c)) == c


_NTH_KEY = paillier_keygen(seeded_rng(9, "nth"), 128)


@settings(max_examples=200)
@given(st.data())
def test_nth_power_with_factors_matches_pow(data):
    sk, pk = _NTH_KEY
    n = pk.n
    x = data.draw(st.one_of(
        st.integers(0, n * n - 1),
        st.integers(0, n).map(lambda k: k * sk.p % (n * n))))
    assert nth_power(x, n) == pow(x, n, n * n)


def test_paillier_encrypt_without_factors_known():
    rng = seeded_rng(10, "paillier")
    sk, pk = paillier_keygen(rng, 128)
    p, q = sk.p, sk.q
    c = paillier_encrypt(pk, 7, 12345)
    del sk
    gc.collect()
    # the key is gone, so this goes through plain exponentiation
    assert paillier_encrypt(pk, 7, 12345) == c
    assert _textbook_decrypt(p, q, c) == 7


def test_paillier_rejects_non_units():
    rng = seeded_rng(7, "paillier")
    sk, pk = paillier_keygen(rng, 128)
    with pytest.raises(DecodeError):
        paillier_decrypt_full(sk, sk.p)
    with pytest.raises(DecodeError):
        decode_paillier(pk, b"\x00" * (2 * pk.size))


def test_paillier_class_e_randomness_composes():
    rng = seeded_rng(8, "paillier-e")
    sk, pk = paillier_keygen(rng, 128)
    enc = PaillierEnc(pk, TOY.order)
    for _ in range(100):
        m1, m2 = rng.randrange(1000), rng.randrange(1000)
        u1, u2 = enc.random_rand(rng), enc.random_rand(rng)
        prod = enc.ct_op(enc.encrypt(m1, u1), enc.encrypt(m2, u2))
        assert prod == enc.encrypt(m1 + m2, enc.rand_op(u1, u2))
