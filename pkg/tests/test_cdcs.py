import pytest
from hypothesis import given, settings, strategies as st

from osig import sigma
from osig.cdcs import SCHEMES, CtEtSSignature, Refused, get_scheme
from osig.groups import DecodeError, get_backend, seeded_rng
from osig.primitives import bls_sign

TOY = get_backend("toy")
PROD = get_backend("production")
PROTOCOL_SCHEMES = ["plain-ste", "ets", "newste", "ctets"]


@pytest.mark.parametrize("name", PROTOCOL_SCHEMES)
def test_completeness_toy(name):
    sch = get_scheme(name, TOY)
    for i in range(15):
        rng = seeded_rng(0, name, i)
        keys = sch.keygen(rng)
        m = rng.choice(TOY.message_space())
        assert all(sch.completeness(keys, m, rng))


@pytest.mark.parametrize("name", PROTOCOL_SCHEMES)
def test_completeness_production(name):
    sch = get_scheme(name, PROD)
    rng = seeded_rng(1, name)
    keys = sch.keygen(rng)
    for m in (b"", b"hello", b"x" * 40):
        assert all(sch.completeness(keys, m, rng))


@pytest.mark.parametrize("name", sorted(SCHEMES))
def test_sign_verify_convert(name):
    sch = get_scheme(name, PROD)
    rng = seeded_rng(2, name)
    keys = sch.keygen(rng)
    mu, coins = sch.sign(keys, b"msg", rng)
    assert sch.verify(keys, mu, b"msg")
    assert sch.verify(keys, mu, b"msg", coins)
    assert not sch.verify(keys, mu, b"other")
    conv = sch.convert(keys, mu, b"msg")
    assert sch.verify_converted(keys.spk, keys.cpk, conv, b"msg")
    assert not sch.verify_converted(keys.spk, keys.cpk, conv, b"other")
    assert sch.convert(keys, mu, b"other") is None
    # canonical encodings
    data = sch.encode(mu)
    assert sch.encode(sch.decode(data, keys.spk, keys.cpk)) == data
    cdata = sch.encode_converted(conv)
    assert sch.encode_converted(sch.decode_converted(cdata, keys.cpk)) == cdata


@pytest.mark.parametrize("name", PROTOCOL_SCHEMES)
def test_honest_provers_refuse_false_claims(name):
    sch = get_scheme(name, PROD)
    rng = seeded_rng(3, name)
    keys = sch.keygen(rng)
    mu, _ = sch.sign(keys, b"a", rng)
    with pytest.raises(Refused):
        sch.confirm(keys, mu, b"b", rng)
    with pytest.raises(Refused):
        sch.deny(keys, mu, b"a", rng)
    ok, _ = sch.deny(keys, mu, b"b", rng)
    assert ok


@pytest.mark.parametrize("name", PROTOCOL_SCHEMES)
def test_sconfirm_needs_the_right_coins(name):
    sch = get_scheme(name, TOY)
    rng = seeded_rng(4, name)
    keys = sch.keygen(rng)
    mu, coins = sch.sign(keys, b"\x01", rng)
    assert sch.sconfirm(keys, mu, b"\x01", coins, rng)[0]
    _, other = sch.sign(keys, b"\x01", rng)
    if other != coins:
        try:
            ok = sch.sconfirm(keys, mu, b"\x01", other, rng)[0]
        except (Refused, TypeError, ValueError, KeyError):
            ok = False
        assert not ok


@pytest.mark.parametrize("name", ["plain-ste", "cteas"])
def test_homomorphic_layers_rerandomize_to_valid(name):
    sch = get_scheme(name, PROD)
    rng = seeded_rng(5, name)
    keys = sch.keygen(rng)
    mu, _ = sch.sign(keys, b"m", rng)
    mu2 = sch.rerandomize(keys.cpk, mu, rng)
    assert sch.encode(mu2) != sch.encode(mu)
    assert sch.verify(keys, mu2, b"m")


@pytest.mark.parametrize("name", ["newste", "ctets", "ets"])
def test_bound_layers_rerandomize_to_invalid(name):
    sch = get_scheme(name, PROD)
    rng = seeded_rng(6, name)
    keys = sch.keygen(rng)
    mu, _ = sch.sign(keys, b"m", rng)
    assert not sch.verify(keys, sch.rerandomize(keys.cpk, mu, rng), b"m")


def test_ctets_denial_of_out_of_range_opening():
    sch = get_scheme("ctets", TOY)
    rng = seeded_rng(7, "reveal")
    keys = sch.keygen(rng)
    enc = sch._enc(keys.cpk)
    c = TOY.G1.random(rng)
    e = enc.encrypt(TOY.order + 5, enc.random_rand(rng))
    mu = CtEtSSignature(c, e, bls_sign(TOY, keys.signer.sk,
                                       sch.signed_string(keys.cpk, e, c)))
    assert not sch.verify(keys, mu, b"\x01")
    stmt, _ = sch.deny_instance(keys, mu, b"\x01")
    assert stmt.label == b"reveal" + sigma.int_bytes(TOY.order + 5)
    ok, _ = sch.deny(keys, mu, b"\x01", rng)
    assert ok
    # a reveal below l is not a denial
    assert sch.deny_statement(keys.spk, keys.cpk, mu, b"\x01", reveal=3) is None


def test_denial_of_publicly_malformed_signature():
    sch = get_scheme("ctets", TOY)
    rng = seeded_rng(8, "malformed")
    keys = sch.keygen(rng)
    mu, _ = sch.sign(keys, b"\x02", rng)
    forged = CtEtSSignature(mu.c * TOY.g1, mu.e, mu.sigma)
    assert sch.deny_statement(keys.spk, keys.cpk, forged, b"\x02") is None
    assert sch.deny(keys, forged, b"\x02", rng) == (True, None)


def test_newste_encapsulations_are_fresh():
    sch = get_scheme("newste", PROD)
    rng = seeded_rng(9, "binding")
    keys = sch.keygen(rng)
    cs = {bytes(sch.sign(keys, b"same", rng)[0].c) for _ in range(40)}
    assert len(cs) == 40
    # toy: the encapsulation is uniform, so collisions follow the birthday rate
    sch = get_scheme("newste", TOY)
    keys = sch.keygen(rng)
    n = 300
    cs = [bytes(sch.sign(keys, b"\x03", rng)[0].c) for _ in range(n)]
    pairs = sum(cs.count(x) * (cs.count(x) - 1) // 2 for x in set(cs))
    mean = n * (n - 1) / 2 / 101
    assert abs(pairs - mean) < 5 * mean ** 0.5


def test_decode_rejects_wrong_lengths():
    for name in sorted(SCHEMES):
        sch = get_scheme(name, TOY)
        keys = sch.keygen(seeded_rng(10, name))
        with pytest.raises((DecodeError, ValueError)):
            sch.decode(b"\x00", keys.spk, keys.cpk)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(PROTOCOL_SCHEMES), st.integers(0, 99),
       st.integers(0, 10 ** 6))
def test_convert_round_trip_property(name, v, seed):
    sch = get_scheme(name, TOY)
    rng = seeded_rng(seed, name)
    keys = sch.keygen(rng)
    m = bytes([v])
    mu, _ = sch.sign(keys, m, rng)
    conv = sch.convert(keys, mu, m)
    assert sch.verify_converted(keys.spk, keys.cpk, conv, m)
