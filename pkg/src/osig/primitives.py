"""Signature, encryption and commitment building blocks.

* BLS signatures, the class-S member: s = H1(m)^sk, r empty, verified by
  the homomorphic map f(x) = e(x, g2) against I = e(H1(m), pk).
* ElGamal in KEM/DEM form, the class-E member over a group: c = g^a,
  k = pk^a, DEM ciphertext s * k.
* Paillier, fully decryptable: decryption returns the randomness too.
* Pedersen commitments, the class-C member: f(x) = h^x, I = c g^-m.

Each encryption scheme also comes with an adapter object exposing what
the sigma engine needs (group laws on messages, randomness and
ciphertexts, plus the inner correct-decryption statement).
"""

from dataclasses import dataclass
import functools
import math

import gmpy2

from .groups import DecodeError, hash_to_int
from .sigma import (GroupDomain, HomPreimage, IntegerDomain, KEY_PATH,
                    NthPowerMap, PairPowerMap, PairingMap, PowerMap, RAND_PATH,
                    ScalarDomain, UnitsDomain, nth_power, pack,
                    register_factors)


# ----------------------------------------------------------------- BLS

@dataclass(frozen=True)
class ClassSSignature:
    s: object
    r: bytes = b""


def bls_keygen(bk, rng):
    sk = bk.random_scalar(rng, nonzero=True)
    return sk, bk.g2 ** sk


def bls_sign(bk, sk, msg):
    if not 0 < sk < bk.order:
        raise ValueError("secret key must lie in [1, l)")
    return ClassSSignature(bk.hash_to_g1(msg) ** sk, b"")


def bls_verify(bk, pk, msg, sig):
    if sig.r != b"":
        return False
    return _bls_check(bk, bytes(pk), bytes(msg), bytes(sig.s), pk, sig.s)


# a signature is verified again by every statement built around it
@functools.lru_cache(maxsize=4096)
def _bls_check(bk, pk_bytes, msg, s_bytes, pk, s):
    f, I = class_s_compute(bk, pk, msg)
    return f.codomain.eq(f(s), I)


def class_s_convert(sig):
    return sig.s, sig.r


def class_s_retrieve(s, r=b""):
    return ClassSSignature(s, r)


@functools.lru_cache(maxsize=4096)
def _target(bk, pk_bytes, msg, pk):
    return bk.pairing(bk.hash_to_g1(msg), pk)


def class_s_compute(bk, pk, msg, r=b""):
    """(f, I) with f(s) = I exactly for valid signatures (s, r) on msg."""
    return PairingMap(bk), _target(bk, bytes(pk), bytes(msg), pk)


def encode_bls_signature(sig):
    return bytes(sig.s) + sig.r


def decode_bls_signature(bk, data):
    size = bk.G1.size
    if len(data) != size:
        raise DecodeError("bad signature length")
    return ClassSSignature(bk.G1.decode(data), b"")


# ------------------------------------------------------------- ElGamal

@dataclass(frozen=True)
class ElGamalCiphertext:
    c: object
    e: object

    def __mul__(self, other):
        return ElGamalCiphertext(self.c * other.c, self.e * other.e)

    def __pow__(self, k):
        return ElGamalCiphertext(self.c ** k, self.e ** k)

    def inverse(self):
        return ElGamalCiphertext(self.c.inverse(), self.e.inverse())

    def __bytes__(self):
        return bytes(self.c) + bytes(self.e)


def elgamal_keygen(bk, rng):
    sk = bk.random_scalar(rng, nonzero=True)
    return sk, bk.g1 ** sk


def elgamal_encrypt(bk, pk, M, a):
    return ElGamalCiphertext(bk.g1 ** a, M * pk ** a)


def elgamal_decrypt(sk, ct):
    return ct.e * (ct.c ** sk).inverse()


def decode_elgamal(bk, data, msg_group=None):
    mg = msg_group or bk.G1
    n = bk.G1.size
    if len(data) != n + mg.size:
        raise DecodeError("bad ciphertext length")
    return ElGamalCiphertext(bk.G1.decode(data[:n]), mg.decode(data[n:]))


kem_keygen = elgamal_keygen


def kem_encap(bk, pk, a):
    """(c, k) = (g^a, pk^a) for caller-chosen randomness a."""
    return bk.g1 ** a, pk ** a


def kem_decap(sk, c):
    return c ** sk


def dem_encrypt(k, s):
    return s * k


def dem_decrypt(k, e):
    return e * k.inverse()


class ElGamalEnc:
    """ElGamal under pk as a class-E scheme for the sigma engine.

    Messages live in ``msg_group`` (G1 by default; the full curve for
    encoded byte messages in production).  The inner proof of correct
    decryption of (C1, C2) to z is a discrete-log equality with
    D = C2 z^-1: (g, pk; C1, D) with witness sk, or (g, C1; pk, D) with
    witness the randomness.
    """

    def __init__(self, bk, pk, msg_group=None, inner_space=None):
        self.bk = bk
        self.pk = pk
        self.g = bk.g1
        self.G = bk.G1
        self.msg_group = msg_group or bk.G1
        self.msg_domain = GroupDomain(self.msg_group)
        self.rand_domain = ScalarDomain(bk.order, bk.scalar_size)
        self.inner_witness_domain = self.rand_domain
        self.inner_space = inner_space or (
            bk.order if bk.tag == 0 else 1 << 128)

    def describe(self):
        return pack(b"elgamal", bytes(self.g), bytes(self.pk),
                    self.msg_group.name.encode())

    def encrypt(self, M, a):
        return ElGamalCiphertext(self.g ** a, M * self.pk ** a)

    def random_rand(self, rng):
        return rng.randrange(self.bk.order)

    def rand_op(self, a, b):
        return (a + b) % self.bk.order

    def rand_pow(self, a, k):
        return a * k % self.bk.order

    def ct_op(self, x, y):
        return x * y

    def ct_pow(self, x, k):
        return x ** k

    def ct_inv(self, x):
        return x.inverse()

    def encode_ct(self, ct):
        return bytes(ct)

    def decode_ct(self, data):
        return decode_elgamal(self.bk, data, self.msg_group)

    def response_ok(self, z, space):
        return True

    def sim_response(self, rng, space):
        return self.msg_domain.random(rng)

    def _residue(self, ct, z):
        D = ct.e * z.inverse()
        if not self.G.contains(D):
            return None
        return self.G.decode(bytes(D)) if self.bk.tag else D

    def inner_statement(self, ct, z, path, space):
        D = self._residue(ct, z)
        if D is None:
            return None
        if path == KEY_PATH:
            return HomPreimage(PairPowerMap(self.G, self.g, ct.c),
                               (self.pk, D), space, b"dec/key")
        if path == RAND_PATH:
            return HomPreimage(PairPowerMap(self.G, self.g, self.pk),
                               (ct.c, D), space, b"dec/rand")
        return None

    def inner_for_key(self, ct, z, sk, space):
        return KEY_PATH, self.inner_statement(ct, z, KEY_PATH, space), sk

    def inner_for_rand(self, ct, z, rho, space):
        return RAND_PATH, self.inner_statement(ct, z, RAND_PATH, space), rho

    def inner_shape(self, path, space):
        return HomPreimage(PairPowerMap(self.G, self.g, self.g),
                           (self.g, self.g), space)

    def decrypt(self, sk, ct):
        return elgamal_decrypt(sk, ct)


# ------------------------------------------------------------ Pedersen

@dataclass(frozen=True)
class PedersenParams:
    bk: object
    g: object
    h: object


def pedersen_params(bk):
    if bk.tag == 0:
        # toy: h = g^17, a discrete log known only to the tests
        return PedersenParams(bk, bk.g1, bk.g1 ** 17)
    return PedersenParams(bk, bk.g1, bk.hash_to_g1(b"pedersen h",
                                                   tag=b"osig/pedersen"))


def pedersen_commit(pp, m, r):
    return pp.g ** m * pp.h ** r


def pedersen_open(pp, c, m, r):
    return pedersen_commit(pp, m, r) == c


def class_c_compute(pp, c, m, domain=None):
    """(f, I) = (x -> h^x, c g^-m)."""
    f = PowerMap(pp.bk.G1, pp.h, domain)
    return f, c * (pp.g ** m).inverse()


# ------------------------------------------------------------ Paillier

@dataclass(frozen=True)
class PaillierPublicKey:
    n: object

    @property
    def n2(self):
        return self.n * self.n

    @property
    def size(self):
        return (int(self.n).bit_length() + 7) // 8


@dataclass(frozen=True)
class PaillierSecretKey:
    p: object
    q: object

    def __post_init__(self):
        register_factors(self.n, self)

    @property
    def n(self):
        return self.p * self.q

    @property
    def public(self):
        return PaillierPublicKey(self.n)


def _prime(rng, bits):
    while True:
        x = rng.getrandbits(bits) | (1 << (bits - 1)) | 1
        p = gmpy2.next_prime(x)
        if p.bit_length() == bits:
            return int(p)


def paillier_keygen(rng, bits=2048):
    while True:
        p = _prime(rng, bits // 2)
        q = _prime(rng, bits // 2)
        n = p * q
        if p != q and math.gcd(int(n), int((p - 1) * (q - 1))) == 1:
            return PaillierSecretKey(p, q), PaillierPublicKey(n)


def paillier_encrypt(pk, m, r):
    n, n2 = pk.n, pk.n2
    return nth_power(r, n) * (1 + (m % n) * n) % n2


def paillier_check(pk, c):
    if not 0 < c < pk.n2 or math.gcd(int(c), int(pk.n)) != 1:
        raise DecodeError("ciphertext is not a unit mod N^2")


def _crt(ap, p, aq, q):
    return int((ap + p * ((aq - ap) * gmpy2.invert(p, q) % q)) % (p * q))


# the confirmer opens the same ciphertext for verify, convert and proofs
@functools.lru_cache(maxsize=256)
def paillier_decrypt_full(sk, c):
    """(m, r) with c = r^N (1 + m N) mod N^2, computed mod p^2 and q^2."""
    n = sk.n
    paillier_check(PaillierPublicKey(n), c)
    parts = []
    for p in (sk.p, sk.q):
        p2 = p * p
        # L_p(c^(p-1) mod p^2) / L_p((1+n)^(p-1) mod p^2) mod p
        lc = (gmpy2.powmod(c, p - 1, p2) - 1) // p
        lg = ((1 + (p - 1) * n) % p2 - 1) // p
        mp = lc * gmpy2.invert(lg, p) % p
        # r^n = c mod p
        rp = gmpy2.powmod(c % p, gmpy2.invert(n, p - 1), p)
        parts.append((mp, rp))
    m = _crt(parts[0][0], sk.p, parts[1][0], sk.q)
    r = _crt(parts[0][1], sk.p, parts[1][1], sk.q)
    return m, r


def paillier_decrypt(sk, c):
    return paillier_decrypt_full(sk, c)[0]


def encode_paillier(pk, c):
    return int(c).to_bytes(2 * pk.size, "big")


def decode_paillier(pk, data):
    if len(data) != 2 * pk.size:
        raise DecodeError("bad Paillier ciphertext length")
    c = int.from_bytes(data, "big")
    paillier_check(pk, c)
    return c


SLACK_BITS = 64


class PaillierEnc:
    """Paillier as a class-E scheme over integers in [0, 2^64 l).

    Plaintexts are Pedersen openings handled as integers, so responses
    z = r' + b r are never reduced; verifiers bound them instead.  The
    inner proof shows t2 e^b (1+N)^-z is an N-th power.
    """

    def __init__(self, pk, order, inner_space=None):
        self.pk = pk
        self.order = order
        self.bound = order << SLACK_BITS
        self.msg_domain = IntegerDomain(self.bound, order)
        self.rand_domain = UnitsDomain(pk.n)
        self.inner_witness_domain = self.rand_domain
        # differences of inner challenges must stay below N's factors
        half = int(pk.n).bit_length() // 2
        self.inner_space = inner_space or (1 << min(128, half - 2))

    def describe(self):
        return pack(b"paillier", int(self.pk.n).to_bytes(self.pk.size, "big"))

    def encrypt(self, m, r):
        return paillier_encrypt(self.pk, m, r)

    def random_rand(self, rng):
        return self.rand_domain.random(rng)

    def rand_op(self, a, b):
        return a * b % self.pk.n

    def rand_pow(self, a, k):
        return int(gmpy2.powmod(a, k, self.pk.n))

    def ct_op(self, x, y):
        return x * y % self.pk.n2

    def ct_pow(self, x, k):
        return int(gmpy2.powmod(x, k, self.pk.n2))

    def ct_inv(self, x):
        return int(gmpy2.invert(x, self.pk.n2))

    def encode_ct(self, ct):
        return encode_paillier(self.pk, ct)

    def decode_ct(self, data):
        return decode_paillier(self.pk, data)

    def response_ok(self, z, space):
        return 0 <= z < self.bound + (space - 1) * self.order

    def sim_response(self, rng, space):
        return rng.randrange(self.bound)

    def inner_statement(self, ct, z, path, space):
        if path != RAND_PATH or not 0 <= z < self.pk.n:
            return None
        n, n2 = self.pk.n, self.pk.n2
        # (1+N)^-z = 1 - zN mod N^2
        X = ct * (1 - z * n) % n2
        return HomPreimage(NthPowerMap(self.pk.n), X, space, b"nth-root")

    def inner_for_key(self, ct, z, sk, space):
        _, r = paillier_decrypt_full(sk, ct)
        return self.inner_for_rand(ct, z, r, space)

    def inner_for_rand(self, ct, z, rho, space):
        return RAND_PATH, self.inner_statement(ct, z, RAND_PATH, space), rho

    def inner_shape(self, path, space):
        return HomPreimage(NthPowerMap(self.pk.n), 1, space)

    def decrypt(self, sk, ct):
        return paillier_decrypt(sk, ct)


def digest_int(data, bits=256):
    return hash_to_int(b"osig/digest", data) >> (512 - bits)
