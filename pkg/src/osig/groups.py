"""Prime-order groups with a pairing.

Two backends share one interface.  The toy backend is the order-101
subgroup of Z_607^*; every discrete log is a table lookup, so tests can
enumerate whole distributions.  The production backend is BLS12-381 via
the arkworks bindings.

Elements use multiplicative notation throughout: ``x * y``, ``x ** k``,
``x.inverse()``, ``bytes(x)``.  Scalars are plain ints.
"""

import hashlib
import random
import secrets

from py_arkworks_bls12381 import GT, G1Point, G2Point, Scalar


def default_rng():
    return secrets.SystemRandom()


def seeded_rng(seed, *labels):
    """Deterministic stream for reproducible runs (not for real keys)."""
    return random.Random(":".join(str(x) for x in (seed,) + labels))


def sha256(*parts):
    h = hashlib.sha256()
    for p in parts:
        h.update(len(p).to_bytes(4, "big"))
        h.update(p)
    return h.digest()


def hash_to_int(tag, data, nbytes=64):
    out = b""
    ctr = 0
    while len(out) < nbytes:
        out += sha256(tag, data, ctr.to_bytes(4, "big"))
        ctr += 1
    return int.from_bytes(out[:nbytes], "big")


class DecodeError(ValueError):
    pass


# ---------------------------------------------------------------- toy

TOY_P = 607
TOY_ORDER = 101
TOY_G = 64


class ToyElement:
    __slots__ = ("v",)

    def __init__(self, v):
        self.v = v

    def __mul__(self, other):
        return ToyElement(self.v * other.v % TOY_P)

    def __truediv__(self, other):
        return self * other.inverse()

    def __pow__(self, k):
        return ToyElement(pow(self.v, k % TOY_ORDER, TOY_P))

    def inverse(self):
        return ToyElement(pow(self.v, TOY_ORDER - 1, TOY_P))

    def __eq__(self, other):
        return isinstance(other, ToyElement) and self.v == other.v

    def __hash__(self):
        return hash(("toy", self.v))

    def __bytes__(self):
        return self.v.to_bytes(2, "big")

    def __repr__(self):
        return "ToyElement(%d)" % self.v

    def in_subgroup(self):
        return True


class ToyGroup:
    """Order-101 subgroup of Z_607^* generated by 64."""

    name = "toy"
    p = TOY_P
    order = TOY_ORDER
    size = 2

    def __init__(self):
        self.generator = ToyElement(TOY_G)
        self.identity = ToyElement(1)
        self._dlog = {}
        x = 1
        for i in range(TOY_ORDER):
            self._dlog[x] = i
            x = x * TOY_G % TOY_P

    def elements(self):
        return [self.generator ** i for i in range(self.order)]

    def dlog(self, x):
        return self._dlog[x.v]

    def random(self, rng):
        return self.generator ** rng.randrange(self.order)

    def decode(self, data):
        if len(data) != 2:
            raise DecodeError("toy element must be 2 bytes")
        v = int.from_bytes(data, "big")
        if v not in self._dlog:
            raise DecodeError("not in the order-101 subgroup")
        return ToyElement(v)

    def contains(self, x):
        return isinstance(x, ToyElement) and x.v in self._dlog


def toy_pairing(x, y):
    """e(g^a, g^b) = g^(ab), by brute-force discrete log."""
    grp = _TOY_GROUP
    return grp.generator ** (grp.dlog(x) * grp.dlog(y))


_TOY_GROUP = ToyGroup()


# ---------------------------------------------------------- BLS12-381

BLS_R = 0x73EDA753299D7D483339D80809A1D80553BDA402FFFE5BFEFFFFFFFF00000001
BLS_P = int(
    "1a0111ea397fe69a4b1ba7b6434bacd764774b84f38512bf6730d2a0f6b0f624"
    "1eabfffeb153ffffb9feffffffffaaab", 16)
BLS_H1 = 0x396C8C005555E1568C00AAAB0000AAAB  # G1 cofactor
BLS_H_EFF = 0xD201000000010001  # cofactor-clearing multiplier for G1
CURVE_ORDER = BLS_H1 * BLS_R  # order of E(F_p)


def _mul_any(pt, k):
    # arkworks multiplies by k mod r; outside G1 split k into 128-bit digits
    if k < BLS_R:
        return pt * Scalar(k)
    acc = G1Point.identity()
    base = pt
    shift = Scalar(1 << 128)
    while k:
        d = k & ((1 << 128) - 1)
        if d:
            acc = acc + base * Scalar(d)
        k >>= 128
        base = base * shift
    return acc


class G1Element:
    """Point of E(F_p).  ``sub`` records membership in the order-r subgroup."""

    __slots__ = ("pt", "sub")

    def __init__(self, pt, sub=True):
        self.pt = pt
        self.sub = sub

    def __mul__(self, other):
        return G1Element(self.pt + other.pt, self.sub and other.sub)

    def __truediv__(self, other):
        return G1Element(self.pt - other.pt, self.sub and other.sub)

    def __pow__(self, k):
        if self.sub:
            return G1Element(self.pt * Scalar(k % BLS_R), True)
        return G1Element(_mul_any(self.pt, k % CURVE_ORDER), False)

    def inverse(self):
        return G1Element(-self.pt, self.sub)

    def __eq__(self, other):
        return isinstance(other, G1Element) and self.pt == other.pt

    def __hash__(self):
        return hash(bytes(self))

    def __bytes__(self):
        return bytes(self.pt.to_compressed_bytes())

    def __repr__(self):
        return "G1Element(%s)" % bytes(self).hex()[:16]

    def in_subgroup(self):
        if self.sub:
            return True
        try:
            G1Point.from_compressed_bytes(bytes(self))
        except Exception:
            return False
        return True


class G2Element:
    __slots__ = ("pt",)

    def __init__(self, pt):
        self.pt = pt

    def __mul__(self, other):
        return G2Element(self.pt + other.pt)

    def __pow__(self, k):
        return G2Element(self.pt * Scalar(k % BLS_R))

    def inverse(self):
        return G2Element(-self.pt)

    def __eq__(self, other):
        return isinstance(other, G2Element) and self.pt == other.pt

    def __hash__(self):
        return hash(bytes(self))

    def __bytes__(self):
        return bytes(self.pt.to_compressed_bytes())

    def in_subgroup(self):
        return True


class GTElement:
    """Target-group element.

    The bindings expose no GT decoder, so an element read from the wire is
    kept as its canonical bytes: it can be compared and hashed but not
    multiplied.  Verifiers only ever compare received GT values.
    """

    __slots__ = ("val", "raw")

    def __init__(self, val=None, raw=None):
        self.val = val
        self.raw = raw

    def __mul__(self, other):
        if self.val is None or other.val is None:
            raise TypeError("opaque GT element cannot be multiplied")
        return GTElement(self.val * other.val)

    def __pow__(self, k):
        k %= BLS_R
        if self.val is None:
            raise TypeError("opaque GT element cannot be exponentiated")
        acc = GT.one()
        base = self.val
        while k:
            if k & 1:
                acc = acc * base
            k >>= 1
            if k:
                base = base * base
        return GTElement(acc)

    def inverse(self):
        return self ** (BLS_R - 1)

    def __eq__(self, other):
        return isinstance(other, GTElement) and bytes(self) == bytes(other)

    def __hash__(self):
        return hash(bytes(self))

    def __bytes__(self):
        if self.raw is None:
            self.raw = bytes.fromhex(str(self.val))
        return self.raw

    def in_subgroup(self):
        return True


class G1Group:
    name = "G1"
    order = BLS_R
    size = 48

    def __init__(self):
        self.generator = G1Element(G1Point())
        self.identity = G1Element(G1Point.identity())

    def random(self, rng):
        return self.generator ** rng.randrange(self.order)

    def decode(self, data):
        if len(data) != 48:
            raise DecodeError("G1 element must be 48 bytes")
        try:
            return G1Element(G1Point.from_compressed_bytes(bytes(data)))
        except Exception:
            raise DecodeError("invalid G1 encoding")

    def contains(self, x):
        return isinstance(x, G1Element) and x.in_subgroup()


class CurveGroup:
    """All of E(F_p); the ElGamal message space for byte messages."""

    name = "E"
    order = CURVE_ORDER
    size = 48

    def __init__(self):
        self.identity = G1Element(G1Point.identity())

    def random(self, rng):
        while True:
            x = rng.randrange(BLS_P)
            flags = 0x80 | (0x20 if rng.getrandbits(1) else 0)
            data = bytearray(x.to_bytes(48, "big"))
            data[0] |= flags
            try:
                pt = G1Point.from_compressed_bytes_unchecked(bytes(data))
            except Exception:
                continue
            return G1Element(pt, False)

    def decode(self, data):
        if len(data) != 48:
            raise DecodeError("curve point must be 48 bytes")
        try:
            return G1Element(G1Point.from_compressed_bytes(bytes(data)))
        except Exception:
            pass
        try:
            return G1Element(
                G1Point.from_compressed_bytes_unchecked(bytes(data)), False)
        except Exception:
            raise DecodeError("invalid curve point")

    def contains(self, x):
        return isinstance(x, G1Element)


class G2Group:
    name = "G2"
    order = BLS_R
    size = 96

    def __init__(self):
        self.generator = G2Element(G2Point())
        self.identity = G2Element(G2Point.identity())

    def random(self, rng):
        return self.generator ** rng.randrange(self.order)

    def decode(self, data):
        if len(data) != 96:
            raise DecodeError("G2 element must be 96 bytes")
        try:
            return G2Element(G2Point.from_compressed_bytes(bytes(data)))
        except Exception:
            raise DecodeError("invalid G2 encoding")

    def contains(self, x):
        return isinstance(x, G2Element)


class GTGroup:
    name = "GT"
    order = BLS_R
    size = 576

    def __init__(self):
        self.identity = GTElement(GT.one())
        self.generator = GTElement(GT.pairing(G1Point(), G2Point()))

    def random(self, rng):
        return self.generator ** rng.randrange(self.order)

    def decode(self, data):
        if len(data) != 576:
            raise DecodeError("GT element must be 576 bytes")
        return GTElement(raw=bytes(data))

    def contains(self, x):
        return isinstance(x, GTElement)


# ------------------------------------------------------------ backends

class Backend:
    """Group parameters: (G1, G2, GT, e) of prime order l, plus a message
    group M into which byte strings are encoded for ElGamal."""

    def __init__(self, name, tag, G1, G2, GT_, M, pairing, scalar_size):
        self.name = name
        self.tag = tag
        self.G1, self.G2, self.GT, self.M = G1, G2, GT_, M
        self.order = G1.order
        self.g1 = G1.generator
        self.g2 = G2.generator
        self._pairing = pairing
        self.scalar_size = scalar_size

    def __repr__(self):
        return "Backend(%s)" % self.name

    def pairing(self, x, y):
        return self._pairing(x, y)

    def random_scalar(self, rng, nonzero=False):
        lo = 1 if nonzero else 0
        return rng.randrange(lo, self.order)

    def encode_scalar(self, k):
        return (k % self.order).to_bytes(self.scalar_size, "big")

    def decode_scalar(self, data):
        if len(data) != self.scalar_size:
            raise DecodeError("bad scalar length")
        k = int.from_bytes(data, "big")
        if k >= self.order:
            raise DecodeError("scalar out of range")
        return k

    def hash_to_scalar(self, tag, data):
        return hash_to_int(tag, data) % self.order


class ToyBackend(Backend):
    def __init__(self):
        grp = _TOY_GROUP
        Backend.__init__(self, "toy", 0, grp, grp, grp, grp, toy_pairing, 1)
        self.p = grp.p

    def hash_to_g1(self, data, tag=b"osig/H1"):
        return self.g1 ** (hash_to_int(tag, data) % self.order)

    # messages: b"" -> g^0 and bytes([v]) -> g^(v+1) for v < 100
    def encode_message(self, m):
        if len(m) == 0:
            return self.g1 ** 0
        if len(m) == 1 and m[0] < self.order - 1:
            return self.g1 ** (m[0] + 1)
        raise ValueError("toy codec accepts b'' or one byte below 100")

    def decode_message(self, M):
        i = self.G1.dlog(M)
        return b"" if i == 0 else bytes([i - 1])

    def message_space(self):
        return [b""] + [bytes([v]) for v in range(self.order - 1)]


class BLSBackend(Backend):
    max_message = 45

    def __init__(self):
        Backend.__init__(self, "production", 1, G1Group(), G2Group(),
                         GTGroup(), CurveGroup(), self._pair, 32)

    @staticmethod
    def _pair(x, y):
        return GTElement(GT.pairing(x.pt, y.pt))

    def hash_to_g1(self, data, tag=b"osig/H1"):
        # try-and-increment onto E(F_p), then clear the cofactor
        ctr = 0
        while True:
            x = hash_to_int(tag, data + ctr.to_bytes(4, "big")) % BLS_P
            raw = bytearray(x.to_bytes(48, "big"))
            raw[0] |= 0x80
            ctr += 1
            try:
                pt = G1Point.from_compressed_bytes_unchecked(bytes(raw))
            except Exception:
                continue
            pt = pt * Scalar(BLS_H_EFF)
            if pt == G1Point.identity():
                continue
            return G1Element(pt)

    # x-coordinate = 0x00 | len | message (zero padded to 45) | counter
    def encode_message(self, m):
        if len(m) > self.max_message:
            raise ValueError("message longer than %d bytes" % self.max_message)
        body = bytes([0, len(m)]) + m.ljust(self.max_message, b"\0")
        for ctr in range(256):
            raw = bytearray(body + bytes([ctr]))
            raw[0] |= 0x80
            try:
                pt = G1Point.from_compressed_bytes_unchecked(bytes(raw))
            except Exception:
                continue
            return G1Element(pt, False)
        raise ValueError("no curve point found for message")

    def decode_message(self, M):
        raw = bytearray(bytes(M))
        if raw[0] & 0x40:
            raise DecodeError("identity does not encode a message")
        raw[0] &= 0x1F
        n = raw[1]
        if raw[0] != 0 or n > self.max_message:
            raise DecodeError("point does not encode a message")
        m = bytes(raw[2:2 + n])
        if any(raw[2 + n:2 + self.max_message]):
            raise DecodeError("non-zero padding")
        if M != self.encode_message(m):
            raise DecodeError("non-canonical message point")
        return m


_BACKENDS = {}


def toy_group():
    if "toy" not in _BACKENDS:
        _BACKENDS["toy"] = ToyBackend()
    return _BACKENDS["toy"]


def production_group():
    if "production" not in _BACKENDS:
        _BACKENDS["production"] = BLSBackend()
    return _BACKENDS["production"]


def get_backend(name):
    if name == "toy":
        return toy_group()
    if name in ("production", "bls12-381", "prod"):
        return production_group()
    raise ValueError("unknown backend %r" % name)


def backend_from_tag(tag):
    if tag == 0:
        return toy_group()
    if tag == 1:
        return production_group()
    raise DecodeError("unknown backend tag %d" % tag)
