"""Sigma-protocol engine.

A statement knows how to commit, respond, verify and simulate.  Two
shapes exist:

* one-stage (HomPreimage): commitment t, challenge b, response z;
* two-stage (EncPreimage): after z the prover also runs an inner proof
  that z decrypts a ciphertext derived from the commitment, so the
  transcript carries an inner commitment, a second challenge c and an
  inner response.

Conjunctions (shared challenges) and disjunctions (split challenges)
compose statements of either shape.  Fiat-Shamir turns any statement
into a non-interactive proof.
"""

from dataclasses import dataclass
import math
import weakref

import gmpy2

from .groups import DecodeError, hash_to_int, sha256


# ------------------------------------------------------------ encoding

def pack(*items):
    out = bytearray()
    for it in items:
        out += len(it).to_bytes(4, "big") + it
    return bytes(out)


def unpack(data, count=None):
    items = []
    i = 0
    while i < len(data):
        if i + 4 > len(data):
            raise DecodeError("truncated length prefix")
        n = int.from_bytes(data[i:i + 4], "big")
        i += 4
        if i + n > len(data):
            raise DecodeError("truncated item")
        items.append(bytes(data[i:i + n]))
        i += n
    if count is not None and len(items) != count:
        raise DecodeError("expected %d items, got %d" % (count, len(items)))
    return items


def int_bytes(k):
    if k < 0:
        raise ValueError("negative")
    return k.to_bytes(max(1, (k.bit_length() + 7) // 8), "big")


def signed_bytes(k):
    return (b"-" if k < 0 else b"+") + int_bytes(abs(k))


def bytes_signed(data):
    if len(data) < 2 or data[:1] not in (b"-", b"+"):
        raise DecodeError("bad signed integer")
    k = int.from_bytes(data[1:], "big")
    if len(data) > 2 and data[1] == 0:
        raise DecodeError("non-canonical integer")
    return -k if data[:1] == b"-" else k


def bytes_int(data):
    if not data or (len(data) > 1 and data[0] == 0):
        raise DecodeError("non-canonical integer")
    return int.from_bytes(data, "big")


# ------------------------------------------------------------- domains

class GroupDomain:
    """Multiplicative group from module groups."""

    def __init__(self, group):
        self.group = group
        self.order = group.order
        self.identity = group.identity

    def op(self, a, b):
        return a * b

    def power(self, a, k):
        return a ** k

    def inv(self, a):
        return a.inverse()

    def random(self, rng):
        return self.group.random(rng)

    def encode(self, a):
        return bytes(a)

    def decode(self, data):
        return self.group.decode(data)

    def eq(self, a, b):
        return bytes(a) == bytes(b)

    def describe(self):
        return self.group.name.encode()


class ScalarDomain:
    """(Z_l, +)."""

    def __init__(self, order, size=None):
        self.order = order
        self.size = size or (order.bit_length() + 7) // 8
        self.identity = 0

    def op(self, a, b):
        return (a + b) % self.order

    def power(self, a, k):
        return a * k % self.order

    def inv(self, a):
        return -a % self.order

    def random(self, rng):
        return rng.randrange(self.order)

    def encode(self, a):
        return (a % self.order).to_bytes(self.size, "big")

    def decode(self, data):
        if len(data) != self.size:
            raise DecodeError("bad scalar width")
        a = int.from_bytes(data, "big")
        if a >= self.order:
            raise DecodeError("scalar out of range")
        return a

    def eq(self, a, b):
        return (a - b) % self.order == 0

    def describe(self):
        return b"Z/" + int_bytes(self.order)


class IntegerDomain:
    """(Z, +), sampled from [0, bound); ``order`` is the group order the
    integers are later reduced by."""

    def __init__(self, bound, order):
        self.bound = bound
        self.order = order
        self.identity = 0

    def op(self, a, b):
        return a + b

    def power(self, a, k):
        return a * k

    def inv(self, a):
        return -a

    def random(self, rng):
        return rng.randrange(self.bound)

    def encode(self, a):
        return signed_bytes(a)

    def decode(self, data):
        return bytes_signed(data)

    def eq(self, a, b):
        return a == b

    def describe(self):
        return b"Z<" + int_bytes(self.bound)


class UnitsDomain:
    """(Z_n^*, .)"""

    def __init__(self, n):
        self.n = n
        self.size = (n.bit_length() + 7) // 8
        self.identity = 1
        self.order = None

    def op(self, a, b):
        return a * b % self.n

    def power(self, a, k):
        return int(gmpy2.powmod(a, k, self.n))

    def inv(self, a):
        return int(gmpy2.invert(a, self.n))

    def random(self, rng):
        while True:
            a = rng.randrange(1, self.n)
            if math.gcd(a, self.n) == 1:
                return a

    def encode(self, a):
        return int(a % self.n).to_bytes(self.size, "big")

    def decode(self, data):
        if len(data) != self.size:
            raise DecodeError("bad residue width")
        a = int.from_bytes(data, "big")
        if not 0 < a < self.n or math.gcd(a, self.n) != 1:
            raise DecodeError("not a unit")
        return a

    def eq(self, a, b):
        return (a - b) % self.n == 0

    def describe(self):
        return b"U/" + int_bytes(self.n)


class ProductDomain:
    def __init__(self, *parts):
        self.parts = parts
        self.identity = tuple(d.identity for d in parts)
        self.order = parts[0].order

    def op(self, a, b):
        return tuple(d.op(x, y) for d, x, y in zip(self.parts, a, b))

    def power(self, a, k):
        return tuple(d.power(x, k) for d, x in zip(self.parts, a))

    def inv(self, a):
        return tuple(d.inv(x) for d, x in zip(self.parts, a))

    def random(self, rng):
        return tuple(d.random(rng) for d in self.parts)

    def encode(self, a):
        return pack(*[d.encode(x) for d, x in zip(self.parts, a)])

    def decode(self, data):
        items = unpack(data, len(self.parts))
        return tuple(d.decode(x) for d, x in zip(self.parts, items))

    def eq(self, a, b):
        return all(d.eq(x, y) for d, x, y in zip(self.parts, a, b))

    def describe(self):
        return pack(*[d.describe() for d in self.parts])


# ---------------------------------------------------------------- maps
#
# Each map f: domain -> codomain is a homomorphism.  ``ell`` and ``u``
# give the amplification data: f(u(I)) = I^ell.

class PairingMap:
    """x -> e(x, y): the class-S verification map for BLS."""

    tag = b"pairing"

    def __init__(self, backend, y=None):
        self.backend = backend
        self.y = backend.g2 if y is None else y
        self.domain = GroupDomain(backend.G1)
        self.codomain = GroupDomain(backend.GT)
        self.ell = backend.order

    def __call__(self, x):
        return self.backend.pairing(x, self.y)

    def u(self, I):
        return self.domain.identity

    def describe(self):
        return pack(self.tag, bytes(self.y))


class PowerMap:
    """x -> base^x over scalars or integers (Schnorr, Pedersen's f)."""

    tag = b"power"

    def __init__(self, group, base, domain=None):
        self.base = base
        self.domain = domain or ScalarDomain(group.order)
        self.codomain = GroupDomain(group)
        self.ell = group.order

    def __call__(self, x):
        return self.base ** x

    def u(self, I):
        return 0

    def describe(self):
        return pack(self.tag, bytes(self.base), self.domain.describe())


class PairPowerMap:
    """x -> (b1^x, b2^x); preimage knowledge is discrete-log equality."""

    tag = b"dleq"

    def __init__(self, group, b1, b2):
        self.b1, self.b2 = b1, b2
        self.domain = ScalarDomain(group.order)
        gd = GroupDomain(group)
        self.codomain = ProductDomain(gd, gd)
        self.ell = group.order

    def __call__(self, x):
        return (self.b1 ** x, self.b2 ** x)

    def u(self, I):
        return 0

    def describe(self):
        return pack(self.tag, bytes(self.b1), bytes(self.b2))


# factorizations of live Paillier secret keys, keyed by N.  Holders of
# the key get x^N mod N^2 by CRT, about three times faster.
_FACTORS = weakref.WeakValueDictionary()


def register_factors(n, key):
    _FACTORS[n] = key


def nth_power(x, n):
    """x^N mod N^2."""
    key = _FACTORS.get(n)
    if key is None:
        return int(gmpy2.powmod(x, n, n * n))
    p2, q2 = key.p * key.p, key.q * key.q
    # adding phi back keeps the exponent >= 2, so multiples of p stay exact
    fp, fq = key.p * (key.p - 1), key.q * (key.q - 1)
    a = gmpy2.powmod(x, n % fp + fp, p2)
    b = gmpy2.powmod(x, n % fq + fq, q2)
    return int(a + p2 * ((b - a) * gmpy2.invert(p2, q2) % q2))


class NthPowerMap:
    """x -> x^N mod N^2 on Z_N^*; preimage knowledge is an N-th root."""

    tag = b"nth-root"

    def __init__(self, n):
        self.n = n
        self.domain = UnitsDomain(n)
        self.codomain = UnitsDomain(n * n)
        self.ell = n

    def __call__(self, x):
        return nth_power(x, self.n)

    def u(self, I):
        # (I mod N)^N = I^N mod N^2
        return I % self.n

    def describe(self):
        return pack(self.tag, int_bytes(self.n))


class IdentityMap:
    tag = b"identity"

    def __init__(self, group):
        self.domain = GroupDomain(group)
        self.codomain = self.domain
        self.ell = group.order

    def __call__(self, x):
        return x

    def u(self, I):
        return self.domain.identity

    def describe(self):
        return pack(self.tag, self.domain.describe())


# ---------------------------------------------------------- transcripts

@dataclass
class Transcript:
    """(commitment, challenge, response) plus, for two-stage statements,
    the inner challenge and inner response (the inner commitment travels
    inside the response)."""

    commitment: object
    challenge: int
    response: object
    inner_challenge: object = None
    inner_response: object = None

    @property
    def inner(self):
        if self.inner_challenge is None:
            return None
        z, path, inner_com = self.response
        return Transcript(inner_com, self.inner_challenge, self.inner_response)


class ExtractionError(Exception):
    pass


def egcd(a, b):
    if b == 0:
        return a, 1, 0
    g, x, y = egcd(b, a % b)
    return g, y, x - (a // b) * y


def amplified_extract(dom, ell, u, z1, b1, z2, b2):
    """s = u^x * (z1^-1 * z2)^y where x*ell + y*(b2 - b1) = 1."""
    if b1 == b2:
        raise ExtractionError("equal challenges")
    g, x, y = egcd(ell, b2 - b1)
    if g == -1:
        x, y = -x, -y
    elif g != 1:
        raise ExtractionError("gcd(l, b2 - b1) != 1")
    diff = dom.op(dom.inv(z1), z2)
    return dom.op(dom.power(u, x), dom.power(diff, y))


# ---------------------------------------------------------- statements

class Statement:
    stages = 1
    space = 2
    inner_space = None
    kind = 0

    def to_bytes(self):
        raise NotImplementedError

    def respond_full(self, wit, state, com, b, rng):
        return self.respond(wit, state, b)

    def verify(self, tr):
        try:
            return self.check(tr)
        except (DecodeError, TypeError, ValueError, ZeroDivisionError):
            return False

    def encode_transcript(self, tr):
        parts = [bytes([self.kind]), pack(self.to_bytes()),
                 pack(self.encode_com(tr.commitment)),
                 pack(int_bytes(tr.challenge)),
                 pack(self.encode_resp(tr.response))]
        if self.stages == 2:
            parts.append(pack(int_bytes(tr.inner_challenge)))
            parts.append(pack(self.encode_final(tr.inner_response)))
        return b"".join(parts)

    def decode_transcript(self, data):
        if not data or data[0] != self.kind:
            raise DecodeError("statement kind mismatch")
        n = 5 if self.stages == 2 else 3
        items = unpack(data[1:])
        if len(items) != n + 1:
            raise DecodeError("unexpected transcript depth")
        if items[0] != self.to_bytes():
            raise DecodeError("transcript is for a different statement")
        com = self.decode_com(items[1])
        b = bytes_int(items[2])
        resp = self.decode_resp(items[3], com, b)
        if self.stages == 2:
            c = bytes_int(items[4])
            w = self.decode_final(items[5], com, b, resp)
            return Transcript(com, b, resp, c, w)
        return Transcript(com, b, resp)


class HomPreimage(Statement):
    """{s : f(s) = I}: commit t = f(s'), respond z = s' * s^b, accept iff
    f(z) = t * I^b."""

    kind = 1

    def __init__(self, f, I, space=2, label=b""):
        self.f = f
        self.I = I
        self.space = space
        self.label = label

    def to_bytes(self):
        return pack(b"hom", self.label, self.f.describe(),
                    self.f.codomain.encode(self.I), int_bytes(self.space))

    def relation(self, s):
        return self.f.codomain.eq(self.f(s), self.I)

    def with_space(self, space):
        return HomPreimage(self.f, self.I, space, self.label)

    def commit(self, wit, rng):
        s1 = self.f.domain.random(rng)
        return s1, self.f(s1)

    def respond(self, wit, state, b):
        d = self.f.domain
        return None, d.op(state, d.power(wit, b))

    def check(self, tr):
        b = tr.challenge
        if not 0 <= b < self.space:
            return False
        cod = self.f.codomain
        # f(z) I^-b = t, so a received commitment is only ever compared
        lhs = cod.op(self.f(tr.response), cod.inv(cod.power(self.I, b)))
        return cod.eq(lhs, tr.commitment)

    def simulate(self, b, c, rng):
        cod = self.f.codomain
        z = self.f.domain.random(rng)
        t = cod.op(self.f(z), cod.inv(cod.power(self.I, b)))
        return Transcript(t, b, z)

    def extract(self, tr1, tr2):
        if not (self.verify(tr1) and self.verify(tr2)):
            raise ExtractionError("non-accepting transcript")
        if not self.f.codomain.eq(tr1.commitment, tr2.commitment):
            raise ExtractionError("commitments differ")
        return amplified_extract(self.f.domain, self.f.ell, self.f.u(self.I),
                                 tr1.response, tr1.challenge,
                                 tr2.response, tr2.challenge)

    def encode_com(self, com):
        return self.f.codomain.encode(com)

    def decode_com(self, data):
        return self.f.codomain.decode(data)

    def encode_resp(self, resp):
        return self.f.domain.encode(resp)

    def decode_resp(self, data, com, b):
        return self.f.domain.decode(data)


KEY_PATH = 0
RAND_PATH = 1


@dataclass
class EncWitness:
    """Plaintext s together with either the decryption key or the
    encryption randomness of the ciphertext."""

    s: object
    sk: object = None
    rand: object = None


class EncPreimage(Statement):
    """Knowledge of s = Dec(ct), optionally with f(s) = I (confirm) or
    f(s) != I (deny).

    f is None  -> decryption knowledge;
    mode "confirm" -> t1 = f(s'), accept iff f(z) = t1 * I^b;
    mode "deny"    -> accept iff f(z) = t1 when b = 0 and f(z) != t1 * I^b
                      otherwise.
    In every mode the inner proof shows z = Dec(t2 o ct^b).
    """

    kind = 2
    stages = 2

    def __init__(self, enc, ct, f=None, I=None, mode="confirm", space=2,
                 inner_space=None, label=b""):
        if mode not in ("confirm", "deny"):
            raise ValueError("mode must be confirm or deny")
        self.enc = enc
        self.ct = ct
        self.f = f
        self.I = I
        self.mode = mode
        self.space = space
        self.inner_space = inner_space or enc.inner_space
        self.label = label
        self.msg = enc.msg_domain

    def to_bytes(self):
        fd = self.f.describe() if self.f else b""
        Ib = self.f.codomain.encode(self.I) if self.f else b""
        return pack(b"enc", self.label, self.mode.encode(), self.enc.describe(),
                    self.enc.encode_ct(self.ct), fd, Ib,
                    int_bytes(self.space), int_bytes(self.inner_space))

    def relation(self, s):
        if self.f is None:
            return True
        ok = self.f.codomain.eq(self.f(s), self.I)
        return ok if self.mode == "confirm" else not ok

    def _t1_check(self, t1, z, b):
        cod = self.f.codomain
        fz = self.f(z)
        if b == 0:
            return cod.eq(fz, t1)
        same = cod.eq(cod.op(fz, cod.inv(cod.power(self.I, b))), t1)
        return same if self.mode == "confirm" else not same

    def commit(self, wit, rng):
        s1 = self.msg.random(rng)
        a1 = self.enc.random_rand(rng)
        t2 = self.enc.encrypt(s1, a1)
        if self.f is None:
            return (s1, a1), (t2,)
        return (s1, a1), (self.f(s1), t2)

    def combined(self, t2, b):
        e = self.enc
        return e.ct_op(t2, e.ct_pow(self.ct, b))

    def respond_full(self, wit, state, com, b, rng):
        s1, a1 = state
        m = self.msg
        z = m.op(s1, m.power(wit.s, b))
        ct_b = self.combined(com[-1], b)
        if wit.rand is not None:
            e = self.enc
            rho = e.rand_op(a1, e.rand_pow(wit.rand, b))
            path, inner, iw = e.inner_for_rand(ct_b, z, rho, self.inner_space)
        else:
            path, inner, iw = self.enc.inner_for_key(ct_b, z, wit.sk,
                                                     self.inner_space)
        istate, icom = inner.commit(iw, rng)
        return (inner, iw, istate), (z, path, icom)

    def finish(self, wit, state, c):
        inner, iw, istate = state
        return inner.respond(iw, istate, c)[1]

    def inner_statement(self, com, b, resp):
        z, path, icom = resp
        return self.enc.inner_statement(self.combined(com[-1], b), z, path,
                                        self.inner_space)

    def check(self, tr):
        b = tr.challenge
        if not 0 <= b < self.space:
            return False
        z, path, icom = tr.response
        if not self.enc.response_ok(z, self.space):
            return False
        if self.f is not None and not self._t1_check(tr.commitment[0], z, b):
            return False
        inner = self.inner_statement(tr.commitment, b, tr.response)
        if inner is None:
            return False
        return inner.verify(Transcript(icom, tr.inner_challenge,
                                       tr.inner_response))

    def simulate(self, b, c, rng, path=KEY_PATH):
        e = self.enc
        z = e.sim_response(rng, self.space)
        a = e.random_rand(rng)
        t2 = e.ct_op(e.encrypt(z, a), e.ct_inv(e.ct_pow(self.ct, b)))
        com = (t2,)
        if self.f is not None:
            cod = self.f.codomain
            fz = self.f(z)
            if self.mode == "confirm" or b == 0:
                t1 = cod.op(fz, cod.inv(cod.power(self.I, b)))
            else:
                # denial: t1 uniform in f(G), independent of z
                bad = cod.op(fz, cod.inv(cod.power(self.I, b)))
                while True:
                    t1 = self.f(self.msg.random(rng))
                    if not cod.eq(t1, bad):
                        break
            com = (t1, t2)
        inner = e.inner_statement(e.ct_op(t2, e.ct_pow(self.ct, b)), z, path,
                                  self.inner_space)
        itr = inner.simulate(c, None, rng)
        return Transcript(com, b, (z, path, itr.commitment), c, itr.response)

    def extract(self, tr1, tr2):
        if not (self.verify(tr1) and self.verify(tr2)):
            raise ExtractionError("non-accepting transcript")
        if pack(*[self._enc_item(i, x) for i, x in enumerate(tr1.commitment)]) \
                != pack(*[self._enc_item(i, x)
                          for i, x in enumerate(tr2.commitment)]):
            raise ExtractionError("commitments differ")
        ell = self.f.ell if self.f is not None else self.msg.order
        u = self.f.u(self.I) if self.f is not None else self.msg.identity
        return amplified_extract(self.msg, ell, u,
                                 tr1.response[0], tr1.challenge,
                                 tr2.response[0], tr2.challenge)

    def _enc_item(self, i, x):
        if self.f is not None and i == 0:
            return self.f.codomain.encode(x)
        return self.enc.encode_ct(x)

    def encode_com(self, com):
        return pack(*[self._enc_item(i, x) for i, x in enumerate(com)])

    def decode_com(self, data):
        n = 1 if self.f is None else 2
        items = unpack(data, n)
        if self.f is None:
            return (self.enc.decode_ct(items[0]),)
        return (self.f.codomain.decode(items[0]), self.enc.decode_ct(items[1]))

    def encode_resp(self, resp):
        z, path, icom = resp
        inner = self._inner_shape(path)
        return pack(self.msg.encode(z), bytes([path]), inner.encode_com(icom))

    def decode_resp(self, data, com, b):
        zb, pb, ib = unpack(data, 3)
        z = self.msg.decode(zb)
        if len(pb) != 1 or pb[0] not in (KEY_PATH, RAND_PATH):
            raise DecodeError("bad inner path")
        path = pb[0]
        icom = self._inner_shape(path).decode_com(ib)
        return (z, path, icom)

    def encode_final(self, w):
        return self._final_domain().encode(w)

    def decode_final(self, data, com, b, resp):
        return self._final_domain().decode(data)

    def _inner_shape(self, path):
        return self.enc.inner_shape(path, self.inner_space)

    def _final_domain(self):
        return self.enc.inner_witness_domain


class TwoRound(Statement):
    """Run a one-stage statement twice: once on b, again (over the inner
    challenge space) on c.  Lets a one-stage branch sit next to a
    two-stage one inside a disjunction."""

    kind = 3
    stages = 2

    def __init__(self, stmt, inner_space):
        self.stmt = stmt
        self.second = stmt.with_space(inner_space)
        self.space = stmt.space
        self.inner_space = inner_space

    def to_bytes(self):
        return pack(b"twice", self.stmt.to_bytes(), int_bytes(self.inner_space))

    def commit(self, wit, rng):
        return self.stmt.commit(wit, rng)

    def respond_full(self, wit, state, com, b, rng):
        _, z = self.stmt.respond(wit, state, b)
        st2, com2 = self.second.commit(wit, rng)
        return st2, (z, 0, com2)

    def finish(self, wit, state, c):
        return self.second.respond(wit, state, c)[1]

    def check(self, tr):
        z, _, com2 = tr.response
        return (self.stmt.verify(Transcript(tr.commitment, tr.challenge, z))
                and self.second.verify(Transcript(com2, tr.inner_challenge,
                                                  tr.inner_response)))

    def simulate(self, b, c, rng):
        t1 = self.stmt.simulate(b, None, rng)
        t2 = self.second.simulate(c, None, rng)
        return Transcript(t1.commitment, b, (t1.response, 0, t2.commitment),
                          c, t2.response)

    def encode_com(self, com):
        return self.stmt.encode_com(com)

    def decode_com(self, data):
        return self.stmt.decode_com(data)

    def encode_resp(self, resp):
        z, _, com2 = resp
        return pack(self.stmt.encode_resp(z), self.stmt.encode_com(com2))

    def decode_resp(self, data, com, b):
        zb, cb = unpack(data, 2)
        return (self.stmt.decode_resp(zb, com, b), 0, self.stmt.decode_com(cb))

    def encode_final(self, w):
        return self.stmt.encode_resp(w)

    def decode_final(self, data, com, b, resp):
        return self.stmt.decode_resp(data, None, None)


class Conjunction(Statement):
    """AND of statements under one shared challenge (and one shared inner
    challenge for the two-stage parts)."""

    kind = 4

    def __init__(self, parts):
        self.parts = list(parts)
        spaces = {p.space for p in self.parts}
        if len(spaces) != 1:
            raise ValueError("conjunction parts need one challenge space")
        self.space = spaces.pop()
        inner = {p.inner_space for p in self.parts if p.stages == 2}
        if len(inner) > 1:
            raise ValueError("two-stage parts need one inner space")
        self.stages = 2 if inner else 1
        self.inner_space = inner.pop() if inner else None

    def to_bytes(self):
        return pack(b"and", *[p.to_bytes() for p in self.parts])

    def commit(self, wits, rng):
        pairs = [p.commit(w, rng) for p, w in zip(self.parts, wits)]
        return [s for s, _ in pairs], tuple(c for _, c in pairs)

    def respond_full(self, wits, states, com, b, rng):
        sts, resps = [], []
        for p, w, st, cm in zip(self.parts, wits, states, com):
            if p.stages == 2:
                s2, r = p.respond_full(w, st, cm, b, rng)
            else:
                s2, r = p.respond(w, st, b)
            sts.append(s2)
            resps.append(r)
        return sts, tuple(resps)

    def finish(self, wits, states, c):
        return tuple(p.finish(w, st, c) if p.stages == 2 else None
                     for p, w, st in zip(self.parts, wits, states))

    def split(self, tr):
        out = []
        for i, p in enumerate(self.parts):
            if p.stages == 2:
                out.append(Transcript(tr.commitment[i], tr.challenge,
                                      tr.response[i], tr.inner_challenge,
                                      tr.inner_response[i]))
            else:
                out.append(Transcript(tr.commitment[i], tr.challenge,
                                      tr.response[i]))
        return out

    def check(self, tr):
        if len(tr.commitment) != len(self.parts):
            return False
        return all(p.verify(t) for p, t in zip(self.parts, self.split(tr)))

    def simulate(self, b, c, rng):
        trs = [p.simulate(b, c, rng) for p in self.parts]
        return Transcript(tuple(t.commitment for t in trs), b,
                          tuple(t.response for t in trs), c,
                          tuple(t.inner_response for t in trs)
                          if self.stages == 2 else None)

    def encode_com(self, com):
        return pack(*[p.encode_com(c) for p, c in zip(self.parts, com)])

    def decode_com(self, data):
        items = unpack(data, len(self.parts))
        return tuple(p.decode_com(x) for p, x in zip(self.parts, items))

    def encode_resp(self, resp):
        return pack(*[p.encode_resp(r) for p, r in zip(self.parts, resp)])

    def decode_resp(self, data, com, b):
        items = unpack(data, len(self.parts))
        return tuple(p.decode_resp(x, c, b)
                     for p, x, c in zip(self.parts, items, com))

    def encode_final(self, w):
        return pack(*[p.encode_final(x) if p.stages == 2 else b""
                      for p, x in zip(self.parts, w)])

    def decode_final(self, data, com, b, resp):
        items = unpack(data, len(self.parts))
        return tuple(p.decode_final(x, cm, b, r) if p.stages == 2 else None
                     for p, x, cm, r in zip(self.parts, items, com, resp))


class Disjunction(Statement):
    """OR of two statements.  The prover simulates the branch it has no
    witness for and splits each verifier challenge as b = bA + bB mod |C|."""

    kind = 5

    def __init__(self, a, b):
        if a.stages != b.stages:
            inner = a.inner_space or b.inner_space
            a = a if a.stages == 2 else TwoRound(a, inner)
            b = b if b.stages == 2 else TwoRound(b, inner)
        if a.space != b.space or a.inner_space != b.inner_space:
            raise ValueError("branches need matching challenge spaces")
        self.branches = (a, b)
        self.space = a.space
        self.inner_space = a.inner_space
        self.stages = a.stages

    def to_bytes(self):
        return pack(b"or", self.branches[0].to_bytes(),
                    self.branches[1].to_bytes())

    def commit(self, wit, rng):
        """wit = (index, witness) for the branch the prover can prove."""
        i, w = wit
        j = 1 - i
        fake = self.branches[j]
        bj = rng.randrange(self.space)
        cj = rng.randrange(self.inner_space) if self.stages == 2 else None
        sim = fake.simulate(bj, cj, rng)
        st, com = self.branches[i].commit(w, rng)
        coms = [None, None]
        coms[i], coms[j] = com, sim.commitment
        return (st, sim, com), tuple(coms)

    def _respond(self, wit, state, b, rng):
        i, w = wit
        st, sim, com = state
        real = self.branches[i]
        bi = (b - sim.challenge) % self.space
        if real.stages == 2:
            st2, r = real.respond_full(w, st, com, bi, rng)
        else:
            st2, r = real.respond(w, st, bi)
        bs = [None, None]
        rs = [None, None]
        bs[i], bs[1 - i] = bi, sim.challenge
        rs[i], rs[1 - i] = r, sim.response
        return (st2, sim), (bs[0], rs[0], rs[1])

    def respond(self, wit, state, b):
        return self._respond(wit, state, b, None)

    def respond_full(self, wit, state, com, b, rng):
        return self._respond(wit, state, b, rng)

    def finish(self, wit, state, c):
        i, w = wit
        st2, sim = state
        ci = (c - sim.inner_challenge) % self.inner_space
        wi = self.branches[i].finish(w, st2, ci)
        cs = [None, None]
        ws = [None, None]
        cs[i], cs[1 - i] = ci, sim.inner_challenge
        ws[i], ws[1 - i] = wi, sim.inner_response
        return (cs[0], ws[0], ws[1])

    def split(self, tr):
        b0, r0, r1 = tr.response
        b1 = (tr.challenge - b0) % self.space
        if self.stages == 2:
            c0, w0, w1 = tr.inner_response
            c1 = (tr.inner_challenge - c0) % self.inner_space
            return (Transcript(tr.commitment[0], b0, r0, c0, w0),
                    Transcript(tr.commitment[1], b1, r1, c1, w1))
        return (Transcript(tr.commitment[0], b0, r0),
                Transcript(tr.commitment[1], b1, r1))

    def check(self, tr):
        b0 = tr.response[0]
        if not 0 <= b0 < self.space or not 0 <= tr.challenge < self.space:
            return False
        if self.stages == 2:
            c0 = tr.inner_response[0]
            if not 0 <= c0 < self.inner_space:
                return False
        t0, t1 = self.split(tr)
        return self.branches[0].verify(t0) and self.branches[1].verify(t1)

    def simulate(self, b, c, rng):
        b0 = rng.randrange(self.space)
        c0 = rng.randrange(self.inner_space) if self.stages == 2 else None
        s0 = self.branches[0].simulate(b0, c0, rng)
        c1 = (c - c0) % self.inner_space if self.stages == 2 else None
        s1 = self.branches[1].simulate((b - b0) % self.space, c1, rng)
        resp = (b0, s0.response, s1.response)
        fin = (c0, s0.inner_response, s1.inner_response) \
            if self.stages == 2 else None
        return Transcript((s0.commitment, s1.commitment), b, resp, c, fin)

    def encode_com(self, com):
        return pack(self.branches[0].encode_com(com[0]),
                    self.branches[1].encode_com(com[1]))

    def decode_com(self, data):
        a, b = unpack(data, 2)
        return (self.branches[0].decode_com(a), self.branches[1].decode_com(b))

    def encode_resp(self, resp):
        b0, r0, r1 = resp
        return pack(int_bytes(b0), self.branches[0].encode_resp(r0),
                    self.branches[1].encode_resp(r1))

    def decode_resp(self, data, com, b):
        bb, r0, r1 = unpack(data, 3)
        b0 = bytes_int(bb)
        return (b0, self.branches[0].decode_resp(r0, com[0], b0),
                self.branches[1].decode_resp(r1, com[1], None))

    def encode_final(self, fin):
        c0, w0, w1 = fin
        return pack(int_bytes(c0), self.branches[0].encode_final(w0),
                    self.branches[1].encode_final(w1))

    def decode_final(self, data, com, b, resp):
        cb, w0, w1 = unpack(data, 3)
        return (bytes_int(cb),
                self.branches[0].decode_final(w0, com[0], None, resp[1]),
                self.branches[1].decode_final(w1, com[1], None, resp[2]))


# ------------------------------------------------------------ sessions

def _rand_challenge(rng, bound):
    return rng.randrange(bound) if bound else None


class ProverSession:
    """Prover side as a state machine over encoded messages:
    commit() -> respond(b) -> finish(c) (the last only for two stages)."""

    def __init__(self, stmt, wit, rng):
        self.stmt, self.wit, self.rng = stmt, wit, rng
        self.com = None

    def commit(self):
        self.state, self.com = self.stmt.commit(self.wit, self.rng)
        return self.stmt.encode_com(self.com)

    def respond(self, msg):
        b = bytes_int(msg)
        if not 0 <= b < self.stmt.space:
            raise DecodeError("challenge outside the challenge space")
        self.state, resp = self.stmt.respond_full(self.wit, self.state,
                                                  self.com, b, self.rng)
        return self.stmt.encode_resp(resp)

    def finish(self, msg):
        c = bytes_int(msg)
        if not 0 <= c < self.stmt.inner_space:
            raise DecodeError("inner challenge outside the challenge space")
        return self.stmt.encode_final(self.stmt.finish(self.wit, self.state, c))


class VerifierSession:
    def __init__(self, stmt, rng):
        self.stmt, self.rng = stmt, rng
        self.transcript = None
        self.verdict = None

    def challenge(self, msg):
        self.com = self.stmt.decode_com(msg)
        self.b = self.rng.randrange(self.stmt.space)
        return int_bytes(self.b)

    def inner_challenge(self, msg):
        """Returns the inner challenge, or the verdict for one-stage
        statements (then there is nothing more to send)."""
        self.resp = self.stmt.decode_resp(msg, self.com, self.b)
        if self.stmt.stages == 1:
            self.transcript = Transcript(self.com, self.b, self.resp)
            self.verdict = self.stmt.verify(self.transcript)
            return None
        self.c = self.rng.randrange(self.stmt.inner_space)
        return int_bytes(self.c)

    def finish(self, msg):
        w = self.stmt.decode_final(msg, self.com, self.b, self.resp)
        self.transcript = Transcript(self.com, self.b, self.resp, self.c, w)
        self.verdict = self.stmt.verify(self.transcript)
        return self.verdict


def run(stmt, wit, rng, vrng=None):
    """Both roles in-process, every message passing through its encoding.
    Returns (verdict, transcript)."""
    p = ProverSession(stmt, wit, rng)
    v = VerifierSession(stmt, vrng or rng)
    try:
        c = v.inner_challenge(p.respond(v.challenge(p.commit())))
        if c is not None:
            v.finish(p.finish(c))
    except DecodeError:
        return False, v.transcript
    return v.verdict, v.transcript


def prove(stmt, wit, rng, b=None, c=None):
    """One honest transcript at given (or random) challenges."""
    return fork(stmt, wit, rng, [(b, c)])[0]


def fork(stmt, wit, rng, challenges):
    """Rewind an honest prover: one commitment, one transcript per
    (b, c) pair.  Used by the extractor tests."""
    state, com = stmt.commit(wit, rng)
    out = []
    for b, c in challenges:
        if b is None:
            b = rng.randrange(stmt.space)
        st2, resp = stmt.respond_full(wit, state, com, b, rng)
        if stmt.stages == 2:
            if c is None:
                c = rng.randrange(stmt.inner_space)
            out.append(Transcript(com, b, resp, c, stmt.finish(wit, st2, c)))
        else:
            out.append(Transcript(com, b, resp))
    return out


def extract(stmt, tr1, tr2):
    return stmt.extract(tr1, tr2)


def simulate(stmt, b, c=None, rng=None):
    if stmt.stages == 2 and c is None:
        c = rng.randrange(stmt.inner_space)
    return stmt.simulate(b, c, rng)


def or_compose(stmt_a, stmt_b):
    return Disjunction(stmt_a, stmt_b)


# ------------------------------------------------------- hardened mode

class HardenedVerifier(VerifierSession):
    """Optional mode for concurrent settings: the verifier commits to its
    challenges before seeing the prover's first message and opens each
    one as it is used, so challenges cannot depend on concurrent
    sessions."""

    def precommit(self):
        self.b = self.rng.randrange(self.stmt.space)
        self.c = _rand_challenge(self.rng, self.stmt.inner_space)
        self.nonces = [self.rng.getrandbits(256).to_bytes(32, "big")
                       for _ in range(2)]
        return pack(_challenge_digest(self.nonces[0], self.b),
                    _challenge_digest(self.nonces[1], self.c or 0))

    def challenge(self, msg):
        self.com = self.stmt.decode_com(msg)
        return pack(self.nonces[0], int_bytes(self.b))

    def inner_challenge(self, msg):
        self.resp = self.stmt.decode_resp(msg, self.com, self.b)
        if self.stmt.stages == 1:
            self.transcript = Transcript(self.com, self.b, self.resp)
            self.verdict = self.stmt.verify(self.transcript)
            return None
        return pack(self.nonces[1], int_bytes(self.c))


def _challenge_digest(nonce, x):
    return sha256(b"osig/challenge-commit", nonce, int_bytes(x))


class HardenedProver(ProverSession):
    def receive_precommit(self, digest):
        self.digests = unpack(digest, 2)

    def _open(self, msg, i):
        nonce, xb = unpack(msg, 2)
        if _challenge_digest(nonce, bytes_int(xb)) != self.digests[i]:
            raise DecodeError("challenge does not match the precommitment")
        return xb

    def respond(self, msg):
        return ProverSession.respond(self, self._open(msg, 0))

    def finish(self, msg):
        return ProverSession.finish(self, self._open(msg, 1))


def run_hardened(stmt, wit, rng, vrng=None):
    p = HardenedProver(stmt, wit, rng)
    v = HardenedVerifier(stmt, vrng or rng)
    p.receive_precommit(v.precommit())
    try:
        c = v.inner_challenge(p.respond(v.challenge(p.commit())))
        if c is not None:
            v.finish(p.finish(c))
    except DecodeError:
        return False, v.transcript
    return v.verdict, v.transcript


# -------------------------------------------------------- fiat-shamir

FS_TAG = b"osig/fs/v1"


def _fs_b(stmt, tag, com_b):
    return hash_to_int(tag + b"/b", pack(stmt.to_bytes(), com_b)) % stmt.space


def _fs_c(stmt, tag, com_b, b, resp_b):
    return hash_to_int(tag + b"/c", pack(stmt.to_bytes(), com_b, int_bytes(b),
                                         resp_b)) % stmt.inner_space


def fs_prove(stmt, wit, rng, tag=FS_TAG):
    """Non-interactive proof bytes: commitment | response [| inner]."""
    state, com = stmt.commit(wit, rng)
    com_b = stmt.encode_com(com)
    b = _fs_b(stmt, tag, com_b)
    st2, resp = stmt.respond_full(wit, state, com, b, rng)
    resp_b = stmt.encode_resp(resp)
    if stmt.stages == 1:
        return pack(com_b, resp_b)
    c = _fs_c(stmt, tag, com_b, b, resp_b)
    return pack(com_b, resp_b, stmt.encode_final(stmt.finish(wit, st2, c)))


def fs_transcript(stmt, proof, tag=FS_TAG):
    """Decode a proof into a transcript with recomputed challenges; raises
    DecodeError on any non-canonical byte."""
    items = unpack(proof, 2 if stmt.stages == 1 else 3)
    com = stmt.decode_com(items[0])
    if stmt.encode_com(com) != items[0]:
        raise DecodeError("non-canonical commitment")
    b = _fs_b(stmt, tag, items[0])
    resp = stmt.decode_resp(items[1], com, b)
    if stmt.encode_resp(resp) != items[1]:
        raise DecodeError("non-canonical response")
    if stmt.stages == 1:
        return Transcript(com, b, resp)
    c = _fs_c(stmt, tag, items[0], b, items[1])
    w = stmt.decode_final(items[2], com, b, resp)
    if stmt.encode_final(w) != items[2]:
        raise DecodeError("non-canonical final response")
    return Transcript(com, b, resp, c, w)


def fs_verify(stmt, proof, tag=FS_TAG):
    try:
        return stmt.verify(fs_transcript(stmt, proof, tag))
    except (DecodeError, TypeError, ValueError, ZeroDivisionError):
        return False


# ------------------------------------------------------ cheating prover

class CheatingProver:
    """Prover without a witness that bets on the outer challenge.

    It prepares a commitment that can be answered at ``guess`` only.  For
    two-stage statements it keeps the randomness of the combined
    ciphertext at the guessed challenge, so the inner proof is then
    honest; at any other challenge it sends garbage."""

    def __init__(self, stmt, guess, rng):
        self.stmt, self.guess, self.rng = stmt, guess, rng
        if isinstance(stmt, HomPreimage):
            self.sim = stmt.simulate(guess, None, rng)
            self.com = self.sim.commitment
        elif isinstance(stmt, EncPreimage):
            e = stmt.enc
            self.z = e.sim_response(rng, stmt.space)
            self.a = e.random_rand(rng)
            t2 = e.ct_op(e.encrypt(self.z, self.a),
                         e.ct_inv(e.ct_pow(stmt.ct, guess)))
            com = (t2,)
            if stmt.f is not None:
                cod = stmt.f.codomain
                t1 = cod.op(stmt.f(self.z), cod.inv(cod.power(stmt.I, guess)))
                if stmt.mode == "deny" and guess != 0:
                    # any t1 other than f(z) I^-b passes the inequality
                    t1 = cod.op(t1, stmt.f(stmt.msg.random(rng)))
                com = (t1, t2)
            self.com = com
        else:
            raise TypeError("no cheating strategy for %r" % type(stmt))

    def respond(self, b):
        stmt = self.stmt
        if isinstance(stmt, HomPreimage):
            if b == self.guess:
                return self.sim.response
            return stmt.f.domain.random(self.rng)
        z = self.z if b == self.guess else stmt.enc.sim_response(self.rng,
                                                                 stmt.space)
        ct_b = stmt.combined(self.com[-1], b)
        path, inner, iw = stmt.enc.inner_for_rand(ct_b, z, self.a,
                                                  stmt.inner_space)
        self.inner, self.iw = inner, iw
        self.istate, icom = inner.commit(iw, self.rng)
        return (z, path, icom)

    def finish(self, c):
        return self.inner.respond(self.iw, self.istate, c)[1]

    def run(self, vrng):
        stmt = self.stmt
        b = vrng.randrange(stmt.space)
        resp = self.respond(b)
        if stmt.stages == 1:
            tr = Transcript(self.com, b, resp)
        else:
            c = vrng.randrange(stmt.inner_space)
            tr = Transcript(self.com, b, resp, c, self.finish(c))
        return stmt.verify(tr), tr
