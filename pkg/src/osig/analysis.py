"""Attacks and the security-game harness.

The harness owns keys, the challenge bit and the post-challenge
restrictions; adversaries only see oracle objects.  Every trial draws its
coins from ``seeded_rng(seed, label, index)`` so reports are reproducible.

Also here: the Damgard-Pedersen undeniable signature with its DDH
attack and repair, the commit/encrypt mixing game, the cheating-prover
rate helper and exact (enumerated) zero-knowledge checks for the toy
backend.
"""

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
import math
import random

import gmpy2

from . import sigma
from .cdcs import Refused, get_scheme
from .groups import get_backend, hash_to_int, seeded_rng
from .primitives import (bls_sign, dem_decrypt, elgamal_decrypt,
                         paillier_encrypt, paillier_keygen, pedersen_commit,
                         pedersen_params)
from .signcrypt import EtStE

Z95 = 1.959963984540054


def wilson(k, n, z=Z95):
    """Wilson score interval for a binomial proportion."""
    if n == 0:
        return 0.0, 1.0
    p = k / n
    den = 1 + z * z / n
    mid = (p + z * z / (2 * n)) / den
    half = z * math.sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / den
    # the endpoints are exact at k = 0 and k = n; avoid float residue
    lo = 0.0 if k == 0 else max(0.0, mid - half)
    hi = 1.0 if k == n else min(1.0, mid + half)
    return lo, hi


@dataclass
class GameReport:
    scheme: str
    experiment: str
    trials: int
    wins: int
    disqualified: int = 0
    distinguishing: bool = True
    exact: object = None  # exact advantage, when computed by enumeration
    notes: dict = field(default_factory=dict)

    @property
    def rate(self):
        return self.wins / self.trials if self.trials else 0.0

    @property
    def advantage(self):
        if self.exact is not None:
            return self.exact
        if self.distinguishing:
            return abs(self.rate - 0.5)
        return self.rate

    @property
    def ci(self):
        return wilson(self.wins, self.trials)

    def advantage_ci(self):
        lo, hi = self.ci
        if not self.distinguishing:
            return lo, hi
        if lo <= 0.5 <= hi:
            return 0.0, max(0.5 - lo, hi - 0.5)
        a, b = abs(lo - 0.5), abs(hi - 0.5)
        return min(a, b), max(a, b)

    def zero_advantage_plausible(self):
        return self.advantage_ci()[0] == 0.0

    def to_record(self):
        lo, hi = self.ci
        return {"scheme": self.scheme, "experiment": self.experiment,
                "trials": self.trials, "wins": self.wins,
                "disqualified": self.disqualified,
                "rate": self.rate, "advantage": float(self.advantage),
                "ci_low": lo, "ci_high": hi, **self.notes}

    def to_text(self):
        lo, hi = self.ci
        adv = self.advantage
        adv_s = str(adv) if isinstance(adv, Fraction) else "%.4f" % adv
        return ("scheme=%s experiment=%s wins=%d/%d disqualified=%d "
                "success=%.4f advantage=%s ci95=[%.4f, %.4f]"
                % (self.scheme, self.experiment, self.wins, self.trials,
                   self.disqualified, self.rate, adv_s, lo, hi))


class Disqualified(Exception):
    """The adversary asked a question the experiment forbids."""


class NotApplicable(ValueError):
    pass


def random_message(bk, rng):
    if bk.tag == 0:
        return rng.choice(bk.message_space())
    return bytes(rng.randrange(256) for _ in range(rng.randrange(1, 33)))


# ------------------------------------------------------- CDCS oracles

class CdcsOracles:
    """Oracle access to one CDCS key pair.  After ``set_challenge`` the
    pairs (mu*, m_i) are off limits for sconfirm, confirm/deny and
    convert; asking raises ``Disqualified``.  sconfirm is only answered
    for signatures issued by the sign oracle (the challenge included in
    the forbidden pairs)."""

    def __init__(self, scheme, keys, rng):
        self.scheme, self.keys, self.rng = scheme, keys, rng
        self.spk, self.cpk = keys.spk, keys.cpk
        self.issued = {}
        self.queried = set()
        self.forbidden = set()
        self.challenge = None

    def _key(self, mu, m):
        return (self.scheme.encode(mu), bytes(m))

    def set_challenge(self, mu, messages):
        self.challenge = mu
        for m in messages:
            self.forbidden.add(self._key(mu, m))

    def _guard(self, mu, m):
        if self._key(mu, m) in self.forbidden:
            raise Disqualified("challenge pair queried")

    def sign(self, m):
        mu, coins = self.scheme.sign(self.keys, m, self.rng)
        self.queried.add(bytes(m))
        self.issued[self._key(mu, m)] = coins
        return mu

    def sconfirm(self, mu, m):
        self._guard(mu, m)
        coins = self.issued.get(self._key(mu, m))
        if coins is None:
            return False
        return self.scheme.sconfirm(self.keys, mu, m, coins, self.rng)[0]

    def confirm_deny(self, mu, m):
        """True if a confirmation ran and was accepted, False if a denial
        ran (or the signature is rejected outright)."""
        self._guard(mu, m)
        sch = self.scheme
        if not hasattr(sch, "confirm_statement"):
            return sch.verify(self.keys, mu, m)
        try:
            return sch.confirm(self.keys, mu, m, self.rng)[0]
        except Refused:
            sch.deny(self.keys, mu, m, self.rng)
            return False

    def convert(self, mu, m):
        self._guard(mu, m)
        return self.scheme.convert(self.keys, mu, m)


class SigncryptOracles:
    def __init__(self, scheme, keys, rng):
        self.scheme, self.keys, self.rng = scheme, keys, rng
        self.spk, self.rpk = keys.spk, keys.rpk
        self.queried = set()
        self.challenge = None
        self.challenge_msg = None

    def _enc(self, mu):
        return self.scheme.encode(mu)

    def set_challenge(self, mu, m):
        self.challenge, self.challenge_msg = mu, m

    def _is_challenge(self, mu):
        return self.challenge is not None and \
            self._enc(mu) == self._enc(self.challenge)

    def _guard_pair(self, mu, m):
        if self._is_challenge(mu) and bytes(m) == self.challenge_msg:
            raise Disqualified("challenge pair queried")

    def signcrypt(self, m):
        self.queried.add(bytes(m))
        return self.scheme.signcrypt(self.keys, m, self.rng)[0]

    def prove_validity(self, mu):
        try:
            return self.scheme.prove_validity(self.keys, mu, "receiver",
                                              self.rng)[0]
        except Refused:
            return False

    def unsigncrypt(self, mu):
        if self._is_challenge(mu):
            raise Disqualified("challenge queried for unsigncryption")
        return self.scheme.unsigncrypt(self.keys.receiver, mu, self.spk)

    def confirm_deny(self, mu, m):
        self._guard_pair(mu, m)
        try:
            return self.scheme.confirm(self.keys, mu, m, self.rng)[0]
        except Refused:
            return False

    def sig_extract(self, mu, m):
        self._guard_pair(mu, m)
        return self.scheme.sig_extract(self.keys, mu, m, self.rng)


# ---------------------------------------------------------- adversaries

class GuessingAdversary:
    name = "guess"

    def choose(self, orc, bk, rng):
        m0 = random_message(bk, rng)
        while True:
            m1 = random_message(bk, rng)
            if m1 != m0:
                return m0, m1

    def choose_one(self, orc, bk, rng):
        return random_message(bk, rng)

    def guess(self, orc, mu, rng):
        return rng.randrange(2)


def _distinct_images(scheme, m0, m1):
    bk = scheme.bk
    if bk.hash_to_g1(m0) == bk.hash_to_g1(m1):
        return False
    return bk.hash_to_scalar(b"osig/commit-msg", m0) != \
        bk.hash_to_scalar(b"osig/commit-msg", m1)


class Fact1Adversary(GuessingAdversary):
    """Maul the challenge into a fresh signature on the same message and
    ask the oracle about (mu', m0)."""

    name = "fact1"

    def __init__(self, oracle="convert"):
        if oracle not in ("convert", "verify"):
            raise ValueError("oracle must be convert or verify")
        self.oracle = oracle

    def choose(self, orc, bk, rng):
        # in the toy group distinct messages can share a hash image; a
        # careful adversary avoids such pairs since they are public
        while True:
            m0, m1 = GuessingAdversary.choose(self, orc, bk, rng)
            if _distinct_images(orc.scheme, m0, m1):
                self.m0 = m0
                return m0, m1

    def _ask(self, orc, mu, m):
        if self.oracle == "convert":
            return orc.convert(mu, m) is not None
        return orc.confirm_deny(mu, m)

    def guess(self, orc, mu, rng):
        mu2 = orc.scheme.rerandomize(orc.cpk, mu, rng)
        return 0 if self._ask(orc, mu2, self.m0) else 1

    # SINV-CMA: 1 means "real signature"
    def choose_one(self, orc, bk, rng):
        self.m0 = random_message(bk, rng)
        return self.m0

    def guess_real(self, orc, mu, rng):
        mu2 = orc.scheme.rerandomize(orc.cpk, mu, rng)
        return 1 if self._ask(orc, mu2, self.m0) else 0


class ForbiddenQueryAdversary(GuessingAdversary):
    """Asks about the challenge pair itself; always disqualified."""

    name = "forbidden"

    def choose(self, orc, bk, rng):
        self.m0, m1 = GuessingAdversary.choose(self, orc, bk, rng)
        return self.m0, m1

    def guess(self, orc, mu, rng):
        return 0 if orc.convert(mu, self.m0) is not None else 1


class MaulingSigncryptAdversary:
    """SIND-CCA: maul the challenge and ask for its unsigncryption."""

    name = "maul"

    def choose_one(self, orc, bk, rng):
        return random_message(bk, rng)

    def guess_real(self, orc, mu, rng):
        part = rng.choice(("e", "kem"))
        mu2 = orc.scheme.rerandomize(orc.rpk, mu, rng, part)
        return 1 if orc.unsigncrypt(mu2) is not None else 0


class GuessingSigncryptAdversary(MaulingSigncryptAdversary):
    name = "guess"

    def guess_real(self, orc, mu, rng):
        return rng.randrange(2)


# forgers: forge(orc, bk, rng) -> (m*, mu*)

class RandomForger:
    name = "random"

    def forge(self, orc, bk, rng):
        m = random_message(bk, rng)
        if isinstance(orc.scheme, EtStE):
            return m, orc.scheme.sample_space(rng)
        return m, orc.scheme.sample_space(orc.keys, rng)


class RemixForger:
    """Reuse a signature obtained on one message for another."""

    name = "remix"

    def forge(self, orc, bk, rng):
        m = random_message(bk, rng)
        while True:
            m2 = random_message(bk, rng)
            if m2 != m:
                break
        sch = orc.scheme
        if isinstance(sch, EtStE):
            # fresh mu1 on m2 spliced onto the signature layer of mu(m)
            mu = orc.signcrypt(m)
            e = sch._gamma(orc.rpk).encrypt(bk.encode_message(m2),
                                             bk.random_scalar(rng))
            return m2, type(mu)(e, mu.c, mu.d, mu.r)
        return m2, orc.sign(m)


class MaulForger:
    """Homomorphically maul a signature or pad its DEM part."""

    name = "maul"

    def forge(self, orc, bk, rng):
        m = random_message(bk, rng)
        sch = orc.scheme
        if isinstance(sch, EtStE):
            mu = orc.signcrypt(m)
            pad = bk.G1.random(rng)
            mu2 = type(mu)(mu.e, mu.c, mu.d * pad, mu.r)
            # re-claim for a new message by multiplying the plaintext
            m2 = random_message(bk, rng)
            shift = bk.encode_message(m2) / bk.encode_message(m)
            e = type(mu.e)(mu.e.c, mu.e.e * shift)
            return m2, type(mu)(e, mu2.c, mu2.d, mu2.r)
        m2 = random_message(bk, rng)
        return m2, sch.rerandomize(orc.cpk, orc.sign(m), rng)


FORGERS = {f.name: f for f in (RandomForger, RemixForger, MaulForger)}


# --------------------------------------------------------- experiments

SCHEME_NAMES = ("plain-ste", "ets", "newste", "ctets", "cteas", "etste",
                "dp", "dp-repaired")


def make_scheme(name, backend="toy", space=2):
    bk = get_backend(backend) if isinstance(backend, str) else backend
    if name == "etste":
        return EtStE(bk, space)
    if name in ("dp", "dp-repaired"):
        return DPScheme(dp_params(bk.name), repaired=(name == "dp-repaired"))
    return get_scheme(name, bk, space)


def _completeness_trial(scheme, rng):
    if isinstance(scheme, DPScheme):
        keys = scheme.keygen(rng)
        return all(scheme.completeness(keys, random_message_dp(rng), rng))
    if not hasattr(scheme, "completeness") or \
            not hasattr(scheme, "confirm_statement"):
        raise NotApplicable("%s has no confirmation protocols" % scheme.name)
    keys = scheme.keygen(rng)
    return all(scheme.completeness(keys, random_message(scheme.bk, rng), rng))


def random_message_dp(rng):
    return bytes(rng.randrange(256) for _ in range(rng.randrange(1, 33)))


def _inv_cma_trial(scheme, adversary, rng):
    keys = scheme.keygen(rng)
    orc = CdcsOracles(scheme, keys, rng)
    m0, m1 = adversary.choose(orc, scheme.bk, rng)
    b = rng.randrange(2)
    mu, _ = scheme.sign(keys, (m0, m1)[b], rng)
    orc.set_challenge(mu, (m0, m1))
    return adversary.guess(orc, mu, rng) == b


def _sinv_cma_trial(scheme, adversary, rng):
    keys = scheme.keygen(rng)
    orc = CdcsOracles(scheme, keys, rng)
    m = adversary.choose_one(orc, scheme.bk, rng)
    b = rng.randrange(2)
    if b:
        mu, _ = scheme.sign(keys, m, rng)
    else:
        mu = scheme.sample_space(keys, rng)
    orc.set_challenge(mu, (m,))
    return adversary.guess_real(orc, mu, rng) == b


def _sind_cca_trial(scheme, adversary, rng):
    keys = scheme.keygen(rng)
    orc = SigncryptOracles(scheme, keys, rng)
    m = adversary.choose_one(orc, scheme.bk, rng)
    b = rng.randrange(2)
    if b:
        mu, _ = scheme.signcrypt(keys, m, rng)
    else:
        mu = scheme.sample_space(rng)
    orc.set_challenge(mu, bytes(m))
    return adversary.guess_real(orc, mu, rng) == b


def _euf_cma_trial(scheme, forger, rng):
    """The adversary holds the confirmer (receiver) keys itself."""
    bk = scheme.bk
    if isinstance(scheme, EtStE):
        keys = scheme.keygen(rng)
        orc = SigncryptOracles(scheme, keys, rng)
        m, mu = forger.forge(orc, bk, rng)
        if bytes(m) in orc.queried:
            return False
        return scheme.unsigncrypt(keys.receiver, mu, keys.spk) == m
    keys = scheme.keygen(rng)
    orc = CdcsOracles(scheme, keys, rng)
    m, mu = forger.forge(orc, bk, rng)
    if bytes(m) in orc.queried:
        return False
    return scheme.verify(keys, mu, m)


def run_experiment(scheme, experiment, adversary=None, trials=200, seed=0):
    """Run ``trials`` independent games; returns a GameReport."""
    name = scheme.name
    if experiment == "non-transferability":
        return nontransferability(scheme, seed)
    if experiment == "completeness":
        fn, adv, dist = _completeness_trial, None, False
    elif experiment == "inv-cma":
        if isinstance(scheme, (EtStE, DPScheme)):
            raise NotApplicable("inv-cma is a CDCS experiment")
        fn, adv, dist = _inv_cma_trial, adversary or GuessingAdversary(), True
    elif experiment == "sinv-cma":
        if isinstance(scheme, (EtStE, DPScheme)):
            raise NotApplicable("sinv-cma is a CDCS experiment")
        fn, adv, dist = _sinv_cma_trial, adversary or GuessingAdversary(), True
    elif experiment == "sind-cca":
        if not isinstance(scheme, EtStE):
            raise NotApplicable("sind-cca is a signcryption experiment")
        fn, dist = _sind_cca_trial, True
        adv = adversary or GuessingSigncryptAdversary()
    elif experiment == "euf-cma":
        if isinstance(scheme, DPScheme):
            raise NotApplicable("euf-cma is not wired for dp")
        fn, adv, dist = _euf_cma_trial, adversary or RandomForger(), False
    else:
        raise ValueError("unknown experiment %r" % experiment)
    wins = done = dq = 0
    for i in range(trials):
        rng = seeded_rng(seed, name, experiment, i)
        try:
            ok = fn(scheme, rng) if adv is None else fn(scheme, adv, rng)
        except Disqualified:
            dq += 1
            continue
        done += 1
        wins += bool(ok)
    rep = GameReport(name, experiment, done, wins, dq, dist)
    if adv is not None:
        rep.notes["adversary"] = adv.name
    return rep


def fact1_attack(target, backend="toy", oracle="convert", trials=200, seed=0):
    scheme = make_scheme(target, backend)
    if not hasattr(scheme, "rerandomize") or isinstance(scheme, EtStE):
        raise NotApplicable("%s has no homomorphic encryption layer" % target)
    return run_experiment(scheme, "inv-cma", Fact1Adversary(oracle), trials,
                          seed)


# --------------------------------------------------- Damgard-Pedersen

@dataclass(frozen=True)
class DPParams:
    name: str
    t: int
    p: int
    g: int
    alpha: int

    @property
    def k(self):
        return (self.p - 1) // self.t

    def H(self, data):
        return hash_to_int(b"osig/dp", data) % self.t


@dataclass(frozen=True)
class DPKeys:
    x: int
    nu: int
    h: int
    beta: int


@dataclass(frozen=True)
class DPSignature:
    E1: int
    E2: int
    r: int


# toy: t - 1 = 2^2 5^2 and 2 is a primitive root mod 101.  production: t
# is a safe prime (t - 1 = 2q), so alpha generates Z_t^* iff alpha^2 != 1
# and alpha^q != 1; p = k t + 1 and g = 2^k mod p.
DP_TOY = DPParams("toy", 101, 607, 64, 2)
DP_PRODUCTION = DPParams(
    "production",
    0xa2cbad0d752eaa1ce1eef089b904e3c2d520a09d9912e3fbb2ad16f0f7abe037,
    int("9e106665d4216f6ddfea8ed638bdfd6af9416607644902a1b79bbf9a1890df1e"
        "a9c206424a09b27b97fcfe8f36eeeb0c96b632e63b1c82ba9faf5e28e34337df"
        "12fa996a60e7bc40477ac4a58d3bf83a23be972d093ab35d077b10a151d55347"
        "f81200de70b93d5c92da8c7265c52334ceb33f0fba2ea5ac286808ce4eb8b6eb"
        "3a7fdd05b5270485a682bb158d15bb0779e8d7680ccf5bc5be7d5b2135957bbc"
        "558858b32dc92057fada10369557daefa3fb97ea23238d6f56eefccde9841aa9"
        "4615db12f8be05246f6961e00ab68191f89e84a2f4325e1ff1f67bdad5a66cfa"
        "317bcfc7498fdb0b2a4bbc03139d4d8f9ac5d75a99e78af1b22ef427a5836025",
        16),
    int("6c28d27e33cdc37554a09c7b523764a1e0202b4e0786b2f2ddb1fff77c2c8e34"
        "4aa54482aa367fc97fabb7074deb08a4c2437208cedd7af9fe96cedb3e126f10"
        "643f820918213f93383aaa5c17a99b011fd3e72c6afaf4a76a8d56a60085d9d3"
        "bdde11217800c33176b08ae7802dd5744a2a1609b2c93d7b6d817ec53f9d37e6"
        "45285de867686e729a7cb716214ec160487eefeddebdfbbe154266621dd0e604"
        "0b52847e13d9c37dee821d6f8136ddd46e08517d2b38bffb4de8d133b8184b4b"
        "9cd3515b87633528069508feeb9803173ce2b0fe9ee151d6d20ef244e75a977d"
        "991b139fef03663bdeacd0ae37867e81e39d7b7c19ce7fb3f3de4b676d5d50c4",
        16),
    5)


def dp_params(name="toy"):
    if name == "toy":
        return DP_TOY
    return DP_PRODUCTION


def _pow(b, e, m):
    return int(gmpy2.powmod(b, e, m))


class DPScheme:
    """ElGamal signature (s, r) on H(m) encrypted under ElGamal in Z_t^*.
    The repaired variant signs H(m || E1)."""

    def __init__(self, params, repaired=False):
        self.pp = params
        self.repaired = repaired
        self.name = "dp-repaired" if repaired else "dp"

    def keygen(self, rng):
        P = self.pp
        x = rng.randrange(1, P.t)
        nu = rng.randrange(1, P.t - 1)
        return DPKeys(x, nu, _pow(P.g, x, P.p), pow(P.alpha, nu, P.t))

    def _digest(self, m, E1):
        if self.repaired:
            return self.pp.H(m + E1.to_bytes((self.pp.t.bit_length() + 7) // 8,
                                             "big"))
        return self.pp.H(m)

    def sign(self, keys, m, rng):
        P = self.pp
        rho = rng.randrange(P.t - 1)
        E1 = pow(P.alpha, rho, P.t)
        hm = self._digest(m, E1)
        while True:
            b = rng.randrange(1, P.t)
            r = _pow(P.g, b, P.p)
            s = (hm - r * keys.x) * pow(b, -1, P.t) % P.t
            if s:
                break
        E2 = s * pow(keys.beta, rho, P.t) % P.t
        return DPSignature(E1, E2, r), (rho, b)

    def _well_formed(self, sig):
        P = self.pp
        return (0 < sig.E1 < P.t and 0 < sig.E2 < P.t and 1 < sig.r < P.p
                and _pow(sig.r, P.t, P.p) == 1)

    def elgamal_ok(self, keys, m, E1, s, r):
        P = self.pp
        lhs = _pow(P.g, self._digest(m, E1), P.p)
        return lhs == _pow(keys.h, r % P.t, P.p) * _pow(r, s, P.p) % P.p

    def decrypt(self, keys, sig):
        P = self.pp
        return sig.E2 * pow(sig.E1, -keys.nu, P.t) % P.t

    def status(self, keys, m, sig):
        """The 1-bit status oracle, computed from the secret keys."""
        if not self._well_formed(sig):
            return False
        return self.elgamal_ok(keys, m, sig.E1, self.decrypt(keys, sig), sig.r)

    def convert(self, keys, m, sig):
        if not self.status(keys, m, sig):
            return None
        return self.decrypt(keys, sig), sig.r

    def sample_space(self, rng):
        P = self.pp
        return DPSignature(rng.randrange(1, P.t), rng.randrange(1, P.t),
                           _pow(P.g, rng.randrange(1, P.t), P.p))

    def rerandomize(self, keys, sig, rho):
        P = self.pp
        return DPSignature(sig.E1 * pow(P.alpha, rho, P.t) % P.t,
                           sig.E2 * pow(keys.beta, rho, P.t) % P.t, sig.r)

    def completeness(self, keys, m, rng):
        sig, (rho, b) = self.sign(keys, m, rng)
        out0 = self.status(keys, m, sig)
        # signer's view: the coins reproduce E1 and r
        out1 = (sig.E1 == pow(self.pp.alpha, rho, self.pp.t)
                and sig.r == _pow(self.pp.g, b, self.pp.p))
        while True:
            psi = self.sample_space(rng)
            if not self.status(keys, m, psi):
                break
        out2 = not self.status(keys, m, psi)
        # another message: invalid unless its digest collides
        m2 = m + b"\x01"
        out3 = (self.status(keys, m2, sig)
                == (self._digest(m2, sig.E1) == self._digest(m, sig.E1)))
        conv = self.convert(keys, m, sig)
        out4 = conv is not None and self.elgamal_ok(keys, m, sig.E1, *conv)
        return (out0, out1, out2, out3, out4)


def ddh_instance(params, keys, yes, rng):
    """(alpha, beta, c1, c2) in Z_t^* with known exponents."""
    P = params
    a = rng.randrange(P.t - 1)
    c1 = pow(P.alpha, a, P.t)
    if yes:
        return P.alpha, keys.beta, c1, pow(keys.beta, a, P.t)
    while True:
        c2 = pow(keys.beta, rng.randrange(P.t - 1), P.t)
        if c2 != pow(keys.beta, a, P.t):
            return P.alpha, keys.beta, c1, c2


def dp_attack(scheme, keys, instance, rng, m=b"dp attack"):
    """Decide the DDH instance with one signature and one status query."""
    alpha, beta, c1, c2 = instance
    P = scheme.pp
    if alpha != P.alpha or beta != keys.beta:
        raise ValueError("instance is not for this public key")
    if not (0 < c1 < P.t and 0 < c2 < P.t):
        raise ValueError("malformed instance")
    sig, _ = scheme.sign(keys, m, rng)
    mauled = DPSignature(c1 * sig.E1 % P.t, c2 * sig.E2 % P.t, sig.r)
    return scheme.status(keys, m, mauled)


def dp_attack_report(backend="toy", trials=100, seed=0, repaired=False):
    """Accuracy of dp_attack over ``trials`` yes- and ``trials``
    no-instances; for the repaired scheme, count mauled queries that
    come back valid (all should be invalid)."""
    scheme = DPScheme(dp_params(backend), repaired)
    correct = valid = 0
    for i in range(2 * trials):
        rng = seeded_rng(seed, "dp", scheme.name, i)
        keys = scheme.keygen(rng)
        while keys.beta == 1:
            keys = scheme.keygen(rng)
        yes = i % 2 == 0
        ans = dp_attack(scheme, keys, ddh_instance(scheme.pp, keys, yes, rng),
                        rng)
        correct += ans == yes
        valid += ans
    if repaired:
        return GameReport(scheme.name, "dp-mauled-status", 2 * trials,
                          2 * trials - valid, distinguishing=False)
    return GameReport(scheme.name, "dp-ddh", 2 * trials, correct,
                      distinguishing=False)


# -------------------------------------------- commit/encrypt mixing

def commit_encrypt_game(trials=2000, seed=0, adversary=None):
    """Commitment c_b = commit(m_b, r_{1-b'}) next to e = Enc(r_b'); the
    adversary guesses whether c_b uses the encrypted nonce.  Pedersen is
    perfectly hiding so any adversary is at 1/2.  Toy group and toy
    Paillier; wins are counted as b_a != b."""
    bk = get_backend("toy")
    pp = pedersen_params(bk)
    adversary = adversary or _opening_parity
    wins = 0
    key_rng = seeded_rng(seed, "commit-encrypt", "keys")
    sk, pk = paillier_keygen(key_rng, 128)
    for i in range(trials):
        rng = seeded_rng(seed, "commit-encrypt", i)
        m0 = rng.randrange(bk.order)
        m1 = (m0 + 1 + rng.randrange(bk.order - 1)) % bk.order
        r0 = rng.randrange(bk.order)
        r1 = (r0 + 1 + rng.randrange(bk.order - 1)) % bk.order
        b, b2 = rng.randrange(2), rng.randrange(2)
        c = pedersen_commit(pp, (m0, m1)[b], (r0, r1)[1 - b2])
        e = paillier_encrypt(pk, (r0, r1)[b2], rng.randrange(1, pk.n))
        ba = adversary(bk, pp, pk, m0, m1, c, e, rng)
        wins += ba != b
    return GameReport("pedersen+paillier", "commit-encrypt", trials, wins)


def _opening_parity(bk, pp, pk, m0, m1, c, e, rng):
    # with discrete logs in hand, open c to m0 and answer the parity of
    # the nonce; perfect hiding makes this a coin flip
    G = bk.G1
    x = (G.dlog(c) - m0) * pow(G.dlog(pp.h), -1, bk.order) % bk.order
    return x & 1


# ------------------------------------------------------ cheating prover

def cheating_rate(stmt, runs=2000, seed=0):
    """Acceptance rate of a prover that guesses the outer challenge."""
    acc = 0
    for i in range(runs):
        rng = seeded_rng(seed, "cheat", i)
        guess = rng.randrange(stmt.space)
        ok, _ = sigma.CheatingProver(stmt, guess, rng).run(rng)
        acc += ok
    return GameReport("cheating-prover", "soundness/%d" % stmt.space, runs,
                      acc, distinguishing=False,
                      notes={"expected": 1 / stmt.space})


# ------------------------------------------- exact zero-knowledge checks

class _Exhausted(Exception):
    pass


class EnumRng:
    """Replays one path of randrange choices; ``limit`` calls are
    enumerated, later calls come from a fixed generator."""

    def __init__(self, prefix, limit):
        self.prefix = prefix
        self.limit = limit
        self.sizes = []
        self.tail = None

    def _tail(self):
        if self.tail is None:
            self.tail = random.Random(0)
        return self.tail

    def randrange(self, a, b=None):
        lo, hi = (0, a) if b is None else (a, b)
        i = len(self.sizes)
        if i >= self.limit:
            return self._tail().randrange(lo, hi)
        self.sizes.append(hi - lo)
        v = self.prefix[i] if i < len(self.prefix) else 0
        return lo + v

    def getrandbits(self, k):
        return self._tail().getrandbits(k)


def enumerate_dist(fn, limit):
    """Exact distribution of fn(rng) over all values of its first
    ``limit`` randrange calls: dict of outcome -> Fraction."""
    counts = {}
    prefix = []
    while True:
        rng = EnumRng(prefix, limit)
        out = fn(rng)
        sizes = rng.sizes
        w = math.prod(sizes)
        per = counts.setdefault(out, Counter())
        per[w] += 1
        # odometer over the recorded choice sizes
        prefix = (prefix + [0] * len(sizes))[:len(sizes)]
        j = len(prefix) - 1
        while j >= 0:
            prefix[j] += 1
            if prefix[j] < sizes[j]:
                break
            prefix.pop()
            j -= 1
        if j < 0:
            break
    return {out: sum(Fraction(n, w) for w, n in per.items())
            for out, per in counts.items()}


def total_variation(p, q):
    keys = set(p) | set(q)
    return sum(abs(p.get(k, 0) - q.get(k, 0)) for k in keys) / 2


def _hom_dists(stmt, wit, b):
    def honest(rng):
        tr = sigma.prove(stmt, wit, rng, b)
        return stmt.encode_com(tr.commitment), stmt.encode_resp(tr.response)

    def sim(rng):
        tr = stmt.simulate(b, None, rng)
        return stmt.encode_com(tr.commitment), stmt.encode_resp(tr.response)
    return enumerate_dist(honest, 1), enumerate_dist(sim, 1)


def hvzk_gap_hom(stmt, wit, b):
    """Exact statistical distance between honest and simulated
    transcripts of a one-stage statement at challenge b."""
    p, q = _hom_dists(stmt, wit, b)
    return total_variation(p, q)


def hvzk_gap_enc(stmt, wit, b, c, path=None):
    """Same for a two-stage class-E statement at (b, c), factorized:
    outer (commitment, z, inner statement) enumerated over the prover's
    two outer coins, then the inner proof for every inner statement that
    occurs.  Returns an upper bound on the joint distance that is zero
    iff the distributions coincide.  ``c`` may be a list of inner
    challenges; the result is then the worst of them."""
    cs = list(c) if isinstance(c, (list, tuple, range)) else [c]
    if path is None:
        path = sigma.RAND_PATH if wit.rand is not None else sigma.KEY_PATH
    fixed = random.Random(0)
    inner_wits = {}

    def honest(rng):
        state, com = stmt.commit(wit, rng)
        st2, resp = stmt.respond_full(wit, state, com, b, fixed)
        inner, iw, _ = st2
        key = inner.to_bytes()
        inner_wits[key] = (inner, iw)
        return stmt.encode_com(com), stmt.msg.encode(resp[0]), resp[1], key

    def sim(rng):
        tr = stmt.simulate(b, cs[0], rng, path)
        inner = stmt.inner_statement(tr.commitment, b, tr.response)
        return (stmt.encode_com(tr.commitment), stmt.msg.encode(tr.response[0]),
                tr.response[1], inner.to_bytes())

    outer = total_variation(enumerate_dist(honest, 2), enumerate_dist(sim, 2))
    worst = Fraction(0)
    for key, (inner, iw) in inner_wits.items():
        for ci in cs:
            if (key, ci) not in _INNER_GAPS:
                _INNER_GAPS[key, ci] = hvzk_gap_hom(inner, iw, ci)
            worst = max(worst, _INNER_GAPS[key, ci])
    return outer + worst


_INNER_GAPS = {}


def hvzk_gap(stmt, wit, b, c=None, path=None):
    if isinstance(stmt, sigma.Conjunction):
        # parts use independent coins: the joint distance is at most the sum
        return sum(hvzk_gap(p, w, b, c, path) for p, w in zip(stmt.parts, wit))
    if stmt.stages == 2:
        return hvzk_gap_enc(stmt, wit, b, c, path)
    return hvzk_gap_hom(stmt, wit, b)


def nontransferability(scheme, seed=0):
    """Toy backend: the best distinguisher between real confirmation
    transcripts (signer's and confirmer's) and simulated ones, at every
    fixed challenge.  Its advantage is the exact statistical distance."""
    bk = scheme.bk
    if bk.tag != 0:
        raise NotApplicable("exact enumeration needs the toy backend")
    rng = seeded_rng(seed, scheme.name, "non-transferability")
    keys = scheme.keygen(rng)
    m = random_message(bk, rng)
    gap = Fraction(0)
    points = 0
    if isinstance(scheme, EtStE):
        mu, coins = scheme.signcrypt(keys, m, rng)
        stmt = scheme.validity_statement(keys.spk, keys.rpk, mu)
        M = bk.encode_message(m)
        wits = [sigma.EncWitness(elgamal_decrypt(keys.receiver.gamma.sk, mu.e),
                                 sk=keys.receiver.gamma.sk),
                scheme._sig_wit(keys.receiver, mu)]
        cases = [(stmt, wits, sigma.KEY_PATH)]
        s = dem_decrypt(keys.rpk[1] ** coins.k, mu.d)
        cases.append((stmt, [sigma.EncWitness(M, rand=coins.a),
                             sigma.EncWitness(s, rand=coins.k)],
                      sigma.RAND_PATH))
    else:
        if not hasattr(scheme, "confirm_statement"):
            raise NotApplicable("%s has no confirmation protocols"
                                % scheme.name)
        if scheme.name == "ctets":
            # integer responses with slack: statistically, not perfectly,
            # zero-knowledge, and the coin space is too big to enumerate
            raise NotApplicable("ctets responses are only statistically "
                                "hiding")
        mu, coins = scheme.sign(keys, m, rng)
        cases = [(scheme.confirm_statement(keys.spk, keys.cpk, mu, m),
                  scheme.confirmer_witness(keys, mu, m), sigma.KEY_PATH),
                 (scheme.confirm_statement(keys.spk, keys.cpk, mu, m,
                                           "signer"),
                  scheme.signer_witness(keys, mu, m, coins), sigma.RAND_PATH)]
    for stmt, wit, path in cases:
        cs = [rng.randrange(stmt.inner_space)] if stmt.stages == 2 else [None]
        for b in range(stmt.space):
            for c in cs:
                gap = max(gap, hvzk_gap(stmt, wit, b, c, path))
                points += 1
    return GameReport(scheme.name, "non-transferability", points, 0,
                      exact=gap, distinguishing=True)


def sind_shape_check(bk=None, m=b"\x07", seed=0):
    """Toy backend: with the KEM key replaced by a random group element,
    (mu2, mu3) of a signcryption of m is uniform over G x G.  Exhaustive
    over the KEM randomness and the substituted key."""
    bk = bk or get_backend("toy")
    sc = EtStE(bk)
    rng = seeded_rng(seed, "sind-shape")
    keys = sc.keygen(rng)
    mu, _ = sc.signcrypt(keys, m, rng)
    keys_k = bk.G1.elements()
    counts = Counter()
    for a in range(bk.order):
        c = bk.g1 ** a
        s = bls_sign(bk, keys.sender.sk, bytes(c) + bytes(mu.e)).s
        for k in keys_k:
            counts[(bytes(c), bytes(s * k))] += 1
    return len(counts) == bk.order ** 2 and set(counts.values()) == {1}


__all__ = [n for n in dir() if not n.startswith("_")]
