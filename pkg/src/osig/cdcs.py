"""Convertible designated confirmer signatures.

Schemes share one interface (see ``Scheme``):

* ``PlainStE``  encrypt a BLS signature with ElGamal (attack target);
* ``EtS``       ElGamal-encrypt the message, BLS-sign the ciphertext;
* ``NewStE``    KEM/DEM: BLS-sign c || m, DEM-encrypt s under c's key;
* ``CtEtS``     Pedersen-commit m, Paillier-encrypt the opening, sign e || c;
* ``CtEaS``     commit, encrypt (opening, message, signer key), sign the
                commitment only (attack target).

Confirmation and denial are sigma-engine statements; ``confirm``,
``deny`` and ``sconfirm`` run both roles in-process while
``confirm_statement`` and friends let two processes run them apart.
"""

from dataclasses import dataclass

from . import sigma
from .groups import DecodeError, default_rng
from .primitives import (
    ClassSSignature, ElGamalCiphertext, ElGamalEnc, PaillierEnc, bls_keygen,
    bls_sign, bls_verify, class_c_compute, class_s_compute, decode_elgamal,
    decode_paillier, dem_decrypt, dem_encrypt, elgamal_decrypt,
    elgamal_keygen, encode_paillier, kem_decap, kem_encap, paillier_decrypt_full,
    paillier_encrypt, paillier_keygen, pedersen_commit, pedersen_params)
from .sigma import (EncPreimage, EncWitness, HomPreimage, IdentityMap,
                    NthPowerMap, int_bytes, pack, unpack, bytes_int)


class Refused(Exception):
    """Honest prover declines: the statement is false from its view."""


@dataclass
class KeyPair:
    sk: object
    pk: object


@dataclass
class CdcsKeys:
    signer: KeyPair
    confirmer: KeyPair

    @property
    def spk(self):
        return self.signer.pk

    @property
    def cpk(self):
        return self.confirmer.pk


@dataclass(frozen=True)
class PlainStESignature:
    ct: ElGamalCiphertext


@dataclass(frozen=True)
class EtSSignature:
    ct: ElGamalCiphertext
    sigma: ClassSSignature


@dataclass(frozen=True)
class NewStESignature:
    c: object
    e: object
    r: bytes = b""


@dataclass(frozen=True)
class CtEtSSignature:
    c: object
    e: int
    sigma: ClassSSignature


@dataclass(frozen=True)
class CtEaSSignature:
    c: object
    e: int
    sigma: ClassSSignature


class Scheme:
    name = None
    tag = None
    homomorphic = False

    def __init__(self, bk, space=2):
        self.bk = bk
        self.space = space

    def signer_keygen(self, rng):
        return KeyPair(*bls_keygen(self.bk, rng))

    def confirmer_keygen(self, rng):
        return KeyPair(*elgamal_keygen(self.bk, rng))

    def keygen(self, rng):
        return CdcsKeys(self.signer_keygen(rng), self.confirmer_keygen(rng))

    # --- helpers shared by every scheme
    def _bls_ok(self, spk, data, sig):
        return bls_verify(self.bk, spk, data, sig)

    def _decode_sig(self, data):
        return ClassSSignature(self.bk.G1.decode(data), b"")

    # --- protocols, both roles in-process
    def sconfirm_instance(self, keys, mu, m, coins):
        stmt = self.confirm_statement(keys.spk, keys.cpk, mu, m, "signer")
        if stmt is None:
            raise Refused("malformed signature")
        return stmt, self.signer_witness(keys, mu, m, coins)

    def confirm_instance(self, keys, mu, m):
        if not self.verify(keys, mu, m):
            raise Refused("signature is not valid")
        stmt = self.confirm_statement(keys.spk, keys.cpk, mu, m)
        return stmt, self.confirmer_witness(keys, mu, m)

    def sconfirm(self, keys, mu, m, coins, rng, vrng=None):
        stmt, wit = self.sconfirm_instance(keys, mu, m, coins)
        return sigma.run(stmt, wit, rng, vrng)

    def confirm(self, keys, mu, m, rng, vrng=None):
        stmt, wit = self.confirm_instance(keys, mu, m)
        return sigma.run(stmt, wit, rng, vrng)

    def deny(self, keys, mu, m, rng, vrng=None):
        if self.verify(keys, mu, m):
            raise Refused("signature is valid")
        stmt, wit = self.deny_instance(keys, mu, m)
        if stmt is None:
            # malformed at the public level: any verifier rejects it alone
            return True, None
        return sigma.run(stmt, wit, rng, vrng)

    def deny_instance(self, keys, mu, m):
        stmt = self.deny_statement(keys.spk, keys.cpk, mu, m)
        if stmt is None:
            return None, None
        return stmt, self.confirmer_witness(keys, mu, m)

    def random_signature(self, keys, m, rng, tries=1000):
        """psi from the signature space conditioned on being invalid."""
        for _ in range(tries):
            psi = self.sample_space(keys, rng)
            if not self.verify(keys, psi, m):
                return psi
        raise RuntimeError("could not sample an invalid signature")

    def completeness(self, keys, m, rng):
        """One run of the completeness experiment; returns the five bits."""
        mu, coins = self.sign(keys, m, rng)
        psi = self.random_signature(keys, m, rng)
        out0 = self.verify(keys, mu, m) and self.verify(keys, mu, m, coins)
        out1 = self.sconfirm(keys, mu, m, coins, rng)[0]
        out2 = self.confirm(keys, mu, m, rng)[0]
        out3 = self.deny(keys, psi, m, rng)[0]
        conv = self.convert(keys, mu, m)
        out4 = conv is not None and self.verify_converted(keys.spk, keys.cpk,
                                                          conv, m)
        return (out0, out1, out2, out3, out4)


# ------------------------------------------------------------ plain StE

class PlainStE(Scheme):
    """mu = ElGamal(BLS(m)).  Re-encryption yields a fresh valid
    signature, which is what breaks invisibility."""

    name = "plain-ste"
    tag = 1
    homomorphic = True

    def _enc(self, cpk):
        return ElGamalEnc(self.bk, cpk)

    def sign(self, keys, m, rng):
        sig = bls_sign(self.bk, keys.signer.sk, m)
        a = self.bk.random_scalar(rng)
        return PlainStESignature(self._enc(keys.cpk).encrypt(sig.s, a)), a

    def _s(self, keys, mu, coins=None):
        if coins is not None:
            if mu.ct.c != self.bk.g1 ** coins:
                return None
            return mu.ct.e * (keys.cpk ** coins).inverse()
        return elgamal_decrypt(keys.confirmer.sk, mu.ct)

    def verify(self, keys, mu, m, coins=None):
        s = self._s(keys, mu, coins)
        return s is not None and self._bls_ok(keys.spk, m, ClassSSignature(s))

    def _stmt(self, spk, cpk, mu, m, mode):
        f, I = class_s_compute(self.bk, spk, m)
        return EncPreimage(self._enc(cpk), mu.ct, f, I, mode, self.space,
                           label=self.name.encode())

    def confirm_statement(self, spk, cpk, mu, m, role="confirmer"):
        return self._stmt(spk, cpk, mu, m, "confirm")

    def deny_statement(self, spk, cpk, mu, m):
        return self._stmt(spk, cpk, mu, m, "deny")

    def signer_witness(self, keys, mu, m, coins):
        return EncWitness(self._s(keys, mu, coins), rand=coins)

    def confirmer_witness(self, keys, mu, m):
        return EncWitness(self._s(keys, mu), sk=keys.confirmer.sk)

    def convert(self, keys, mu, m):
        if not self.verify(keys, mu, m):
            return None
        return ClassSSignature(self._s(keys, mu))

    def verify_converted(self, spk, cpk, conv, m):
        return self._bls_ok(spk, m, conv)

    def sample_space(self, keys, rng):
        G = self.bk.G1
        return PlainStESignature(ElGamalCiphertext(G.random(rng), G.random(rng)))

    def rerandomize(self, cpk, mu, rng):
        one = self._enc(cpk).encrypt(self.bk.G1.identity,
                                     self.bk.random_scalar(rng, nonzero=True))
        return PlainStESignature(mu.ct * one)

    def encode(self, mu):
        return bytes(mu.ct)

    def decode(self, data, spk=None, cpk=None):
        return PlainStESignature(decode_elgamal(self.bk, data))

    def encode_converted(self, conv):
        return bytes(conv.s)

    def decode_converted(self, data, cpk=None):
        return self._decode_sig(data)


# ------------------------------------------------------------------ EtS

@dataclass(frozen=True)
class EtSConverted:
    ct: ElGamalCiphertext
    sigma: ClassSSignature
    proof: bytes


class EtS(Scheme):
    """mu = (ct, sigma) with ct = ElGamal(encode(m)), sigma = BLS(ct).

    Confirmation is a discrete-log-equality proof that ct decrypts to
    encode(m) (key path for the confirmer, randomness path for the
    signer); denial uses the identity map on the message group.
    """

    name = "ets"
    tag = 2

    FS_TAG = b"osig/ets/convert"

    def _enc(self, cpk):
        return ElGamalEnc(self.bk, cpk, self.bk.M)

    def sign(self, keys, m, rng):
        M = self.bk.encode_message(m)
        a = self.bk.random_scalar(rng)
        ct = self._enc(keys.cpk).encrypt(M, a)
        return EtSSignature(ct, bls_sign(self.bk, keys.signer.sk, bytes(ct))), a

    def verify(self, keys, mu, m, coins=None):
        if not self._bls_ok(keys.spk, bytes(mu.ct), mu.sigma):
            return False
        M = self.bk.encode_message(m)
        if coins is not None:
            return self._enc(keys.cpk).encrypt(M, coins) == mu.ct
        return elgamal_decrypt(keys.confirmer.sk, mu.ct) == M

    def _dec_stmt(self, spk, cpk, mu, m, path):
        if not self._bls_ok(spk, bytes(mu.ct), mu.sigma):
            return None
        enc = self._enc(cpk)
        return enc.inner_statement(mu.ct, self.bk.encode_message(m), path,
                                   enc.inner_space)

    def confirm_statement(self, spk, cpk, mu, m, role="confirmer"):
        path = sigma.RAND_PATH if role == "signer" else sigma.KEY_PATH
        return self._dec_stmt(spk, cpk, mu, m, path)

    def deny_statement(self, spk, cpk, mu, m):
        if not self._bls_ok(spk, bytes(mu.ct), mu.sigma):
            return None
        M = self.bk.encode_message(m)
        return EncPreimage(self._enc(cpk), mu.ct, IdentityMap(self.bk.M), M,
                           "deny", self.space, label=self.name.encode())

    def signer_witness(self, keys, mu, m, coins):
        return coins

    def confirmer_witness(self, keys, mu, m):
        return keys.confirmer.sk

    def deny_instance(self, keys, mu, m):
        stmt = self.deny_statement(keys.spk, keys.cpk, mu, m)
        if stmt is None:
            return None, None
        s = elgamal_decrypt(keys.confirmer.sk, mu.ct)
        return stmt, EncWitness(s, sk=keys.confirmer.sk)

    def convert(self, keys, mu, m):
        if not self.verify(keys, mu, m):
            return None
        stmt = self._dec_stmt(keys.spk, keys.cpk, mu, m, sigma.KEY_PATH)
        proof = sigma.fs_prove(stmt, keys.confirmer.sk, default_rng(),
                               self.FS_TAG)
        return EtSConverted(mu.ct, mu.sigma, proof)

    def verify_converted(self, spk, cpk, conv, m):
        try:
            stmt = self._dec_stmt(spk, cpk, EtSSignature(conv.ct, conv.sigma),
                                  m, sigma.KEY_PATH)
        except (ValueError, DecodeError):
            return False
        return stmt is not None and sigma.fs_verify(stmt, conv.proof,
                                                    self.FS_TAG)

    def sample_space(self, keys, rng):
        G, M = self.bk.G1, self.bk.M
        ct = ElGamalCiphertext(G.random(rng), M.random(rng))
        return EtSSignature(ct, ClassSSignature(G.random(rng)))

    def rerandomize(self, cpk, mu, rng):
        one = self._enc(cpk).encrypt(self.bk.M.identity,
                                     self.bk.random_scalar(rng, nonzero=True))
        return EtSSignature(mu.ct * one, mu.sigma)

    def encode(self, mu):
        return bytes(mu.ct) + bytes(mu.sigma.s)

    def decode(self, data, spk=None, cpk=None):
        n = self.bk.G1.size
        ct_len = n + self.bk.M.size
        if len(data) != ct_len + n:
            raise DecodeError("bad EtS signature length")
        return EtSSignature(decode_elgamal(self.bk, data[:ct_len], self.bk.M),
                            self._decode_sig(data[ct_len:]))

    def encode_converted(self, conv):
        return pack(bytes(conv.ct), bytes(conv.sigma.s), conv.proof)

    def decode_converted(self, data, cpk=None):
        ct, s, proof = unpack(data, 3)
        return EtSConverted(decode_elgamal(self.bk, ct, self.bk.M),
                            self._decode_sig(s), proof)


# -------------------------------------------------------------- new StE

@dataclass(frozen=True)
class NewStEConverted:
    c: object
    sig: ClassSSignature


class NewStE(Scheme):
    """mu = (c, s k, r) with (c, k) a KEM pair and (s, r) a BLS signature
    on c || m.  Since (c, e) is an ElGamal ciphertext of s, confirmation
    is the class-S / class-E proof."""

    name = "newste"
    tag = 3

    def _enc(self, cpk):
        return ElGamalEnc(self.bk, cpk)

    def signed_string(self, c, m):
        # c has fixed width, so m always starts at the same offset
        return bytes(c) + m

    def sign(self, keys, m, rng):
        a = self.bk.random_scalar(rng)
        c, k = kem_encap(self.bk, keys.cpk, a)
        sig = bls_sign(self.bk, keys.signer.sk, self.signed_string(c, m))
        return NewStESignature(c, dem_encrypt(k, sig.s), sig.r), a

    def _s(self, keys, mu, coins=None):
        if coins is not None:
            if mu.c != self.bk.g1 ** coins:
                return None
            return dem_decrypt(keys.cpk ** coins, mu.e)
        return dem_decrypt(kem_decap(keys.confirmer.sk, mu.c), mu.e)

    def verify(self, keys, mu, m, coins=None):
        s = self._s(keys, mu, coins)
        return s is not None and self._bls_ok(
            keys.spk, self.signed_string(mu.c, m), ClassSSignature(s, mu.r))

    def _stmt(self, spk, cpk, mu, m, mode):
        f, I = class_s_compute(self.bk, spk, self.signed_string(mu.c, m), mu.r)
        return EncPreimage(self._enc(cpk), ElGamalCiphertext(mu.c, mu.e), f, I,
                           mode, self.space, label=self.name.encode())

    def confirm_statement(self, spk, cpk, mu, m, role="confirmer"):
        return self._stmt(spk, cpk, mu, m, "confirm")

    def deny_statement(self, spk, cpk, mu, m):
        return self._stmt(spk, cpk, mu, m, "deny")

    def signer_witness(self, keys, mu, m, coins):
        return EncWitness(self._s(keys, mu, coins), rand=coins)

    def confirmer_witness(self, keys, mu, m):
        return EncWitness(self._s(keys, mu), sk=keys.confirmer.sk)

    def convert(self, keys, mu, m):
        if not self.verify(keys, mu, m):
            return None
        return NewStEConverted(mu.c, ClassSSignature(self._s(keys, mu), mu.r))

    def verify_converted(self, spk, cpk, conv, m):
        return self._bls_ok(spk, self.signed_string(conv.c, m), conv.sig)

    def sample_space(self, keys, rng):
        G = self.bk.G1
        return NewStESignature(G.random(rng), G.random(rng), b"")

    def rerandomize(self, cpk, mu, rng):
        a = self.bk.random_scalar(rng, nonzero=True)
        return NewStESignature(mu.c * self.bk.g1 ** a, mu.e * cpk ** a, mu.r)

    def encode(self, mu):
        return bytes(mu.c) + bytes(mu.e) + mu.r

    def decode(self, data, spk=None, cpk=None):
        n = self.bk.G1.size
        if len(data) != 2 * n:
            raise DecodeError("bad signature length")
        G = self.bk.G1
        return NewStESignature(G.decode(data[:n]), G.decode(data[n:]), b"")

    def encode_converted(self, conv):
        return bytes(conv.c) + bytes(conv.sig.s) + conv.sig.r

    def decode_converted(self, data, cpk=None):
        n = self.bk.G1.size
        if len(data) != 2 * n:
            raise DecodeError("bad converted signature length")
        return NewStEConverted(self.bk.G1.decode(data[:n]),
                               self._decode_sig(data[n:]))


# ---------------------------------------------------------------- CtEtS

@dataclass(frozen=True)
class CtEtSConverted:
    rho: int
    c: object
    e: int
    sigma: ClassSSignature


def paillier_bits(bk):
    return 128 if bk.tag == 0 else 2048


class CtEtS(Scheme):
    """mu = (c, e, sigma): c = g^H(m) h^rho, e = Paillier(rho), sigma a
    BLS signature on e || c.  Valid iff sigma verifies and Dec(e) is an
    opening rho < l of c to m."""

    name = "ctets"
    tag = 4

    def __init__(self, bk, space=2):
        Scheme.__init__(self, bk, space)
        self.pp = pedersen_params(bk)

    def confirmer_keygen(self, rng):
        return KeyPair(*paillier_keygen(rng, paillier_bits(self.bk)))

    def _enc(self, cpk):
        return PaillierEnc(cpk, self.bk.order)

    def mhat(self, m):
        return self.bk.hash_to_scalar(b"osig/commit-msg", m)

    def signed_string(self, cpk, mu_e, c):
        return encode_paillier(cpk, mu_e) + bytes(c)

    def sign(self, keys, m, rng):
        rho = self.bk.random_scalar(rng)
        c = pedersen_commit(self.pp, self.mhat(m), rho)
        enc = self._enc(keys.cpk)
        u = enc.random_rand(rng)
        e = enc.encrypt(rho, u)
        sig = bls_sign(self.bk, keys.signer.sk,
                       self.signed_string(keys.cpk, e, c))
        return CtEtSSignature(c, e, sig), (rho, u)

    def _sig_ok(self, spk, cpk, mu):
        try:
            data = self.signed_string(cpk, mu.e, mu.c)
        except (OverflowError, ValueError):
            return False
        return self._bls_ok(spk, data, mu.sigma)

    def _opening(self, keys, mu, coins=None):
        if coins is not None:
            rho, u = coins
            if self._enc(keys.cpk).encrypt(rho, u) != mu.e:
                return None
            return rho, u
        try:
            return paillier_decrypt_full(keys.confirmer.sk, mu.e)
        except DecodeError:
            return None

    def verify(self, keys, mu, m, coins=None):
        if not self._sig_ok(keys.spk, keys.cpk, mu):
            return False
        op = self._opening(keys, mu, coins)
        if op is None:
            return False
        rho = op[0]
        return rho < self.bk.order and \
            pedersen_commit(self.pp, self.mhat(m), rho) == mu.c

    def _stmt(self, spk, cpk, mu, m, mode):
        if not self._sig_ok(spk, cpk, mu):
            return None
        enc = self._enc(cpk)
        f, I = class_c_compute(self.pp, mu.c, self.mhat(m), enc.msg_domain)
        return EncPreimage(enc, mu.e, f, I, mode, self.space,
                           label=self.name.encode())

    def confirm_statement(self, spk, cpk, mu, m, role="confirmer"):
        return self._stmt(spk, cpk, mu, m, "confirm")

    def deny_statement(self, spk, cpk, mu, m, reveal=None):
        """Deny statement; with ``reveal`` set, the prover has disclosed an
        out-of-range plaintext and proves e encrypts it."""
        if reveal is None:
            return self._stmt(spk, cpk, mu, m, "deny")
        if not self._sig_ok(spk, cpk, mu) or not \
                self.bk.order <= reveal < cpk.n:
            return None
        n2 = cpk.n2
        X = mu.e * (1 - reveal * cpk.n) % n2
        return HomPreimage(NthPowerMap(cpk.n), X, self._enc(cpk).inner_space,
                           label=b"reveal" + int_bytes(reveal))

    def signer_witness(self, keys, mu, m, coins):
        rho, u = coins
        return EncWitness(rho, rand=u)

    def confirmer_witness(self, keys, mu, m):
        rho, u = self._opening(keys, mu)
        return EncWitness(rho, rand=u)

    def deny_instance(self, keys, mu, m):
        if not self._sig_ok(keys.spk, keys.cpk, mu):
            return None, None
        op = self._opening(keys, mu)
        if op is None:
            return None, None
        rho, u = op
        if rho >= self.bk.order:
            stmt = self.deny_statement(keys.spk, keys.cpk, mu, m, reveal=rho)
            return stmt, u
        return (self.deny_statement(keys.spk, keys.cpk, mu, m),
                EncWitness(rho, rand=u))

    def convert(self, keys, mu, m):
        if not self.verify(keys, mu, m):
            return None
        return CtEtSConverted(self._opening(keys, mu)[0], mu.c, mu.e, mu.sigma)

    def verify_converted(self, spk, cpk, conv, m):
        mu = CtEtSSignature(conv.c, conv.e, conv.sigma)
        return (self._sig_ok(spk, cpk, mu) and 0 <= conv.rho < self.bk.order
                and pedersen_commit(self.pp, self.mhat(m), conv.rho) == conv.c)

    def sample_space(self, keys, rng):
        G = self.bk.G1
        e = sigma.UnitsDomain(keys.cpk.n2).random(rng)
        return CtEtSSignature(G.random(rng), e, ClassSSignature(G.random(rng)))

    def rerandomize(self, cpk, mu, rng):
        enc = self._enc(cpk)
        return CtEtSSignature(mu.c, enc.ct_op(mu.e, enc.encrypt(0, enc.random_rand(rng))),
                              mu.sigma)

    def encode(self, mu):
        return pack(bytes(mu.c), int_bytes(mu.e), bytes(mu.sigma.s))

    def decode(self, data, spk=None, cpk=None):
        c, e, s = unpack(data, 3)
        e = _paillier_int(e, cpk)
        return CtEtSSignature(self.bk.G1.decode(c), e, self._decode_sig(s))

    def encode_converted(self, conv):
        return pack(int_bytes(conv.rho), bytes(conv.c), int_bytes(conv.e),
                    bytes(conv.sigma.s))

    def decode_converted(self, data, cpk=None):
        rho, c, e, s = unpack(data, 4)
        return CtEtSConverted(bytes_int(rho), self.bk.G1.decode(c),
                              _paillier_int(e, cpk), self._decode_sig(s))


def _paillier_int(data, cpk):
    e = bytes_int(data)
    if cpk is not None:
        if e >= cpk.n2:
            raise DecodeError("ciphertext out of range")
        decode_paillier(cpk, encode_paillier(cpk, e))
    return e


# ---------------------------------------------------------------- CtEaS

@dataclass(frozen=True)
class CtEaSConverted:
    rho: int
    c: object
    sigma: ClassSSignature


class CtEaS(Scheme):
    """Revised commit-then-encrypt-and-sign: e encrypts rho || H(m) ||
    H(pk) under Paillier, sigma signs c alone.  Only what the invisibility
    attack needs: sign, verify, convert, rerandomize."""

    name = "cteas"
    tag = 5
    homomorphic = True

    def __init__(self, bk, space=2):
        Scheme.__init__(self, bk, space)
        self.pp = pedersen_params(bk)

    def confirmer_keygen(self, rng):
        return KeyPair(*paillier_keygen(rng, paillier_bits(self.bk)))

    def mhat(self, m):
        return self.bk.hash_to_scalar(b"osig/commit-msg", m)

    def pk_digest(self, spk):
        return self.bk.hash_to_scalar(b"osig/pk-digest", bytes(spk))

    def _pack(self, rho, mh, dg):
        l = self.bk.order
        return rho + l * (mh + l * dg)

    def _unpack(self, x):
        l = self.bk.order
        return x % l, (x // l) % l, x // (l * l)

    def sign(self, keys, m, rng):
        rho = self.bk.random_scalar(rng)
        c = pedersen_commit(self.pp, self.mhat(m), rho)
        u = sigma.UnitsDomain(keys.cpk.n).random(rng)
        x = self._pack(rho, self.mhat(m), self.pk_digest(keys.spk))
        e = paillier_encrypt(keys.cpk, x, u)
        return CtEaSSignature(c, e, bls_sign(self.bk, keys.signer.sk,
                                             bytes(c))), (rho, u)

    def verify(self, keys, mu, m, coins=None):
        if not self._bls_ok(keys.spk, bytes(mu.c), mu.sigma):
            return False
        try:
            x, _ = paillier_decrypt_full(keys.confirmer.sk, mu.e)
        except DecodeError:
            return False
        rho, mh, dg = self._unpack(x)
        return (mh == self.mhat(m) and dg == self.pk_digest(keys.spk)
                and pedersen_commit(self.pp, mh, rho) == mu.c)

    def convert(self, keys, mu, m):
        if not self.verify(keys, mu, m):
            return None
        x, _ = paillier_decrypt_full(keys.confirmer.sk, mu.e)
        return CtEaSConverted(self._unpack(x)[0], mu.c, mu.sigma)

    def verify_converted(self, spk, cpk, conv, m):
        return (self._bls_ok(spk, bytes(conv.c), conv.sigma)
                and pedersen_commit(self.pp, self.mhat(m), conv.rho) == conv.c)

    def sample_space(self, keys, rng):
        G = self.bk.G1
        e = sigma.UnitsDomain(keys.cpk.n2).random(rng)
        return CtEaSSignature(G.random(rng), e, ClassSSignature(G.random(rng)))

    def rerandomize(self, cpk, mu, rng):
        u = sigma.UnitsDomain(cpk.n).random(rng)
        return CtEaSSignature(mu.c, mu.e * paillier_encrypt(cpk, 0, u) % cpk.n2,
                              mu.sigma)

    def encode(self, mu):
        return pack(bytes(mu.c), int_bytes(mu.e), bytes(mu.sigma.s))

    def decode(self, data, spk=None, cpk=None):
        c, e, s = unpack(data, 3)
        return CtEaSSignature(self.bk.G1.decode(c), _paillier_int(e, cpk),
                              self._decode_sig(s))

    def encode_converted(self, conv):
        return pack(int_bytes(conv.rho), bytes(conv.c), bytes(conv.sigma.s))

    def decode_converted(self, data, cpk=None):
        rho, c, s = unpack(data, 3)
        return CtEaSConverted(bytes_int(rho), self.bk.G1.decode(c),
                              self._decode_sig(s))


SCHEMES = {cls.name: cls for cls in (PlainStE, EtS, NewStE, CtEtS, CtEaS)}


def get_scheme(name, bk, space=2):
    try:
        return SCHEMES[name](bk, space)
    except KeyError:
        raise ValueError("unknown scheme %r" % name)
