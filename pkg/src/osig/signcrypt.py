"""Verifiable signcryption: encrypt, then sign, then encrypt.

A signcryption of m is (mu1, mu2, mu3, mu4) where

    mu1 = ElGamal_Gamma(encode(m))      (receiver's first key pair)
    (mu2, k) = KEM.encap()              (receiver's second key pair)
    (s, mu4) = BLS(mu2 || mu1)
    mu3 = DEM_k(s) = s * k

(mu2, mu3) is again an ElGamal ciphertext of s, so validity, confirmation
and denial are conjunctions of class-E statements.
"""

from dataclasses import dataclass

from . import sigma
from .cdcs import KeyPair, Refused
from .groups import DecodeError
from .primitives import (ClassSSignature, ElGamalCiphertext, ElGamalEnc,
                         bls_keygen, bls_sign, bls_verify, class_s_compute,
                         decode_elgamal, dem_decrypt, dem_encrypt,
                         elgamal_decrypt, elgamal_keygen, kem_decap, kem_encap,
                         kem_keygen)
from .sigma import Conjunction, EncPreimage, EncWitness, IdentityMap


@dataclass
class ReceiverKeys:
    gamma: KeyPair
    kem: KeyPair

    @property
    def pk(self):
        return (self.gamma.pk, self.kem.pk)


@dataclass
class SigncryptKeys:
    sender: KeyPair
    receiver: ReceiverKeys

    @property
    def spk(self):
        return self.sender.pk

    @property
    def rpk(self):
        return self.receiver.pk


@dataclass(frozen=True)
class Signcryption:
    e: ElGamalCiphertext  # mu1
    c: object             # mu2
    d: object             # mu3
    r: bytes = b""        # mu4


@dataclass(frozen=True)
class Extraction:
    """Receiver's disclosure: a proof that mu1 decrypts to m together with
    the signature (s, r) on mu2 || mu1."""

    e: ElGamalCiphertext
    c: object
    sig: ClassSSignature
    proof: bytes


@dataclass
class SigncryptCoins:
    a: int  # ElGamal randomness of mu1
    k: int  # KEM randomness of mu2


class EtStE:
    name = "etste"
    tag = 6
    FS_TAG = b"osig/etste/extract"

    def __init__(self, bk, space=2):
        self.bk = bk
        self.space = space

    # --- keys
    def sender_keygen(self, rng):
        return KeyPair(*bls_keygen(self.bk, rng))

    def receiver_keygen(self, rng):
        g = KeyPair(*elgamal_keygen(self.bk, rng))
        return ReceiverKeys(g, KeyPair(*kem_keygen(self.bk, rng)))

    def keygen(self, rng):
        return SigncryptKeys(self.sender_keygen(rng), self.receiver_keygen(rng))

    def _gamma(self, rpk):
        return ElGamalEnc(self.bk, rpk[0], self.bk.M)

    def _kem(self, rpk):
        return ElGamalEnc(self.bk, rpk[1])

    @staticmethod
    def signed_string(mu):
        return bytes(mu.c) + bytes(mu.e)

    # --- core algorithms
    def signcrypt(self, keys, m, rng):
        M = self.bk.encode_message(m)
        a = self.bk.random_scalar(rng)
        e = self._gamma(keys.rpk).encrypt(M, a)
        ka = self.bk.random_scalar(rng)
        c, k = kem_encap(self.bk, keys.rpk[1], ka)
        sig = bls_sign(self.bk, keys.sender.sk, bytes(c) + bytes(e))
        return Signcryption(e, c, dem_encrypt(k, sig.s), sig.r), \
            SigncryptCoins(a, ka)

    def _s(self, receiver, mu):
        return dem_decrypt(kem_decap(receiver.kem.sk, mu.c), mu.d)

    def sig_ok(self, spk, receiver, mu):
        s = self._s(receiver, mu)
        return bls_verify(self.bk, spk, self.signed_string(mu),
                          ClassSSignature(s, mu.r))

    def unsigncrypt(self, receiver, mu, spk):
        """Message bytes, or None."""
        try:
            if not self.sig_ok(spk, receiver, mu):
                return None
            return self.bk.decode_message(elgamal_decrypt(receiver.gamma.sk,
                                                          mu.e))
        except (DecodeError, ValueError, TypeError):
            return None

    def verify(self, keys, mu, m):
        if not self.sig_ok(keys.spk, keys.receiver, mu):
            return False
        M = elgamal_decrypt(keys.receiver.gamma.sk, mu.e)
        try:
            return M == self.bk.encode_message(m)
        except ValueError:
            return False

    # --- statements
    def _sig_layer(self, spk, rpk, mu):
        f, I = class_s_compute(self.bk, spk, self.signed_string(mu), mu.r)
        return EncPreimage(self._kem(rpk), ElGamalCiphertext(mu.c, mu.d), f, I,
                           "confirm", self.space, label=b"etste/sig")

    def validity_statement(self, spk, rpk, mu):
        know = EncPreimage(self._gamma(rpk), mu.e, None, None, "confirm",
                           self.space, label=b"etste/msg")
        return Conjunction([know, self._sig_layer(spk, rpk, mu)])

    def confirm_statement(self, spk, rpk, mu, m):
        g = self._gamma(rpk)
        dec = g.inner_statement(mu.e, self.bk.encode_message(m),
                                sigma.KEY_PATH, g.inner_space)
        if dec is None:
            return None
        return Conjunction([dec.with_space(self.space),
                            self._sig_layer(spk, rpk, mu)])

    def deny_statement(self, spk, rpk, mu, m):
        neq = EncPreimage(self._gamma(rpk), mu.e, IdentityMap(self.bk.M),
                          self.bk.encode_message(m), "deny", self.space,
                          label=b"etste/deny")
        return Conjunction([neq, self._sig_layer(spk, rpk, mu)])

    def _sig_wit(self, receiver, mu):
        return EncWitness(self._s(receiver, mu), sk=receiver.kem.sk)

    # --- protocol instances: (statement, witness) or Refused
    def validity_instance(self, keys, mu, role, coins=None):
        stmt = self.validity_statement(keys.spk, keys.rpk, mu)
        if role == "sender":
            if coins is None:
                raise ValueError("sender needs the signcryption coins")
            g = self.bk.g1
            if mu.e.c != g ** coins.a or mu.c != g ** coins.k:
                raise Refused("coins do not match the signcryption")
            M = mu.e.e * (keys.rpk[0] ** coins.a).inverse()
            s = dem_decrypt(keys.rpk[1] ** coins.k, mu.d)
            if not bls_verify(self.bk, keys.spk, self.signed_string(mu),
                              ClassSSignature(s, mu.r)):
                raise Refused("signcryption is not valid")
            return stmt, [EncWitness(M, rand=coins.a),
                          EncWitness(s, rand=coins.k)]
        if not self.sig_ok(keys.spk, keys.receiver, mu):
            raise Refused("signcryption is not valid")
        M = elgamal_decrypt(keys.receiver.gamma.sk, mu.e)
        return stmt, [EncWitness(M, sk=keys.receiver.gamma.sk),
                      self._sig_wit(keys.receiver, mu)]

    def confirm_instance(self, keys, mu, m):
        if not self.verify(keys, mu, m):
            raise Refused("not a signcryption of m")
        stmt = self.confirm_statement(keys.spk, keys.rpk, mu, m)
        return stmt, [keys.receiver.gamma.sk,
                      self._sig_wit(keys.receiver, mu)]

    def deny_instance(self, keys, mu, m):
        if not self.sig_ok(keys.spk, keys.receiver, mu):
            raise Refused("signature layer is broken")
        if self.verify(keys, mu, m):
            raise Refused("signcryption does decrypt to m")
        M = elgamal_decrypt(keys.receiver.gamma.sk, mu.e)
        stmt = self.deny_statement(keys.spk, keys.rpk, mu, m)
        return stmt, [EncWitness(M, sk=keys.receiver.gamma.sk),
                      self._sig_wit(keys.receiver, mu)]

    # --- protocols, both roles in-process
    def prove_validity(self, keys, mu, role, rng, coins=None, vrng=None):
        stmt, wits = self.validity_instance(keys, mu, role, coins)
        return sigma.run(stmt, wits, rng, vrng)

    def confirm(self, keys, mu, m, rng, vrng=None):
        stmt, wits = self.confirm_instance(keys, mu, m)
        return sigma.run(stmt, wits, rng, vrng)

    def deny(self, keys, mu, m, rng, vrng=None):
        stmt, wits = self.deny_instance(keys, mu, m)
        return sigma.run(stmt, wits, rng, vrng)

    # --- signature extraction
    def _extract_stmt(self, rpk, e, m):
        g = self._gamma(rpk)
        return g.inner_statement(e, self.bk.encode_message(m), sigma.KEY_PATH,
                                 g.inner_space)

    def sig_extract(self, keys, mu, m, rng):
        if not self.verify(keys, mu, m):
            return None
        stmt = self._extract_stmt(keys.rpk, mu.e, m)
        proof = sigma.fs_prove(stmt, keys.receiver.gamma.sk, rng, self.FS_TAG)
        sig = ClassSSignature(self._s(keys.receiver, mu), mu.r)
        return Extraction(mu.e, mu.c, sig, proof)

    def sig_verify(self, spk, rpk, ext, m):
        try:
            stmt = self._extract_stmt(rpk, ext.e, m)
        except ValueError:
            return False
        if stmt is None or not sigma.fs_verify(stmt, ext.proof, self.FS_TAG):
            return False
        return bls_verify(self.bk, spk, bytes(ext.c) + bytes(ext.e), ext.sig)

    # --- experiments
    def sample_space(self, rng):
        """Uniform over well-formed tuples."""
        G = self.bk.G1
        e = ElGamalCiphertext(G.random(rng), self.bk.M.random(rng))
        return Signcryption(e, G.random(rng), G.random(rng), b"")

    def rerandomize(self, rpk, mu, rng, part="e"):
        bk = self.bk
        a = bk.random_scalar(rng, nonzero=True)
        if part == "e":
            one = self._gamma(rpk).encrypt(bk.M.identity, a)
            return Signcryption(mu.e * one, mu.c, mu.d, mu.r)
        return Signcryption(mu.e, mu.c * bk.g1 ** a, mu.d * rpk[1] ** a, mu.r)

    def completeness(self, keys, m, rng):
        mu, coins = self.signcrypt(keys, m, rng)
        out0 = self.unsigncrypt(keys.receiver, mu, keys.spk) == m
        out1 = (self.prove_validity(keys, mu, "sender", rng, coins)[0]
                and self.prove_validity(keys, mu, "receiver", rng)[0])
        out2 = self.confirm(keys, mu, m, rng)[0]
        other = self._other_message(m, rng)
        out3 = self.deny(keys, mu, other, rng)[0]
        ext = self.sig_extract(keys, mu, m, rng)
        out4 = ext is not None and self.sig_verify(keys.spk, keys.rpk, ext, m)
        return (out0, out1, out2, out3, out4)

    def _other_message(self, m, rng):
        while True:
            if self.bk.tag == 0:
                x = rng.choice(self.bk.message_space())
            else:
                x = rng.getrandbits(64).to_bytes(8, "big")
            if x != m:
                return x

    # --- encoding
    def encode(self, mu):
        return bytes(mu.e) + bytes(mu.c) + bytes(mu.d) + mu.r

    def decode(self, data):
        n, mn = self.bk.G1.size, self.bk.M.size
        if len(data) != 3 * n + mn:
            raise DecodeError("bad signcryption length")
        G = self.bk.G1
        e = decode_elgamal(self.bk, data[:n + mn], self.bk.M)
        rest = data[n + mn:]
        return Signcryption(e, G.decode(rest[:n]), G.decode(rest[n:]), b"")

    def encode_extraction(self, ext):
        return sigma.pack(bytes(ext.e), bytes(ext.c), bytes(ext.sig.s),
                          ext.sig.r, ext.proof)

    def decode_extraction(self, data):
        eb, cb, sb, r, proof = sigma.unpack(data, 5)
        if r:
            raise DecodeError("unexpected signature randomness")
        G = self.bk.G1
        return Extraction(decode_elgamal(self.bk, eb, self.bk.M), G.decode(cb),
                          ClassSSignature(G.decode(sb), r), proof)
