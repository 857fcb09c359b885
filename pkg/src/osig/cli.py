"""Command-line front end.

Every file the tool writes is an envelope

    b"OSG1" || kind (1 byte) || backend tag (1 byte) || version (1 byte) || payload

and interactive protocols exchange frames (4-byte big-endian length ||
envelope) over stdin/stdout when run with ``--split``.  Without ``--split``
both roles run in-process and the transcript can be saved for replay with
``verify-transcript``.

Exit codes: 0 success, 1 verification failure (or an honest prover
declining), 2 usage or decode error.
"""

import argparse
import json
import os
import sys

from . import analysis, sigma
from .cdcs import SCHEMES, CdcsKeys, KeyPair, Refused
from .groups import DecodeError, backend_from_tag, default_rng, get_backend, \
    seeded_rng
from .primitives import PaillierPublicKey, PaillierSecretKey
from .sigma import HomPreimage, bytes_int, int_bytes, pack, unpack
from .signcrypt import EtStE, ReceiverKeys, SigncryptCoins, SigncryptKeys

MAGIC = b"OSG1"
VERSION = 1

SIGNER_KEY = 1
CONFIRMER_KEY = 2
PUBLIC_KEY = 3
SIGNATURE = 4
COINS = 5
CONVERTED = 6
TRANSCRIPT = 7
SIGNCRYPTION = 8
EXTRACTION = 9
MESSAGE = 10
REPORT = 11
KINDS = {SIGNER_KEY: "signer-key", CONFIRMER_KEY: "confirmer-key",
         PUBLIC_KEY: "public-key", SIGNATURE: "signature", COINS: "coins",
         CONVERTED: "converted", TRANSCRIPT: "transcript",
         SIGNCRYPTION: "signcryption", EXTRACTION: "extraction",
         MESSAGE: "message", REPORT: "report"}

ROLE_SIGNER, ROLE_CONFIRMER, ROLE_SENDER, ROLE_RECEIVER = 1, 2, 3, 4
ROLE_FILES = {ROLE_SIGNER: "signer.key", ROLE_CONFIRMER: "confirmer.key",
              ROLE_SENDER: "sender.key", ROLE_RECEIVER: "receiver.key"}

BACKEND_ENV = "OSIG_BACKEND"
KEYS_ENV = "OSIG_KEYS"


class Usage(Exception):
    pass


class Failed(Exception):
    """Verification failure: exit code 1."""


# ------------------------------------------------------------- envelope

def envelope(kind, backend_tag, payload):
    if kind not in KINDS:
        raise ValueError("unknown kind %r" % kind)
    return MAGIC + bytes([kind, backend_tag, VERSION]) + payload


def open_envelope(data, kind=None):
    """-> (kind, backend, payload)."""
    if len(data) < 7 or data[:4] != MAGIC:
        raise DecodeError("not an osig envelope")
    k, tag, ver = data[4], data[5], data[6]
    if k not in KINDS:
        raise DecodeError("unknown artifact kind %d" % k)
    if ver != VERSION:
        raise DecodeError("unsupported version %d" % ver)
    if kind is not None and k != kind:
        raise DecodeError("expected a %s, got a %s" % (KINDS[kind], KINDS[k]))
    return k, backend_from_tag(tag), data[7:]


def write_frame(stream, env):
    stream.write(len(env).to_bytes(4, "big") + env)
    stream.flush()


def _read_exact(stream, n):
    buf = b""
    while len(buf) < n:
        chunk = stream.read(n - len(buf))
        if not chunk:
            raise DecodeError("truncated frame")
        buf += chunk
    return buf


def read_frame(stream):
    n = int.from_bytes(_read_exact(stream, 4), "big")
    return _read_exact(stream, n)


# --------------------------------------------------------- scheme lookup

def scheme_by_tag(tag, bk, space=2):
    if tag == EtStE.tag:
        return EtStE(bk, space)
    for cls in SCHEMES.values():
        if cls.tag == tag:
            return cls(bk, space)
    raise DecodeError("unknown scheme tag %d" % tag)


def scheme_by_name(name, bk, space=2):
    if name == EtStE.name:
        return EtStE(bk, space)
    if name not in SCHEMES:
        raise Usage("unknown scheme %r" % name)
    return SCHEMES[name](bk, space)


def _paillier(scheme):
    return scheme.name in ("ctets", "cteas")


def _scheme_payload(scheme, data):
    tag, body = unpack(data, 2)
    if tag != bytes([scheme.tag]):
        raise DecodeError("artifact belongs to another scheme")
    return body


# ------------------------------------------------------------------ keys

def encode_cpk(scheme, cpk):
    if isinstance(scheme, EtStE):
        return pack(bytes(cpk[0]), bytes(cpk[1]))
    if _paillier(scheme):
        return int_bytes(cpk.n)
    return bytes(cpk)


def decode_cpk(scheme, data):
    bk = scheme.bk
    if isinstance(scheme, EtStE):
        a, b = unpack(data, 2)
        return (bk.G1.decode(a), bk.G1.decode(b))
    if _paillier(scheme):
        n = bytes_int(data)
        if n < 3 or n % 2 == 0:
            raise DecodeError("bad Paillier modulus")
        return PaillierPublicKey(n)
    return bk.G1.decode(data)


def _encode_csk(scheme, sk):
    bk = scheme.bk
    if isinstance(scheme, EtStE):
        return pack(bk.encode_scalar(sk[0]), bk.encode_scalar(sk[1]))
    if _paillier(scheme):
        return pack(int_bytes(sk.p), int_bytes(sk.q))
    return bk.encode_scalar(sk)


def _decode_csk(scheme, data):
    bk = scheme.bk
    if isinstance(scheme, EtStE):
        a, b = unpack(data, 2)
        return (bk.decode_scalar(a), bk.decode_scalar(b))
    if _paillier(scheme):
        p, q = unpack(data, 2)
        return PaillierSecretKey(bytes_int(p), bytes_int(q))
    return bk.decode_scalar(data)


def _csk_matches(scheme, sk, pk):
    bk = scheme.bk
    if isinstance(scheme, EtStE):
        return bk.g1 ** sk[0] == pk[0] and bk.g1 ** sk[1] == pk[1]
    if _paillier(scheme):
        return sk.n == pk.n
    return bk.g1 ** sk == pk


def key_files(scheme, keys):
    """-> {filename: envelope bytes}."""
    bk = scheme.bk
    sign_role, conf_role = ((ROLE_SENDER, ROLE_RECEIVER)
                            if isinstance(scheme, EtStE)
                            else (ROLE_SIGNER, ROLE_CONFIRMER))
    if isinstance(scheme, EtStE):
        csk = (keys.receiver.gamma.sk, keys.receiver.kem.sk)
        cpk = keys.rpk
    else:
        csk, cpk = keys.confirmer.sk, keys.cpk
    tag = bytes([scheme.tag])
    spk_b, cpk_b = bytes(keys.spk), encode_cpk(scheme, cpk)
    return {
        ROLE_FILES[sign_role]: envelope(SIGNER_KEY, bk.tag, pack(
            tag, bytes([sign_role]), bk.encode_scalar(_signer(keys).sk),
            spk_b)),
        ROLE_FILES[conf_role]: envelope(CONFIRMER_KEY, bk.tag, pack(
            tag, bytes([conf_role]), _encode_csk(scheme, csk), cpk_b)),
        "public.key": envelope(PUBLIC_KEY, bk.tag, pack(tag, spk_b, cpk_b)),
    }


def _read(path):
    try:
        with open(path, "rb") as fh:
            return fh.read()
    except OSError as exc:
        raise Usage("cannot read %s: %s" % (path, exc.strerror))


def _write(path, data):
    try:
        with open(path, "wb") as fh:
            fh.write(data)
    except OSError as exc:
        raise Usage("cannot write %s: %s" % (path, exc.strerror))


def load_keys(directory, space=2):
    """Public key plus whatever secret key files are present.
    -> (scheme, keys) with missing secrets set to None."""
    _, bk, payload = open_envelope(_read(os.path.join(directory, "public.key")),
                                   PUBLIC_KEY)
    tag, spk_b, cpk_b = unpack(payload, 3)
    if len(tag) != 1:
        raise DecodeError("bad scheme tag")
    scheme = scheme_by_tag(tag[0], bk, space)
    spk, cpk = bk.G2.decode(spk_b), decode_cpk(scheme, cpk_b)
    ssk = csk = None
    for role, fname in ROLE_FILES.items():
        path = os.path.join(directory, fname)
        if not os.path.exists(path):
            continue
        kind, kbk, body = open_envelope(_read(path))
        t, r, sk_b, pk_b = unpack(body, 4)
        if kbk is not bk or t != tag or r != bytes([role]):
            raise DecodeError("%s does not belong with public.key" % fname)
        if kind == SIGNER_KEY and role in (ROLE_SIGNER, ROLE_SENDER):
            if pk_b != spk_b:
                raise DecodeError("%s does not match public.key" % fname)
            ssk = bk.decode_scalar(sk_b)
            if bk.g2 ** ssk != spk:
                raise DecodeError("corrupt %s" % fname)
        elif kind == CONFIRMER_KEY and role in (ROLE_CONFIRMER, ROLE_RECEIVER):
            if pk_b != cpk_b:
                raise DecodeError("%s does not match public.key" % fname)
            csk = _decode_csk(scheme, sk_b)
            if not _csk_matches(scheme, csk, cpk):
                raise DecodeError("corrupt %s" % fname)
        else:
            raise DecodeError("%s has the wrong kind" % fname)
    if isinstance(scheme, EtStE):
        g, k = csk if csk is not None else (None, None)
        keys = SigncryptKeys(KeyPair(ssk, spk),
                             ReceiverKeys(KeyPair(g, cpk[0]), KeyPair(k, cpk[1])))
    else:
        keys = CdcsKeys(KeyPair(ssk, spk), KeyPair(csk, cpk))
    return scheme, keys


def _signer(keys):
    return keys.sender if isinstance(keys, SigncryptKeys) else keys.signer


def _need(keys, which):
    sk = _signer(keys).sk if which == "signer" else (
        keys.receiver.gamma.sk if isinstance(keys, SigncryptKeys)
        else keys.confirmer.sk)
    if sk is None:
        raise Usage("the %s secret key is not in the key directory" % which)


# -------------------------------------------------------------- objects

def encode_coins(scheme, coins):
    if isinstance(coins, SigncryptCoins):
        vals = [coins.a, coins.k]
    elif isinstance(coins, tuple):
        vals = list(coins)
    else:
        vals = [coins]
    return pack(bytes([scheme.tag]), pack(*[int_bytes(int(v)) for v in vals]))


def decode_coins(scheme, data):
    vals = [bytes_int(v) for v in unpack(data)]
    if isinstance(scheme, EtStE):
        if len(vals) != 2:
            raise DecodeError("bad coins")
        return SigncryptCoins(*vals)
    if _paillier(scheme):
        if len(vals) != 2:
            raise DecodeError("bad coins")
        return tuple(vals)
    if len(vals) != 1 or vals[0] >= scheme.bk.order:
        raise DecodeError("bad coins")
    return vals[0]


def encode_object(scheme, obj):
    """Signature or signcryption -> envelope."""
    if isinstance(scheme, EtStE):
        return envelope(SIGNCRYPTION, scheme.bk.tag,
                        pack(bytes([scheme.tag]), scheme.encode(obj)))
    return envelope(SIGNATURE, scheme.bk.tag,
                    pack(bytes([scheme.tag]), scheme.encode(obj)))


def decode_object_bytes(scheme, keys, body):
    if isinstance(scheme, EtStE):
        return scheme.decode(body)
    return scheme.decode(body, keys.spk, keys.cpk)


def load_object(scheme, keys, path):
    kind = SIGNCRYPTION if isinstance(scheme, EtStE) else SIGNATURE
    _, bk, payload = open_envelope(_read(path), kind)
    if bk is not scheme.bk:
        raise DecodeError("artifact is for another backend")
    body = _scheme_payload(scheme, payload)
    return decode_object_bytes(scheme, keys, body), body


def load_payload(scheme, path, kind):
    _, bk, payload = open_envelope(_read(path), kind)
    if bk is not scheme.bk:
        raise DecodeError("artifact is for another backend")
    return _scheme_payload(scheme, payload)


# ------------------------------------------------------------ protocols

def prover_instance(scheme, keys, proto, obj, m, coins=None):
    """-> (status, extra, stmt, wit); status is b"ok" or b"malformed".
    Raises Refused when the honest prover declines."""
    if isinstance(scheme, EtStE):
        if proto == "validity":
            role = "sender" if coins is not None else "receiver"
            stmt, wit = scheme.validity_instance(keys, obj, role, coins)
        elif proto == "confirm":
            stmt, wit = scheme.confirm_instance(keys, obj, m)
        elif proto == "deny":
            stmt, wit = scheme.deny_instance(keys, obj, m)
        else:
            raise Usage("%s has no %s protocol" % (scheme.name, proto))
        return b"ok", b"", stmt, wit
    if not hasattr(scheme, "confirm_statement"):
        raise Usage("%s has no confirmation protocols" % scheme.name)
    if proto == "sconfirm":
        stmt, wit = scheme.sconfirm_instance(keys, obj, m, coins)
    elif proto == "confirm":
        stmt, wit = scheme.confirm_instance(keys, obj, m)
    elif proto == "deny":
        if scheme.verify(keys, obj, m):
            raise Refused("signature is valid")
        stmt, wit = scheme.deny_instance(keys, obj, m)
        if stmt is None:
            return b"malformed", b"", None, None
    else:
        raise Usage("%s has no %s protocol" % (scheme.name, proto))
    extra = b""
    if isinstance(stmt, HomPreimage) and stmt.label.startswith(b"reveal"):
        extra = stmt.label[len(b"reveal"):]
    return b"ok", extra, stmt, wit


def verifier_statement(scheme, keys, proto, obj, m, extra=b""):
    spk = keys.spk
    if isinstance(scheme, EtStE):
        if proto == "validity":
            return scheme.validity_statement(spk, keys.rpk, obj)
        if proto == "confirm":
            return scheme.confirm_statement(spk, keys.rpk, obj, m)
        if proto == "deny":
            return scheme.deny_statement(spk, keys.rpk, obj, m)
        raise DecodeError("unknown protocol")
    if not hasattr(scheme, "confirm_statement"):
        raise Usage("%s has no confirmation protocols" % scheme.name)
    if proto == "sconfirm":
        return scheme.confirm_statement(spk, keys.cpk, obj, m, "signer")
    if proto == "confirm":
        return scheme.confirm_statement(spk, keys.cpk, obj, m)
    if proto == "deny":
        if extra:
            if scheme.name != "ctets":
                raise DecodeError("unexpected reveal value")
            return scheme.deny_statement(spk, keys.cpk, obj, m,
                                         reveal=bytes_int(extra))
        return scheme.deny_statement(spk, keys.cpk, obj, m)
    raise DecodeError("unknown protocol")


def transcript_artifact(scheme, proto, body, m, status, extra, tr_bytes):
    return envelope(TRANSCRIPT, scheme.bk.tag, pack(
        bytes([scheme.tag]), pack(proto.encode(), int_bytes(scheme.space),
                                  body, m, status, extra, tr_bytes)))


def replay_transcript(scheme_keys_loader, data):
    """Re-verify a saved transcript artifact; -> bool."""
    _, bk, payload = open_envelope(data, TRANSCRIPT)
    tag, rest = unpack(payload, 2)
    proto, space, body, m, status, extra, tr_bytes = unpack(rest, 7)
    scheme, keys = scheme_keys_loader(bytes_int(space))
    if bk is not scheme.bk or tag != bytes([scheme.tag]):
        raise DecodeError("transcript is for other keys")
    obj = decode_object_bytes(scheme, keys, body)
    stmt = verifier_statement(scheme, keys, proto.decode("ascii", "replace"),
                              obj, m, extra)
    if status == b"malformed":
        return proto == b"deny" and stmt is None and not tr_bytes
    if status != b"ok" or stmt is None:
        return False
    try:
        tr = stmt.decode_transcript(tr_bytes)
    except DecodeError:
        return False
    return stmt.verify(tr)


def _msg_frame(bk, label, data=b""):
    return envelope(MESSAGE, bk.tag, pack(label, data))


def _expect(stream, bk, label):
    _, fbk, payload = open_envelope(read_frame(stream), MESSAGE)
    got, data = unpack(payload, 2)
    if fbk is not bk or got != label:
        raise DecodeError("protocol out of step: expected %r" % label)
    return data


def split_prover(scheme, keys, proto, obj, m, coins, rng, inp, out):
    """Prover half over frames.  -> verifier's verdict."""
    bk = scheme.bk
    try:
        status, extra, stmt, wit = prover_instance(scheme, keys, proto, obj, m,
                                                   coins)
    except Refused:
        write_frame(out, _msg_frame(bk, b"hint", pack(b"refuse", b"")))
        raise
    write_frame(out, _msg_frame(bk, b"hint", pack(status, extra)))
    if status == b"ok":
        p = sigma.ProverSession(stmt, wit, rng)
        write_frame(out, _msg_frame(bk, b"com", p.commit()))
        b = _expect(inp, bk, b"chal")
        write_frame(out, _msg_frame(bk, b"resp", p.respond(b)))
        if stmt.stages == 2:
            c = _expect(inp, bk, b"chal2")
            write_frame(out, _msg_frame(bk, b"final", p.finish(c)))
    return _expect(inp, bk, b"verdict") == b"\x01"


def split_verifier(scheme, keys, proto, obj, m, rng, inp, out):
    """Verifier half.  -> (verdict, status, extra, transcript bytes)."""
    bk = scheme.bk
    status, extra = unpack(_expect(inp, bk, b"hint"), 2)
    tr_bytes = b""
    if status == b"refuse":
        return False, status, extra, tr_bytes
    stmt = verifier_statement(scheme, keys, proto, obj, m, extra)
    if status == b"malformed":
        verdict = proto == "deny" and stmt is None
    elif status != b"ok" or stmt is None:
        raise DecodeError("prover sent an unusable hint")
    else:
        v = sigma.VerifierSession(stmt, rng)
        try:
            b = v.challenge(_expect(inp, bk, b"com"))
            write_frame(out, _msg_frame(bk, b"chal", b))
            c = v.inner_challenge(_expect(inp, bk, b"resp"))
            if c is not None:
                write_frame(out, _msg_frame(bk, b"chal2", c))
                v.finish(_expect(inp, bk, b"final"))
            verdict = bool(v.verdict)
        except DecodeError:
            # a mangled prover message is a rejection, not a usage error
            verdict = False
        if v.transcript is not None:
            tr_bytes = stmt.encode_transcript(v.transcript)
    write_frame(out, _msg_frame(bk, b"verdict", b"\x01" if verdict else b"\x00"))
    return verdict, status, extra, tr_bytes


def run_in_process(scheme, keys, proto, obj, m, coins, rng):
    """-> (verdict, status, extra, transcript bytes)."""
    status, extra, stmt, wit = prover_instance(scheme, keys, proto, obj, m,
                                               coins)
    if status == b"malformed":
        return True, status, extra, b""
    verdict, tr = sigma.run(stmt, wit, rng)
    return bool(verdict), status, extra, (stmt.encode_transcript(tr)
                                          if tr is not None else b"")


# ------------------------------------------------------------- commands

def _rng(args, *labels):
    if getattr(args, "seed", None) is None:
        return default_rng()
    return seeded_rng(args.seed, "cli", args.command, *labels)


def _message(args):
    if args.msg_file is not None:
        return _read(args.msg_file)
    if args.msg is not None:
        return args.msg.encode()
    raise Usage("a message is required (--msg-file or --msg)")


def _check_message(scheme, m):
    try:
        scheme.bk.encode_message(m)
    except ValueError as exc:
        raise Usage("message not encodable in this backend: %s" % exc)


def cmd_keygen(args):
    bk = get_backend(args.backend)
    scheme = scheme_by_name(args.scheme, bk)
    keys = scheme.keygen(_rng(args))
    os.makedirs(args.out, exist_ok=True)
    for fname, data in key_files(scheme, keys).items():
        _write(os.path.join(args.out, fname), data)
    print("wrote %s keys (%s backend) to %s" % (scheme.name, bk.name, args.out),
          file=sys.stderr)
    return 0


def _cdcs(args, secret=None):
    scheme, keys = load_keys(args.keys, getattr(args, "space", 2))
    if isinstance(scheme, EtStE):
        raise Usage("%s is a signcryption scheme" % scheme.name)
    if secret:
        _need(keys, secret)
    return scheme, keys


def _sc(args, secret=None):
    scheme, keys = load_keys(args.keys, getattr(args, "space", 2))
    if not isinstance(scheme, EtStE):
        raise Usage("%s is not a signcryption scheme" % scheme.name)
    if secret:
        _need(keys, secret)
    return scheme, keys


def cmd_sign(args):
    scheme, keys = _cdcs(args, "signer")
    m = _message(args)
    _check_message(scheme, m)
    mu, coins = scheme.sign(keys, m, _rng(args))
    _write(args.out, encode_object(scheme, mu))
    if args.coins_out:
        _write(args.coins_out, envelope(COINS, scheme.bk.tag,
                                        encode_coins(scheme, coins)))
    return 0


def cmd_convert(args):
    scheme, keys = _cdcs(args, "confirmer")
    m = _message(args)
    mu, _ = load_object(scheme, keys, args.sig)
    conv = scheme.convert(keys, mu, m)
    if conv is None:
        raise Failed("signature is not valid for this message")
    _write(args.out, envelope(CONVERTED, scheme.bk.tag,
                              pack(bytes([scheme.tag]),
                                   scheme.encode_converted(conv))))
    return 0


def cmd_verify_converted(args):
    scheme, keys = _cdcs(args)
    m = _message(args)
    body = load_payload(scheme, args.converted, CONVERTED)
    conv = scheme.decode_converted(body, keys.cpk)
    ok = scheme.verify_converted(keys.spk, keys.cpk, conv, m)
    print("valid" if ok else "invalid")
    return 0 if ok else 1


def cmd_signcrypt(args):
    scheme, keys = _sc(args, "signer")
    m = _message(args)
    _check_message(scheme, m)
    mu, coins = scheme.signcrypt(keys, m, _rng(args))
    _write(args.out, encode_object(scheme, mu))
    if args.coins_out:
        _write(args.coins_out, envelope(COINS, scheme.bk.tag,
                                        encode_coins(scheme, coins)))
    return 0


def cmd_unsigncrypt(args):
    scheme, keys = _sc(args, "confirmer")
    mu, _ = load_object(scheme, keys, args.input)
    m = scheme.unsigncrypt(keys.receiver, mu, keys.spk)
    if m is None:
        print("invalid signcryption", file=sys.stderr)
        return 1
    if args.out:
        _write(args.out, m)
    else:
        sys.stdout.buffer.write(m)
        sys.stdout.flush()
    return 0


def cmd_sig_extract(args):
    scheme, keys = _sc(args, "confirmer")
    m = _message(args)
    mu, _ = load_object(scheme, keys, args.input)
    ext = scheme.sig_extract(keys, mu, m, _rng(args))
    if ext is None:
        raise Failed("not a signcryption of this message")
    _write(args.out, envelope(EXTRACTION, scheme.bk.tag,
                              pack(bytes([scheme.tag]),
                                   scheme.encode_extraction(ext))))
    return 0


def cmd_sig_verify(args):
    scheme, keys = _sc(args)
    m = _message(args)
    ext = scheme.decode_extraction(load_payload(scheme, args.extraction,
                                                EXTRACTION))
    ok = scheme.sig_verify(keys.spk, keys.rpk, ext, m)
    print("valid" if ok else "invalid")
    return 0 if ok else 1


def _protocol(args, proto):
    scheme, keys = load_keys(args.keys, args.space)
    obj, body = load_object(scheme, keys, args.sig)
    m = _message(args) if proto != "validity" else b""
    coins = None
    if args.coins:
        coins = decode_coins(scheme, load_payload(scheme, args.coins, COINS))
    if proto == "confirm" and getattr(args, "role", None) == "signer":
        proto = "sconfirm"
    split = args.split
    if split != "verifier":
        if proto in ("sconfirm",) or (proto == "validity" and coins is not None):
            _need(keys, "signer")
            if coins is None:
                raise Usage("the signer role needs --coins")
        else:
            _need(keys, "confirmer")
    inp, out = sys.stdin.buffer, sys.stdout.buffer
    if split == "prover":
        try:
            ok = split_prover(scheme, keys, proto, obj, m, coins, _rng(args),
                              inp, out)
        except Refused as exc:
            raise Failed("prover declines: %s" % exc)
        print("accept" if ok else "reject", file=sys.stderr)
        return 0 if ok else 1
    if split == "verifier":
        ok, status, extra, tr = split_verifier(scheme, keys, proto, obj, m,
                                               _rng(args), inp, out)
        if status == b"refuse":
            raise Failed("prover declined")
    else:
        try:
            ok, status, extra, tr = run_in_process(scheme, keys, proto, obj, m,
                                                   coins, _rng(args))
        except Refused as exc:
            raise Failed("prover declines: %s" % exc)
    if args.transcript_out:
        _write(args.transcript_out,
               transcript_artifact(scheme, proto, body, m, status, extra, tr))
    print("accept" if ok else "reject",
          file=sys.stderr if split else sys.stdout)
    return 0 if ok else 1


def cmd_confirm(args):
    return _protocol(args, "confirm")


def cmd_deny(args):
    return _protocol(args, "deny")


def cmd_prove_validity(args):
    return _protocol(args, "validity")


def cmd_verify_transcript(args):
    ok = replay_transcript(lambda space: load_keys(args.keys, space),
                           _read(args.transcript))
    print("accept" if ok else "reject")
    return 0 if ok else 1


def _report_out(args, rep, bk_tag):
    print(rep.to_text())
    if args.record_out:
        rec = json.dumps(rep.to_record(), sort_keys=True,
                         default=str).encode()
        _write(args.record_out, envelope(REPORT, bk_tag, rec))


def cmd_attack(args):
    bk = get_backend(args.backend)
    if args.attack == "fact1":
        if not args.target:
            raise Usage("attack fact1 needs --target")
        try:
            rep = analysis.fact1_attack(args.target, args.backend, args.oracle,
                                        args.trials, args.seed)
        except analysis.NotApplicable as exc:
            raise Usage(str(exc))
    else:
        rep = analysis.dp_attack_report(args.backend, args.trials, args.seed,
                                        args.repaired)
    _report_out(args, rep, bk.tag)
    return 0


ADVERSARIES = {
    "guess": analysis.GuessingAdversary,
    "fact1": lambda: analysis.Fact1Adversary("convert"),
    "fact1-verify": lambda: analysis.Fact1Adversary("verify"),
    "forbidden": analysis.ForbiddenQueryAdversary,
    "maul": analysis.MaulingSigncryptAdversary,
}


def cmd_game(args):
    bk = get_backend(args.backend)
    if args.experiment == "commit-encrypt":
        rep = analysis.commit_encrypt_game(args.trials, args.seed)
        _report_out(args, rep, bk.tag)
        return 0
    if not args.scheme:
        raise Usage("game %s needs --scheme" % args.experiment)
    scheme = analysis.make_scheme(args.scheme, args.backend, args.space)
    adv = None
    if args.adversary:
        table = (analysis.FORGERS if args.experiment == "euf-cma"
                 else ADVERSARIES)
        if args.adversary not in table:
            raise Usage("unknown adversary %r for %s" % (args.adversary,
                                                         args.experiment))
        adv = table[args.adversary]()
    try:
        rep = analysis.run_experiment(scheme, args.experiment, adv,
                                      args.trials, args.seed)
    except analysis.NotApplicable as exc:
        raise Usage(str(exc))
    _report_out(args, rep, bk.tag)
    return 0


# --------------------------------------------------------------- parser

def build_parser():
    default_backend = os.environ.get(BACKEND_ENV, "toy")
    default_keys = os.environ.get(KEYS_ENV, "keys")
    ap = argparse.ArgumentParser(
        prog="osig",
        description="Convertible designated confirmer signatures and "
                    "verifiable signcryption.",
        epilog="Exit codes: 0 success, 1 verification failure, 2 usage or "
               "decode error.  %s sets the default backend, %s the default "
               "key directory." % (BACKEND_ENV, KEYS_ENV))
    sub = ap.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    def add(name, fn, help_):
        p = sub.add_parser(name, help=help_, description=help_)
        p.set_defaults(fn=fn)
        return p

    def keys_arg(p):
        p.add_argument("--keys", default=default_keys, metavar="DIR",
                       help="key directory (default %(default)s)")

    def msg_args(p):
        p.add_argument("--msg-file", metavar="FILE", help="message file")
        p.add_argument("--msg", help="message given inline (UTF-8)")

    def seed_arg(p, required=False):
        p.add_argument("--seed", type=int, required=required,
                       help="seed for reproducible randomness"
                       + ("" if required else " (default: system randomness)"))

    def proto_args(p, default_in):
        keys_arg(p)
        p.add_argument("--sig", "--in", dest="sig", default=default_in,
                       metavar="FILE", help="signature or signcryption "
                       "(default %(default)s)")
        p.add_argument("--coins", metavar="FILE",
                       help="signing coins (signer/sender role)")
        p.add_argument("--space", type=int, default=2,
                       help="challenge space size |C| (default 2)")
        p.add_argument("--split", choices=("prover", "verifier"),
                       help="run one role, exchanging frames on stdin/stdout")
        p.add_argument("--transcript-out", metavar="FILE",
                       help="save the transcript (in-process or verifier)")
        seed_arg(p)

    p = add("keygen", cmd_keygen, "generate key files")
    p.add_argument("--scheme", required=True,
                   choices=sorted(SCHEMES) + [EtStE.name])
    p.add_argument("--backend", default=default_backend,
                   choices=("toy", "production"))
    p.add_argument("--out", default=default_keys, metavar="DIR")
    seed_arg(p)

    p = add("sign", cmd_sign, "sign a message (CDCS)")
    keys_arg(p)
    msg_args(p)
    p.add_argument("--out", default="sig.osg", metavar="FILE")
    p.add_argument("--coins-out", metavar="FILE",
                   help="also save the signing coins (for confirm --role signer)")
    seed_arg(p)

    p = add("confirm", cmd_confirm, "prove a signature or signcryption valid")
    proto_args(p, "sig.osg")
    msg_args(p)
    p.add_argument("--role", choices=("confirmer", "signer"),
                   default="confirmer")

    p = add("deny", cmd_deny, "prove a signature or signcryption invalid")
    proto_args(p, "sig.osg")
    msg_args(p)

    p = add("convert", cmd_convert, "convert to an ordinary signature")
    keys_arg(p)
    msg_args(p)
    p.add_argument("--sig", default="sig.osg", metavar="FILE")
    p.add_argument("--out", default="converted.osg", metavar="FILE")

    p = add("verify-converted", cmd_verify_converted,
            "verify a converted signature")
    keys_arg(p)
    msg_args(p)
    p.add_argument("--converted", default="converted.osg", metavar="FILE")

    p = add("signcrypt", cmd_signcrypt, "signcrypt a message")
    keys_arg(p)
    msg_args(p)
    p.add_argument("--out", default="sc.osg", metavar="FILE")
    p.add_argument("--coins-out", metavar="FILE",
                   help="also save the coins (for prove-validity as sender)")
    seed_arg(p)

    p = add("unsigncrypt", cmd_unsigncrypt, "recover a signcrypted message")
    keys_arg(p)
    p.add_argument("--in", dest="input", default="sc.osg", metavar="FILE")
    p.add_argument("--out", metavar="FILE", help="default: standard output")

    p = add("prove-validity", cmd_prove_validity,
            "prove a signcryption well formed (sender with --coins, "
            "else receiver)")
    proto_args(p, "sc.osg")

    p = add("sig-extract", cmd_sig_extract,
            "disclose the inner signature with a decryption proof")
    keys_arg(p)
    msg_args(p)
    p.add_argument("--in", dest="input", default="sc.osg", metavar="FILE")
    p.add_argument("--out", default="extraction.osg", metavar="FILE")
    seed_arg(p)

    p = add("sig-verify", cmd_sig_verify, "check an extraction bundle")
    keys_arg(p)
    msg_args(p)
    p.add_argument("--extraction", default="extraction.osg", metavar="FILE")

    p = add("verify-transcript", cmd_verify_transcript,
            "replay a saved protocol transcript")
    keys_arg(p)
    p.add_argument("--transcript", required=True, metavar="FILE")

    p = add("attack", cmd_attack, "run a constructive attack")
    p.add_argument("attack", choices=("fact1", "dp"))
    p.add_argument("--target", choices=("plain-ste", "ets", "newste", "ctets",
                                        "cteas"))
    p.add_argument("--oracle", choices=("convert", "verify"),
                   default="convert",
                   help="fact1: oracle used to test the mauled signature")
    p.add_argument("--repaired", action="store_true",
                   help="dp: attack the repaired scheme")
    p.add_argument("--backend", default=default_backend,
                   choices=("toy", "production"))
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--record-out", metavar="FILE")
    seed_arg(p, required=True)

    p = add("game", cmd_game, "run a security experiment")
    p.add_argument("experiment", choices=("completeness", "inv-cma",
                                          "sinv-cma", "sind-cca", "euf-cma",
                                          "non-transferability",
                                          "commit-encrypt"))
    p.add_argument("--scheme", choices=analysis.SCHEME_NAMES)
    p.add_argument("--adversary",
                   help="guess, fact1, fact1-verify, forbidden, maul; "
                        "euf-cma: random, remix, maul")
    p.add_argument("--backend", default=default_backend,
                   choices=("toy", "production"))
    p.add_argument("--space", type=int, default=2)
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--record-out", metavar="FILE")
    seed_arg(p, required=True)
    return ap


def main(argv=None):
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return args.fn(args)
    except Failed as exc:
        print("osig: %s" % exc, file=sys.stderr)
        return 1
    except Usage as exc:
        print("osig: %s" % exc, file=sys.stderr)
        return 2
    except (DecodeError, ValueError) as exc:
        print("osig: decode error: %s" % exc, file=sys.stderr)
        return 2
    except BrokenPipeError:
        # reader went away; keep the interpreter from complaining at exit
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return 1


if __name__ == "__main__":
    sys.exit(main())
