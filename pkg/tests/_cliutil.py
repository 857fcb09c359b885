"""Helpers shared by the CLI and acceptance tests."""

import contextlib
import io
import json
import os
import threading

from osig import cli, sigma
from osig.groups import DecodeError, seeded_rng
from osig.sigma import pack, unpack


def run(*argv):
    """In-process CLI call -> (exit code, stdout text, stderr text)."""
    out = io.TextIOWrapper(io.BytesIO(), encoding="utf-8")
    err = io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        code = cli.main([str(a) for a in argv])
        out.flush()
    return code, out.buffer.getvalue().decode(errors="replace"), err.getvalue()


def make_artifacts(d, scheme, backend, seed=1):
    """Produce one file of every artifact kind that ``scheme`` supports.
    -> (keys dir, {kind: [paths]})."""
    keys = os.path.join(d, "keys")
    arts = {}

    def ok(*argv):
        code, out, err = run(*argv)
        assert code == 0, (argv, out, err)

    ok("keygen", "--scheme", scheme, "--backend", backend, "--out", keys,
       "--seed", seed)
    arts[cli.SIGNER_KEY] = [os.path.join(keys, f) for f in
                            ("signer.key", "sender.key")
                            if os.path.exists(os.path.join(keys, f))]
    arts[cli.CONFIRMER_KEY] = [os.path.join(keys, f) for f in
                               ("confirmer.key", "receiver.key")
                               if os.path.exists(os.path.join(keys, f))]
    arts[cli.PUBLIC_KEY] = [os.path.join(keys, "public.key")]
    p = lambda name: os.path.join(d, name)  # noqa: E731
    msg = "\x05" if backend == "toy" else "hello"
    tr = p("tr.osg")
    if scheme == "etste":
        ok("signcrypt", "--keys", keys, "--msg", msg, "--out", p("sc.osg"),
           "--coins-out", p("coins.osg"), "--seed", seed)
        ok("sig-extract", "--keys", keys, "--msg", msg, "--in", p("sc.osg"),
           "--out", p("ext.osg"), "--seed", seed)
        ok("confirm", "--keys", keys, "--msg", msg, "--sig", p("sc.osg"),
           "--transcript-out", tr, "--seed", seed)
        arts[cli.SIGNCRYPTION] = [p("sc.osg")]
        arts[cli.EXTRACTION] = [p("ext.osg")]
    else:
        ok("sign", "--keys", keys, "--msg", msg, "--out", p("sig.osg"),
           "--coins-out", p("coins.osg"), "--seed", seed)
        ok("convert", "--keys", keys, "--msg", msg, "--sig", p("sig.osg"),
           "--out", p("conv.osg"))
        arts[cli.SIGNATURE] = [p("sig.osg")]
        arts[cli.CONVERTED] = [p("conv.osg")]
        if scheme != "cteas":
            ok("confirm", "--keys", keys, "--msg", msg, "--sig", p("sig.osg"),
               "--transcript-out", tr, "--seed", seed)
    arts[cli.COINS] = [p("coins.osg")]
    if os.path.exists(tr):
        arts[cli.TRANSCRIPT] = [tr]
    ok("game", "commit-encrypt", "--trials", 5, "--seed", seed,
       "--backend", backend, "--record-out", p("report.osg"))
    arts[cli.REPORT] = [p("report.osg")]
    return keys, arts


def reencode(path, keys_dir, kind):
    """Decode an artifact and encode it again."""
    with open(path, "rb") as fh:
        data = fh.read()
    if kind in (cli.SIGNER_KEY, cli.CONFIRMER_KEY, cli.PUBLIC_KEY):
        scheme, keys = cli.load_keys(keys_dir)
        return cli.key_files(scheme, keys)[os.path.basename(path)]
    if kind == cli.REPORT:
        _, bk, payload = cli.open_envelope(data, cli.REPORT)
        rec = json.loads(payload)
        return cli.envelope(cli.REPORT, bk.tag,
                            json.dumps(rec, sort_keys=True).encode())
    if kind == cli.MESSAGE:
        _, bk, payload = cli.open_envelope(data, cli.MESSAGE)
        return cli._msg_frame(bk, *unpack(payload, 2))
    scheme, keys = cli.load_keys(keys_dir)
    bk, tag = scheme.bk, bytes([scheme.tag])
    if kind in (cli.SIGNATURE, cli.SIGNCRYPTION):
        obj, _ = cli.load_object(scheme, keys, path)
        return cli.encode_object(scheme, obj)
    body = cli.load_payload(scheme, path, kind)
    if kind == cli.COINS:
        coins = cli.decode_coins(scheme, body)
        return cli.envelope(kind, bk.tag, cli.encode_coins(scheme, coins))
    if kind == cli.CONVERTED:
        conv = scheme.decode_converted(body, keys.cpk)
        return cli.envelope(kind, bk.tag, pack(tag,
                                               scheme.encode_converted(conv)))
    if kind == cli.EXTRACTION:
        ext = scheme.decode_extraction(body)
        return cli.envelope(kind, bk.tag, pack(tag,
                                               scheme.encode_extraction(ext)))
    if kind == cli.TRANSCRIPT:
        proto, space, obody, m, status, extra, tr_b = unpack(body, 7)
        scheme, keys = cli.load_keys(keys_dir, sigma.bytes_int(space))
        obj = cli.decode_object_bytes(scheme, keys, obody)
        stmt = cli.verifier_statement(scheme, keys, proto.decode(), obj, m,
                                      extra)
        tr = stmt.decode_transcript(tr_b)
        obody2 = scheme.encode(obj)
        return cli.transcript_artifact(scheme, proto.decode(), obody2, m,
                                       status, extra,
                                       stmt.encode_transcript(tr))
    raise ValueError(kind)


class _Pipe:
    """One direction of a frame channel."""

    def __init__(self):
        r, w = os.pipe()
        self.r = os.fdopen(r, "rb", buffering=0)
        self.w = os.fdopen(w, "wb", buffering=0)


def _relay(src, dst, frames, tamper):
    # forward frames, recording them; tamper(i, env) may rewrite frame i
    i = 0
    try:
        while True:
            env = cli.read_frame(src)
            frames.append(env)
            if tamper is not None:
                env = tamper(i, env)
            cli.write_frame(dst, env)
            i += 1
    except (DecodeError, OSError, ValueError):
        pass
    finally:
        try:
            dst.close()
        except OSError:
            pass


def split_session(scheme, keys, proto, obj, m, coins=None, seed=0,
                  tamper=None):
    """Run prover and verifier halves in threads, connected through OS
    pipes with a relay on the prover-to-verifier leg.
    -> (prover result or exception, verifier result or exception, frames)."""
    p2r, r2v, v2p = _Pipe(), _Pipe(), _Pipe()
    res = {}
    frames = []

    def prover():
        try:
            res["p"] = cli.split_prover(scheme, keys, proto, obj, m, coins,
                                        sigma_rng(seed, "p"), v2p.r, p2r.w)
        except Exception as exc:  # noqa: BLE001 - reported to the caller
            res["p"] = exc
        finally:
            p2r.w.close()

    def verifier():
        try:
            res["v"] = cli.split_verifier(scheme, keys, proto, obj, m,
                                          sigma_rng(seed, "v"), r2v.r, v2p.w)
        except Exception as exc:  # noqa: BLE001
            res["v"] = exc
        finally:
            v2p.w.close()

    ts = [threading.Thread(target=prover), threading.Thread(target=verifier),
          threading.Thread(target=_relay, args=(p2r.r, r2v.w, frames, tamper))]
    for t in ts:
        t.start()
    for t in ts:
        t.join(60)
    for f in (p2r.r, r2v.r, v2p.r):
        f.close()
    return res.get("p"), res.get("v"), frames


def sigma_rng(seed, role):
    return seeded_rng(seed, "split", role)


def flip(env, pos):
    b = bytearray(env)
    b[pos] ^= 0x01
    return bytes(b)
