"""Command-line interface.

Exit codes: 0 success, 1 usage problems, 2 data errors (bad key files,
out-of-range offsets, digest mismatches, missing files).
"""

from __future__ import annotations

import argparse
import json
import secrets
import sys
from pathlib import Path

from . import montecarlo
from .alphabet import ALPHABET, TabulaConfig, TabulaWalk
from .ciphers import (
    CipherMessage,
    FibonaKeys,
    PolyKeys,
    fibonarng_decrypt,
    fibonarng_encrypt,
    fibonarng_keystream,
    polycrypt_decrypt,
    polycrypt_encrypt,
    polycrypt_keystream,
    snake_decrypt,
    snake_encrypt,
    triple_text_decrypt,
    triple_text_encrypt,
)
from .corpus import CorpusSource, normalize_text
from .errors import InvalidInputError, KeyFileError, RectaError
from .keyfiles import digest_of, load_keys
from .passwords import BlumKey, PravaKey, blum_password, keyspace_report, prava_password
from .recovery import (
    Correction,
    apply_correction,
    dump_session_file,
    inject_errors,
    load_session,
    load_session_file,
    remove_correction,
    save_session,
    start_session,
    suggest_corrections,
)
from .stats import keyspace_summary, randomness_report

TEXT_SCHEMES = ("tripletext", "snake")
KEY_SCHEMES = ("fibonarng", "polycrypt")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _read_text(args) -> str:
    if getattr(args, "text", None) is not None:
        raw = args.text
    elif getattr(args, "infile", None) is not None:
        raw = Path(args.infile).read_text(encoding="utf-8")
    else:
        raw = sys.stdin.read()
    return normalize_text(raw)


def _rng_letters(spec: str, n: int) -> str:
    """Seed letters from an RNG handle: `os` or `seeded:<int>`."""
    if spec == "os":
        return "".join(secrets.choice(ALPHABET) for _ in range(n))
    if spec.startswith("seeded:"):
        import numpy as np

        try:
            master = int(spec.split(":", 1)[1])
        except ValueError:
            raise InvalidInputError(f"bad RNG handle {spec!r}") from None
        rng = np.random.default_rng(master)
        return "".join(ALPHABET[i] for i in rng.integers(0, 26, n))
    raise InvalidInputError(f"RNG handle must be 'os' or 'seeded:<int>', got {spec!r}")


def _load_message(args) -> CipherMessage:
    if getattr(args, "infile", None):
        doc = json.loads(Path(args.infile).read_text(encoding="utf-8"))
        return CipherMessage.from_dict(doc)
    if getattr(args, "ciphertext", None):
        return CipherMessage(
            scheme=args.scheme,
            ciphertext=normalize_text(args.ciphertext),
            offset=getattr(args, "offset", None),
            masked_seed_len=getattr(args, "masked_seed_len", None),
        )
    raise InvalidInputError("provide --in MESSAGE.json or --ciphertext")


def _write_out(args, doc: dict) -> None:
    if getattr(args, "out", None):
        Path(args.out).write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")


# ---------------------------------------------------------------------------


def cmd_encrypt(args) -> int:
    plaintext = _read_text(args)
    if not plaintext:
        raise InvalidInputError("plaintext is empty after normalization")
    if args.cut is not None:
        from .ciphers import russian_copulation

        plaintext = russian_copulation(
            plaintext, args.cut, normalize_text(args.marker or "")
        )
    if args.scheme in TEXT_SCHEMES:
        if args.corpus is None or args.offset is None:
            raise InvalidInputError(f"{args.scheme} needs --corpus and --offset")
        corpus = CorpusSource.resolve(args.corpus)
        if args.scheme == "snake":
            msg = snake_encrypt(plaintext, corpus, args.offset)
        else:
            msg = triple_text_encrypt(plaintext, corpus, args.offset, add_mode=args.add)
    else:
        if args.keys is None:
            raise InvalidInputError(f"{args.scheme} needs --keys")
        keys = load_keys(args.keys)
        if args.scheme == "fibonarng":
            if not isinstance(keys, FibonaKeys):
                raise KeyFileError("key file is not a fibonarng key set")
            msg = fibonarng_encrypt(plaintext, keys)
        else:
            if not isinstance(keys, PolyKeys):
                raise KeyFileError("key file is not a polycrypt key set")
            seed = normalize_text(args.seed) if args.seed else _rng_letters(
                args.seed_rng, len(keys.mask)
            )
            msg = polycrypt_encrypt(plaintext, keys, seed)
    ciphertext = msg.ciphertext
    if args.transpose:
        from .ciphers import columnar_transpose

        ciphertext = columnar_transpose(ciphertext, normalize_text(args.transpose))
        msg = CipherMessage(
            scheme=msg.scheme,
            ciphertext=ciphertext,
            offset=msg.offset,
            masked_seed_len=msg.masked_seed_len,
        )
    print(msg.ciphertext)
    _write_out(args, msg.to_dict())
    return 0


def cmd_decrypt(args) -> int:
    msg = _load_message(args)
    if args.transpose:
        from .ciphers import columnar_untranspose

        msg = CipherMessage(
            scheme=msg.scheme,
            ciphertext=columnar_untranspose(msg.ciphertext, normalize_text(args.transpose)),
            offset=msg.offset,
            masked_seed_len=msg.masked_seed_len,
        )
    if args.scheme in TEXT_SCHEMES:
        if args.corpus is None:
            raise InvalidInputError(f"{args.scheme} needs --corpus")
        corpus = CorpusSource.resolve(args.corpus)
        if msg.offset is None:
            raise InvalidInputError("message carries no corpus offset")
        if args.scheme == "snake":
            plain = snake_decrypt(msg, corpus)
        else:
            plain = triple_text_decrypt(msg, corpus, add_mode=args.add)
    else:
        if args.keys is None:
            raise InvalidInputError(f"{args.scheme} needs --keys")
        keys = load_keys(args.keys)
        if args.scheme == "fibonarng":
            if not isinstance(keys, FibonaKeys):
                raise KeyFileError("key file is not a fibonarng key set")
            plain = fibonarng_decrypt(msg, keys)
        else:
            if not isinstance(keys, PolyKeys):
                raise KeyFileError("key file is not a polycrypt key set")
            seed, plain = polycrypt_decrypt(msg, keys)
            if args.show_seed:
                print(f"seed: {seed}", file=sys.stderr)
    if args.cut is not None:
        from .ciphers import russian_uncopulation

        plain = russian_uncopulation(plain, args.cut, normalize_text(args.marker or ""))
    print(plain)
    return 0


def cmd_keystream(args) -> int:
    keys = load_keys(args.keys)
    if args.scheme == "fibonarng":
        if not isinstance(keys, FibonaKeys):
            raise KeyFileError("key file is not a fibonarng key set")
        print(fibonarng_keystream(keys, args.length))
        return 0
    if not isinstance(keys, PolyKeys):
        raise KeyFileError("key file is not a polycrypt key set")
    if args.seed is None:
        raise InvalidInputError("polycrypt keystream needs --seed")
    print(polycrypt_keystream(keys, normalize_text(args.seed), args.length))
    return 0


def cmd_stats(args) -> int:
    if args.keyspace:
        for name, value in {**keyspace_summary(), **keyspace_report()}.items():
            print(f"{name}\t{value}")
        return 0
    text = _read_text(args)
    report = randomness_report(text, args.max_distance, expectation=args.expectation)
    rows = [report.chi2_uniform] + list(report.chi2_pairwise)
    print("test\tdistance\tstatistic\tthreshold\tdof\tpass")
    for r in rows:
        name = "chi2_uniform" if r.distance is None else "chi2_pairwise"
        d = "-" if r.distance is None else str(r.distance)
        print(
            f"{name}\t{d}\t{r.statistic:.2f}\t{r.threshold:g}\t{r.dof}\t"
            f"{'yes' if r.passed else 'no'}"
        )
    print(f"entropy_bits\t-\t{report.entropy_bits:.4f}\t-\t-\t-")
    print(f"verdict\t-\t{report.verdict}\t-\t-\t-")
    if args.json:
        payload = json.dumps(report.to_dict(), indent=2)
        if args.json == "-":
            print(payload)
        else:
            Path(args.json).write_text(payload + "\n", encoding="utf-8")
    if args.figures:
        from . import figures

        frequency_figure = figures.frequency_figure(text, args.figures)
        battery = figures.report_figure(report, args.figures)
        print(f"figure\t{frequency_figure}", file=sys.stderr)
        print(f"figure\t{battery}", file=sys.stderr)
    return 0


def cmd_password(args) -> int:
    if args.keyspace:
        for name, value in keyspace_report().items():
            print(f"{name}\t{value}")
        return 0
    if args.keys is None or args.challenge is None:
        raise InvalidInputError("password needs --keys and --challenge")
    keys = load_keys(args.keys)
    challenge = normalize_text(args.challenge)
    if args.scheme == "blum":
        if not isinstance(keys, BlumKey):
            raise KeyFileError("key file is not a blum key set")
        print(blum_password(challenge, keys, length=args.length))
        return 0
    if not isinstance(keys, PravaKey):
        raise KeyFileError("key file is not a prava key set")
    if args.suffix is not None:
        keys = PravaKey(top=keys.top, side=keys.side, tail=keys.tail, suffix=args.suffix)
    print(prava_password(challenge, keys, min_length=args.min_length))
    return 0


# ---------------------------------------------------------------------------


def _session_context(args):
    keys = load_keys(args.keys)
    digest = digest_of(keys)
    doc = load_session_file(args.session)
    session = load_session(doc, keys, digest)
    return keys, digest, doc, session


def _print_session(session, limit: int = 0) -> None:
    print(f"scheme\t{session.scheme}")
    print(f"derived\t{session.derived}")
    if session.corrections:
        for c in session.corrections:
            print(f"correction\t{c.position}\t{c.kind}\t{c.delta}")
    else:
        print("correction\t-\t-\t-")
    worst = sorted(range(len(session.fitness)), key=lambda i: session.fitness[i])
    for i in worst[: limit or 5]:
        print(f"low_fitness\t{i}\t{session.fitness[i]:.2f}")


def cmd_recover(args) -> int:
    if args.action == "drill":
        keys = load_keys(args.keys)
        plaintext = _read_text(args)
        errors = [
            Correction(position=p, kind=k, delta=d)
            for p, k, d in zip(args.positions, args.kinds, args.deltas)
        ]
        seed = None
        if isinstance(keys, PolyKeys):
            seed = _rng_letters(args.seed_rng, len(keys.mask))
        msg = inject_errors(plaintext, keys, errors, seed=seed)
        _write_out(args, msg.to_dict())
        print(msg.ciphertext)
        for e in errors:
            print(f"injected\t{e.position}\t{e.kind}\t{e.delta}", file=sys.stderr)
        return 0

    if args.action == "start":
        keys = load_keys(args.keys)
        digest = digest_of(keys)
        if args.infile:
            doc = json.loads(Path(args.infile).read_text(encoding="utf-8"))
            msg = CipherMessage.from_dict(doc)
        elif args.ciphertext:
            msg = CipherMessage(
                scheme="polycrypt" if isinstance(keys, PolyKeys) else "fibonarng",
                ciphertext=normalize_text(args.ciphertext),
                masked_seed_len=len(keys.mask) if isinstance(keys, PolyKeys) else None,
            )
        else:
            raise InvalidInputError("provide --in MESSAGE.json or --ciphertext")
        session = start_session(msg, keys)
        doc = save_session(session, digest)
        dump_session_file(doc, args.session)
        _print_session(session)
        return 0

    keys, digest, doc, session = _session_context(args)
    if args.action == "show":
        _print_session(session, limit=args.top)
        return 0
    if args.action == "suggest":
        result = suggest_corrections(session, args.position)
        print(f"baseline\t{result['baseline']:.2f}")
        for c in result["candidates"][: args.top or 10]:
            print(f"candidate\t{c['kind']}\t{c['delta']}\t{c['score']:.2f}")
        return 0
    if args.action == "apply":
        correction = Correction(position=args.position, kind=args.kind, delta=args.delta)
        session = apply_correction(session, correction)
    elif args.action == "remove":
        session = remove_correction(session, args.position)
    new_doc = save_session(session, digest, created=doc.get("created"))
    dump_session_file(new_doc, args.session)
    _print_session(session)
    return 0


# ---------------------------------------------------------------------------


BENCH_EXPERIMENTS = {
    "birthday": lambda a: montecarlo.birthday_experiment(
        trials=a.trials or 10_000, master_seed=a.seed
    ),
    "separation": lambda a: montecarlo.separation_experiment(
        samples=a.trials or 200,
        length=a.length or 10_000,
        master_seed=a.seed,
    ),
    "entropy": lambda a: montecarlo.entropy_experiment(
        samples=a.trials or 1000, length=a.length or 500, master_seed=a.seed
    ),
    "calibration": lambda a: montecarlo.calibration_experiment(
        trials=a.trials or 500, master_seed=a.seed
    ),
    "lag-attack": lambda a: montecarlo.lag_attack_experiment(
        trials=a.trials or 1000, master_seed=a.seed
    ),
    "key-recovery": lambda a: montecarlo.key_recovery_experiment(
        keys_trials=a.trials or 100, master_seed=a.seed
    ),
    "error-recovery": lambda a: montecarlo.error_recovery_experiment(
        trials=a.trials or 200, master_seed=a.seed
    ),
    "multi-error": lambda a: montecarlo.multi_error_oracle(master_seed=a.seed),
    "invariants": lambda a: montecarlo.invariant_battery(
        cases=a.trials or 1000, walk_specs=a.length or 10_000, master_seed=a.seed
    ),
    "malleability": lambda a: montecarlo.malleability_experiment(
        trials=a.trials or 100, master_seed=a.seed
    ),
}


def _flatten(prefix: str, value, rows: list) -> None:
    if isinstance(value, dict):
        for k, v in value.items():
            _flatten(f"{prefix}.{k}" if prefix else str(k), v, rows)
    elif isinstance(value, list):
        rows.append((prefix, json.dumps(value)))
    else:
        rows.append((prefix, value))


def cmd_bench(args) -> int:
    results = BENCH_EXPERIMENTS[args.experiment](args)
    printable = {
        k: v for k, v in results.items() if k != "three_text_uniform_statistics"
    }
    rows: list = []
    _flatten("", printable, rows)
    for name, value in rows:
        print(f"{name}\t{value}")
    if args.json:
        payload = json.dumps(printable, indent=2)
        if args.json == "-":
            print(payload)
        else:
            Path(args.json).write_text(payload + "\n", encoding="utf-8")
    if args.figures:
        from . import figures

        if args.experiment == "birthday":
            print(f"figure\t{figures.birthday_figure(results, args.figures)}", file=sys.stderr)
        elif args.experiment == "separation":
            print(f"figure\t{figures.separation_figure(results, args.figures)}", file=sys.stderr)
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(webroot=args.webroot)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def cmd_tabula(args) -> int:
    config = TabulaConfig()
    if args.config:
        from .keyfiles import parse_tabula_config

        config = parse_tabula_config(Path(args.config).read_text(encoding="utf-8"))
    walk = TabulaWalk(config)
    if args.trace:
        output = {
            "bottom": config.bottom_right,
            "left": config.left,
            "top": config.top,
        }[args.read]
        entry_alphabet = config.top if args.entry == "top" else config.left
        trace = walk.serpentine_trace(
            normalize_text(args.trace), entry_alphabet, output, entry=args.entry
        )
        print(json.dumps(trace, indent=2))
        return 0
    rendered = walk.rendered()
    print(" \t" + "\t".join(rendered["top"]))
    for left, row in zip(rendered["left"], rendered["grid"]):
        print(left + "\t" + "\t".join(row))
    print(" \t" + "\t".join(rendered["bottom_right"]))
    return 0


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="recta", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_io(p, needs_out=True):
        p.add_argument("--in", dest="infile", help="input file (default stdin)")
        p.add_argument("--text", help="input given inline")
        if needs_out:
            p.add_argument("--out", help="write the message document here")

    def add_processing(p):
        p.add_argument("--transpose", help="keyed columnar transposition of the ciphertext")
        p.add_argument("--cut", type=int, help="plaintext cut position (swap the halves)")
        p.add_argument("--marker", help="marker word placed at the cut")

    p = sub.add_parser("encrypt", help="encrypt a plaintext")
    p.add_argument("scheme", choices=TEXT_SCHEMES + KEY_SCHEMES)
    add_io(p)
    p.add_argument("--corpus", help="corpus file path or bundled:<name>")
    p.add_argument("--offset", type=int, help="key text start in the normalized corpus")
    p.add_argument("--keys", help="key file")
    p.add_argument("--seed", help="explicit polycrypt seed letters")
    p.add_argument("--seed-rng", default="os", help="os or seeded:<int>")
    p.add_argument("--add", action="store_true", help="tripletext adds the plaintext")
    add_processing(p)
    p.set_defaults(func=cmd_encrypt)

    p = sub.add_parser("decrypt", help="decrypt a message")
    p.add_argument("scheme", choices=TEXT_SCHEMES + KEY_SCHEMES)
    p.add_argument("--in", dest="infile", help="message document from encrypt --out")
    p.add_argument("--ciphertext", help="ciphertext letters")
    p.add_argument("--offset", type=int, help="corpus offset when giving --ciphertext")
    p.add_argument("--corpus", help="corpus file path or bundled:<name>")
    p.add_argument("--keys", help="key file")
    p.add_argument("--add", action="store_true", help="tripletext add-mode message")
    p.add_argument("--show-seed", action="store_true", help="print the recovered seed")
    add_processing(p)
    p.set_defaults(func=cmd_decrypt)

    p = sub.add_parser("keystream", help="generate keystream letters")
    p.add_argument("scheme", choices=KEY_SCHEMES)
    p.add_argument("--keys", required=True)
    p.add_argument("--length", type=int, required=True)
    p.add_argument("--seed", help="polycrypt seed letters")
    p.set_defaults(func=cmd_keystream)

    p = sub.add_parser("stats", help="randomness battery over a letter stream")
    add_io(p, needs_out=False)
    p.add_argument("--max-distance", type=int, default=10)
    p.add_argument("--expectation", choices=("pairs", "literal"), default="pairs")
    p.add_argument("--json", help="write the report as JSON ('-' for stdout)")
    p.add_argument("--figures", help="directory for rendered figures")
    p.add_argument("--keyspace", action="store_true", help="print keyspace arithmetic")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("password", help="derive a password from a challenge")
    p.add_argument("--scheme", choices=("blum", "prava"), default="prava")
    p.add_argument("--keys")
    p.add_argument("--challenge")
    p.add_argument("--min-length", type=int, default=0)
    p.add_argument("--length", type=int, help="blum output length")
    p.add_argument("--suffix", help="override the key file suffix")
    p.add_argument("--keyspace", action="store_true", help="print keyspace arithmetic")
    p.set_defaults(func=cmd_password)

    p = sub.add_parser("recover", help="repair encryption slips in a message")
    p.add_argument("action", choices=("start", "show", "suggest", "apply", "remove", "drill"))
    p.add_argument("--keys", required=True)
    p.add_argument("--session", help="session document path")
    p.add_argument("--in", dest="infile", help="message document (start) or plaintext file (drill)")
    p.add_argument("--text", help="inline plaintext for drill")
    p.add_argument("--ciphertext", help="raw ciphertext for start")
    p.add_argument("--out", help="message document output for drill")
    p.add_argument("--position", type=int)
    p.add_argument("--kind", choices=("keystream", "combine"))
    p.add_argument("--delta", type=int)
    p.add_argument("--top", type=int, default=10, help="list length for suggest/show")
    p.add_argument("--positions", type=int, nargs="*", default=[], help="drill error positions")
    p.add_argument("--kinds", nargs="*", default=[], help="drill error kinds")
    p.add_argument("--deltas", type=int, nargs="*", default=[], help="drill error deltas")
    p.add_argument("--seed-rng", default="os")
    p.set_defaults(func=cmd_recover)

    p = sub.add_parser("bench", help="Monte Carlo reproductions of the claims")
    p.add_argument("experiment", choices=sorted(BENCH_EXPERIMENTS))
    p.add_argument("--trials", type=int)
    p.add_argument("--length", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", help="write results as JSON ('-' for stdout)")
    p.add_argument("--figures", help="directory for rendered figures")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("tabula", help="print a configured table or trace a walk")
    p.add_argument("--config", help="tabula config file (top=, left=, bottom_right=)")
    p.add_argument("--trace", help="letters to walk, e.g. HCAR")
    p.add_argument("--entry", choices=("top", "left"), default="top")
    p.add_argument("--read", choices=("bottom", "left", "top"), default="bottom")
    p.set_defaults(func=cmd_tabula)

    p = sub.add_parser("serve", help="serve the HTTP API and workbench")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8077)
    p.add_argument("--webroot", help="static workbench assets directory")
    p.set_defaults(func=cmd_serve)

    return parser


def run_cli(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 1
    except RectaError as exc:
        print(f"recta: error: {exc}", file=sys.stderr)
        return 2
    except (OSError, json.JSONDecodeError) as exc:
        print(f"recta: error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
