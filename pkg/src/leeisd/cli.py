"""Command-line entry point: ``leeisd <subcommand> ...``.

Exit codes: 0 success, 1 decoder found nothing, 2 usage or invalid input,
3 infeasible parameters, 4 unreadable or malformed file, 5 decryption
failure, 6 enumeration budget exceeded. On failure the first line on stderr
is ``error: <message>``.
"""

import argparse
import sys
from pathlib import Path

import numpy as np

from . import __version__, formats
from ._accel import backend_name
from .complexity import (
    COST_MODELS,
    REFERENCE_KEY_SIZES,
    STRATEGIES,
    cost_stern_f2,
    cost_stern_z4,
    key_size_binary,
    key_size_quaternary,
    optimize_params,
    table_scan,
)
from .crypto import (
    McElieceKeyPair,
    McEliecePublicKey,
    attack_self_test,
    gen_secret_code,
    mceliece_decrypt,
    mceliece_encrypt,
    mceliece_keygen,
    niederreiter_decrypt,
    niederreiter_encrypt,
    niederreiter_keygen,
)
from .errors import BudgetExceeded, DecryptionFailure, FormatError, InfeasibleParams
from .isd import DEFAULT_BUDGET, brute_force_decode, plant_instance, stern
from .lee import gv_dimension, rate, singleton_bound
from .params import IsdParams

EXIT_OK, EXIT_NOT_FOUND, EXIT_USAGE, EXIT_INFEASIBLE, EXIT_FORMAT, EXIT_DECRYPT, EXIT_BUDGET = range(7)

COST_MODEL_ALIASES = {"paper": "paper-2bit", "lut": "lut-1bit"}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        # first stderr line stays machine-readable
        sys.stderr.write(f"error: {message}\n")
        self.print_usage(sys.stderr)
        sys.exit(EXIT_USAGE)


def _cost_model(value):
    value = COST_MODEL_ALIASES.get(value, value)
    if value not in COST_MODELS:
        raise argparse.ArgumentTypeError(f"unknown cost model {value!r}")
    return value


def _field(value):
    value = value.upper()
    if value not in ("Z4", "F2"):
        raise argparse.ArgumentTypeError("field must be Z4 or F2")
    return value


def _bits(x):
    return f"{x:.2f}"


def _exact(x):
    # Fractions print as integers when integral, else as p/q
    return str(x)


def _ceil(x):
    return str(-(-x.numerator // x.denominator))


def _emit(text, out=None):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _read(path):
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc.strerror}") from None


# bounds


def cmd_bounds(args):
    lines = []
    n = args.n
    if args.k1 is not None or args.k2 is not None:
        k1, k2 = args.k1 or 0, args.k2 or 0
        if k1 + k2 > n:
            raise UsageError("k1 + k2 exceeds n")
        r = rate(n, k1, k2)
        lines.append(("singleton_dL_max", singleton_bound(n, k1, k2)))
        lines.append(("z4_dimension", f"{2 * k1 + k2}/2"))
        lines.append(("rate", f"{2 * k1 + k2}/{2 * n}"))
        lines.append(("rate_reduced", str(r)))
        lines.append(("rate_float", f"{float(r):.6f}"))
        lines.append(("key_size", key_size_quaternary(n, k1, k2)))
    if args.d is not None:
        if args.d < 1:
            raise UsageError("d must be positive")
        dim, exact = gv_dimension(n, args.d)
        lines.append(("gv_log4_size", f"{exact:.4f}"))
        lines.append(("gv_dimension", dim))
        lines.append(("gv_t", (args.d - 1) // 2))
        if args.d > 2 * n:
            lines.append(("note", f"d exceeds the maximum Lee weight 2n = {2 * n}"))
    if not lines:
        raise UsageError("bounds needs --k1/--k2 or --d")
    if args.format == "kv":
        _emit("".join(f"{k}={v}\n" for k, v in lines))
    else:
        width = max(len(k) for k, _ in lines)
        _emit("".join(f"{k:<{width}}  {v}\n" for k, v in lines))
    return EXIT_OK


# estimate / optimize


def _estimate_lines(est):
    p = est.params
    lines = [
        ("field", est.field),
        ("n", est.n),
        ("k1", est.k1),
        ("k2", est.k2),
        ("t", est.t),
        ("v", p.v),
        ("ell", p.ell),
        ("m1", p.m1),
        ("m2", p.m2),
        ("cost_model", est.cost_model),
        ("gauss_step", _exact(est.gauss_step)),
        ("set_s", _exact(est.set_s)),
        ("set_t", _exact(est.set_t)),
        ("collision_step", _exact(est.collision_step)),
        ("iter_cost", _ceil(est.iter_cost)),
        ("iter_cost_exact", _exact(est.iter_cost)),
        ("success_prob", _exact(est.success_prob)),
        ("success_prob_float", f"{float(est.success_prob):.6e}"),
        ("security_bits", _bits(est.security_bits)),
    ]
    if est.field == "Z4":
        lines.append(("key_size", key_size_quaternary(est.n, est.k1, est.k2)))
        ref = REFERENCE_KEY_SIZES.get((est.n, est.k1, est.k2))
        if ref is not None and ref != lines[-1][1]:
            lines.append(("note", f"reference key size {ref} differs from formula value {lines[-1][1]}"))
    else:
        lines.append(("key_size", key_size_binary(est.n, est.k1)))
    return lines


def _kv(lines):
    return "".join(f"{k}={v}\n" for k, v in lines)


def _dims(args):
    if args.field == "F2":
        if args.k2:
            raise UsageError("binary codes have k2 = 0")
        return args.k, 0
    return args.k1, args.k2


def cmd_estimate(args):
    k1, k2 = _dims(args)
    p = IsdParams(args.v, args.ell, args.m1, args.m2)
    if args.field == "F2":
        est = cost_stern_f2(args.n, k1, args.t, p)
    else:
        est = cost_stern_z4(args.n, k1, k2, args.t, p, args.cost_model, allow_lee_v=args.allow_lee_v)
    if not est.attainable:
        raise InfeasibleParams("success probability is zero")
    _emit(_kv(_estimate_lines(est)))
    return EXIT_OK


def cmd_optimize(args):
    k1, k2 = _dims(args)
    choice = optimize_params(
        args.field, args.n, k1, k2, args.t, args.strategy, args.cost_model, args.allow_lee_v
    )
    _emit(_kv([("strategy", choice.strategy)] + _estimate_lines(choice.estimate)))
    return EXIT_OK


# table


_TABLE_COLUMNS = ("k1", "k2", "key_size", "security_bits", "v", "ell", "m1", "m2", "iter_cost")


def _table_records(scan):
    for row in scan.rows:
        if row.choice is None:
            yield [row.k1, row.k2, row.key_size, "-", "-", "-", "-", "-", "-"]
            continue
        p = row.choice.params
        est = row.choice.estimate
        yield [row.k1, row.k2, row.key_size, _bits(est.security_bits), p.v, p.ell, p.m1, p.m2, _ceil(est.iter_cost)]


def format_table(scan, fmt="text", target_bits=None):
    head = [
        f"n={scan.n} d={scan.d} t={scan.t} dim={scan.dim} gv_log4_size={scan.dim_exact:.4f}",
        f"strategy={scan.strategy} cost_model={scan.cost_model}",
    ]
    recs = [[str(x) for x in r] for r in _table_records(scan)]
    tail = []
    if target_bits is not None:
        row = scan.first_reaching(target_bits)
        if row is None:
            tail.append(f"no k1 reaches {target_bits} bits")
        else:
            tail.append(
                f"first k1 reaching {target_bits} bits: k1={row.k1} k2={row.k2} "
                f"key_size={row.key_size} security_bits={_bits(row.security_bits)}"
            )
    notes = [f"note: {x}" for x in scan.notes]
    if fmt == "csv":
        body = [",".join(_TABLE_COLUMNS)] + [",".join(r) for r in recs]
        return "\n".join(body) + "\n", "\n".join(head + notes + tail)
    if fmt == "md":
        body = ["| " + " | ".join(_TABLE_COLUMNS) + " |", "|" + "---|" * len(_TABLE_COLUMNS)]
        body += ["| " + " | ".join(r) + " |" for r in recs]
        lines = head + [""] + body + [""] + notes + tail
        return "\n".join(lines).rstrip("\n") + "\n", ""
    widths = [max([len(c)] + [len(r[i]) for r in recs]) for i, c in enumerate(_TABLE_COLUMNS)]
    fmt_row = lambda r: "  ".join(x.rjust(w) for x, w in zip(r, widths)).rstrip()  # noqa: E731
    body = [fmt_row(_TABLE_COLUMNS)] + [fmt_row(r) for r in recs]
    if not recs:
        body.append("(no rows)")
    return "\n".join(head + body + notes + tail) + "\n", ""


def cmd_table(args):
    strategy = args.strategy or ("full" if args.target_bits is not None else "paper")
    k1_values = None
    if args.k1:
        k1_values = [int(x) for x in args.k1.split(",") if x.strip()]
    scan = table_scan(
        args.n,
        args.d,
        k1_values,
        args.dim,
        strategy,
        args.cost_model,
        args.threads,
        stop_bits=args.target_bits if args.stop_at_target else None,
    )
    out, side = format_table(scan, args.format, args.target_bits)
    _emit(out)
    if side:
        # csv stays machine-readable; the context goes to stderr
        sys.stderr.write(side + "\n")
    return EXIT_OK


# instances and decoding


def cmd_gen_instance(args):
    k1, k2 = _dims(args)
    rng = np.random.default_rng(args.seed)
    inst, e = plant_instance(args.field, args.n, k1, k2, args.t, rng, unique=args.unique, budget=args.budget)
    _emit(formats.format_instance(inst), args.out)
    answer = args.answer or (f"{args.out}.answer" if args.out else None)
    if answer:
        Path(answer).write_text(formats.format_answer(inst.field, e))
    return EXIT_OK


def cmd_isd_decode(args):
    inst = formats.parse_instance(_read(args.instance))
    given = [args.v, args.ell, args.m1, args.m2]
    if all(x is None for x in given):
        choice = optimize_params(
            inst.field, inst.n, inst.k1, inst.k2, inst.t, "full", args.cost_model, args.allow_lee_v
        )
        params = choice.params
    else:
        if any(x is None for x in given):
            raise UsageError("give all of --v --ell --m1 --m2 or none of them")
        params = IsdParams(*given)
    rng = np.random.default_rng(args.seed)
    res = stern(inst, params, rng, args.max_iters, allow_lee_v=args.allow_lee_v)
    lines = [
        ("status", res.status),
        ("v", params.v),
        ("ell", params.ell),
        ("m1", params.m1),
        ("m2", params.m2),
        ("iterations", res.iterations),
        ("retries", res.retries),
        ("max_iters", res.max_iters),
    ]
    if res.found:
        lines.append(("error", formats.format_vector(res.error)))
    if res.diagnostic:
        lines.append(("diagnostic", res.diagnostic))
    code = EXIT_OK if res.found else EXIT_NOT_FOUND
    if args.oracle:
        oracle = brute_force_decode(inst, args.budget)
        sols = oracle.all()
        exact = [e for e in sols if inst.weight(e) == inst.t]
        lines.append(("oracle_solutions", len(sols)))
        lines.append(("oracle_weight_t_solutions", len(exact)))
        if res.found:
            agree = any(np.array_equal(e, res.error) for e in exact)
            lines.append(("oracle_agrees", "yes" if agree else "no"))
            if not agree:
                code = EXIT_NOT_FOUND
    if args.answer:
        truth = formats.parse_answer(_read(args.answer))
        match = res.found and np.array_equal(truth, res.error)
        lines.append(("answer_matches", "yes" if match else "no"))
    _emit(_kv(lines))
    if code != EXIT_OK:
        sys.stderr.write(f"error: {res.diagnostic or res.status}\n")
    return code


# cryptosystems


def _key_paths(out_dir, system):
    out = Path(out_dir)
    return out / f"{system}.pub", out / f"{system}.priv"


def cmd_keygen(args):
    rng = np.random.default_rng(args.seed)
    code = gen_secret_code(args.n, args.k1, args.k2, args.t, rng, args.budget)
    keygen = mceliece_keygen if args.system == "mceliece" else niederreiter_keygen
    kp = keygen(code, rng)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    pub_path, priv_path = _key_paths(out, args.system)
    pub_path.write_text(formats.format_public_key(kp.public))
    priv_path.write_text(formats.format_private_key(kp))
    _emit(_kv([("public", pub_path), ("private", priv_path), ("dmin", code.dmin)]))
    return EXIT_OK


def _public_of(key):
    return key.public if hasattr(key, "public") else key


def cmd_encrypt(args):
    pub = _public_of(formats.parse_key(_read(args.pubkey)))
    text = _read(args.msg)
    rng = np.random.default_rng(args.seed)
    if isinstance(pub, McEliecePublicKey):
        x = formats.parse_vector(text, pub.k1 + pub.k2, 4)
        y = mceliece_encrypt(pub, x[: pub.k1], x[pub.k1 :], rng, exact=not args.up_to_t)
    else:
        x = formats.parse_vector(text, pub.n, 4)
        y = niederreiter_encrypt(pub, x)
    _emit(formats.format_vector(y) + "\n", args.out)
    return EXIT_OK


def cmd_decrypt(args):
    kp = formats.parse_key(_read(args.privkey))
    if not hasattr(kp, "private"):
        raise FormatError("decrypt needs a private key file", 1)
    if isinstance(kp, McElieceKeyPair):
        y = formats.parse_vector(_read(args.ct), kp.public.n, 4)
        x1, x2 = mceliece_decrypt(kp.private, y)
        x = np.concatenate([x1, x2])
    else:
        y = formats.parse_vector(_read(args.ct), kp.public.n - kp.public.k1, 4)
        x = niederreiter_decrypt(kp.private, y)
    _emit(formats.format_vector(x) + "\n", args.out)
    return EXIT_OK


def cmd_attack(args):
    kp = formats.parse_key(_read(args.privkey))
    if not hasattr(kp, "private"):
        raise FormatError("attack needs a private key file (it holds the public key too)", 1)
    rep = attack_self_test(kp, np.random.default_rng(args.seed))
    p = rep.params
    _emit(
        _kv(
            [
                ("found", "yes" if rep.found else "no"),
                ("matches_planted_error", "yes" if rep.matches else "no"),
                ("iterations", rep.iterations),
                ("retries", rep.retries),
                ("expected_iterations", f"{rep.expected_iterations:.2f}"),
                ("v", p.v),
                ("ell", p.ell),
                ("m1", p.m1),
                ("m2", p.m2),
                ("fallback_v0", "yes" if rep.fallback else "no"),
            ]
        )
    )
    return EXIT_OK if rep.matches else EXIT_NOT_FOUND


# parser


def _add_code_args(sp, need_t=True):
    sp.add_argument("--field", type=_field, default="Z4")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--k1", type=int, help="Z4 generators of order 4")
    sp.add_argument("--k2", type=int, default=0, help="Z4 generators of order 2")
    sp.add_argument("--k", type=int, help="dimension of a binary code")
    if need_t:
        sp.add_argument("--t", type=int, required=True)
    sp.add_argument("--allow-lee-v", action="store_true", help="let v go up to 2 min(m1, m2)")


def _add_params(sp, required):
    for name in ("v", "ell", "m1", "m2"):
        sp.add_argument(f"--{name}", type=int, required=required)


def build_parser():
    ap = _Parser(prog="leeisd", description="Lee-metric ISD toolkit over Z4")
    ap.add_argument("--version", action="store_true", help="print version and cost model")
    ap.add_argument(
        "--cost-model",
        type=_cost_model,
        default="paper-2bit",
        help="paper-2bit (default) or lut-1bit; 'paper' and 'lut' are accepted",
    )
    sub = ap.add_subparsers(dest="command", parser_class=_Parser)

    sp = sub.add_parser("bounds", help="Singleton, GV and rate")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--k1", type=int)
    sp.add_argument("--k2", type=int)
    sp.add_argument("--d", type=int)
    sp.add_argument("--format", choices=("text", "kv"), default="text")
    sp.set_defaults(func=cmd_bounds)

    sp = sub.add_parser("estimate", help="cost of one parameter point")
    _add_code_args(sp)
    _add_params(sp, True)
    sp.set_defaults(func=cmd_estimate)

    sp = sub.add_parser("optimize", help="best parameters for a code")
    _add_code_args(sp)
    sp.add_argument("--strategy", choices=STRATEGIES, default="full")
    sp.set_defaults(func=cmd_optimize)

    sp = sub.add_parser("table", help="key size and security over k1 at fixed dimension")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--dim", type=int, help="Z4-dimension k1 + k2/2 (default: GV bound)")
    sp.add_argument("--k1", help="comma-separated k1 values (default: all)")
    sp.add_argument("--strategy", choices=STRATEGIES)
    sp.add_argument("--target-bits", type=float)
    sp.add_argument("--stop-at-target", action="store_true", help="end the scan at the first row reaching --target-bits")
    sp.add_argument("--format", choices=("text", "csv", "md"), default="text")
    sp.add_argument("--threads", type=int, default=1)
    sp.set_defaults(func=cmd_table)

    sp = sub.add_parser("gen-instance", help="plant a weight-t error in a random code")
    _add_code_args(sp)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--out")
    sp.add_argument("--answer", help="sidecar file for the planted error (default: OUT.answer)")
    sp.add_argument("--unique", action="store_true", help="redraw until the error is the only solution")
    sp.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    sp.set_defaults(func=cmd_gen_instance)

    sp = sub.add_parser("isd-decode", help="run Stern on an instance file")
    sp.add_argument("instance")
    _add_params(sp, False)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--max-iters", type=int)
    sp.add_argument("--oracle", action="store_true", help="cross-check with brute force")
    sp.add_argument("--answer", help="sidecar with the planted error")
    sp.add_argument("--allow-lee-v", action="store_true")
    sp.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    sp.set_defaults(func=cmd_isd_decode)

    sp = sub.add_parser("keygen", help="generate a key pair")
    sp.add_argument("--system", choices=("mceliece", "niederreiter"), required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--k1", type=int, required=True)
    sp.add_argument("--k2", type=int, required=True)
    sp.add_argument("--t", type=int, required=True)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--out-dir", required=True)
    sp.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    sp.set_defaults(func=cmd_keygen)

    sp = sub.add_parser("encrypt", help="encrypt a message vector")
    sp.add_argument("--pubkey", required=True)
    sp.add_argument("--msg", required=True)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--out")
    sp.add_argument("--up-to-t", action="store_true", help="McEliece: error weight uniform in 0..t")
    sp.set_defaults(func=cmd_encrypt)

    sp = sub.add_parser("decrypt", help="decrypt a ciphertext vector")
    sp.add_argument("--privkey", required=True)
    sp.add_argument("--ct", required=True)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_decrypt)

    sp = sub.add_parser("attack", help="recover an encryption error with Stern")
    sp.add_argument("--privkey", required=True)
    sp.add_argument("--seed", type=int, required=True)
    sp.set_defaults(func=cmd_attack)
    return ap


def _check_dims(args):
    if not hasattr(args, "field"):
        return
    if args.field == "F2":
        if args.k is None and args.k1 is not None:
            args.k = args.k1
        if args.k is None:
            raise UsageError("binary codes need --k")
    elif args.k1 is None:
        raise UsageError("Z4 codes need --k1")


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.version:
        print(f"leeisd {__version__} cost-model={args.cost_model} backend={backend_name()}")
        return EXIT_OK
    if args.command is None:
        ap.error("a subcommand is required")
    try:
        _check_dims(args)
        return args.func(args)
    except UsageError as exc:
        return _fail(exc, EXIT_USAGE)
    except InfeasibleParams as exc:
        return _fail(exc, EXIT_INFEASIBLE)
    except FormatError as exc:
        return _fail(exc, EXIT_FORMAT)
    except DecryptionFailure as exc:
        return _fail(f"decryption failure: {exc}", EXIT_DECRYPT)
    except BudgetExceeded as exc:
        return _fail(exc, EXIT_BUDGET)
    except (ValueError, OSError) as exc:
        return _fail(exc, EXIT_USAGE)


def _fail(exc, code):
    sys.stderr.write(f"error: {exc}\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
