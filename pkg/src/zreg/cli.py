"""Command-line front end: one subcommand per operation, output as text, CSV or JSON.

Every output embeds the resolved configuration (minus the thread count and the
output path, which do not affect results), so a JSON output can be fed back
through ``--check`` to recompute and compare each row.

Exit codes: 0 ok, 1 usage or parse error, 2 domain error, 3 I/O or file
format error, 4 ``--check`` mismatch.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import _parallel
from .errors import DomainError, FormatError, ZregError
from .numerics import format_complex, parse_complex
from .report import Table, _csv_cell, _jsonable

EXIT_OK, EXIT_USAGE, EXIT_DOMAIN, EXIT_IO, EXIT_MISMATCH = 0, 1, 2, 3, 4

# never part of the embedded config: they do not change any computed value
_NOT_CONFIG = {"threads", "output", "check", "func"}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}")


def _complex_arg(text: str) -> complex:
    try:
        return parse_complex(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _ladder_arg(text: str) -> list[int]:
    try:
        vals = [int(float(v)) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad ladder {text!r}") from exc
    if not vals or any(v < 1 for v in vals):
        raise argparse.ArgumentTypeError("ladder entries must be positive integers")
    return vals


def _int_list(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad integer list {text!r}") from exc


# ------------------------------------------------------------------ helpers


def _cache_dir() -> Path | None:
    d = os.environ.get("ZREG_CACHE_DIR")
    return Path(d) if d else None


def _prime_table(args, need: int):
    from .primes import cached_table

    path = args.prime_cache
    if path is None and _cache_dir() is not None:
        path = str(_cache_dir() / "primes.bin")
    if path is None:
        return None
    return cached_table(need, path)


def _zero_table(args):
    from .zeros_stieltjes import default_zero_table, load_zero_table

    path = args.zero_table
    if path is None and _cache_dir() is not None and (_cache_dir() / "zeros.txt").exists():
        path = str(_cache_dir() / "zeros.txt")
    return default_zero_table() if path is None else load_zero_table(path)


def _curve(args):
    from .elliptic import bundled_curves, parse_curve

    spec = args.curve
    curves = bundled_curves()
    if spec in curves:
        return curves[spec]
    return parse_curve(spec)


def _value_table(z: complex, value: complex, **meta) -> Table:
    t = Table(["z", "re", "im", "value"], metadata=meta)
    t.add(format_complex(z), value.real, value.imag, format_complex(value))
    return t


# -------------------------------------------------------------- subcommands


def cmd_zeta(args) -> Table:
    from . import zeta_core as zc

    z = args.z
    kinds = {"partial": "partial", "euler": "euler", "alternating": "alternating",
             "cutoff": "cutoff", "ratio": "ratio-zeta"}
    if args.method == "eta":
        return _value_table(z, zc.zeta_hat(z), method="eta (accelerated)")
    ladder = args.ladder or [args.n]
    table = _prime_table(args, 2 * max(ladder)) if args.method in ("euler", "ratio") else None
    return zc.convergence_table(kinds[args.method], z, ladder, table).to_table()


def cmd_fn_ratio(args) -> Table:
    from .zeta_core import convergence_table

    table = _prime_table(args, 2 * max(args.ladder))
    return convergence_table("fn-ratio", args.z, args.ladder, table).to_table()


def cmd_window_sum(args) -> Table:
    from .zeta_core import convergence_table

    table = _prime_table(args, 2 * max(args.ladder))
    return convergence_table("window-sum", args.z, args.ladder, table, depth=args.depth).to_table()


def cmd_prime_zeta(args) -> Table:
    from . import prime_zeta as pz

    z = args.z
    if args.method == "inclusion-exclusion":
        d = pz.inclusion_exclusion_detail(z, args.M, args.depth)
        return _value_table(z, d.value, method="inclusion-exclusion", M=args.M, depth=args.depth,
                            dropped_products=d.dropped, dropped_bound=d.dropped_bound)
    ladder = args.ladder or [args.n]
    table = _prime_table(args, max(ladder))
    t = Table(["n", "re", "im"], metadata={"z": z, "method": args.method})
    for n in sorted(ladder):
        v = pz.p_partial(z, n, table) if args.method == "partial" else pz.p_hat(z, n, table)
        t.add(n, v.real, v.imag)
    return t


def cmd_bernoulli(args) -> Table:
    from . import bernoulli as bn

    n = args.n
    if args.kind == "numbers":
        t = Table(["k", "B_k"], metadata={"convention": "B_1 = -1/2"})
        for k, b in enumerate(bn.bernoulli_numbers(n)):
            t.add(k, b)
        return t
    if args.kind == "b-poly":
        poly = bn.b_partial_poly(n)
        meta = {"quantity": f"b_{n}(z)", "text": str(poly)}
        if n % 2 == 0 and n >= 2:
            meta["trivial_zeros"] = bn.trivial_zeros(n)
    else:
        poly = bn.g_factor(n)
        meta = {"quantity": f"g_{n}(z)", "text": str(poly)}
    t = Table(["power", "coefficient"], metadata=meta)
    for k, c in enumerate(poly.coeffs):
        t.add(k, c)
    return t


def cmd_gen_bernoulli(args) -> Table:
    from .bernoulli import DirichletCharacter, gen_bernoulli

    chi = DirichletCharacter.trivial(1) if args.p == 1 else DirichletCharacter.legendre(args.p)
    t = Table(["k", "B_k_chi"], metadata={"character": "trivial" if args.p == 1 else f"Legendre mod {args.p}"})
    for k in range(args.n + 1):
        t.add(k, gen_bernoulli(chi, k))
    return t


def cmd_stieltjes(args) -> Table:
    from .zeros_stieltjes import stieltjes_set

    s = stieltjes_set(args.k, args.m)
    t = Table(["n", "gamma_n"], metadata=s.method)
    for k, g in enumerate(s.gammas):
        t.add(k, g)
    return t


def cmd_zsum(args) -> Table:
    from . import zeros_stieltjes as zs

    zeros = _zero_table(args)
    g = zs.stieltjes_set(2, args.m)
    t = Table(["n", "raw", "tail", "total", "closed_form", "difference", "zeros_used"],
              metadata={"gammas": g.gammas, "m": args.m, "tail": "density log(t/2pi)/(2pi) from last ordinate"})
    totals = []
    for n in (1, 2, 3):
        s = zs.z_sum_from_zeros(n, zeros)
        c = zs.z_closed_form(n, g)
        totals.append(s.total)
        t.add(n, s.raw, s.tail, s.total, c, s.total - c, s.count)
    inv = zs.gammas_from_z(totals)
    t.metadata["gammas_from_zero_sums"] = inv.gammas
    rep = zs.sign_discrepancy_report(totals[1], g[0], g[1])
    t.metadata["gamma1_sign"] = {"selected": rep.metadata["selected"], "rows": rep.records()}
    return t


def cmd_zeros(args) -> Table:
    from .zeta_core import scan_zeros

    roots = scan_zeros(args.t_min, args.t_max, args.step)
    t = Table(["index", "ordinate"], metadata={"t_min": args.t_min, "t_max": args.t_max, "step": args.step})
    for i, r in enumerate(roots, 1):
        t.add(i, r)
    return t


def cmd_lfun(args) -> Table:
    from . import elliptic as el

    E = _curve(args)
    z = args.z
    table = _prime_table(args, 2 * max(args.ladder))
    t = Table(["n", "re", "im"], metadata={"curve": E.spec(), "label": E.label, "z": z,
                                           "mode": args.mode, "bad_primes": args.bad_primes})
    for n in sorted(args.ladder):
        if args.mode == "partial":
            v = el.l_partial(E, z, n, table, args.bad_primes)
        else:
            v = el.l_window_ratio(E, z, n, table, args.bad_primes)
        t.add(n, v.real, v.imag)
    return t


def cmd_probe_rank(args) -> Table:
    from .elliptic import vanishing_probe

    return vanishing_probe(_curve(args), sorted(args.ladder), _prime_table(args, max(args.ladder)))


def cmd_identity45(args) -> Table:
    from .char_identity import identity_table

    return identity_table(args.p)


def cmd_report_special(args) -> Table:
    from .prime_zeta import special_values_report

    return special_values_report(args.n)


# ------------------------------------------------------------------ parser


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("text", "csv", "json"), default="text")
    common.add_argument("--output", default=None, help="write here instead of stdout")
    common.add_argument("--threads", type=int, default=argparse.SUPPRESS)
    common.add_argument("--prime-cache", default=None, help="binary prime table (created if missing)")

    parser = _Parser(prog="zreg", description="Regularized zeta, prime zeta and L-function diagnostics.")
    parser.add_argument("--check", metavar="JSON", default=None,
                        help="recompute a previous JSON output and compare every row")
    parser.add_argument("--threads", type=int, default=1, dest="threads")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    def add(name, func, help_):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.set_defaults(func=func)
        return p

    p = add("zeta", cmd_zeta, "regularized zeta value or truncation table")
    p.add_argument("--z", type=_complex_arg, required=True)
    p.add_argument("--method", choices=("eta", "partial", "euler", "alternating", "cutoff", "ratio"), default="eta")
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--ladder", type=_ladder_arg, default=None)

    p = add("fn-ratio", cmd_fn_ratio, "window product f_n(z) against 2^(1-z)")
    p.add_argument("--z", type=_complex_arg, required=True)
    p.add_argument("--ladder", type=_ladder_arg, default=[100, 1000, 10000])

    p = add("window-sum", cmd_window_sum, "window log-sum at a point, against log 2")
    p.add_argument("--z", type=_complex_arg, required=True)
    p.add_argument("--ladder", type=_ladder_arg, default=[100, 1000, 10000])
    p.add_argument("--depth", type=int, default=5)

    p = add("prime-zeta", cmd_prime_zeta, "prime zeta P(z)")
    p.add_argument("--z", type=_complex_arg, required=True)
    p.add_argument("--method", choices=("partial", "regularized", "inclusion-exclusion"), default="inclusion-exclusion")
    p.add_argument("--n", type=int, default=10000)
    p.add_argument("--ladder", type=_ladder_arg, default=None)
    p.add_argument("--M", type=int, default=6)
    p.add_argument("--depth", type=int, default=3)

    p = add("bernoulli", cmd_bernoulli, "Bernoulli numbers, b_n(z) or g_n(z) as exact rationals")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--kind", choices=("numbers", "b-poly", "g-poly"), default="b-poly")

    p = add("gen-bernoulli", cmd_gen_bernoulli, "generalized Bernoulli numbers of a Legendre character")
    p.add_argument("--p", type=int, required=True, help="odd prime, or 1 for the trivial character")
    p.add_argument("--n", type=int, default=3)

    p = add("stieltjes", cmd_stieltjes, "Stieltjes constants from the defining limit")
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--m", type=int, default=10**6)

    p = add("zsum", cmd_zsum, "zero-power sums Z(1..3) against their closed forms")
    p.add_argument("--zero-table", default=None)
    p.add_argument("--m", type=int, default=10**6)

    p = add("zeros", cmd_zeros, "critical-line zero ordinates by sign-change scan")
    p.add_argument("--t-min", type=float, default=10.0)
    p.add_argument("--t-max", type=float, default=50.0)
    p.add_argument("--step", type=float, default=0.05)

    p = add("lfun", cmd_lfun, "truncated L(E, z) products")
    p.add_argument("--curve", required=True, help="bundled label, 'a1,a2,a3,a4,a6' or 'paper:a,b,c,d'")
    p.add_argument("--z", type=_complex_arg, default=complex(1.0))
    p.add_argument("--ladder", type=_ladder_arg, default=[100, 1000])
    p.add_argument("--mode", choices=("partial", "window"), default="partial")
    p.add_argument("--bad-primes", choices=("uniform", "standard"), default="uniform")

    p = add("probe-rank", cmd_probe_rank, "partial products at z = 1 with fitted decay slopes")
    p.add_argument("--curve", required=True)
    p.add_argument("--ladder", type=_ladder_arg, default=[100, 1000, 10000])

    p = add("identity45", cmd_identity45, "character-sum identity for primes p = 3 mod 4")
    p.add_argument("--p", type=_int_list, required=True, help="comma-separated primes")

    p = add("report-special", cmd_report_special, "claimed special values of P at 0, -1, -3")
    p.add_argument("--n", type=int, default=20, help="terms in b_n(1 - z)")
    return parser


def resolved_config(args) -> dict:
    return {k: v for k, v in vars(args).items() if k not in _NOT_CONFIG}


def _render(table: Table, fmt: str) -> str:
    if fmt == "csv":
        return table.to_csv()
    if fmt == "json":
        return table.to_json() + "\n"
    meta = _jsonable(table.metadata)
    lines = [f"# {k}: {json.dumps(meta[k], sort_keys=True)}" for k in sorted(meta)]
    lines.append("\t".join(table.columns))
    lines += ["\t".join(_csv_cell(v) for v in row) for row in table.rows]
    return "\n".join(lines) + "\n"


def _compute(args) -> Table:
    table = args.func(args)
    table.metadata["config"] = resolved_config(args)
    return table


def _config_to_args(cfg: dict, parser: argparse.ArgumentParser) -> argparse.Namespace:
    """Turn an embedded config back into a namespace by re-parsing it as flags."""
    argv = [cfg["command"]]
    for k, v in cfg.items():
        if k == "command" or v is None:
            continue
        flag = "--" + k.replace("_", "-")
        if isinstance(v, dict) and set(v) == {"re", "im"}:
            v = format_complex(complex(v["re"], v["im"]))
        elif isinstance(v, list):
            v = ",".join(str(x) for x in v)
        argv.append(f"{flag}={v}")
    return parser.parse_args(argv)


def _check(path: str, parser) -> int:
    data = json.loads(Path(path).read_text())
    old = Table.from_dict(data)
    cfg = old.metadata.get("config")
    if not cfg:
        raise FormatError("no embedded config in the JSON output")
    args = _config_to_args(cfg, parser)
    new = Table.from_dict(json.loads(_compute(args).to_json()))
    bad = [i for i, (a, b) in enumerate(zip(old.rows, new.rows)) if a != b]
    if len(old.rows) != len(new.rows):
        bad.append(-1)
    if bad:
        print(f"check failed: rows {bad} differ", file=sys.stderr)
        return EXIT_MISMATCH
    print(f"check ok: {len(new.rows)} rows confirmed")
    return EXIT_OK


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.threads < 1:
            raise UsageError("--threads must be >= 1")
        _parallel.set_threads(args.threads)
        if args.check:
            return _check(args.check, parser)
        if not args.command:
            raise UsageError("a subcommand is required (see --help)")
        text = _render(_compute(args), args.format)
        if args.output:
            Path(args.output).write_text(text)
        else:
            sys.stdout.write(text)
        return EXIT_OK
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except (OSError, FormatError, json.JSONDecodeError) as exc:
        print(f"zreg: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (DomainError, ZregError, ValueError, ArithmeticError) as exc:
        print(f"zreg: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    finally:
        _parallel.set_threads(1)


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
