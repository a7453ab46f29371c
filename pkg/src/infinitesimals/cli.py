"""Command-line entry point.

Exit codes: 0 success, 2 usage error, 3 domain error (the error class name
is printed on stderr). Exact results print as rationals; decimal results
carry a ``[approx:D]`` tag with the working precision D.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction
from pathlib import Path

from . import calculus, scenes
from .errors import InfinitesimalError, ModeError
from .expr import (
    RatFuncBackend,
    RealExact,
    SeriesBackend,
    evaluate,
    free_variables,
    parse,
    parse_series,
)
from .ratfunc import RatFunc, compare
from .render import render
from .series import DEFAULT_DIGITS, DEFAULT_WINDOW, Series, decimal_text, series_compare
from .ultrapower import (
    Interval,
    SetFamily,
    check_filter,
    check_ultrafilter,
    classify_sequence,
    definable_value,
    omega_compare,
    parse_sequence_spec,
    star_set_membership,
)

FORMATS = ("svg", "csv", "json", "text")


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class Config:
    series_window: int = DEFAULT_WINDOW
    approx_digits: int = DEFAULT_DIGITS
    output_dir: Path | None = None
    format: str = "text"
    mode: str = "auto"
    workers: int = 1

    def __post_init__(self):
        if self.series_window < 4:
            raise UsageError(f"--window must be at least 4, got {self.series_window}")
        if self.approx_digits < 20:
            raise UsageError(f"--digits must be at least 20, got {self.approx_digits}")
        if self.format not in FORMATS:
            raise UsageError(f"--format must be one of {', '.join(FORMATS)}")
        if self.mode not in ("auto", "exact", "approx"):
            raise UsageError("--mode must be auto, exact or approx")
        if self.workers < 1:
            raise UsageError("--workers must be positive")


_CONFIG_KEYS = {
    "series_window": int, "window": int,
    "approx_digits": int, "digits": int,
    "output_dir": Path, "format": str, "mode": str, "workers": int,
}
_ALIASES = {"window": "series_window", "digits": "approx_digits"}


def load_config(path) -> dict:
    """Flat ``key = value`` lines; ``#`` starts a comment."""
    out = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip()
        if not sep or key not in _CONFIG_KEYS:
            raise UsageError(f"--config {path}: line {lineno}: expected one of "
                             f"{', '.join(sorted(_CONFIG_KEYS))} as key = value")
        try:
            out[_ALIASES.get(key, key)] = _CONFIG_KEYS[key](value.strip())
        except ValueError:
            raise UsageError(f"--config {path}: line {lineno}: bad value for {key}") from None
    return out


def resolve_config(args) -> Config:
    config = getattr(args, "config", None)
    values = load_config(config) if config else {}
    flags = {"series_window": "window", "approx_digits": "digits", "output_dir": "output_dir",
             "format": "format", "mode": "mode", "workers": "workers"}
    flags = {k: getattr(args, attr, None) for k, attr in flags.items()}
    values.update({k: v for k, v in flags.items() if v is not None})
    return Config(**values)


# -- formatting ------------------------------------------------------------------

def fmt_number(v) -> str:
    if isinstance(v, Decimal):
        return decimal_text(v)
    return str(v)


def approx_tag(cfg: Config, approx: bool) -> str:
    return f" [approx:{cfg.approx_digits}]" if approx else ""


def _is_approx(v) -> bool:
    if isinstance(v, Decimal):
        return True
    return isinstance(v, Series) and v.mode == "approx"


def auto_mode(cfg: Config, fn):
    """Run fn(mode) exactly, falling back to decimals when an irrational constant appears."""
    if cfg.mode != "auto":
        return fn(cfg.mode)
    try:
        return fn("exact")
    except ModeError:
        return fn("approx")


def output_path(cfg: Config, out: str) -> Path:
    p = Path(out)
    if cfg.output_dir is not None and not p.is_absolute():
        p = cfg.output_dir / p
    p.parent.mkdir(parents=True, exist_ok=True)
    return p


def write_scene(cfg: Config, scene, out: str | None, figure: str | None) -> list[str]:
    written = []
    if out:
        p = output_path(cfg, out)
        kind = p.suffix.lstrip(".").lower()
        if kind not in ("svg", "csv"):
            kind = cfg.format if cfg.format in ("svg", "csv") else "svg"
        p.write_bytes(render(scene, kind))
        written.append(str(p))
    if figure:
        from .plotting import save_figure

        written.append(str(save_figure(scene, output_path(cfg, figure))))
    return written


def parse_rational(text: str, flag: str) -> Fraction:
    try:
        return evaluate(parse(text), RealExact())
    except InfinitesimalError as exc:
        raise UsageError(f"{flag}: {text!r} is not a rational number ({exc})") from None


def _bindings(items, backend) -> dict:
    out = {}
    for item in items or []:
        name, sep, value = item.partition("=")
        if not sep or not name.strip().isidentifier():
            raise UsageError(f"--at: expected NAME=VALUE, got {item!r}")
        src = value.strip()
        if isinstance(backend, SeriesBackend):
            out[name.strip()] = backend.lift(parse_series(src.replace("eps", "e"), window=backend.window))
        elif isinstance(backend, RatFuncBackend):
            out[name.strip()] = evaluate(parse(src), backend, {"x": RatFunc.x()})
        else:
            out[name.strip()] = evaluate(parse(src), backend)
    return out


# -- subcommands -----------------------------------------------------------------

def cmd_eval(args, cfg: Config) -> list[str]:
    ast = parse(args.expr)

    def run(mode):
        if args.backend == "real":
            backend = RealExact()
        elif args.backend == "ratfunc":
            backend = RatFuncBackend()
        else:
            backend = SeriesBackend(mode, cfg.series_window, cfg.approx_digits)
        env = _bindings(args.at, backend)
        if args.backend == "ratfunc":
            env.setdefault("x", RatFunc.x())
        if args.backend == "series":
            for name in ("e", "eps"):
                if name in free_variables(ast):
                    env.setdefault(name, backend.epsilon())
        return evaluate(ast, backend, env)

    value = auto_mode(cfg, run) if args.backend == "series" else run("exact")
    return [fmt_number(value) + approx_tag(cfg, _is_approx(value))]


def _point(args) -> Fraction:
    return parse_rational(args.at, "--at")


def cmd_diff(args, cfg: Config) -> list[str]:
    x0 = _point(args)
    if args.order < 1:
        raise UsageError("--order must be at least 1")
    kw = {"window": max(cfg.series_window, args.order + 1), "digits": cfg.approx_digits}
    if args.order == 1:
        res = auto_mode(cfg, lambda m: calculus.derivative(args.expr, x0, mode=m, **kw))
        lines = [fmt_number(res.value) + approx_tag(cfg, _is_approx(res.value))]
        if args.witness:
            lines.append(f"witness: {res.witness}" + approx_tag(cfg, _is_approx(res.witness)))
        return lines
    value = auto_mode(cfg, lambda m: calculus.nth_derivative(args.expr, x0, args.order, mode=m, **kw))
    return [fmt_number(value) + approx_tag(cfg, _is_approx(value))]


def cmd_taylor(args, cfg: Config) -> list[str]:
    x0 = _point(args)
    kw = {"window": cfg.series_window, "digits": cfg.approx_digits}
    coeffs = auto_mode(cfg, lambda m: calculus.taylor(args.expr, x0, args.order, mode=m, **kw))
    return [f"a_{k} = {fmt_number(c)}{approx_tag(cfg, _is_approx(c))}" for k, c in enumerate(coeffs)]


def cmd_limit(args, cfg: Config) -> list[str]:
    x0 = _point(args)
    kw = {"window": cfg.series_window, "digits": cfg.approx_digits}
    lim = auto_mode(cfg, lambda m: calculus.limit_at(args.expr, x0, args.side, mode=m, **kw))
    text = fmt_number(lim.value) if lim.kind == "finite" else str(lim)
    return [text + approx_tag(cfg, _is_approx(lim.value))]


def cmd_compare(args, cfg: Config) -> list[str]:
    lhs, rhs = parse(args.lhs), parse(args.rhs)
    if args.backend == "ratfunc":
        backend = RatFuncBackend()
        env = {"x": RatFunc.x()}
        return [str(compare(evaluate(lhs, backend, env), evaluate(rhs, backend, env)).value)]

    def run(mode):
        backend = SeriesBackend(mode, cfg.series_window, cfg.approx_digits)
        env = {"x": backend.epsilon(), "e": backend.epsilon(), "eps": backend.epsilon()}
        return series_compare(evaluate(lhs, backend, env), evaluate(rhs, backend, env))

    return [str(auto_mode(cfg, run).value)]


def _report(report, cfg: Config) -> list[str]:
    if cfg.format == "json":
        return [json.dumps(report.to_dict(), indent=2, sort_keys=True)]
    return report.to_text().splitlines()


def cmd_ultra(args, cfg: Config) -> list[str]:
    if args.ultra_cmd in ("check-filter", "check-ultrafilter"):
        try:
            fam = SetFamily.from_json(Path(args.family).read_text())
        except OSError as exc:
            raise UsageError(f"--family: cannot read {args.family}: {exc.strerror}") from None
        if args.ultra_cmd == "check-filter":
            if args.threshold is not None and args.threshold < 1:
                raise UsageError("--threshold must be at least 1")
            return _report(check_filter(fam, args.threshold), cfg)
        return _report(check_ultrafilter(fam), cfg)
    if args.ultra_cmd == "classify":
        if args.horizon < 100:
            raise UsageError("--horizon must be at least 100")
        return _report(classify_sequence(parse_sequence_spec(args.seq), args.horizon), cfg)
    if args.ultra_cmd == "compare":
        a = definable_value(parse_sequence_spec(args.seq_a))
        b = definable_value(parse_sequence_spec(args.seq_b))
        return [omega_compare(a, b).value]
    if args.ultra_cmd == "member":
        return [str(star_set_membership(Interval.parse(args.interval), _seq_or_value(args.seq)))]
    raise UsageError("ultra needs a subcommand")


def _seq_or_value(text: str):
    seq = parse_sequence_spec(text)
    return seq if seq.kind != "rational" else definable_value(seq)


def cmd_saw(args, cfg: Config) -> list[str]:
    if args.hyper:
        if not args.tooth:
            raise UsageError("--hyper needs --tooth c,j")
        try:
            k = scenes.HyperIndex.parse(args.tooth)
        except (ValueError, ZeroDivisionError):
            raise UsageError(f"--tooth: expected c,j with c rational and j integer, got {args.tooth!r}") from None
        lines = []
        center = scenes.luzin_saw_hyper(k, scenes.Phase.START)
        for ph in scenes.Phase:
            p = scenes.luzin_saw_hyper(k, ph)
            shown = scenes.microscope2d(p, center, scenes.infinite_n()) if args.magnify else p
            x, y = scenes.shadow(shown)
            lines.append(f"{ph.value}: {p}  shadow{' after magnification' if args.magnify else ''} ({x}, {y})")
        scene = scenes.hyper_saw_scene(k, magnify=args.magnify)
    else:
        if args.teeth is None:
            raise UsageError("saw needs --teeth N or --hyper")
        if args.teeth < 1:
            raise UsageError(f"--teeth must be at least 1, got {args.teeth}")
        dev, length = scenes.saw_limit_check(args.teeth)
        lines = [f"vertices: {2 * args.teeth + 1}", f"sup_deviation: {dev}", f"arc_length: {length}"]
        scene = scenes.finite_saw_scene(args.teeth)
    return lines + [f"wrote {p}" for p in write_scene(cfg, scene, args.out, args.figure)]


def cmd_blancmange(args, cfg: Config) -> list[str]:
    if args.terms < 1:
        raise UsageError(f"--terms must be at least 1, got {args.terms}")
    lines = []
    for x in args.at or []:
        value, tail = scenes.blancmange(parse_rational(x, "--at"), args.terms)
        lines.append(f"bl({x}) = {value} (tail bound {tail})")
    if args.probe:
        x0_s, sep, m_s = args.probe.rpartition(",")
        try:
            m = int(m_s)
        except ValueError:
            m = 0
        if not sep or m < 1:
            raise UsageError(f"--probe: expected X0,M with M a positive integer, got {args.probe!r}")
        x0 = parse_rational(x0_s, "--probe")
        q = scenes.diff_quotient_probe(x0, m, terms=max(args.terms, m + 2))
        lines.append(f"difference quotient at {x0} with h = 2^-{m}: {q}")
    if args.out or args.figure:
        levels = min(args.terms, 12)
        scene = scenes.blancmange_scene(levels, workers=cfg.workers)
        lines += [f"wrote {p}" for p in write_scene(cfg, scene, args.out, args.figure)]
    if not lines:
        lines.append(f"tail bound after {args.terms} terms: {Fraction(1, 1 << args.terms)}")
    return lines


def cmd_microscope(args, cfg: Config) -> list[str]:
    center = parse_rational(args.center, "--center")
    from .ratfunc import magnify1d, standard_part
    from .errors import NotFinite

    lines = []
    backend = RatFuncBackend()
    for src in args.expr:
        f = evaluate(parse(src), backend, {"x": RatFunc.x()})
        try:
            seen = str(standard_part(f))
        except NotFinite:
            seen = "infinite"
        try:
            mag = str(standard_part(magnify1d(f, center)))
        except NotFinite:
            mag = "infinite (outside the field of view)"
        lines.append(f"{src}: standard part {seen}; under the microscope at {center}: {mag}")
    scene = scenes.microscope_scene(args.expr, center)
    return lines + [f"wrote {p}" for p in write_scene(cfg, scene, args.out, args.figure)]


def cmd_figures(args, cfg: Config) -> list[str]:
    out_dir = Path(args.out_dir) if args.out_dir else (cfg.output_dir or Path("."))
    out_dir.mkdir(parents=True, exist_ok=True)
    lines = []
    for name, build in scenes.FIGURES.items():
        scene = build(workers=cfg.workers)
        for kind in ("svg", "csv"):
            p = out_dir / f"{name}.{kind}"
            p.write_bytes(render(scene, kind))
            lines.append(f"wrote {p}")
        if args.png:
            from .plotting import save_figure

            lines.append(f"wrote {save_figure(scene, out_dir / f'{name}.png')}")
    return lines


# -- parser ------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    # global options are accepted before or after the subcommand
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=argparse.SUPPRESS,
                        help="flat key = value file; flags override it")
    common.add_argument("--window", type=int, default=argparse.SUPPRESS,
                        help=f"series window (default {DEFAULT_WINDOW}, at least 4)")
    common.add_argument("--digits", type=int, default=argparse.SUPPRESS,
                        help=f"decimal digits (default {DEFAULT_DIGITS}, at least 20)")
    common.add_argument("--mode", choices=("auto", "exact", "approx"), default=argparse.SUPPRESS,
                        help="series coefficients: exact, decimal, or exact when possible (default)")
    common.add_argument("--format", choices=FORMATS, default=argparse.SUPPRESS,
                        help="report format for ultra; scene format for --out")
    common.add_argument("--output-dir", type=Path, default=argparse.SUPPRESS,
                        help="directory for relative output paths")
    common.add_argument("--workers", type=int, default=argparse.SUPPRESS,
                        help="threads for sampling scene curves")
    p = argparse.ArgumentParser(prog="infinitesimals", parents=[common],
                                description="Exact arithmetic with infinitesimals, and pictures of it.")
    sub = p.add_subparsers(dest="cmd", required=True)

    s = sub.add_parser("eval", parents=[common], help="evaluate an expression")
    s.add_argument("--expr", required=True)
    s.add_argument("--backend", choices=("real", "ratfunc", "series"), default="series")
    s.add_argument("--at", action="append", metavar="NAME=VALUE",
                   help="binding such as x=3+eps (repeatable); eps is the infinitesimal")
    s.set_defaults(func=cmd_eval)

    s = sub.add_parser("diff", parents=[common], help="derivative as the standard part of an infinitesimal quotient")
    s.add_argument("--expr", required=True)
    s.add_argument("--at", required=True, metavar="X0")
    s.add_argument("--order", type=int, default=1)
    s.add_argument("--witness", action="store_true", help="also print the quotient before taking st")
    s.set_defaults(func=cmd_diff)

    s = sub.add_parser("taylor", parents=[common], help="Taylor coefficients a_0..a_N")
    s.add_argument("--expr", required=True)
    s.add_argument("--at", required=True, metavar="X0")
    s.add_argument("--order", type=int, required=True)
    s.set_defaults(func=cmd_taylor)

    s = sub.add_parser("limit", parents=[common], help="one-sided limit via f(x0 +/- eps)")
    s.add_argument("--expr", required=True)
    s.add_argument("--at", required=True, metavar="X0")
    s.add_argument("--side", choices=("above", "below"), default="above")
    s.set_defaults(func=cmd_limit)

    s = sub.add_parser("compare", parents=[common], help="order two expressions in x (x infinitesimal)")
    s.add_argument("--lhs", required=True)
    s.add_argument("--rhs", required=True)
    s.add_argument("--backend", choices=("ratfunc", "series"), default="ratfunc")
    s.set_defaults(func=cmd_compare)

    s = sub.add_parser("ultra", parents=[common], help="filters and sequence hyperreals")
    s.set_defaults(func=cmd_ultra)
    us = s.add_subparsers(dest="ultra_cmd", required=True)
    u = us.add_parser("check-filter", parents=[common])
    u.add_argument("--family", required=True, help='JSON file {"universe": n, "members": [[...], ...]}')
    u.add_argument("--threshold", type=int)
    u = us.add_parser("check-ultrafilter", parents=[common])
    u.add_argument("--family", required=True)
    u = us.add_parser("classify", parents=[common])
    u.add_argument("--seq", required=True, help='e.g. "1 mod 3: -n; 2 mod 3: n; 0 mod 3: 1/n"')
    u.add_argument("--horizon", type=int, default=100)
    u = us.add_parser("compare", parents=[common])
    u.add_argument("--seq-a", required=True)
    u.add_argument("--seq-b", required=True)
    u = us.add_parser("member", parents=[common], help="is the sequence in the star extension of an interval")
    u.add_argument("--interval", required=True, help="e.g. (0,1) or [0,inf)")
    u.add_argument("--seq", required=True)

    s = sub.add_parser("saw", parents=[common], help="Luzin's saw, finite or with infinitesimal teeth")
    s.add_argument("--teeth", type=int)
    s.add_argument("--hyper", action="store_true")
    s.add_argument("--tooth", help="tooth index c*N + j given as c,j")
    s.add_argument("--magnify", action="store_true")
    s.add_argument("--out", help="SVG or CSV file")
    s.add_argument("--figure", help="matplotlib image (png, pdf or svg)")
    s.set_defaults(func=cmd_saw)

    s = sub.add_parser("blancmange", parents=[common], help="partial sums and difference quotients")
    s.add_argument("--terms", type=int, required=True)
    s.add_argument("--at", action="append", metavar="X")
    s.add_argument("--probe", metavar="X0,M")
    s.add_argument("--out")
    s.add_argument("--figure")
    s.set_defaults(func=cmd_blancmange)

    s = sub.add_parser("microscope", parents=[common], help="magnify elements of Q(x) about a real point")
    s.add_argument("--expr", required=True, action="append")
    s.add_argument("--center", required=True)
    s.add_argument("--out")
    s.add_argument("--figure")
    s.set_defaults(func=cmd_microscope)

    s = sub.add_parser("figures", parents=[common], help="write every scene as SVG and CSV")
    s.add_argument("--out-dir")
    s.add_argument("--png", action="store_true", help="also write matplotlib PNGs")
    s.set_defaults(func=cmd_figures)
    return p


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = resolve_config(args)
        lines = args.func(args, cfg)
    except UsageError as exc:
        print(f"{parser.prog}: usage error: {exc}", file=stderr)
        return 2
    except InfinitesimalError as exc:
        print(f"error: {exc.name}: {exc}", file=stderr)
        return 3
    except (ValueError, ZeroDivisionError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=stderr)
        return 3
    for line in lines:
        print(line, file=stdout)
    return 0


def main(argv=None) -> int:
    return run(argv)


if __name__ == "__main__":
    sys.exit(main())
