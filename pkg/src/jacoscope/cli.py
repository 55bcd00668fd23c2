"""Command-line front end.

Exit codes: 0 success (``analyze``: Injective), 1 input or parse error,
2 invalid Jacobian hypothesis (report still written), 3 budget exhausted,
4 NotInjective, 5 Unknown.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

from . import corpus
from .compactify import (PlanarField, bendixson, bendixson_hamiltonian, chart_U, chart_V, compare_fields,
                         hamiltonian_field, infinite_singular_free)
from .config import ConfigError, RunConfig, load_config
from .parser import ParseError, parse_map, print_map, print_poly
from .polycore import BudgetError
from .report import build_report, dumps

EXIT_OK, EXIT_INPUT, EXIT_INVALID, EXIT_BUDGET, EXIT_NOT_INJECTIVE, EXIT_UNKNOWN = 0, 1, 2, 3, 4, 5
VERDICT_EXIT = {"Injective": EXIT_OK, "NotInjective": EXIT_NOT_INJECTIVE, "Unknown": EXIT_UNKNOWN}


class InputError(Exception):
    pass


class Target:
    """A map or raw planar field loaded from a ``.pmap`` file or ``corpus:NAME``."""

    def __init__(self, spec: str, as_field: bool = False):
        self.spec = spec
        if spec.startswith("corpus:"):
            try:
                entry = corpus.get(spec.split(":", 1)[1])
            except KeyError as exc:
                raise InputError(exc.args[0]) from None
            self.kind = "field" if (as_field or entry.kind == "field") else "map"
            self.map = entry.load()
        else:
            path = Path(spec)
            try:
                text = path.read_text(encoding="utf-8")
            except OSError as exc:
                raise InputError(f"cannot read {spec}: {exc.strerror}") from None
            self.map = parse_map(text)
            self.kind = "field" if as_field else "map"
        if self.kind == "field" and self.map.n != 2:
            raise InputError("a raw field needs exactly two components")

    @property
    def field(self) -> PlanarField:
        """The raw field itself, or the Hamiltonian field of a map."""
        if self.kind == "field":
            return PlanarField(self.map[0], self.map[1], "raw")
        if self.map.n != 2:
            raise InputError("dynamics and compactification need a planar map")
        return hamiltonian_field(self.map)


# -- output helpers --------------------------------------------------------------


def _emit(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _field_text(X: PlanarField, names=("p", "q")) -> str:
    return print_map([X.p, X.q], names=names, vars=X.names)


def _config(args, **forced) -> RunConfig:
    overrides = {}
    for item in args.set or []:
        if "=" not in item:
            raise ConfigError(f"--set expects KEY=VALUE, got {item!r}")
        key, value = item.split("=", 1)
        overrides[key.strip().replace("-", "_")] = value.strip()
    for key in ("seed", "max_weight", "properness_radii", "oracle_box", "oracle_resolution"):
        value = getattr(args, key, None)
        if value is not None:
            overrides[key] = value
    for key, value in forced.items():
        overrides.setdefault(key, value)
    return load_config(args.config, overrides)


# -- subcommands -------------------------------------------------------------------


def cmd_parse(args) -> int:
    t = Target(args.target, args.field)
    from .polycore import default_names

    names = default_names(t.map.n)
    if args.json:
        _emit(dumps({"variables": list(names), "components": [print_poly(p, names) for p in t.map],
                     "degrees": [int(max(p.degree, 0)) for p in t.map]}), args.output)
    else:
        _emit(print_map(t.map, vars=names), args.output)
    return EXIT_OK


def _decide(args, **forced) -> tuple[dict, object]:
    from .criteria import decide

    t = Target(args.target)
    cfg = _config(args, **forced)
    verdict = decide(t.map, cfg)
    report = build_report(t.map, verdict, cfg)
    _emit(dumps(report), args.output or cfg.output or None)
    return report, verdict


def cmd_check(args) -> int:
    forced = {"run_oracle": True} if args.oracle else {}
    _, verdict = _decide(args, **forced)
    return EXIT_INVALID if verdict.invalid_hypothesis else EXIT_OK


def cmd_analyze(args) -> int:
    _, verdict = _decide(args, run_monodromy=not args.no_monodromy, run_oracle=not args.no_oracle)
    if verdict.invalid_hypothesis:
        return EXIT_INVALID
    return VERDICT_EXIT[verdict.outcome]


def cmd_compactify(args) -> int:
    t = Target(args.target, args.field)
    if t.kind == "field":
        X = t.field
        B = bendixson(X)
        info = {"degree": B.degree, "provenance": B.provenance, "time_rescale_exponent": X.degree,
                "source_degree": X.degree}
    else:
        H = hamiltonian_field(t.map)
        B = bendixson_hamiltonian(t.map)
        cmp = compare_fields(bendixson(H), B)
        info = {"degree": B.degree, "provenance": B.provenance,
                "time_rescale_exponent": H.degree + cmp.circle_power_b - cmp.circle_power_a,
                "source_degree": H.degree, "matches_generic_transform": cmp.equal_after_normalization}
    _emit(_field_text(B) + "\n" + dumps(info), args.output)
    return EXIT_OK


def cmd_charts(args) -> int:
    t = Target(args.target)
    if t.map.n != 2:
        raise InputError("charts need a planar map")
    out = []
    info = {}
    for chart in (chart_U(t.map), chart_V(t.map)):
        out.append(f"# chart {chart.chart}\n" + _field_text(chart.field, ("ubar_dot", "vbar_dot")))
        info[chart.chart] = {"degree": chart.field.degree, "time_rescale_exponent": chart.time_rescale_exponent,
                             "substitution_exponent": chart.substitution_exponent}
    info["infinity"] = infinite_singular_free(t.map).to_dict()
    _emit("\n".join(out) + "\n" + dumps(info), args.output)
    return EXIT_OK


def _parse_pair(text: str) -> tuple[float, float]:
    try:
        a, b = (float(v) for v in text.split(","))
    except ValueError:
        raise InputError(f"expected two comma-separated numbers, got {text!r}") from None
    return a, b


def _plane_field(t: Target, compactified: bool) -> PlanarField:
    if not compactified:
        return t.field
    return bendixson(t.field) if t.kind == "field" else bendixson_hamiltonian(t.map)


def cmd_index(args) -> int:
    from .dynamics import Circle, index_record

    t = Target(args.target, args.field)
    X = _plane_field(t, args.compactified)
    rec = index_record(X, Circle(_parse_pair(args.center), args.radius))
    body = rec.to_dict()
    body["curve"] = {"kind": "circle", "center": list(_parse_pair(args.center)), "radius": args.radius}
    _emit(f"{rec.index}\n" + dumps(body), args.output)
    return EXIT_OK


def _svg(traces, size: int = 480) -> str:
    pts = [p for tr in traces for p in tr.points if all(math.isfinite(c) for c in p)]
    if not pts:
        return f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}"/>\n'
    span = max(max(abs(c) for c in p) for p in pts) or 1.0
    scale = 0.45 * size / span

    def xy(p):
        return f"{size / 2 + scale * p[0]:.3f},{size / 2 - scale * p[1]:.3f}"

    lines = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
             f'viewBox="0 0 {size} {size}">',
             f'<rect width="{size}" height="{size}" fill="white"/>']
    for tr in traces:
        good = [p for p in tr.points if all(math.isfinite(c) for c in p)]
        if len(good) > 1:
            lines.append('<polyline fill="none" stroke="black" stroke-width="0.8" points="'
                         + " ".join(xy(p) for p in good) + '"/>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def cmd_portrait(args) -> int:
    from .dynamics import integrate

    t = Target(args.target, args.field)
    cfg = _config(args)
    X = _plane_field(t, not args.plane)
    center = _parse_pair(args.center)
    outdir = Path(args.csv_dir or cfg.csv_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    radii = cfg.probe_radii if args.radii is None else tuple(float(v) for v in args.radii.split(","))
    traces, summary = [], []
    k = 0
    for r in radii:
        for j in range(cfg.probe_angles):
            theta = 2 * math.pi * j / cfg.probe_angles
            p0 = (center[0] + r * math.cos(theta), center[1] + r * math.sin(theta))
            for direction in (1, -1):
                tr = integrate(X, p0, direction * args.time, tol=cfg.integrator_tol, center=center,
                               max_steps=cfg.probe_max_steps, escape_radius=args.escape_radius)
                path = outdir / f"probe_{k:03d}.csv"
                with path.open("w", encoding="utf-8") as fh:
                    fh.write("t,u,v\n")
                    for tt, (u, v) in zip(tr.t, tr.points):
                        fh.write(f"{float(tt) * direction!r},{float(u)!r},{float(v)!r}\n")
                traces.append(tr)
                summary.append({"file": str(path), "start": list(p0), "direction": direction,
                                "termination": tr.termination, "points": len(tr)})
                k += 1
    out = {"field": _field_text(X), "probes": summary}
    if args.svg or cfg.svg:
        svg_path = outdir / "portrait.svg"
        svg_path.write_text(_svg(traces), encoding="utf-8")
        out["svg"] = str(svg_path)
    _emit(dumps(out), args.output)
    return EXIT_OK


def cmd_oracle(args) -> int:
    from .oracle import search

    t = Target(args.target)
    cfg = _config(args)
    rep = search(t.map, cfg.oracle_box, cfg.oracle_resolution, cfg.oracle_bucket or None,
                 cfg.oracle_max_candidates, cfg.oracle_max_residual, cfg.oracle_min_separation,
                 cfg.oracle_max_points, stop_after=args.max_witnesses)
    _emit(dumps(rep.to_dict()), args.output or cfg.output or None)
    return EXIT_OK


def cmd_corpus(args) -> int:
    if args.action == "list":
        for e in corpus.ENTRIES.values():
            print(f"{e.name:20s} {e.kind:6s} {e.description}")
    elif args.action == "show":
        if not args.name:
            raise InputError("corpus show needs an entry name")
        try:
            e = corpus.get(args.name)
        except KeyError as exc:
            raise InputError(exc.args[0]) from None
        sys.stdout.write(e.source.replace("; ", ";\n") + "\n")
    else:
        outdir = Path(args.name or "corpus")
        outdir.mkdir(parents=True, exist_ok=True)
        for e in corpus.ENTRIES.values():
            (outdir / f"{e.name}.pmap").write_text(
                f"# {e.description}\n" + e.source.replace("; ", ";\n") + "\n", encoding="utf-8")
            print(outdir / f"{e.name}.pmap")
    return EXIT_OK


# -- argument parsing --------------------------------------------------------------


def _add_config_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="key = value configuration file")
    p.add_argument("--set", action="append", metavar="KEY=VALUE", help="override one config key")
    p.add_argument("--seed", type=int)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="jacoscope", description="Injectivity evidence for polynomial maps.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", help="parse and print a map in canonical form")
    p.add_argument("target")
    p.add_argument("--field", action="store_true", help="treat the file as a raw field (p, q)")
    p.add_argument("--json", action="store_true")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_parse)

    for name, fn, helptext in (("check", cmd_check, "run the criterion chain"),
                               ("analyze", cmd_analyze, "criterion chain plus dynamics and oracle")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("target")
        _add_config_options(p)
        p.add_argument("--max-weight", dest="max_weight", type=int)
        p.add_argument("--radii-count", dest="properness_radii", type=int)
        p.add_argument("-o", "--output")
        if name == "check":
            p.add_argument("--oracle", action="store_true", help="also search for collisions")
        else:
            p.add_argument("--no-monodromy", action="store_true")
            p.add_argument("--no-oracle", action="store_true")
        p.set_defaults(func=fn)

    p = sub.add_parser("compactify", help="print the compactified field")
    p.add_argument("target")
    p.add_argument("--field", action="store_true")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_compactify)

    p = sub.add_parser("charts", help="print both chart systems and the infinity certificate")
    p.add_argument("target")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_charts)

    p = sub.add_parser("portrait", help="integrate probe orbits and write CSV (and SVG)")
    p.add_argument("target")
    _add_config_options(p)
    p.add_argument("--field", action="store_true")
    p.add_argument("--plane", action="store_true", help="use the uncompactified field")
    p.add_argument("--center", default="0,0")
    p.add_argument("--radii", help="comma-separated start radii")
    p.add_argument("--time", type=float, default=1e6, help="time budget per orbit")
    p.add_argument("--escape-radius", dest="escape_radius", type=float, default=1e3)
    p.add_argument("--csv-dir", dest="csv_dir")
    p.add_argument("--svg", action="store_true")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_portrait)

    p = sub.add_parser("index", help="index of the field along a circle")
    p.add_argument("target")
    p.add_argument("--field", action="store_true")
    p.add_argument("--compactified", action="store_true")
    p.add_argument("--center", default="0,0")
    p.add_argument("--radius", type=float, default=1.0)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_index)

    p = sub.add_parser("oracle", help="search for two points with the same image")
    p.add_argument("target")
    _add_config_options(p)
    p.add_argument("--box", dest="oracle_box", type=float)
    p.add_argument("--resolution", dest="oracle_resolution", type=int)
    p.add_argument("--max-witnesses", dest="max_witnesses", type=int, default=1)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("corpus", help="list, show or write the built-in examples")
    p.add_argument("action", choices=("list", "show", "build"))
    p.add_argument("name", nargs="?", help="entry name (show) or output directory (build)")
    p.set_defaults(func=cmd_corpus)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (InputError, ConfigError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except BudgetError as exc:
        print(f"budget exhausted: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except ValueError as exc:
        from .dynamics import IndexAccumulationError

        if isinstance(exc, IndexAccumulationError):
            print(f"budget exhausted: {exc}", file=sys.stderr)
            return EXIT_BUDGET
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
