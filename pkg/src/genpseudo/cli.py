"""Command-line front end.

Subcommands read Matrix Market inputs, call the library, and write CSV or
JSON.  Every output starts with a self-describing header (a ``#`` comment
line in CSV, a ``meta`` object in JSON).  Files are written atomically.

Exit status: 0 success, 1 input error, 2 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

import numpy as np

from . import __version__, gsvd, mmio, problems, pseudospectra, transient
from .errors import InputError, NumericalError
from .pseudospectra import PencilProblem

SUBCOMMANDS = ("psgrid", "scatter", "stabradius", "gsvd", "numrange", "growth", "gen")


@dataclass
class RunConfig:
    subcommand: str
    a: Optional[str] = None
    m: Optional[str] = None
    b: Optional[str] = None
    mode: Optional[str] = None
    region: Tuple[float, float, float, float] = (-1.0, 1.0, -1.0, 1.0)
    nx: int = 50
    ny: int = 50
    epsilon: float = 0.1
    n_pert: int = 100
    seed: int = 0
    strategy: str = "rank1"
    n_theta: int = 256
    times: List[float] = field(default_factory=lambda: [0.0])
    route: str = "eig"
    problem: Optional[str] = None
    n: int = 8
    params: dict = field(default_factory=dict)
    out: str = "-"
    format: str = "csv"

    def validate(self) -> "RunConfig":
        if self.subcommand not in SUBCOMMANDS:
            raise InputError(f"unknown subcommand {self.subcommand!r}")
        if self.format not in ("csv", "json"):
            raise InputError("format must be csv or json")
        if self.subcommand == "gen":
            if self.problem is None:
                raise InputError("gen needs --problem")
            if self.out == "-":
                raise InputError("gen needs --out PREFIX")
            return self
        if self.a is None:
            raise InputError(f"{self.subcommand} needs --a")
        if self.subcommand == "gsvd":
            if self.b is None:
                raise InputError("gsvd needs --b")
            return self
        if self.m is None:
            if self.mode not in (None, "standard"):
                raise InputError(f"mode {self.mode!r} requires --m")
        if self.mode is not None and self.mode not in pseudospectra.MODES:
            raise InputError(f"mode must be one of {pseudospectra.MODES}")
        if self.epsilon < 0:
            raise InputError("--eps must be >= 0")
        for name in ("nx", "ny", "n_pert", "n_theta"):
            if getattr(self, name) < 1:
                raise InputError(f"{name} must be >= 1")
        return self

    def echo(self) -> str:
        return json.dumps(asdict(self), sort_keys=True, separators=(",", ":"))


def _fmt(x: float) -> str:
    return f"{x:.16e}"


def parse_region(text: str) -> Tuple[float, float, float, float]:
    parts = text.split(",")
    if len(parts) != 4:
        raise InputError("--region needs re0,re1,im0,im1")
    try:
        return tuple(float(p) for p in parts)  # type: ignore[return-value]
    except ValueError:
        raise InputError(f"bad --region {text!r}") from None


def parse_times(text: str) -> List[float]:
    """``t0:t1:k`` (k equally spaced points) or a comma-separated list."""
    try:
        if ":" in text:
            t0, t1, k = text.split(":")
            return [float(t) for t in np.linspace(float(t0), float(t1), int(k))]
        return [float(t) for t in text.split(",")]
    except ValueError:
        raise InputError(f"bad --times {text!r}") from None


def _load_problem(cfg: RunConfig) -> PencilProblem:
    a = mmio.parse_matrix_market(cfg.a)
    m = mmio.parse_matrix_market(cfg.m) if cfg.m else None
    return PencilProblem(a, m)


def _header(cfg: RunConfig) -> str:
    return f"# genpseudo {__version__} {cfg.subcommand} {cfg.echo()}"


def _meta(cfg: RunConfig) -> dict:
    return {"tool": "genpseudo", "version": __version__, "subcommand": cfg.subcommand, "params": asdict(cfg)}


def _csv(cfg: RunConfig, columns: Sequence[str], rows) -> str:
    lines = [_header(cfg), ",".join(columns)]
    lines.extend(",".join(rows_i) for rows_i in rows)
    return "\n".join(lines) + "\n"


def _json(cfg: RunConfig, result) -> str:
    return json.dumps({"meta": _meta(cfg), "result": result}, indent=1, sort_keys=True) + "\n"


def render(cfg: RunConfig) -> dict:
    """Compute a run and return ``{path: text}`` for every output it produces."""
    cfg.validate()
    out = cfg.out

    if cfg.subcommand == "gen":
        spec = problems.ProblemSpec(cfg.problem, cfg.n, _param_values(cfg.params))
        p = problems.generate(spec, cfg.seed)
        note = f"genpseudo {__version__} gen {cfg.echo()}"
        return {
            f"{out}_A.mtx": mmio.format_matrix_market(p.a, comment=note),
            f"{out}_M.mtx": mmio.format_matrix_market(p.m, comment=note),
        }

    if cfg.subcommand == "gsvd":
        a = mmio.parse_matrix_market(cfg.a)
        b = mmio.parse_matrix_market(cfg.b)
        res = gsvd.bsv(a, b)
        with np.errstate(divide="ignore", invalid="ignore"):
            mus = np.where(res.betas > 0, res.alphas / np.where(res.betas > 0, res.betas, 1.0), np.inf)
        if cfg.format == "json":
            values = res.values()
            text = _json(
                cfg,
                {
                    "alphas": res.alphas.tolist(),
                    "betas": res.betas.tolist(),
                    "rank_b": res.rank_b,
                    "degenerate": res.degenerate,
                    "values": "all_nonnegative" if values is gsvd.ALL_NONNEGATIVE else values.tolist(),
                },
            )
        else:
            rows = (
                (_fmt(al), _fmt(be), _fmt(mu), str(res.degenerate).lower())
                for al, be, mu in zip(res.alphas, res.betas, mus)
            )
            text = _csv(cfg, ("alpha", "beta", "mu", "degenerate"), rows)
        return {out: text}

    p = _load_problem(cfg)
    mode = cfg.mode

    if cfg.subcommand == "psgrid":
        g = pseudospectra.grid(p, cfg.region, cfg.nx, cfg.ny, mode)
        if cfg.format == "json":
            text = _json(cfg, {"region": list(g.region), "nx": g.nx, "ny": g.ny, "mode": g.mode,
                               "values": g.values.tolist()})
        else:
            pts = g.points()
            rows = (
                (_fmt(z.real), _fmt(z.imag), _fmt(v))
                for z, v in zip(pts.ravel(), g.values.ravel())
            )
            text = _csv(cfg, ("re", "im", "eps_b"), rows)
        return {out: text}

    if cfg.subcommand == "scatter":
        s = pseudospectra.perturbation_scatter(p, cfg.epsilon, cfg.n_pert, cfg.seed, cfg.strategy, mode)
        meta = {"epsilon": s.epsilon, "strategy": s.strategy, "seed": s.seed, "count": s.count, "mode": s.mode}
        if cfg.format == "json":
            meta["re"] = s.eigenvalues.real.tolist()
            meta["im"] = s.eigenvalues.imag.tolist()
            return {out: _json(cfg, meta)}
        rows = ((_fmt(z.real), _fmt(z.imag)) for z in s.eigenvalues)
        files = {out: _csv(cfg, ("re", "im"), rows)}
        if out != "-":
            files[out + ".meta.json"] = _json(cfg, meta)
        return files

    if cfg.subcommand == "stabradius":
        r = pseudospectra.stability_radius(p, mode)
        result = {"radius": r.radius, "argmin_y": r.argmin_y, "global_guarantee": r.global_guarantee,
                  "unstable": r.unstable}
        if cfg.format == "csv":
            row = (_fmt(r.radius), _fmt(r.argmin_y), str(r.global_guarantee).lower(), str(r.unstable).lower())
            return {out: _csv(cfg, ("radius", "argmin_y", "global_guarantee", "unstable"), [row])}
        return {out: _json(cfg, result)}

    if cfg.subcommand == "numrange":
        nr = transient.numerical_range(p, cfg.n_theta)
        if cfg.format == "json":
            text = _json(cfg, {"theta": nr.thetas.tolist(), "re": nr.support_points.real.tolist(),
                               "im": nr.support_points.imag.tolist(), "lambda_theta": nr.support_values.tolist()})
        else:
            rows = (
                (_fmt(th), _fmt(z.real), _fmt(z.imag), _fmt(lv))
                for th, z, lv in zip(nr.thetas, nr.support_points, nr.support_values)
            )
            text = _csv(cfg, ("theta", "re", "im", "lambda_theta"), rows)
        return {out: text}

    # growth
    gc = transient.growth_curve(p, cfg.times, cfg.route)
    if cfg.format == "json":
        text = _json(cfg, {"t": gc.times.tolist(), "G": gc.growth.tolist(), "route": gc.route})
    else:
        rows = ((_fmt(t), _fmt(g), gc.route) for t, g in zip(gc.times, gc.growth))
        text = _csv(cfg, ("t", "G", "route"), rows)
    return {out: text}


def run(cfg: RunConfig) -> int:
    """Execute one run; returns the process exit status."""
    try:
        files = render(cfg)
        for path, text in files.items():
            if path == "-":
                sys.stdout.write(text)
            else:
                mmio.atomic_write(path, text)
    except NumericalError as exc:
        print(f"genpseudo: numerical failure: {exc}", file=sys.stderr)
        return 2
    except (InputError, ValueError, OSError) as exc:
        print(f"genpseudo: input error: {exc}", file=sys.stderr)
        return 1
    return 0


def load_batch(path) -> List[RunConfig]:
    """Read a JSON batch file: one run object or a list of them."""
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read batch file: {exc}") from None
    if isinstance(data, dict):
        data = [data]
    known = {f.name for f in fields(RunConfig)}
    runs = []
    for i, item in enumerate(data):
        extra = set(item) - known
        if extra:
            raise InputError(f"run {i}: unknown keys {sorted(extra)}")
        if isinstance(item.get("times"), str):
            item["times"] = parse_times(item["times"])
        if isinstance(item.get("region"), str):
            item["region"] = parse_region(item["region"])
        if "region" in item:
            item["region"] = tuple(item["region"])
        runs.append(RunConfig(**item))
    return runs


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise InputError(message)


def _params(items: Optional[List[str]]) -> dict:
    out = {}
    for item in items or []:
        key, sep, val = item.partition("=")
        if not sep:
            raise InputError(f"--param needs key=value, got {item!r}")
        out[key] = val
    return out


def _param_values(params: dict) -> dict:
    out = {}
    for key, val in params.items():
        try:
            out[key] = complex(str(val).replace(" ", ""))
        except ValueError:
            raise InputError(f"bad value for parameter {key!r}: {val!r}") from None
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="genpseudo", description="Pseudospectra, GSVD, stability radius and transient growth.")
    parser.add_argument("--version", action="version", version=f"genpseudo {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    def common(sp, problem=True):
        if problem:
            sp.add_argument("--a", help="Matrix Market file for A")
            sp.add_argument("--m", help="Matrix Market file for M (HPD); omit for M = I")
            sp.add_argument("--mode", choices=pseudospectra.MODES)
        sp.add_argument("--out", default="-", help="output path ('-' for stdout)")
        sp.add_argument("--format", choices=("csv", "json"), default="csv")

    sp = sub.add_parser("psgrid", help="eps_b on a rectangular grid")
    common(sp)
    sp.add_argument("--region", type=parse_region, default=(-1.0, 1.0, -1.0, 1.0))
    sp.add_argument("--nx", type=int, default=50)
    sp.add_argument("--ny", type=int, default=50)

    sp = sub.add_parser("scatter", help="eigenvalues of random perturbations")
    common(sp)
    sp.add_argument("--eps", dest="epsilon", type=float, default=0.1)
    sp.add_argument("--npert", dest="n_pert", type=int, default=100)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--strategy", choices=pseudospectra.STRATEGIES, default="rank1")

    sp = sub.add_parser("stabradius", help="distance to instability")
    common(sp)
    sp.set_defaults(format="json")

    sp = sub.add_parser("gsvd", help="B-singular value decomposition of (A, B)")
    sp.add_argument("--a", required=True)
    sp.add_argument("--b", required=True)
    common(sp, problem=False)

    sp = sub.add_parser("numrange", help="numerical range boundary")
    common(sp)
    sp.add_argument("--ntheta", dest="n_theta", type=int, default=256)

    sp = sub.add_parser("growth", help="maximum transient energy growth")
    common(sp)
    sp.add_argument("--times", type=parse_times, default=[0.0], help="t0:t1:k or comma list")
    sp.add_argument("--route", choices=transient.ROUTES, default="eig")

    sp = sub.add_parser("gen", help="write a generated test problem as Matrix Market files")
    sp.add_argument("--problem", required=True, choices=sorted(problems.GENERATORS))
    sp.add_argument("--n", type=int, default=8)
    sp.add_argument("--param", action="append", metavar="KEY=VALUE")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out", required=True, help="output prefix; writes PREFIX_A.mtx and PREFIX_M.mtx")

    sp = sub.add_parser("batch", help="run every configuration in a JSON file")
    sp.add_argument("config")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except InputError as exc:
        print(f"genpseudo: input error: {exc}", file=sys.stderr)
        return 1
    args = vars(ns)
    try:
        if args["subcommand"] == "batch":
            runs = load_batch(args["config"])
        else:
            if "param" in args:
                args["params"] = _params(args.pop("param"))
            runs = [RunConfig(**args)]
    except (InputError, TypeError) as exc:
        print(f"genpseudo: input error: {exc}", file=sys.stderr)
        return 1
    status = 0
    for cfg in runs:
        status = max(status, run(cfg))
    return status


if __name__ == "__main__":
    sys.exit(main())
