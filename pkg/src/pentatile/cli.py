"""Command line: ``pentatile {generate,pack,render,stats,census} ...``.

Options may also come from a ``key=value`` file given with ``--config``;
flags on the command line win.
"""

from __future__ import annotations

import argparse
import json
import sys
from collections import Counter
from dataclasses import dataclass, field, fields
from pathlib import Path

from .circlepack import Packing, PackingError, pack_complex
from .complex import patch_census
from .geometry import stats_report
from .render import DEFAULT_COLORS, MODES, render_svg
from .subdivision import build_kn, interior_words, substitution_matrix

MAX_LEVEL = 6
MAX_REFINE = 4
TANGENCY_TOL = 1e-6


@dataclass
class RunConfig:
    command: str
    level: int = 2
    refine: int = 1
    boundary_radius: float = 1.0
    tol: float = 1e-10
    max_iters: int = 1_000_000
    margin: int = 2
    band_d: float | None = None
    band_ratio: float = 1.3
    eps: float = 0.02
    radius: int = 1
    mode: str = "tiles"
    packing: str | None = None
    out: str | None = None
    colors: dict[str, str] = field(default_factory=lambda: dict(DEFAULT_COLORS))

    def validate(self) -> None:
        if not 0 <= self.level <= MAX_LEVEL:
            raise ValueError(f"--level must be in 0..{MAX_LEVEL}")
        if not 0 <= self.refine <= MAX_REFINE:
            raise ValueError(f"--refine must be in 0..{MAX_REFINE}")
        if self.tol <= 0 or self.eps <= 0 or self.boundary_radius <= 0:
            raise ValueError("tolerances and radii must be positive")
        if self.band_ratio <= 1:
            raise ValueError("--band-ratio must exceed 1")
        if self.mode not in MODES:
            raise ValueError(f"--mode must be one of {', '.join(MODES)}")
        if self.margin < 0 or self.radius < 0 or self.max_iters < 1:
            raise ValueError("--margin/--radius must be >= 0 and --max-iters >= 1")


def read_config(path: str) -> dict[str, str]:
    out = {}
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"config line without '=': {raw!r}")
        k, v = line.split("=", 1)
        out[k.strip().replace("-", "_")] = v.strip()
    return out


def _coerce(name: str, value):
    types = {f.name: f.type for f in fields(RunConfig)}
    kind = types.get(name)
    if kind is None:
        raise ValueError(f"unknown option {name!r}")
    if name == "colors":
        if isinstance(value, dict):
            return value
        cols = [c.strip() for c in str(value).split(",")]
        return dict(zip(sorted(DEFAULT_COLORS), cols))
    if value is None:
        return None
    if "int" in kind:
        return int(value)
    if "float" in kind:
        return float(value)
    return str(value)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pentatile", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--config", help="key=value file; flags override it")
        p.add_argument("--out", help="output file (default: stdout)")

    g = sub.add_parser("generate", help="write the combinatorial ball K_n as JSON")
    g.add_argument("--level", type=int)
    common(g)

    pk = sub.add_parser("pack", help="solve and lay out the circle packing")
    pk.add_argument("--level", type=int)
    pk.add_argument("--refine", type=int)
    pk.add_argument("--boundary-radius", type=float)
    pk.add_argument("--tol", type=float)
    pk.add_argument("--max-iters", type=int)
    common(pk)

    r = sub.add_parser("render", help="draw a packing file as SVG")
    r.add_argument("packing")
    r.add_argument("--mode", choices=MODES)
    r.add_argument("--colors", help="three comma-separated colors for 33333,33434,33444")
    common(r)

    s = sub.add_parser("stats", help="measure lambda, angles, diameters and the band census")
    s.add_argument("packing")
    s.add_argument("--margin", type=int)
    s.add_argument("--band-d", type=float, help="band lower bound (default: central tile)")
    s.add_argument("--band-ratio", type=float)
    s.add_argument("--eps", type=float)
    s.add_argument("--tol", type=float)
    common(s)

    c = sub.add_parser("census", help="combinatorial vertex-star census of K_n")
    c.add_argument("--level", type=int)
    c.add_argument("--radius", type=int)
    common(c)
    return parser


def make_config(args: argparse.Namespace) -> RunConfig:
    values: dict = {}
    if getattr(args, "config", None):
        values.update(read_config(args.config))
    for k, v in vars(args).items():
        if k in ("config", "command") or v is None:
            continue
        values[k] = v
    cfg = RunConfig(args.command)
    for k, v in values.items():
        setattr(cfg, k, _coerce(k, v))
    cfg.validate()
    return cfg


def _emit(cfg: RunConfig, text: str) -> None:
    if cfg.out:
        Path(cfg.out).write_text(text)
    else:
        sys.stdout.write(text)


def _say(cfg: RunConfig, text: str) -> None:
    # keep stdout clean when the payload goes there
    print(text, file=sys.stderr if cfg.out is None else sys.stdout)


def cmd_generate(cfg: RunConfig) -> int:
    c = build_kn(cfg.level)
    rows = ["  n      V      E      F  Euler  boundary"]
    for k in range(cfg.level + 1):
        ck = build_kn(k)
        rows.append(
            f"{k:3d} {ck.n_vertices:6d} {ck.n_edges:6d} {ck.n_faces:6d} "
            f"{ck.euler_characteristic():6d} {len(ck.boundary):9d}"
        )
    words = Counter(interior_words(c).values())
    rows.append("interior prototiles: " + (", ".join(f"{w}:{k}" for w, k in sorted(words.items())) or "none"))
    _say(cfg, "\n".join(rows))
    _emit(cfg, c.to_json() + "\n")
    return 0


def cmd_pack(cfg: RunConfig) -> int:
    try:
        p = pack_complex(cfg.level, cfg.refine, cfg.boundary_radius, cfg.tol, cfg.max_iters)
    except PackingError as exc:
        print(f"pack failed: {exc}", file=sys.stderr)
        return 1
    _say(
        cfg,
        f"K_{cfg.level} refined {cfg.refine}x: {p.tri.n_faces} triangles, "
        f"angle residual {p.angle_residual:.2e}, tangency residual {p.tangency_residual:.2e}",
    )
    _emit(cfg, p.to_json() + "\n")
    return 0 if p.angle_residual <= cfg.tol and p.tangency_residual <= TANGENCY_TOL else 1


def load_packing(path: str) -> Packing:
    return Packing.from_json(Path(path).read_text())


def cmd_render(cfg: RunConfig) -> int:
    p = load_packing(cfg.packing)
    _emit(cfg, render_svg(p, cfg.mode, cfg.colors))
    return 0


def cmd_stats(cfg: RunConfig) -> int:
    p = load_packing(cfg.packing)
    rep = stats_report(p, cfg.margin, cfg.band_d, cfg.band_ratio, cfg.eps)
    rep["substitution"] = substitution_matrix().to_dict()
    lam = rep["lambda"]
    lines = [f"K_{p.level}, {p.refine} refinements, margin {cfg.margin}"]
    if lam:
        lines.append(
            f"lambda ~ {lam['modulus']:.5f} at {lam['argument_deg']:.3f} deg "
            f"(fit rms {lam['residual']:.2e}); nesting error {rep['skeleton_nesting_error']:.2e}"
        )
    d = rep["diameters"]
    b = rep["band"]
    lines.append(f"tile diameters {d['min']:.4f} .. {d['max']:.4f} over {d['count']} tiles")
    lines.append(f"band [{b['D']:.4f}, x{b['ratio']}]: {b['count']} tiles, {b['classes']} classes")
    _say(cfg, "\n".join(lines))
    _emit(cfg, json.dumps(rep, indent=1, sort_keys=True) + "\n")
    ok = p.angle_residual <= cfg.tol and p.tangency_residual <= TANGENCY_TOL
    return 0 if ok else 1


def cmd_census(cfg: RunConfig) -> int:
    c = build_kn(cfg.level)
    census = patch_census(c, cfg.radius)
    counts = sorted(census.values(), reverse=True)
    doc = {"level": cfg.level, "radius": cfg.radius, "classes": len(census), "counts": counts}
    _say(cfg, f"K_{cfg.level}, radius {cfg.radius}: {len(census)} star classes over {sum(counts)} vertices")
    _emit(cfg, json.dumps(doc) + "\n")
    return 0


COMMANDS = {
    "generate": cmd_generate,
    "pack": cmd_pack,
    "render": cmd_render,
    "stats": cmd_stats,
    "census": cmd_census,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = make_config(args)
    except ValueError as exc:
        parser.error(str(exc))
    return COMMANDS[cfg.command](cfg)


if __name__ == "__main__":
    sys.exit(main())
