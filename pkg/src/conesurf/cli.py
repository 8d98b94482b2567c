"""``conesurf`` command-line front end.

Exit codes: 0 success, 1 validation or computation failure, 2 usage error.
JSON results go to stdout as a single document; diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from . import geom
from .builders import ModelSpec, build_model
from .cohomology import (Presentation, b1_dimension, h1_dimension, z1_dimension)
from .development import develop_path, holonomy_of_loop, path_end
from .errors import ConesurfError, ParseError
from .geom import IDENTITY, se2_fixed_point
from .loops import DualLoop, parse_path
from .repvariety import (BetaVector, classify_xi, dm_condition, marking_from_dict,
                         remap_marking, serialize_marking, validate_marking)
from .surface import (cone_angle, euler_characteristic, gauss_bonnet_residual, genus,
                      hinge_subdivide, serialize, singularity_order, surface_from_dict, total_area)

DEFAULT_TOL = 1e-9


class UsageError(Exception):
    pass


# -- deterministic JSON -------------------------------------------------------

def _fmt_float(x: float) -> str:
    if not math.isfinite(x):
        return "null"
    if x == 0:
        x = 0.0  # drop the sign of -0.0
    return format(x, ".17g")


def dumps(obj, indent: int = 2, _level: int = 0) -> str:
    """JSON with insertion-ordered keys and 17-significant-digit floats."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return _fmt_float(obj)
    if isinstance(obj, complex):
        return dumps([obj.real, obj.imag], indent, _level)
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dumps(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + f"\n{end}}}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(isinstance(v, (int, float, str, bool)) or v is None for v in obj):
            return "[" + ", ".join(dumps(v, indent, _level + 1) for v in obj) + "]"
        items = [pad + dumps(v, indent, _level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + f"\n{end}]"
    if hasattr(obj, "item"):  # numpy scalar
        return dumps(obj.item(), indent, _level)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _text(obj, prefix="") -> list[str]:
    if isinstance(obj, dict):
        out = []
        for k, v in obj.items():
            out += _text(v, f"{prefix}{k}.")
        return out
    if isinstance(obj, list) and obj and all(isinstance(v, (dict, list)) for v in obj):
        out = []
        for i, v in enumerate(obj):
            out += _text(v, f"{prefix}{i}.")
        return out
    val = dumps(obj, indent=0).replace("\n", "")
    return [f"{prefix[:-1]}: {val}"]


# -- helpers ------------------------------------------------------------------

def _read_json(path: str):
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    try:
        doc = json.loads(data.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ParseError(f"{path}: invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ParseError(f"{path}: expected a JSON object")
    return doc


def _load_surface(path: str, cfg):
    doc = _read_json(path)
    if cfg.tol_override is not None:
        doc["tol"] = cfg.tol_override
    return surface_from_dict(doc)


def _floats(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"expected comma-separated numbers, got {text!r}") from None


def _load_loop(args, surface) -> DualLoop:
    if args.loop:
        doc = _read_json(args.loop)
        try:
            return DualLoop.from_json(str(doc["base"]), doc["steps"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"{args.loop}: loop document does not match the schema: {exc}") from exc
    if args.path is None:
        raise UsageError("give --loop FILE or --path STEPS")
    steps = parse_path(args.path)
    base = args.base or (steps[0].from_triangle if steps else next(iter(surface.charts)))
    return DualLoop(base, steps)


def _vertices(s):
    return [{"id": v.id, "theta": cone_angle(s, v), "beta": singularity_order(s, v)}
            for v in s.vertex_classes]


def _invariants(s) -> dict:
    out = {"chi": euler_characteristic(s)}
    try:
        out["genus"] = genus(s)
    except ConesurfError:
        out["genus"] = None
    out.update({"area": total_area(s), "vertices": _vertices(s),
                "gauss_bonnet_residual": gauss_bonnet_residual(s)})
    return out


def _batch(directory: str, fn, cfg):
    files = sorted(p for p in Path(directory).glob("*.json")
                   if not p.name.endswith((".marking.json", ".loop.json")))

    def one(p):
        try:
            return p.name, fn(_load_surface(str(p), cfg)), True
        except ConesurfError as exc:
            return p.name, {"error": str(exc)}, False

    with ThreadPoolExecutor() as pool:
        results = list(pool.map(one, files))
    return {"files": {name: res for name, res, _ in results}}, all(ok for *_, ok in results)


# -- subcommands ----------------------------------------------------------------

def cmd_validate(args, cfg):
    summary = lambda s: {"valid": True, "charts": len(s.charts), "gluings": len(s.gluings),
                         "vertices": len(s.vertex_classes)}
    if args.batch:
        return _batch(args.batch, summary, cfg)
    if not args.surface:
        raise UsageError("validate needs a surface file or --batch DIR")
    s = _load_surface(args.surface, cfg)
    out = summary(s)
    if args.marking:
        if args.beta is None:
            raise UsageError("--marking needs --beta")
        m = marking_from_dict(_read_json(args.marking))
        report = validate_marking(s, m, _floats(args.beta))
        out["marking"] = report.to_dict()
        return out, report.passed
    return out, True


def cmd_invariants(args, cfg):
    if args.batch:
        return _batch(args.batch, _invariants, cfg)
    if not args.surface:
        raise UsageError("invariants needs a surface file or --batch DIR")
    return _invariants(_load_surface(args.surface, cfg)), True


def cmd_develop(args, cfg):
    s = _load_surface(args.surface, cfg)
    loop = _load_loop(args, s)
    chain = develop_path(s, IDENTITY, loop.steps, loop.base_triangle)
    if args.svg:
        Path(args.svg).write_text(chain.to_svg(s, cfg.svg_scale), encoding="utf-8")
    return chain.to_dict(s), True


def cmd_holonomy(args, cfg):
    s = _load_surface(args.surface, cfg)
    loop = _load_loop(args, s)
    if path_end(s, loop.base_triangle, loop.steps) != loop.base_triangle:
        raise ConesurfError("path does not return to its base triangle")
    h = holonomy_of_loop(s, loop)
    try:
        fp = se2_fixed_point(h, cfg.tol)
    except ConesurfError:
        fp = None
    return {"u": h.u, "v": h.v, "angle": h.angle, "fixed_point": fp}, True


def _beta_checked(s, m, beta, tol):
    measured = [singularity_order(s, p) for p in m.punctures]
    if len(beta) != len(measured):
        raise ConesurfError(f"{len(beta)} orders given for {len(measured)} punctures")
    bad = [j + 1 for j, (b, mb) in enumerate(zip(beta, measured)) if abs(b - mb) > tol]
    if bad:
        raise ConesurfError(f"orders at punctures {bad} disagree with the measured cone angles "
                            f"{[measured[j - 1] for j in bad]}")
    return BetaVector(tuple(beta))


def cmd_classify(args, cfg):
    s = _load_surface(args.surface, cfg)
    m = marking_from_dict(_read_json(args.marking))
    unknown = [p for p in m.punctures if p not in {v.id for v in s.vertex_classes}]
    if unknown:
        raise ConesurfError(f"unknown puncture vertices {unknown}")
    beta = _beta_checked(s, m, _floats(args.beta), s.tol)
    return classify_xi(s, m, beta).to_dict(), True


def cmd_subdivide(args, cfg):
    s = _load_surface(args.surface, cfg)
    tri, _, k = args.edge.rpartition(":")
    if not tri:
        raise UsageError("--edge expects triangle:index")
    try:
        edge = (tri, int(k))
    except ValueError:
        raise UsageError("--edge expects triangle:index") from None
    new, rec = hinge_subdivide(s, edge, args.t)
    out = {"surface": json.loads(serialize(new)), "new_vertex": rec.new_vertex, "marking": None}
    if args.remap:
        m = marking_from_dict(_read_json(args.remap))
        out["marking"] = json.loads(serialize_marking(remap_marking(rec, m)))
    return out, True


def cmd_build(args, cfg):
    params = {}
    if cfg.tol_override is not None:
        params["tol"] = cfg.tol_override
    if args.edge is not None:
        params["edge"] = args.edge
    if args.periods is not None:
        vals = _floats(args.periods)
        if len(vals) != 4:
            raise UsageError("--periods expects re,im,re,im")
        params["omega1"], params["omega2"] = complex(vals[0], vals[1]), complex(vals[2], vals[3])
    if args.polygon is not None:
        vals = _floats(args.polygon)
        if len(vals) % 2:
            raise UsageError("--polygon expects x0,y0,x1,y1,...")
        params["polygon"] = [complex(x, y) for x, y in zip(vals[::2], vals[1::2])]
    if args.k is not None:
        params["k"] = args.k
    kind = {"tetra": "tetrahedron", "torus": "flat_torus", "double-polygon": "double_polygon"}.get(args.kind, args.kind)
    model = build_model(ModelSpec(kind, params))
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    name = args.name or kind
    surf_path = out_dir / f"{name}.json"
    surf_path.write_text(serialize(model.surface), encoding="utf-8")
    out = {"surface": str(surf_path), "marking": None, "beta": None, "loops": {}}
    if model.marking is not None:
        mpath = out_dir / f"{name}.marking.json"
        mpath.write_text(serialize_marking(model.marking), encoding="utf-8")
        out["marking"] = str(mpath)
        out["beta"] = list(model.beta.values)
    for lname, loop in model.loops.items():
        lpath = out_dir / f"{name}.{lname}.loop.json"
        lpath.write_text(dumps({"base": loop.base_triangle, "steps": loop.to_json()}) + "\n", encoding="utf-8")
        out["loops"][lname] = str(lpath)
    return out, True


def cmd_dm_check(args, cfg):
    return {"satisfied": dm_condition(_floats(args.beta))}, True


def cmd_cohom(args, cfg):
    if args.generators < 1:
        raise UsageError("--generators must be at least 1")
    names = [f"x{i + 1}" for i in range(args.generators)]
    p = Presentation.parse(names, args.relators or "")
    try:
        rho = [complex(x.strip().replace(" ", "")) for x in args.rho.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"--rho expects comma-separated complex numbers, got {args.rho!r}") from None
    if len(rho) != p.rank:
        raise UsageError(f"--rho has {len(rho)} values for {p.rank} generators")
    if any(abs(abs(z) - 1) > cfg.tol for z in rho):
        raise ConesurfError("character values must have unit modulus")
    rho = [z / abs(z) for z in rho]
    z1 = z1_dimension(p, rho, cfg.tol)
    b1 = b1_dimension(rho, cfg.tol)
    return {"generators": p.rank, "relators": len(p.relators),
            "z1": z1, "b1": b1, "h1": h1_dimension(p, rho, cfg.tol)}, True


# -- parser -------------------------------------------------------------------

def _positive(x: str) -> float:
    try:
        v = float(x)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {x!r}") from None
    if not v > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=_positive, default=None,
                        help="relative tolerance (default 1e-9, or $CONESURF_TOL)")
    common.add_argument("--output", choices=("json", "text"), default="json")
    common.add_argument("--svg-scale", type=_positive, default=100.0)

    p = argparse.ArgumentParser(prog="conesurf", parents=[common],
                                description="Flat cone surfaces: development, holonomy, classification.")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("validate", parents=[common], help="parse and validate a surface file")
    sp.add_argument("surface", nargs="?")
    sp.add_argument("--marking")
    sp.add_argument("--beta")
    sp.add_argument("--batch", metavar="DIR")
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("invariants", parents=[common], help="Euler characteristic, area, cone angles")
    sp.add_argument("surface", nargs="?")
    sp.add_argument("--batch", metavar="DIR")
    sp.set_defaults(func=cmd_invariants)

    for name, func in (("develop", cmd_develop), ("holonomy", cmd_holonomy)):
        sp = sub.add_parser(name, parents=[common])
        sp.add_argument("surface")
        g = sp.add_mutually_exclusive_group(required=True)
        g.add_argument("--loop", help="loop file {base, steps}")
        g.add_argument("--path", help='steps like "t0:1,t1:0"')
        sp.add_argument("--base", help="base triangle for --path")
        if name == "develop":
            sp.add_argument("--svg", metavar="OUT")
        sp.set_defaults(func=func)

    sp = sub.add_parser("classify", parents=[common], help="classification point of a marked surface")
    sp.add_argument("surface")
    sp.add_argument("--marking", required=True)
    sp.add_argument("--beta", required=True)
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("subdivide", parents=[common], help="hinge subdivision")
    sp.add_argument("surface")
    sp.add_argument("--edge", required=True, help="triangle:index")
    sp.add_argument("--t", type=float, default=0.5)
    sp.add_argument("--remap", metavar="MARKING")
    sp.set_defaults(func=cmd_subdivide)

    sp = sub.add_parser("build", parents=[common], help="write a reference model")
    sp.add_argument("kind", choices=("tetrahedron", "tetra", "cube", "flat_torus", "torus",
                                     "double_polygon", "double-polygon", "pillowcase"))
    sp.add_argument("--edge", type=_positive)
    sp.add_argument("--periods")
    sp.add_argument("--polygon")
    sp.add_argument("--k", type=int, help="regular polygon size for double_polygon")
    sp.add_argument("--out-dir", default=".")
    sp.add_argument("--name")
    sp.set_defaults(func=cmd_build)

    sp = sub.add_parser("dm-check", parents=[common], help="Deligne-Mostow integrality condition")
    sp.add_argument("--beta", required=True)
    sp.set_defaults(func=cmd_dm_check)

    sp = sub.add_parser("cohom", parents=[common], help="dimensions of Z^1, B^1, H^1")
    sp.add_argument("--generators", type=int, required=True)
    sp.add_argument("--rho", required=True, help="comma-separated unit complex numbers, e.g. 1j,-1")
    sp.add_argument("--relators", help='words in x1..xs separated by ";", e.g. "x1 x2 x1^-1 x2^-1"')
    sp.set_defaults(func=cmd_cohom)
    return p


class _Config:
    def __init__(self, args):
        env = os.environ.get("CONESURF_TOL")
        self.tol_override = args.tol
        if self.tol_override is None and env:
            try:
                self.tol_override = _positive(env)
            except argparse.ArgumentTypeError as exc:
                raise UsageError(f"CONESURF_TOL: {exc}") from None
        self.tol = self.tol_override or DEFAULT_TOL
        self.output = args.output
        self.svg_scale = args.svg_scale


_LIST_FLAGS = ("--beta", "--rho", "--polygon", "--periods")


def _join_list_flags(argv: list[str]) -> list[str]:
    # "--beta -0.5,-0.5" would otherwise be read as two options
    out, i = [], 0
    while i < len(argv):
        tok = argv[i]
        if tok in _LIST_FLAGS and i + 1 < len(argv):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    argv = _join_list_flags(list(sys.argv[1:] if argv is None else argv))
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    old_tol = geom.get_tol()
    try:
        cfg = _Config(args)
        geom.set_tol(cfg.tol)
        result, ok = args.func(args, cfg)
    except UsageError as exc:
        parser.print_usage(stderr)
        print(f"conesurf: error: {exc}", file=stderr)
        return 2
    except ConesurfError as exc:
        print(f"conesurf: {type(exc).__name__}: {exc}", file=stderr)
        return 1
    finally:
        geom.set_tol(old_tol)
    if cfg.output == "text":
        stdout.write("\n".join(_text(result)) + "\n")
    else:
        stdout.write(dumps(result) + "\n")
    return 0 if ok else 1


def main():
    sys.exit(run())
