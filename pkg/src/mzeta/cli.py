"""Command-line front end.

Subcommands: ``eval``, ``check``, ``singularities`` and ``characters``.
Output is JSON on stdout (``--format csv`` is available for ``check``).

Exit codes: 0 success, 1 usage or domain error, 2 singular point,
3 budget/depth/quadrature limit exceeded, 4 a ``check`` suite ran but failed.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys

from .continuation import ContinuationConfig, eval_auto
from .dirichlet import characters_mod, parse_character_spec
from .errors import (BudgetExceeded, DepthExceeded, DomainError, MZetaError, PoleError,
                     QuadratureDiverged, SingularPoint)
from .series import (DIRECT_MARGIN, EvalResult, Shape, TruncationConfig, ez_region_contains,
                     zeta_av_direct, zeta_ez_direct)
from .singularity import PrincipalPattern, hyperplanes_l, hyperplanes_zeta
from .special import riemann_zeta
from .suites import SUITES, run_suite

EXIT_OK, EXIT_USAGE, EXIT_SINGULAR, EXIT_LIMIT, EXIT_CHECK_FAILED = 0, 1, 2, 3, 4

_CONT_KEYS = {"N": int, "epsilon": float, "c_abscissa": float, "quad_T": float,
              "quad_h": float, "max_depth": int, "quad_tol": float, "inner_h": float,
              "max_refine": int, "contour_margin": float, "singular_tol": float,
              "circle_radius": float, "circle_points": int}
_TRUNC_KEYS = {"M": int, "target_tol": float, "work_cap": float, "max_M": int}
_CLI_KEYS = {"threads": int, "bound": int, "seed": int, "n_points": int}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# ---------------------------------------------------------------------------
# input parsing


def parse_complex_list(text):
    """``"re,im;re,im;..."`` (a bare ``re`` is allowed) into complex numbers."""
    out = []
    for item in text.split(";"):
        item = item.strip()
        if not item:
            continue
        parts = item.split(",")
        if len(parts) > 2:
            raise UsageError(f"bad complex number {item!r}; expected 're,im'")
        try:
            out.append(complex(float(parts[0]), float(parts[1]) if len(parts) == 2 else 0.0))
        except ValueError as exc:
            raise UsageError(f"bad complex number {item!r}") from exc
    if not out:
        raise UsageError("--s lists no arguments")
    return out


def read_config(path):
    """key = value lines; '#' comments and [section] headers are ignored."""
    known = {**_CONT_KEYS, **_TRUNC_KEYS, **_CLI_KEYS}
    out = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from exc
    for n, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line or (line.startswith("[") and line.endswith("]")):
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{n}: expected key = value")
        key, val = (x.strip() for x in line.split("=", 1))
        key = key.rsplit(".", 1)[-1]
        if key not in known:
            raise UsageError(f"{path}:{n}: unknown key {key!r}")
        val = val.strip("\"'")
        try:
            out[key] = known[key](float(val)) if known[key] is int else known[key](val)
        except ValueError as exc:
            raise UsageError(f"{path}:{n}: bad value for {key}: {val!r}") from exc
    return out


def build_configs(args):
    """Merge config file and flags (flags win) into a ContinuationConfig."""
    settings = read_config(args.config) if getattr(args, "config", None) else {}
    flag_map = {"M": getattr(args, "M", None), "N": getattr(args, "depth", None)}
    tol = getattr(args, "tol", None)
    if tol is not None:
        flag_map["target_tol"] = tol
        flag_map["quad_tol"] = tol
    for key, val in flag_map.items():
        if val is not None:
            settings[key] = val
    for key in ("seed", "n_points", "bound"):
        if getattr(args, key, None) is None and key in settings:
            setattr(args, key, settings[key])
    if "threads" in settings and "MZETA_THREADS" not in os.environ:
        os.environ["MZETA_THREADS"] = str(settings["threads"])
    trunc_kw = {k: settings[k] for k in _TRUNC_KEYS if k in settings}
    trunc = TruncationConfig(**{**ContinuationConfig().trunc.__dict__, **trunc_kw})
    cont_kw = {k: settings[k] for k in _CONT_KEYS if k in settings}
    return ContinuationConfig(trunc=trunc, **cont_kw), settings


def _shape(args, need_j=True):
    if args.r is None:
        raise UsageError("--r is required")
    j = args.j if need_j else args.r
    if j is None:
        raise UsageError("--j is required")
    return Shape(j, args.r)


def _chars(args, required=False):
    if args.chars is None:
        if required:
            raise UsageError("--chars is required")
        return None
    return parse_character_spec(args.chars)


# ---------------------------------------------------------------------------
# subcommands


def cmd_eval(args):
    cfg, settings = build_configs(args)
    s = parse_complex_list(args.s)
    N = settings.get("N")
    kind = args.kind
    if kind == "ez":
        r = args.r if args.r is not None else len(s)
        if len(s) != r:
            raise UsageError(f"ez of depth {r} takes {r} arguments, got {len(s)}")
        if r == 1:
            try:
                v = complex(riemann_zeta(s[0]))
            except PoleError as exc:
                raise SingularPoint(str(exc), ()) from exc
            res = EvalResult(v, 1e-15 * (1 + abs(v)), "exact-identity", 0, [])
        elif ez_region_contains(s, DIRECT_MARGIN):
            res = zeta_ez_direct(s, cfg.trunc)
        else:
            res = eval_auto("zeta", Shape(1, r), [s[0], 0j] + s[1:], None, cfg, N)
    elif kind == "av":
        if args.r is not None and len(s) != args.r + 1:
            raise UsageError(f"av of depth {args.r} takes {args.r + 1} arguments")
        res = zeta_av_direct(s, cfg.trunc)
    elif kind == "mt":
        r = args.r if args.r is not None else len(s) - 1
        res = eval_auto("zeta", Shape(r, r), s, None, cfg, N)
    elif kind == "mt-hat":
        res = eval_auto("zeta", _shape(args), s, None, cfg, N)
    else:
        res = eval_auto("L", _shape(args), s, _chars(args, True), cfg, N)
    return res.to_json(), EXIT_OK


def cmd_check(args):
    cfg, _ = build_configs(args)
    shape = _shape(args)
    rep = run_suite(args.suite, shape, args.seed or 0, args.n_points, cfg, _chars(args))
    return rep, EXIT_OK if rep["pass"] else EXIT_CHECK_FAILED


def cmd_singularities(args):
    _, _ = build_configs(args)
    shape = _shape(args)
    bound = 3 if args.bound is None else args.bound
    if bound < 0:
        raise UsageError("--bound must be >= 0")
    if args.kind == "zeta":
        planes = hyperplanes_zeta(shape, bound)
    else:
        chis = _chars(args, True)
        if len(chis) != shape.r:
            raise UsageError(f"--chars must list {shape.r} characters")
        planes = hyperplanes_l(shape, PrincipalPattern.of(chis), bound)
    return {"kind": args.kind, "shape": [shape.j, shape.r], "bound": bound,
            "hyperplanes": [p.to_json() for p in planes]}, EXIT_OK


def cmd_characters(args):
    table = characters_mod(args.q)
    return {"q": args.q, "characters": [
        {"index": c.index, "principal": bool(c.principal),
         "values": [[float(v.real), float(v.imag)] for v in c.values]} for c in table]}, EXIT_OK


def build_parser():
    p = _Parser(prog="mzeta", description="Generalized multiple zeta and L-function evaluator.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    def common(sp, format_choices=("json",)):
        sp.add_argument("--config", help="key = value file; flags override it")
        sp.add_argument("--format", choices=format_choices, default="json")

    e = sub.add_parser("eval", help="evaluate a function value")
    e.add_argument("--kind", required=True, choices=["ez", "mt", "av", "mt-hat", "l-mt-hat"])
    e.add_argument("--j", type=int)
    e.add_argument("--r", type=int)
    e.add_argument("--s", required=True, help='arguments "re,im;re,im;..."')
    e.add_argument("--chars", help='characters "q:i1,i2,..."')
    e.add_argument("--depth", type=int, help="shift depth N of the outer contour")
    e.add_argument("--tol", type=float)
    e.add_argument("--M", type=int, help="cap on the largest partial sum")
    common(e)

    c = sub.add_parser("check", help="run a consistency suite")
    c.add_argument("--suite", required=True, choices=list(SUITES))
    c.add_argument("--j", type=int, required=True)
    c.add_argument("--r", type=int, required=True)
    c.add_argument("--seed", type=int)
    c.add_argument("--n-points", dest="n_points", type=int)
    c.add_argument("--chars")
    c.add_argument("--tol", type=float)
    c.add_argument("--M", type=int)
    common(c, ("json", "csv"))

    s = sub.add_parser("singularities", help="list candidate singular hyperplanes")
    s.add_argument("--kind", required=True, choices=["zeta", "l"])
    s.add_argument("--j", type=int, required=True)
    s.add_argument("--r", type=int, required=True)
    s.add_argument("--chars")
    s.add_argument("--bound", type=int)
    common(s)

    ch = sub.add_parser("characters", help="canonical character table mod q")
    ch.add_argument("--q", type=int, required=True)
    common(ch)
    return p


def _csv(rep):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["suite", "index", "delta", "pass"])
    for i, row in enumerate(rep["points"]):
        w.writerow([rep["suite"], i, repr(float(row["delta"])), row.get("pass", True)])
    w.writerow([rep["suite"], "verdict", repr(float(rep["max_delta"])), rep["pass"]])
    return buf.getvalue()


def _error(exc, code):
    out = {"error": type(exc).__name__, "message": str(exc)}
    if isinstance(exc, SingularPoint):
        out["hyperplanes"] = [p.to_json() for p in getattr(exc, "planes", ())]
    return out, code


def run(argv=None):
    """Parse and dispatch; returns (payload, exit_code)."""
    handlers = {"eval": cmd_eval, "check": cmd_check, "singularities": cmd_singularities,
                "characters": cmd_characters}
    try:
        args = build_parser().parse_args(argv)
        if args.command is None:
            raise UsageError("a subcommand is required: " + ", ".join(handlers))
        payload, code = handlers[args.command](args)
        if getattr(args, "format", "json") == "csv":
            return _csv(payload), code
        return payload, code
    except UsageError as exc:
        return {"error": "UsageError", "message": str(exc)}, EXIT_USAGE
    except (SingularPoint, PoleError) as exc:
        return _error(exc, EXIT_SINGULAR)
    except (BudgetExceeded, DepthExceeded, QuadratureDiverged) as exc:
        return _error(exc, EXIT_LIMIT)
    except (MZetaError, DomainError) as exc:
        return _error(exc, EXIT_USAGE)


def main(argv=None):
    payload, code = run(argv)
    if isinstance(payload, str):
        sys.stdout.write(payload)
    else:
        print(json.dumps(payload, indent=2))
        if "error" in payload:
            print(f"mzeta: {payload['error']}: {payload['message']}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
