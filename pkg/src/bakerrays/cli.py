"""Command-line front end.

Subcommands: render, curves, ray, itinerary, land, periodic, inner, verify,
build-osc. Exit codes: 0 success, 2 domain errors, 3 non-convergence /
scan-exhausted reports, 64 usage errors.
"""

import argparse
import json
import math
import os
import sys

from . import inner as inner_mod
from . import landing as landing_mod
from . import rays as rays_mod
from . import render as render_mod
from . import verify as verify_mod
from .config import load_config
from .errors import DomainError, NoConvergenceError, ScanExhaustedError
from .kernels import BACKEND
from .symbolic import (
    ScheduleTail,
    SymbolSequence,
    build_oscillating_sequence,
    classify_sequence,
    format_sequence,
    itinerary,
    parse_sequence,
)

EXIT_OK = 0
EXIT_DOMAIN = 2
EXIT_REPORT = 3
EXIT_USAGE = 64


class UsageError(Exception):
    pass


class Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _complex_arg(text):
    try:
        return complex(text.replace(" ", ""))
    except ValueError as exc:
        raise UsageError(f"bad complex literal {text!r}") from exc


def _out_path(cfg, name):
    return os.path.join(cfg.output_dir, name)


def _emit(obj):
    sys.stdout.write(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def _seq_json(s):
    out = {"prefix": "".join(str(b) for b in s.prefix), "literal": format_sequence(s)}
    tail = s.tail
    if isinstance(tail, ScheduleTail):
        out["tail"] = {"kind": "schedule", "blocks": list(tail.blocks)}
    elif tail is None:
        out["tail"] = {"kind": "unspecified"}
    elif hasattr(tail, "word"):
        out["tail"] = {"kind": "periodic", "word": "".join(str(b) for b in tail.word)}
    else:
        out["tail"] = {"kind": "constant", "symbol": tail.symbol}
    return out


def build_parser():
    p = Parser(prog="baker-rays", description=__doc__)
    p.add_argument("--config", help="flat key=value config file")
    sub = p.add_subparsers(dest="command", required=True)

    q = sub.add_parser("render", help="classify a strip rectangle and write an image")
    q.add_argument("--bbox", help="re_min,re_max,im_min,im_max")
    q.add_argument("--size", help="WIDTHxHEIGHT")
    q.add_argument("--max-iter", type=int)
    q.add_argument("--workers", type=int)
    q.add_argument("--out", default="grid.png")

    q = sub.add_parser("curves", help="boundary-line pullback polylines as CSV")
    q.add_argument("--depth", type=int, default=3)
    q.add_argument("--t-lo", type=float, default=-8.0)
    q.add_argument("--t-hi", type=float, default=8.0)
    q.add_argument("--out", default="curves.csv")

    q = sub.add_parser("ray", help="trace a dynamic ray to CSV")
    q.add_argument("--seq", required=True, help='sequence literal, e.g. "0~" or "(01)*"')
    q.add_argument("--tmin", type=float, required=True)
    q.add_argument("--tmax", type=float, required=True)
    q.add_argument("--max-step", type=float, default=0.1)
    q.add_argument("--out", default="ray.csv")

    q = sub.add_parser("itinerary", help="strip or circle itinerary")
    q.add_argument("--point", help="strip point, e.g. -1.1+0.5j")
    q.add_argument("--circle", action="store_true", help="interpret the input as a circle angle")
    q.add_argument("--theta", type=float, help="circle angle in radians")
    q.add_argument("--depth", type=int, default=12)

    q = sub.add_parser("land", help="landing point of a bounded sequence (JSON)")
    q.add_argument("--seq", required=True)
    q.add_argument("--tol", type=float)

    q = sub.add_parser("periodic", help="periodic boundary point for a word (JSON)")
    q.add_argument("--word", help="0/1 word, e.g. 01")
    q.add_argument("--all-words", type=int, metavar="L", help="batch over all non-constant words of length 2..L")
    q.add_argument("--tol", type=float)

    q = sub.add_parser("inner", help="circle-map orbit or eventual preimages of 1")
    q.add_argument("--preimages", type=int, metavar="N", help="angles with g^n = 1, n <= N")
    q.add_argument("--orbit-theta", type=float, help="trace the circle orbit of this angle")
    q.add_argument("--depth", type=int, default=12)

    q = sub.add_parser("verify", help="run the invariant battery; nonzero exit on failure")
    q.add_argument("--seed", type=int, default=20260809)

    q = sub.add_parser("build-osc", help="greedy oscillating-sequence builder (JSON)")
    q.add_argument("--radii", required=True, help="comma-separated increasing moduli, e.g. 1,2,3")
    q.add_argument("--t-probe", type=float, default=8.0)
    return p


def _cmd_render(args, cfg):
    bbox = cfg.bbox()
    if args.bbox:
        parts = [float(v) for v in args.bbox.split(",")]
        if len(parts) != 4:
            raise UsageError("--bbox needs four comma-separated numbers")
        bbox = tuple(parts)
    width, height = cfg.width, cfg.height
    if args.size:
        try:
            w, h = args.size.lower().split("x")
            width, height = int(w), int(h)
        except ValueError as exc:
            raise UsageError("--size must look like 400x200") from exc
    max_iter = args.max_iter or cfg.max_iter
    workers = args.workers or cfg.workers
    grid = render_mod.classify_grid(bbox, width, height, max_iter, workers)
    out = _out_path(cfg, args.out)
    nbytes = render_mod.write_image(grid, out, cfg.palette())
    counts = {
        "enters": int((grid.tags == render_mod.TAG_ENTERS_V).sum()),
        "exits": int((grid.tags == render_mod.TAG_EXITS_S).sum()),
        "undecided": int((grid.tags == render_mod.TAG_UNDECIDED).sum()),
    }
    _emit({"image": out, "bytes": nbytes, "pixels": counts, "backend": BACKEND})
    return EXIT_OK


def _cmd_curves(args, cfg):
    curves = render_mod.preimage_curves(args.depth, args.t_lo, args.t_hi)
    out = _out_path(cfg, args.out)
    rows = render_mod.write_polylines_csv(curves, out)
    _emit({"csv": out, "curves": len(curves), "rows": rows})
    return EXIT_OK


def _cmd_ray(args, cfg):
    seq = parse_sequence(args.seq)
    pts = rays_mod.trace_ray(seq, args.tmin, args.tmax, args.max_step, cfg.tolerance)
    out = _out_path(cfg, args.out)
    lines = ["t,re,im,depth,err_radius"]
    for p in pts:
        lines.append(
            f"{p.t:.17g},{p.z.real:.17g},{p.z.imag:.17g},{p.depth},{p.err_radius:.17g}"
        )
    with open(out, "w", newline="") as fh:
        fh.write("\n".join(lines) + "\n")
    _emit({"csv": out, "samples": len(pts)})
    return EXIT_OK


def _cmd_itinerary(args, cfg):
    if args.circle:
        if args.theta is None:
            raise UsageError("--circle needs --theta")
        itin = inner_mod.circle_itinerary_full(args.theta, args.depth)
        _emit(
            {
                "theta": args.theta,
                "preimage_step": itin.preimage_step,
                "branches": [_seq_json(b) for b in itin.branches],
            }
        )
        return EXIT_OK
    if args.point is None:
        raise UsageError("need --point (or --circle with --theta)")
    z = _complex_arg(args.point)
    out = itinerary(z, args.depth)
    _emit(
        {
            "point": {"re": z.real, "im": z.imag},
            "kind": out.kind,
            "symbols": "".join(str(b) for b in out.symbols),
            "step": out.step,
        }
    )
    return EXIT_OK


def _land_json(seq, res):
    return {
        "sequence": format_sequence(seq),
        "z": {"re": res.z.real, "im": res.z.imag},
        "residual": res.residual,
        "depth_used": res.depth_used,
        "orbit_bound": res.orbit_bound,
    }


def _cmd_land(args, cfg):
    seq = parse_sequence(args.seq)
    res = landing_mod.landing_point(seq, args.tol or cfg.tolerance)
    _emit(_land_json(seq, res))
    return EXIT_OK


def _periodic_json(pp):
    return {
        "word": "".join(str(b) for b in pp.word),
        "period": pp.period,
        "z": {"re": pp.z.real, "im": pp.z.imag},
        "multiplier": {"re": pp.multiplier.real, "im": pp.multiplier.imag},
        "multiplier_modulus": abs(pp.multiplier),
        "residual": pp.residual,
    }


def _cmd_periodic(args, cfg):
    tol = args.tol or 1e-10
    if args.all_words:
        out = []
        for length in range(2, args.all_words + 1):
            for code in range(2 ** length):
                word = tuple((code >> (length - 1 - k)) & 1 for k in range(length))
                if len(set(word)) == 1:
                    continue
                out.append(_periodic_json(landing_mod.periodic_point(word, tol)))
        out.sort(key=lambda d: d["word"])
        _emit({"count": len(out), "points": out})
        return EXIT_OK
    if not args.word:
        raise UsageError("need --word or --all-words")
    word = tuple(int(c) for c in args.word)
    _emit(_periodic_json(landing_mod.periodic_point(word, tol)))
    return EXIT_OK


def _cmd_inner(args, cfg):
    if args.preimages is not None:
        angles = inner_mod.eventual_preimages_of_one(args.preimages)
        _emit({"depth": args.preimages, "count": len(angles), "angles": angles})
        return EXIT_OK
    if args.orbit_theta is None:
        raise UsageError("need --preimages or --orbit-theta")
    theta = inner_mod.normalize_angle(args.orbit_theta)
    w = complex(math.cos(theta), math.sin(theta))
    orbit = []
    for _ in range(args.depth):
        orbit.append({"re": w.real, "im": w.imag})
        w = inner_mod.g_eval(w)
    _emit({"theta": theta, "orbit": orbit})
    return EXIT_OK


def _cmd_verify(args, cfg):
    checks = verify_mod.run_all(args.seed)
    failed = 0
    for name, ok, detail in checks:
        status = "PASS" if ok else "FAIL"
        sys.stdout.write(f"{status}  {name}: {detail}\n")
        failed += 0 if ok else 1
    sys.stdout.write(f"{len(checks) - failed}/{len(checks)} checks passed (backend: {BACKEND})\n")
    return EXIT_OK if failed == 0 else 1


def _cmd_build_osc(args, cfg):
    radii = [float(v) for v in args.radii.split(",") if v.strip()]
    seq = build_oscillating_sequence(radii, args.t_probe)
    kind = classify_sequence(seq)[0] if seq.tail is not None else "Unspecified"
    _emit({"radii": radii, "sequence": _seq_json(seq), "class": kind})
    return EXIT_OK


_COMMANDS = {
    "render": _cmd_render,
    "curves": _cmd_curves,
    "ray": _cmd_ray,
    "itinerary": _cmd_itinerary,
    "land": _cmd_land,
    "periodic": _cmd_periodic,
    "inner": _cmd_inner,
    "verify": _cmd_verify,
    "build-osc": _cmd_build_osc,
}


def cli_dispatch(argv):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        cfg = load_config(args.config)
        return _COMMANDS[args.command](args, cfg)
    except UsageError as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return EXIT_USAGE
    except (ScanExhaustedError, NoConvergenceError) as exc:
        sys.stderr.write(f"report: {exc}\n")
        return EXIT_REPORT
    except (DomainError, ValueError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_DOMAIN


def main():
    sys.exit(cli_dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
