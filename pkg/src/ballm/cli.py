"""Command-line interface: ``measure``, ``verify``, ``open-question`` and ``custom``.

Exit codes: 0 success, 1 verification failure, 2 domain error, 3 I/O or
malformed input.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass, field

from . import exact
from .geometry import BallmError, BallSet, DomainError, Measures, Sphere, canonical_ballsets
from .numerics.montecarlo import McConfig, mc_mean_width, mc_surface_area, mc_volume
from .numerics.support import EmptyIntersectionError, check_nonempty
from .skeleton import ballset_measures, build_skeleton
from .verify import run_verify, worst

__all__ = ["Report", "main", "build_parser", "report_for_solid", "EXIT_OK", "EXIT_VERIFY", "EXIT_DOMAIN", "EXIT_IO"]

EXIT_OK, EXIT_VERIFY, EXIT_DOMAIN, EXIT_IO = 0, 1, 2, 3
DEFAULT_SEED = 42
DEFAULT_SAMPLES = 10_000_000

SOLIDS = (
    "dihedron", "lens", "trihedron", "tetrahedron", "meissner", "capped-cylinder",
    "segment", "cap-body", "hexahedron", "dodecahedron", "custom",
)
LAMBDA_LABEL = "adjacent vertex-to-vertex distance"
_FIELDS = ("volume", "surface_area", "mean_width")


class InputError(BallmError):
    """Unreadable or malformed input file."""


@dataclass
class Report:
    measures: Measures
    methods: dict
    std_errors: dict = field(default_factory=dict)
    lam: float | None = None
    empty: bool = False
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = {f: getattr(self.measures, f) for f in _FIELDS}
        out["methods"] = dict(self.methods)
        if self.std_errors:
            out["std_errors"] = dict(self.std_errors)
        if self.lam is not None:
            out["lambda"] = self.lam
            out["vl_over_lambda3"] = self.measures.volume / self.lam**3
        if self.empty:
            out["empty"] = True
        out.update(self.extra)
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    def to_table(self) -> str:
        rows = [("quantity", "value", "method", "std_error")]
        for f in _FIELDS:
            se = self.std_errors.get(f)
            rows.append((f, repr(getattr(self.measures, f)), self.methods[f], "" if se is None else f"{se:.3g}"))
        if self.lam is not None:
            rows.append((f"lambda ({LAMBDA_LABEL})", repr(self.lam), self.methods.get("lambda", "skeleton"), ""))
            rows.append(("VL/lambda^3", repr(self.measures.volume / self.lam**3), self.methods["volume"], ""))
        widths = [max(len(r[i]) for r in rows) for i in range(4)]
        lines = ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in rows]
        if self.empty:
            lines.append("empty intersection")
        for key, val in self.extra.items():
            lines.append(f"{key}: {json.dumps(val)}")
        return "\n".join(lines) + "\n"


def _tags(tag: str) -> dict:
    return {f: tag for f in _FIELDS}


def _param(args, name: str, required: bool):
    val = getattr(args, name, None)
    if required and val is None:
        raise DomainError(f"--solid {args.solid} needs --{name}")
    return val


def _lens_phi(args) -> float:
    if args.phi is not None and args.delta is not None:
        raise DomainError("give either --phi or --delta for a lens, not both")
    if args.phi is not None:
        return exact.AngularRadius(args.phi).phi
    if args.delta is not None:
        return exact.AngularRadius.from_delta(args.delta).phi
    raise DomainError("--solid lens needs --phi or --delta")


_ALLOWED = {
    "lens": {"phi", "delta"},
    "segment": {"phi"},
    "cap-body": {"phi"},
    "capped-cylinder": {"ell"},
}


def _check_flags(args):
    allowed = _ALLOWED.get(args.solid, set())
    for name in ("phi", "delta", "ell"):
        if getattr(args, name, None) is not None and name not in allowed:
            raise DomainError(f"--{name} does not apply to --solid {args.solid}")


def _skeleton_report(B: BallSet) -> Report:
    body = ballset_measures(B)
    if body.empty:
        return Report(body.measures, _tags("skeleton"), empty=True)
    methods = {"volume": body.volume_method, "surface_area": "skeleton", "mean_width": "skeleton"}
    return Report(body.measures, methods, lam=body.lam)


def report_for_solid(args) -> Report:
    """Measures of a named solid by the best available method."""
    _check_flags(args)
    solid = args.solid
    closed = {
        "dihedron": exact.dihedron_measures,
        "trihedron": exact.trihedron_measures,
        "tetrahedron": exact.reuleaux_tetrahedron_measures,
        "meissner": exact.meissner_measures,
    }
    if solid in closed:
        rep = Report(closed[solid](), _tags("closed-form"))
        if solid in ("trihedron", "tetrahedron"):
            rep.lam = build_skeleton(canonical_ballsets(solid)).lam
        return rep
    if solid == "lens":
        return Report(exact.lens_measures(_lens_phi(args)), _tags("closed-form"))
    if solid == "segment":
        return Report(exact.symmetric_segment_measures(_param(args, "phi", True)), _tags("closed-form"))
    if solid == "cap-body":
        return Report(exact.cap_body_measures(_param(args, "phi", True)), _tags("closed-form"))
    if solid == "capped-cylinder":
        return Report(exact.capped_cylinder_measures(_param(args, "ell", True)), _tags("closed-form"))
    if solid in ("hexahedron", "dodecahedron"):
        return _skeleton_report(canonical_ballsets(solid))
    raise DomainError(f"unknown solid {solid!r}")


def _emit(rep: Report, fmt: str):
    sys.stdout.write(rep.to_json() if fmt == "json" else rep.to_table())


def _resolve_seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("BALLM_SEED")
    if env is None or env == "":
        return DEFAULT_SEED
    try:
        return int(env)
    except ValueError:
        raise DomainError(f"BALLM_SEED must be an integer, got {env!r}") from None


def _mc_config(args) -> McConfig:
    n = args.samples
    return McConfig(n, _resolve_seed(args), min(16, n))


def load_ballset(path: str) -> BallSet:
    """Read a JSON array of {"center": [x, y, z], "radius": r} objects."""
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise InputError(f"malformed JSON in {path}: {exc}") from exc
    if not isinstance(data, list) or not data:
        raise InputError(f"{path}: expected a non-empty JSON array of spheres")
    spheres = []
    for k, item in enumerate(data):
        if not isinstance(item, dict) or set(item) != {"center", "radius"}:
            raise InputError(f"{path}: entry {k} must have exactly the keys 'center' and 'radius'")
        c, r = item["center"], item["radius"]
        if (
            not isinstance(c, list)
            or len(c) != 3
            or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in c + [r])
        ):
            raise InputError(f"{path}: entry {k} needs a 3-number centre and a numeric radius")
        spheres.append(Sphere(tuple(c), r))
    return BallSet(tuple(spheres))


def custom_report(B: BallSet, cfg: McConfig) -> Report:
    """Skeleton measures with a Monte Carlo cross-check, or Monte Carlo alone for unequal radii."""
    try:
        check_nonempty(B)
    except EmptyIntersectionError:
        return Report(Measures(0.0, 0.0, 0.0), _tags("skeleton"), empty=True)
    if B.equal_radii:
        rep = _skeleton_report(B)
        if rep.empty:
            return rep
        est = mc_volume(B, cfg)
        rep.extra["cross_check"] = {
            "volume_monte_carlo": est.value,
            "volume_monte_carlo_std_error": est.std_error,
            "volume_delta": est.value - rep.measures.volume,
        }
        return rep
    v, a = mc_volume(B, cfg), mc_surface_area(B, cfg)
    w = mc_mean_width(B, min(cfg.n_samples, 100_000), cfg.seed)
    if v.value == 0.0:
        return Report(Measures(0.0, 0.0, 0.0), _tags("monte-carlo"), empty=True)
    return Report(
        Measures(v.value, a.value, w.value),
        _tags("monte-carlo"),
        std_errors={"volume": v.std_error, "surface_area": a.std_error, "mean_width": w.std_error},
    )


def open_question_report(solid: str, cfg: McConfig) -> Report:
    """Deterministic and Monte Carlo measures of a spherical polyhedron with cross-method deltas."""
    if solid not in ("hexahedron", "dodecahedron"):
        raise DomainError(f"open-question covers hexahedron and dodecahedron, got {solid!r}")
    B = canonical_ballsets(solid)
    body = ballset_measures(B)
    m = body.measures
    v, a = mc_volume(B, cfg), mc_surface_area(B, cfg)
    w = mc_mean_width(B, min(cfg.n_samples, 100_000), cfg.seed)
    angles = sorted({round(e.exterior_angle, 12) for e in body.skeleton.edges})
    extra = {
        "monte_carlo": {"volume": v.value, "surface_area": a.value, "mean_width": w.value},
        "monte_carlo_std_errors": {"volume": v.std_error, "surface_area": a.std_error, "mean_width": w.std_error},
        "deltas": {
            "volume": v.value - m.volume,
            "surface_area": a.value - m.surface_area,
            "mean_width": w.value - m.mean_width,
        },
        "edges": len(body.skeleton.edges),
        "vertices": len(body.skeleton.vertices),
        "exterior_angles": angles,
        "status": "gating" if solid == "hexahedron" else "informational only",
    }
    methods = {"volume": "quadrature", "surface_area": "skeleton", "mean_width": "skeleton"}
    return Report(m, methods, lam=body.lam, extra=extra)


def cmd_measure(args) -> int:
    if args.solid == "custom":
        if args.input is None:
            raise DomainError("--solid custom needs --input")
        return cmd_custom(args)
    if args.input is not None:
        raise DomainError("--input only applies to --solid custom")
    _emit(report_for_solid(args), args.format)
    return EXIT_OK


def cmd_custom(args) -> int:
    if args.input is None:
        raise DomainError("custom needs --input")
    B = load_ballset(args.input)
    _emit(custom_report(B, _mc_config(args)), args.format)
    return EXIT_OK


def cmd_open_question(args) -> int:
    _emit(open_question_report(args.solid, _mc_config(args)), args.format)
    return EXIT_OK


def cmd_verify(args) -> int:
    if not args.tolerance > 0:
        raise DomainError("--tolerance must be positive")
    checks = run_verify(args.tolerance, args.samples, _resolve_seed(args))
    failed = [c for c in checks if not c.passed]
    if args.format == "json":
        payload = {
            "passed": not failed,
            "checks": [
                {"name": c.name, "method": c.method, "value": c.value, "reference": c.reference,
                 "tolerance": c.tolerance, "passed": c.passed}
                for c in checks
            ],
        }
        if failed:
            payload["worst"] = worst(checks).name
        sys.stdout.write(json.dumps(payload, indent=2) + "\n")
    else:
        for c in checks:
            status = "PASS" if c.passed else "FAIL"
            sys.stdout.write(f"{status}  {c.name}  [{c.method}]  error={c.error:.3g}  tol={c.tolerance:.3g}\n")
        sys.stdout.write(
            "note: mean width of capped cylinder and cap body is checked by support-function "
            "Monte Carlo and meridian quadrature across the whole grid\n"
        )
        sys.stdout.write(f"{len(checks) - len(failed)}/{len(checks)} checks passed\n")
        if failed:
            w = worst(checks)
            sys.stdout.write(
                f"worst: {w.name}: value {w.value!r} vs reference {w.reference!r} "
                f"(error {w.error:.3g}, tolerance {w.tolerance:.3g})\n"
            )
    return EXIT_VERIFY if failed else EXIT_OK


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v <= 0:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {v}")
    return v


def _seed(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer seed, got {text!r}") from None
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in 64 unsigned bits")
    return v


def _finite(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}") from None
    if not math.isfinite(v):
        raise argparse.ArgumentTypeError(f"expected a finite number, got {text!r}")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ballm", description="Measures of intersections of balls and related solids.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, *, solid_choices=None, params=False, mc=False, tolerance=False):
        if solid_choices is not None:
            sp.add_argument("--solid", choices=solid_choices, required=True)
        if params:
            sp.add_argument("--phi", type=_finite, help="cap angular radius in radians")
            sp.add_argument("--delta", type=_finite, help="centre distance (lens only)")
            sp.add_argument("--ell", type=_finite, help="cylinder length")
        sp.add_argument("--input", help="JSON sphere list for custom solids")
        sp.add_argument("--format", choices=("table", "json"), default="table")
        if mc:
            sp.add_argument("--samples", type=_positive_int, default=DEFAULT_SAMPLES)
            sp.add_argument("--seed", type=_seed, default=None, help="default: $BALLM_SEED or 42")
        if tolerance:
            sp.add_argument("--tolerance", type=_finite, default=1e-6)

    sp = sub.add_parser("measure", help="measures of a named solid")
    common(sp, solid_choices=SOLIDS, params=True, mc=True)
    sp.set_defaults(func=cmd_measure)

    sp = sub.add_parser("verify", help="cross-check closed forms against numerical oracles")
    common(sp, mc=True, tolerance=True)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("open-question", help="numerical measures of the spherical hexahedron or dodecahedron")
    common(sp, solid_choices=("hexahedron", "dodecahedron"), mc=True)
    sp.set_defaults(func=cmd_open_question)

    sp = sub.add_parser("custom", help="measures of an intersection of balls read from JSON")
    common(sp, mc=True)
    sp.set_defaults(func=cmd_custom)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
