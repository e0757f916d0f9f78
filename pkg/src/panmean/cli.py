"""Command-line front end.

Subcommands:
    verify-coefficients   coefficient defect ratios against their exact limits
    classify              equation-family classification of a catalogued field
    convergence           defect-vs-radius study with extrapolation and order
    wos-solve             walk-on-spheres solve of the modified Helmholtz
                          Dirichlet problem
    verify-identities     mixed-defect, shared-ratio and self-referential
                          identity checks over the catalogue

Every flag may also be supplied through ``--config FILE`` (lines of
``key = value``; command line wins).  ``--output`` paths that are relative
are placed under $PANMEAN_OUTPUT_DIR when that variable is set.

Exit codes: 0 success, 1 usage or precondition failure, 2 tolerance
violation, 3 indeterminate classification.
"""

import argparse
import csv
import io
import json
import math
import os
import sys

import numpy as np

from . import asymptotics, fields, geometry, specialfn, wos
from .equations import BALL, HARMONIC, METAHARMONIC, PANHARMONIC, SPHERE

_KIND_ALIASES = {
    "pan": PANHARMONIC, "panharmonic": PANHARMONIC,
    "meta": METAHARMONIC, "metaharmonic": METAHARMONIC,
    "har": HARMONIC, "harmonic": HARMONIC,
}

_FORMATS = ("csv", "json", "table")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _parse_floats(text: str) -> list:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise UsageError(f"cannot parse float list {text!r}") from exc


def _parse_radii(text: str) -> list:
    """Comma list '0.2,0.1,0.05' or geometric schedule 'start:ratio:count'."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise UsageError("geometric schedule must be start:ratio:count")
        start, ratio = float(parts[0]), float(parts[1])
        count = int(parts[2])
        if start <= 0 or not 0 < ratio < 1 or count < 1:
            raise UsageError("need start > 0, 0 < ratio < 1, count >= 1")
        return [start * ratio**k for k in range(count)]
    return _parse_floats(text)


def _parse_dimensions(text: str) -> list:
    out = []
    for chunk in text.split(","):
        chunk = chunk.strip()
        if ".." in chunk:
            lo, hi = chunk.split("..")
            out.extend(range(int(lo), int(hi) + 1))
        elif chunk:
            out.append(int(chunk))
    if not out:
        raise UsageError("empty dimension list")
    return out


def _parse_kind(text: str) -> str:
    try:
        return _KIND_ALIASES[text.strip().lower()]
    except KeyError:
        raise UsageError(f"unknown kind {text!r}; use pan, meta or har") from None


def _load_config(path: str) -> dict:
    values = {}
    try:
        with open(path) as fh:
            for line in fh:
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                if "=" not in line:
                    raise UsageError(f"bad config line {line!r}")
                key, _, value = line.partition("=")
                values[key.strip().replace("-", "_")] = value.strip()
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc}") from exc
    return values


# Per-command option tables: (name, default).  All values travel as strings
# until resolved, so the config file and the flag set share one schema.
_COMMON = [("format", "table"), ("output", ""), ("config", "")]

_SPEC = {
    "verify-coefficients": _COMMON + [
        ("m", "2..6"), ("kind", "pan"), ("geometry", "ball,sphere"),
        ("t", "1e-1,1e-2,1e-3"), ("tol", "1e-6"), ("extrapolation_tol", "1e-10"),
    ],
    "classify": _COMMON + [
        ("field", ""), ("m", "2"), ("point", "0,0"), ("mu", "1.0"), ("lam", "1.0"),
        ("radii", "0.2:0.5:4"), ("tol", "1e-6"),
    ],
    "convergence": _COMMON + [
        ("field", ""), ("m", "2"), ("point", "0,0"), ("geometry", "ball"),
        ("mu", "1.0"), ("lam", "1.0"), ("radii", "0.2:0.5:4"), ("min_order", "1.9"),
    ],
    "wos-solve": _COMMON + [
        ("domain", "ball"), ("m", "3"), ("center", ""), ("radius", "1.0"),
        ("lo", ""), ("hi", ""), ("outer", "1.0"), ("inner", "0.5"),
        ("boundary_field", "const_one"), ("mu", "0.0"), ("lam", "1.0"),
        ("point", ""), ("walks", "10000"), ("seed", "0"),
        ("epsilon_shell", ""), ("max_steps", "10000"), ("radius_fraction", "1.0"),
    ],
    "verify-identities": _COMMON + [
        ("m", "2"), ("mu", "1.0"), ("lam", "1.0"), ("radii", "0.2:0.5:4"),
        ("identity_tol", "1e-8"), ("laplacian_rtol", "1e-5"),
    ],
}


def _build_parser() -> _Parser:
    parser = _Parser(prog="panmean", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)
    for command, options in _SPEC.items():
        p = sub.add_parser(command)
        for name, _default in options:
            p.add_argument(f"--{name.replace('_', '-')}", dest=name, default=None)
    return parser


def _resolve(args) -> dict:
    """Merge builtin defaults, config file, and explicit flags (flags win)."""
    table = dict(_SPEC[args.command])
    from_file = _load_config(args.config) if args.config else {}
    resolved = {}
    for name, default in table.items():
        given = getattr(args, name)
        if given is not None:
            resolved[name] = given
        elif name in from_file:
            resolved[name] = from_file[name]
        else:
            resolved[name] = default
    unknown = set(from_file) - set(table)
    if unknown:
        raise UsageError(f"config keys not valid for {args.command}: {sorted(unknown)}")
    if resolved["format"] not in _FORMATS:
        raise UsageError(f"format must be one of {_FORMATS}")
    return resolved


def _fmt(value) -> str:
    if isinstance(value, (np.floating, np.integer, np.bool_)):
        value = value.item()
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _public_config(cfg: dict) -> dict:
    """Resolved run parameters, without the config-file path itself."""
    return {k: v for k, v in cfg.items() if k != "config"}


def _render_rows(header, rows, fmt) -> str:
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])
        return buf.getvalue()
    if fmt == "json":
        return json.dumps(
            [dict(zip(header, row)) for row in rows], indent=2, default=_fmt
        ) + "\n"
    widths = [
        max(len(str(h)), *(len(_fmt(r[i])) for r in rows)) if rows else len(str(h))
        for i, h in enumerate(header)
    ]
    lines = ["  ".join(str(h).ljust(w) for h, w in zip(header, widths))]
    for row in rows:
        lines.append("  ".join(_fmt(v).ljust(w) for v, w in zip(row, widths)))
    return "\n".join(lines) + "\n"


def _emit(text: str, cfg: dict) -> None:
    out = cfg.get("output", "")
    if not out:
        sys.stdout.write(text)
        return
    base = os.environ.get("PANMEAN_OUTPUT_DIR", "")
    if base and not os.path.isabs(out):
        out = os.path.join(base, out)
    with open(out, "w") as fh:
        fh.write(text)


def _neville_to_zero(xs, ys) -> float:
    xs = [float(x) for x in xs]
    vals = [float(y) for y in ys]
    for j in range(1, len(vals)):
        for k in range(len(vals) - 1, j - 1, -1):
            vals[k] = (xs[k] * vals[k - 1] - vals[k] * xs[k - j]) / (xs[k] - xs[k - j])
    return vals[-1]


def _cmd_verify_coefficients(cfg: dict) -> int:
    kind = _parse_kind(cfg["kind"])
    dims = _parse_dimensions(cfg["m"])
    geometries = [g.strip() for g in cfg["geometry"].split(",") if g.strip()]
    ts = sorted(_parse_floats(cfg["t"]), reverse=True)
    tol = float(cfg["tol"])
    extra_tol = float(cfg["extrapolation_tol"])
    for m in dims:
        if m < 2:
            raise UsageError("dimension must be >= 2")
    for g in geometries:
        if g not in (BALL, SPHERE):
            raise UsageError(f"geometry must be ball or sphere, got {g!r}")

    header = ["m", "kind", "geometry", "t", "coeff", "defect_ratio", "limit", "abs_err"]
    rows, failures, extrapolations = [], 0, []
    for m in dims:
        for g in geometries:
            limit = specialfn.coefficient_defect_limit(kind, g, m)
            ratios = []
            for t in ts:
                coeff = specialfn.mean_coefficient(kind, g, m, t)
                ratio = specialfn.coefficient_defect_ratio(kind, g, m, t)
                ratios.append(ratio)
                err = abs(ratio - limit)
                # quadratic approach to the limit: |ratio - limit| ~ t^2/32
                if err > max(tol, t * t / 16.0):
                    failures += 1
                rows.append([m, cfg["kind"], g, t, coeff, ratio, limit, err])
            if len(ts) >= 3:
                extrapolated = _neville_to_zero([t * t for t in ts], ratios)
                ex_err = abs(extrapolated - limit)
                extrapolations.append((m, g, extrapolated, ex_err))
                if ex_err > extra_tol:
                    failures += 1
    text = _render_rows(header, rows, cfg["format"])
    if cfg["format"] == "table" and extrapolations:
        lines = [
            f"extrapolated m={m} {g}: {_fmt(v)} (abs_err {_fmt(e)})"
            for m, g, v, e in extrapolations
        ]
        text += "\n".join(lines) + "\n"
    _emit(text, cfg)
    return 2 if failures else 0


def _field_for(cfg: dict, m: int):
    label = cfg["field"] or cfg.get("boundary_field", "")
    if not label:
        raise UsageError("a field label is required")
    try:
        return fields.field_by_label(m, label, float(cfg["mu"]), float(cfg["lam"]))
    except (KeyError, ValueError) as exc:
        raise UsageError(str(exc)) from exc


def _cmd_classify(cfg: dict) -> int:
    m = int(cfg["m"])
    field = _field_for(cfg, m)
    point = np.asarray(_parse_floats(cfg["point"]))
    if point.size != m:
        raise UsageError(f"point must have {m} coordinates")
    radii = _parse_radii(cfg["radii"])
    result = asymptotics.classify_point(field, point, radii, tol=float(cfg["tol"]))
    payload = {
        "field": field.label,
        "kind": result.kind.family if result.kind else None,
        "parameter": result.recovered_parameter,
        "confidence": result.confidence,
        "limits": {"ball": result.ball_limit, "sphere": result.sphere_limit},
        "status": result.status,
        "point": [float(v) for v in point],
        "config": _public_config(cfg),
    }
    if cfg["format"] == "json":
        _emit(json.dumps(payload, indent=2) + "\n", cfg)
    else:
        header = ["field", "kind", "parameter", "confidence",
                  "ball_limit", "sphere_limit", "status"]
        row = [field.label, payload["kind"], result.recovered_parameter,
               result.confidence, result.ball_limit, result.sphere_limit,
               result.status]
        _emit(_render_rows(header, [row], cfg["format"]), cfg)
    return 0 if result.status == asymptotics.STATUS_OK else 3


def _cmd_convergence(cfg: dict) -> int:
    m = int(cfg["m"])
    field = _field_for(cfg, m)
    point = np.asarray(_parse_floats(cfg["point"]))
    if point.size != m:
        raise UsageError(f"point must have {m} coordinates")
    geometry = cfg["geometry"]
    if geometry not in (BALL, SPHERE):
        raise UsageError("geometry must be ball or sphere")
    radii = _parse_radii(cfg["radii"])
    if any(radii[i] <= radii[i + 1] for i in range(len(radii) - 1)):
        raise UsageError("radii must be strictly decreasing")
    est = asymptotics.extrapolate_limit(
        asymptotics.defect_sequence(field, point, geometry, radii)
    )
    header = ["r", "defect", "defect_ratio", "extrapolated", "order"]
    rows = [
        [r, d * r * r, d, est.limit_value, est.convergence_order]
        for r, d in zip(est.radii, est.defects)
    ]
    _emit(_render_rows(header, rows, cfg["format"]), cfg)
    return 0 if est.convergence_order >= float(cfg["min_order"]) else 2


def _domain_for(cfg: dict, m: int):
    kind = cfg["domain"]
    if kind == "ball":
        center = np.asarray(_parse_floats(cfg["center"])) if cfg["center"] else np.zeros(m)
        if center.size != m:
            raise UsageError(f"center must have {m} coordinates")
        return geometry.ball_domain(center, float(cfg["radius"]))
    if kind == "box":
        if not cfg["lo"] or not cfg["hi"]:
            raise UsageError("box domain needs --lo and --hi corner lists")
        lo = np.asarray(_parse_floats(cfg["lo"]))
        hi = np.asarray(_parse_floats(cfg["hi"]))
        if lo.size != m or hi.size != m:
            raise UsageError(f"corners must have {m} coordinates")
        return geometry.box_domain(lo, hi)
    if kind == "annulus":
        center = np.asarray(_parse_floats(cfg["center"])) if cfg["center"] else np.zeros(m)
        return geometry.annulus_domain(center, float(cfg["outer"]), float(cfg["inner"]))
    raise UsageError(f"unknown domain {kind!r}; use ball, box or annulus")


def _cmd_wos_solve(cfg: dict) -> int:
    m = int(cfg["m"])
    if m < 2:
        raise UsageError("dimension must be >= 2")
    mu = float(cfg["mu"])
    domain = _domain_for(cfg, m)
    field = fields.field_by_label(m, cfg["boundary_field"], mu if mu > 0 else 1.0,
                                  float(cfg["lam"]))
    if not cfg["point"]:
        raise UsageError("--point is required")
    point = np.asarray(_parse_floats(cfg["point"]))
    if point.size != m:
        raise UsageError(f"point must have {m} coordinates")
    walk_cfg = wos.WalkConfig(
        mu=mu,
        epsilon_shell=float(cfg["epsilon_shell"]) if cfg["epsilon_shell"] else None,
        max_steps=int(cfg["max_steps"]),
        walks=int(cfg["walks"]),
        seed=int(cfg["seed"]),
        radius_fraction=float(cfg["radius_fraction"]),
    )
    try:
        result = wos.solve_dirichlet(domain, field, point, walk_cfg)
    except wos.StartOutsideDomain as exc:
        raise UsageError(str(exc)) from exc

    header = ["estimate", "standard_error", "walks_completed", "truncated_walks",
              "mean_steps", "mean_weight"]
    row = [result.estimate, result.standard_error, result.walks_completed,
           result.truncated_walks, result.mean_steps, result.mean_weight]
    kind = field.kind
    is_reference = kind is not None and (
        (kind.family == PANHARMONIC and kind.parameter == mu)
        or (kind.family == HARMONIC and mu == 0.0)
    )
    if is_reference:
        ref = float(field(point))
        gap = result.estimate - ref
        z = 0.0 if gap == 0.0 else gap / result.standard_error
        header += ["ref_value", "z_score"]
        row += [ref, z]
    if cfg["format"] == "json":
        payload = dict(zip(header, row))
        payload["config"] = _public_config(cfg)
        _emit(json.dumps(payload, indent=2, default=_fmt) + "\n", cfg)
    else:
        _emit(_render_rows(header, [row], cfg["format"]), cfg)
    return 0


def _identity_points(m: int):
    if m == 2:
        return [np.array([0.3, 0.4]), np.array([-0.25, 0.15])]
    return [np.array([0.3, 0.2, -0.2]), np.array([-0.2, 0.25, 0.1])]


def _cmd_verify_identities(cfg: dict) -> int:
    m = int(cfg["m"])
    if m not in (2, 3):
        raise UsageError("identity suite runs in dimension 2 or 3")
    mu, lam = float(cfg["mu"]), float(cfg["lam"])
    radii = _parse_radii(cfg["radii"])
    tol = float(cfg["identity_tol"])
    rtol = float(cfg["laplacian_rtol"])
    header = ["field", "m", "point", "check", "value", "reference", "abs_err", "passed"]
    rows, failures = [], 0

    def add(field, point, check, value, reference, bound):
        nonlocal failures
        value, reference = float(value), float(reference)
        err = abs(value - reference)
        ok = bool(err <= bound)
        if not ok:
            failures += 1
        rows.append([
            field.label, m, ",".join(repr(float(v)) for v in point),
            check, value, reference, err, ok,
        ])

    for field in fields.catalogue(m, mu, lam):
        for point in _identity_points(m):
            # one ball and one sphere sequence feed every check below
            ball_est = asymptotics.extrapolate_limit(
                asymptotics.defect_sequence(field, point, BALL, radii)
            )
            sph_est = asymptotics.extrapolate_limit(
                asymptotics.defect_sequence(field, point, SPHERE, radii)
            )
            mixed = asymptotics.extrapolate_limit(
                asymptotics.DefectEstimate(
                    asymptotics.MIXED, ball_est.radii,
                    tuple(b - s for b, s in zip(ball_est.defects, sph_est.defects)),
                )
            ).limit_value
            lap = float(field.laplacian(point))
            reference = -lap / (m * (m + 2))
            bound = tol if lap == 0.0 else rtol * abs(reference)
            add(field, point, "mixed_defect", mixed, reference, bound)
            if field.kind is None or field.kind.family == HARMONIC:
                continue
            shared = abs((m + 2) * ball_est.limit_value - m * sph_est.limit_value)
            add(field, point, "shared_ratio", shared, 0.0, tol)
            ux = float(field(point))
            p = abs(field.kind.parameter)
            signed_sq = field.kind.defect_sign * p * p
            for i, r in enumerate(radii[:3]):
                for tag, est, factor, geom in (
                    ("ball", ball_est, 2.0 * (m + 2), BALL),
                    ("sphere", sph_est, 2.0 * m, SPHERE),
                ):
                    mean = ux + est.defects[i] * r * r
                    coeff = specialfn.mean_coefficient(field.kind, geom, m, p * r)
                    rhs = signed_sq * mean / (factor * coeff)
                    add(field, point, f"self_ref_{tag}_r={r:g}",
                        abs(est.limit_value - rhs), 0.0, tol)

    _emit(_render_rows(header, rows, cfg["format"]), cfg)
    return 2 if failures else 0


_DISPATCH = {
    "verify-coefficients": _cmd_verify_coefficients,
    "classify": _cmd_classify,
    "convergence": _cmd_convergence,
    "wos-solve": _cmd_wos_solve,
    "verify-identities": _cmd_verify_identities,
}


def main(argv=None) -> int:
    try:
        args = _build_parser().parse_args(argv)
        cfg = _resolve(args)
        return _DISPATCH[args.command](cfg)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
