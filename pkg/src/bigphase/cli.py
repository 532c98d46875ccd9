"""Command-line front end.

Three subcommands:

* ``bigphase verify`` builds a model at a chosen truncation, runs the
  residual-check catalogue (all groups or a ``--check`` subset), prints a
  fixed-width table, and emits a JSON report.  Exit code 0 when every
  asserted residual passes, 1 on a residual failure, 2 on an invalid model
  or configuration.
* ``bigphase lift`` dumps one derived object (the coordinate lift, the
  transition matrix, the vector-field frame, or a lifted tensor block) as
  canonical JSON.
* ``bigphase models`` lists the shipped models, or exports one of them (or
  normalizes an external config) as canonical configuration JSON.

``--model`` accepts a built-in name, a path to a configuration file, or a
bare name resolved as ``$BIGPHASE_MODEL_DIR/<name>.json`` (current directory
when the variable is unset).  Reports contain no timestamps; identical
inputs produce byte-identical output in rational mode.

``--normalization factorial`` multiplies each dumped coefficient by
``level!`` per power of a jet variable (the rescaled-coordinate convention);
it never affects residuals.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .context import BigContext
from .frobenius import ModelError
from .lifted import LiftedStructure
from .models import (
    BUILTIN_MODELS,
    ConfigError,
    ModelBundle,
    build_builtin,
    build_from_spec,
    builtin_spec,
    canonical_json,
    load_spec_file,
)
from .scalars import ComplexRational, format_rational
from .series import TruncatedSeries
from .verify import GROUP_ORDER, Verifier, summarize

try:  # single source of truth is the installed package metadata
    from importlib.metadata import version as _dist_version

    VERSION = _dist_version("bigphase")
except Exception:  # pragma: no cover - metadata missing in odd environments
    VERSION = "0.1.0"

__all__ = ["main", "build_parser"]

_LIFT_TARGETS = (
    "u",
    "M",
    "t_frame",
    "eta_hat",
    "h_hat",
    "higgs_hat",
    "chern_hat",
    "curvature_hat",
)
_HERM_TARGETS = {"h_hat", "chern_hat", "curvature_hat"}

# Historical spellings accepted by --check, mapped onto catalogue groups.
_CHECK_ALIASES = {
    "metric_hat": "metric",
    "saito_hat": "saito",
    "ttstar_hat": "ttstar",
    "lax_hat": "lax",
}


# ---------------------------------------------------------------------------
# shared plumbing
# ---------------------------------------------------------------------------


def _scalar_json(value):
    """JSON form of a residual/scalar: ``p/q`` string, float, or None."""
    if value is None:
        return None
    if isinstance(value, Fraction):
        return format_rational(value)
    if isinstance(value, int):
        return format_rational(Fraction(value))
    if isinstance(value, ComplexRational):
        if value.im != 0:
            return {"re": format_rational(value.re), "im": format_rational(value.im)}
        return format_rational(value.re)
    if isinstance(value, complex):
        return value.real if value.imag == 0 else {"re": value.real, "im": value.imag}
    return float(value)


def _parse_tol(text: Optional[str], mode: str):
    if text is None:
        return None
    try:
        return Fraction(text) if mode == "rational" else float(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"invalid --tol {text!r}: {exc}") from exc


def _parse_checks(text: str) -> Tuple[str, ...]:
    requested = set()
    for token in text.split(","):
        token = token.strip()
        if not token:
            continue
        group = _CHECK_ALIASES.get(token, token)
        if group not in GROUP_ORDER:
            raise ConfigError(
                f"unknown check group {token!r}; choose from "
                + ", ".join(GROUP_ORDER)
            )
        requested.add(group)
    if not requested:
        raise ConfigError("--check selected no groups")
    return tuple(g for g in GROUP_ORDER if g in requested)


def _looks_like_path(name: str) -> bool:
    return os.sep in name or name.endswith(".json")


def _load_bundle(args) -> Tuple[ModelBundle, Optional[int]]:
    """Resolve --model and build it; returns (bundle, config i_max default)."""
    name = args.model
    if name in BUILTIN_MODELS:
        bundle = build_builtin(
            name, n_max=args.nmax, d_max=args.dmax, mode=args.mode, seed=args.seed
        )
        return bundle, None
    path = name if _looks_like_path(name) else os.path.join(
        os.environ.get("BIGPHASE_MODEL_DIR", "."), name + ".json"
    )
    spec = load_spec_file(path)
    bundle = build_from_spec(spec, n_max=args.nmax, d_max=args.dmax, mode=args.mode)
    return bundle, spec.get("defaults", {}).get("i_max")


def _resolve_imax(args, bundle: ModelBundle, config_imax: Optional[int]) -> int:
    if args.imax is not None:
        return args.imax
    if config_imax is not None:
        return config_imax
    return bundle.model.ring.n_max


def _model_block(bundle: ModelBundle) -> Dict[str, object]:
    model, herm = bundle.model, bundle.herm
    return {
        "name": bundle.name,
        "n": model.n,
        "unit_flavor": model.unit_flavor,
        "has_euler": model.euler is not None,
        "has_real_structure": herm is not None,
        "has_potential": herm is not None and herm.potential_a is not None,
        "has_cv": herm is not None and herm.cv_u is not None,
        "weight": _scalar_json(model.weight),
    }


def _write_text(text: str, out: Optional[str]) -> None:
    if out:
        try:
            with open(out, "w", encoding="utf-8") as handle:
                handle.write(text)
        except OSError as exc:
            raise ConfigError(f"cannot write {out}: {exc}") from exc
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------


def _build_report(
    bundle: ModelBundle,
    verifier: Verifier,
    results,
    counts: Mapping[str, int],
    args,
    groups: Sequence[str],
    i_max: int,
    exit_code: int,
) -> dict:
    ring = bundle.model.ring
    gates = []
    for row in verifier.gates():
        gates.append(
            {
                "id": row["id"],
                "status": row["status"],
                "residual": _scalar_json(row["residual"]),
                "window": row["window"],
                "note": row["note"],
            }
        )
    checks = [
        {
            "id": r.id,
            "group": r.group,
            "status": r.status,
            "residual": _scalar_json(r.residual),
            "window": r.window,
            "note": r.note,
        }
        for r in results
    ]
    return {
        "tool": {"name": "bigphase", "version": VERSION},
        "model": _model_block(bundle),
        "run": {
            "mode": ring.mode,
            "seed": args.seed,
            "n_max": ring.n_max,
            "d_max": ring.d_max,
            "i_max": i_max,
            "tol": _scalar_json(verifier.tol),
            "normalization": args.normalization,
            "checks": list(groups),
        },
        "gates": gates,
        "checks": checks,
        "summary": {
            "pass": counts["pass"],
            "fail": counts["fail"],
            "skipped": counts["skipped"],
            "exit_code": exit_code,
        },
    }


def _render_table(report: Mapping) -> str:
    model = report["model"]
    run = report["run"]
    rows = list(report["gates"]) + list(report["checks"])
    id_width = max(len(str(r["id"])) for r in rows)
    res_width = max(
        [len(_cell_residual(r)) for r in rows] + [len("residual")]
    )
    lines = [
        "model {name} (n={n})  mode={mode}  n_max={n_max} d_max={d_max} "
        "i_max={i_max}  seed={seed}".format(
            name=model["name"], n=model["n"], mode=run["mode"],
            n_max=run["n_max"], d_max=run["d_max"], i_max=run["i_max"],
            seed=run["seed"],
        ),
        "",
        f"{'status':6s} {'id':{id_width}s} {'residual':>{res_width}s} "
        f"{'window':>6s}  note",
    ]
    for row in rows:
        window = "-" if row["window"] is None else str(row["window"])
        lines.append(
            f"{row['status']:6s} {row['id']:{id_width}s} "
            f"{_cell_residual(row):>{res_width}s} {window:>6s}  {row['note']}"
        )
    summary = report["summary"]
    lines.append("")
    lines.append(
        "summary pass={p} fail={f} skipped={s} exit={e}".format(
            p=summary["pass"], f=summary["fail"], s=summary["skipped"],
            e=summary["exit_code"],
        )
    )
    return "\n".join(lines)


def _cell_residual(row: Mapping) -> str:
    value = row["residual"]
    if value is None:
        return "-"
    if isinstance(value, dict):
        return f"{value['re']}+{value['im']}i"
    return str(value)


def cmd_verify(args) -> int:
    bundle, config_imax = _load_bundle(args)
    i_max = _resolve_imax(args, bundle, config_imax)
    tol = _parse_tol(args.tol, args.mode)
    groups = _parse_checks(args.check) if args.check else GROUP_ORDER
    verifier = Verifier(
        bundle.model, bundle.herm, i_max=i_max, tol=tol, seed=args.seed
    )
    results = verifier.run(groups)
    counts = summarize(results)
    exit_code = 1 if counts["fail"] else 0
    report = _build_report(
        bundle, verifier, results, counts, args, groups, i_max, exit_code
    )
    text = json.dumps(report, indent=2) + "\n"
    print(_render_table(report))
    if args.out:
        _write_text(text, args.out)
    else:
        print()
        sys.stdout.write(text)
    return exit_code


# ---------------------------------------------------------------------------
# lift
# ---------------------------------------------------------------------------


def _payload_terms(series: TruncatedSeries, normalization: str) -> list:
    terms = series.serialize_terms()
    if normalization == "factorial":
        rational = series.ring.mode == "rational"
        for entry in terms:
            factor = 1
            for _sector, level, _flavor, exp in entry["mono"]:
                factor *= math.factorial(level) ** exp
            if factor == 1:
                continue
            if rational:
                entry["re"] = format_rational(Fraction(entry["re"]) * factor)
                entry["im"] = format_rational(Fraction(entry["im"]) * factor)
            else:
                entry["re"] = repr(float(entry["re"]) * factor)
                entry["im"] = repr(float(entry["im"]) * factor)
    return terms


def _series_payload(series: TruncatedSeries, normalization: str) -> dict:
    return {
        "exact": series.exact,
        "valid_degree": None if series.exact else series.valid_degree,
        "terms": _payload_terms(series, normalization),
    }


def _matrix_payload(matrix, normalization: str) -> list:
    return [[_series_payload(entry, normalization) for entry in row] for row in matrix]


def _frame_payload(vector, normalization: str) -> list:
    out = []
    for (level, flavor) in sorted(vector.comps):
        out.append(
            {
                "level": level,
                "flavor": flavor,
                "series": _series_payload(vector.comps[(level, flavor)], normalization),
            }
        )
    return out


def _lift_data(ctx: BigContext, lifted: LiftedStructure, target: str, norm: str):
    n = ctx.n
    if target == "u":
        return [_series_payload(u, norm) for u in ctx.u_upper]
    if target == "M":
        return _matrix_payload(ctx.m_matrix, norm)
    if target == "t_frame":
        out = []
        for level in range(ctx.n_max + 1):
            for flavor in range(1, n + 1):
                frame = ctx.t_frame(level, flavor)
                out.append(
                    {
                        "level": level,
                        "flavor": flavor,
                        "components": _frame_payload(frame, norm),
                    }
                )
        return out
    if target == "eta_hat":
        block = [
            [
                ctx.eta_hat(ctx.t_frame(0, a + 1), ctx.t_frame(0, b + 1))
                for b in range(n)
            ]
            for a in range(n)
        ]
        return _matrix_payload(block, norm)
    if target == "h_hat":
        return _matrix_payload(lifted.hlift, norm)
    if target == "higgs_hat":
        return [_matrix_payload(lifted.higgs_basis[a], norm) for a in range(n)]
    if target == "chern_hat":
        return [_matrix_payload(lifted.gamma_basis[a], norm) for a in range(n)]
    if target == "curvature_hat":
        out = []
        for a in range(n):
            gamma = lifted.gamma_basis[a]
            row = []
            for b in range(n):
                direction = ctx.coordinate_field(0, b + 1, barred=True)
                block = [
                    [-(direction.derive(gamma[i][j])) for j in range(n)]
                    for i in range(n)
                ]
                row.append(_matrix_payload(block, norm))
            out.append(row)
        return out
    raise ConfigError(f"unknown lift target {target!r}")


def cmd_lift(args) -> int:
    bundle, config_imax = _load_bundle(args)
    if args.target in _HERM_TARGETS and bundle.herm is None:
        raise ConfigError(
            f"lift target {args.target!r} requires a model with a real_structure"
        )
    i_max = _resolve_imax(args, bundle, config_imax)
    ctx = BigContext(bundle.model, i_max)
    lifted = LiftedStructure(ctx, bundle.herm)
    ring = bundle.model.ring
    dump = {
        "tool": {"name": "bigphase", "version": VERSION},
        "model": _model_block(bundle),
        "run": {
            "mode": ring.mode,
            "seed": args.seed,
            "n_max": ring.n_max,
            "d_max": ring.d_max,
            "i_max": i_max,
            "normalization": args.normalization,
        },
        "target": args.target,
        "data": _lift_data(ctx, lifted, args.target, args.normalization),
    }
    _write_text(json.dumps(dump, indent=2) + "\n", args.out)
    return 0


# ---------------------------------------------------------------------------
# models
# ---------------------------------------------------------------------------


def cmd_models(args) -> int:
    if args.model:
        if args.model in BUILTIN_MODELS:
            spec = builtin_spec(
                args.model, n_max=args.nmax, d_max=args.dmax, seed=args.seed
            )
        else:
            path = args.model if _looks_like_path(args.model) else os.path.join(
                os.environ.get("BIGPHASE_MODEL_DIR", "."), args.model + ".json"
            )
            spec = load_spec_file(path)
        _write_text(canonical_json(spec), args.out)
        return 0
    name_width = max(len(name) for name in BUILTIN_MODELS)
    lines = [f"{'name':{name_width}s}  n  n_max d_max seeded  description"]
    for name, entry in BUILTIN_MODELS.items():
        lines.append(
            f"{name:{name_width}s}  {entry.n}  {entry.defaults[0]:5d} "
            f"{entry.defaults[1]:5d} {'yes' if entry.seeded else 'no':6s}  "
            f"{entry.description}"
        )
    text = "\n".join(lines) + "\n"
    _write_text(text, args.out)
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def _add_common(parser: argparse.ArgumentParser, *, require_model: bool) -> None:
    parser.add_argument(
        "--model",
        required=require_model,
        help="built-in name, config path, or name under $BIGPHASE_MODEL_DIR",
    )
    parser.add_argument("--nmax", type=int, help="descendant level cutoff")
    parser.add_argument("--dmax", type=int, help="jet degree cutoff")
    parser.add_argument("--imax", type=int, help="deformed-flat ladder depth")
    parser.add_argument("--tol", help="residual tolerance (exact rational in rational mode)")
    parser.add_argument(
        "--mode", choices=("rational", "float"), default="rational",
        help="coefficient arithmetic",
    )
    parser.add_argument("--seed", type=int, default=0, help="seed for sampled checks and seeded models")
    parser.add_argument("--out", help="write the JSON artifact to this file")
    parser.add_argument(
        "--normalization", choices=("plain", "factorial"), default="plain",
        help="coefficient convention for dumped series",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bigphase",
        description="Verify lifted Frobenius/tt* structures on the truncated jet chart.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_verify = sub.add_parser("verify", help="run the residual-check catalogue")
    _add_common(p_verify, require_model=True)
    p_verify.add_argument(
        "--check",
        help="comma-separated check groups (" + ", ".join(GROUP_ORDER) + ")",
    )
    p_verify.set_defaults(func=cmd_verify)

    p_lift = sub.add_parser("lift", help="dump one lifted object as JSON")
    _add_common(p_lift, require_model=True)
    p_lift.add_argument("--target", required=True, choices=_LIFT_TARGETS)
    p_lift.set_defaults(func=cmd_lift)

    p_models = sub.add_parser(
        "models", help="list built-in models or export one as config JSON"
    )
    _add_common(p_models, require_model=False)
    p_models.set_defaults(func=cmd_models)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ModelError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
