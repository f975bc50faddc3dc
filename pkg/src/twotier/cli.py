"""Command-line interface.

Subcommands:

* ``analyze``     -- exact per-state influence table for one quota
* ``approx``      -- exact vs Gaussian estimates with Berry-Esseen intervals
* ``quota-sweep`` -- squared-deviation objective over a quota grid
* ``influence``   -- within-state influence report for one vote model

Human output prints three decimals (the conventional table precision);
``--format=csv`` and ``--format=json`` are lossless.  Exit codes: 0 success,
2 input error, 3 exact-enumeration size limit.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

from . import council, gaussian, models, union
from .errors import DatasetError, SizeLimitError
from .union import QuotaSpec


def _resolve_dataset(path_text: str) -> Path:
    path = Path(path_text)
    if path.exists():
        return path
    bundled = union.eu27_path()
    if path_text in ("eu27", bundled.name):
        return bundled
    raise DatasetError(f"dataset not found: {path_text}")


def _parse_quota(text: str, u: union.Union) -> QuotaSpec:
    if text == "zero":
        return QuotaSpec.zero()
    if text == "star":
        return union.jagcom_quota(u)
    try:
        return QuotaSpec.explicit(float(text))
    except ValueError:
        raise ValueError(
            f"--quota must be 'zero', 'star', or a real number; got {text!r}"
        ) from None


def _parse_grid(text: str, u: union.Union) -> list[QuotaSpec]:
    if text == "paper":
        star = union.jagcom_quota(u)
        return [
            QuotaSpec.zero(),
            QuotaSpec.explicit(0.5 * star.q),
            star,
            QuotaSpec.explicit(1.5 * star.q),
        ]
    items = [tok.strip() for tok in text.split(",") if tok.strip()]
    if not items:
        raise ValueError("quota grid is empty")
    return [_parse_quota(tok, u) for tok in items]


# ---------------------------------------------------------------------------
# Rendering


def _fmt_cell(value, machine: bool) -> str:
    if isinstance(value, float):
        return format(value, ".17g") if machine else format(value, ".3f")
    return str(value)


def _render_table(columns, rows, extra_lines=()) -> str:
    headers = [h for _, h in columns]
    grid = [headers]
    for row in rows:
        grid.append([_fmt_cell(row.get(key, ""), machine=False) for key, _ in columns])
    widths = [max(len(line[i]) for line in grid) for i in range(len(columns))]
    out = []
    for line in grid:
        cells = []
        for i, cell in enumerate(line):
            # names flush left, numbers flush right
            aligned = cell.ljust(widths[i]) if i == _name_col(columns) else cell.rjust(widths[i])
            cells.append(aligned)
        out.append("  ".join(cells).rstrip())
    out.extend(extra_lines)
    return "\n".join(out) + "\n"


def _name_col(columns) -> int:
    for i, (key, _) in enumerate(columns):
        if key in ("state", "model", "field"):
            return i
    return -1


def _render_csv(columns, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow([key for key, _ in columns])
    for row in rows:
        writer.writerow([_fmt_cell(row.get(key, ""), machine=True) for key, _ in columns])
    return buf.getvalue()


def _render_json(payload) -> str:
    return json.dumps(payload, indent=2) + "\n"


def _emit(args, text: str) -> None:
    sys.stdout.write(text)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")


def _emit_rows(args, columns, rows, *, extra_lines=(), json_payload=None) -> None:
    if args.format == "table":
        _emit(args, _render_table(columns, rows, extra_lines))
    elif args.format == "csv":
        _emit(args, _render_csv(columns, rows))
    else:
        _emit(args, _render_json(json_payload))


# ---------------------------------------------------------------------------
# Subcommands


def _cmd_analyze(args) -> int:
    u = union.load_union(_resolve_dataset(args.dataset))
    w = union.sqrt_weights(u)
    q = _parse_quota(args.quota, u)
    alpha = [models.asymptotic_fair_influence(p) for p in u.populations]
    analysis = council.analyze(w, q, alpha, threads=args.threads)
    columns = [
        ("j", "j"),
        ("state", "state"),
        ("weight", "w"),
        ("weight_normalised", "w_norm"),
        ("beta", "beta"),
        ("beta_normalised", "beta_norm"),
        ("ratio", "ratio"),
    ]
    rows = []
    for j, name in enumerate(u.names):
        rows.append(
            {
                "j": j + 1,
                "state": name,
                "weight": w.weights[j],
                "weight_normalised": analysis.weight_normalised[j],
                "beta": analysis.beta[j],
                "beta_normalised": analysis.beta_normalised[j],
                "ratio": analysis.ratios[j],
            }
        )
    totals = (
        f"Totals  W={w.total:.3f}  w_norm=100.000  "
        f"B={analysis.beta_total:.3f}  beta_norm=100.000  Q={analysis.objective:.6f}"
    )
    payload = {
        "quota": {"q": q.q, "provenance": q.provenance},
        "rows": rows,
        "totals": {
            "weight": w.total,
            "beta_total": analysis.beta_total,
            "objective": analysis.objective,
        },
    }
    _emit_rows(args, columns, rows, extra_lines=(totals,), json_payload=payload)
    return 0


def _cmd_approx(args) -> int:
    u = union.load_union(_resolve_dataset(args.dataset))
    w = union.sqrt_weights(u)
    q = _parse_quota(args.quota, u)
    s = len(u)
    exact = None
    if s <= council.MAX_EXACT_STATES:
        exact = council.state_influences(w, q, threads=args.threads)
    else:
        print(
            f"note: {s} states exceed the exact-enumeration limit; "
            "exact column omitted",
            file=sys.stderr,
        )
    certs = [gaussian.certificate(w, q, j) for j in range(s)]

    def clip(x: float) -> float:
        return min(1.0, max(0.0, x)) if args.clip else x

    columns = [("j", "j"), ("state", "state")]
    if exact is not None:
        columns.append(("beta_exact", "exact"))
    columns += [
        ("jagcom", "jagcom"),
        ("be_lo", "be_lo"),
        ("be_hi", "be_hi"),
    ]
    rows = []
    for j, name in enumerate(u.names):
        row = {
            "j": j + 1,
            "state": name,
            "jagcom": certs[j].jagcom_density_approx,
            "be_lo": clip(certs[j].interval_lo),
            "be_hi": clip(certs[j].interval_hi),
        }
        if exact is not None:
            row["beta_exact"] = exact[j]
        rows.append(row)
    payload = {
        "quota": {"q": q.q, "provenance": q.provenance},
        "clipped": bool(args.clip),
        "rows": rows,
    }
    _emit_rows(args, columns, rows, json_payload=payload)
    return 0


def _cmd_quota_sweep(args) -> int:
    u = union.load_union(_resolve_dataset(args.dataset))
    w = union.sqrt_weights(u)
    grid = _parse_grid(args.grid, u)
    result = council.quota_sweep(w, grid, threads=args.threads)
    columns = [
        ("q", "q"),
        ("objective", "Q"),
        ("beta_total", "B"),
        ("is_argmin", "argmin"),
    ]
    rows = []
    for i, point in enumerate(result.points):
        rows.append(
            {
                "q": point.quota.q,
                "objective": point.objective,
                "beta_total": point.beta_total,
                "is_argmin": int(i == result.argmin_index),
            }
        )
    best = result.points[result.argmin_index].quota
    payload = {
        "points": rows,
        "argmin_index": result.argmin_index,
        "argmin_q": best.q,
    }
    _emit_rows(
        args,
        columns,
        rows,
        extra_lines=(f"argmin: q = {best.q:.6f} ({best.provenance})",),
        json_payload=payload,
    )
    return 0


def _parse_model(text: str) -> tuple[models.VoteModel, str]:
    if text == "fair":
        return models.IndependentFair(), "closed-form"
    if text == "uniform-bias":
        return models.CollectiveBias(models.UniformOn01()), "closed-form"
    if text == "circular":
        return models.CircularMajority(), "enumeration"
    if text.startswith("two-atoms:"):
        parts = text.removeprefix("two-atoms:").split(",")
        if len(parts) != 2:
            raise ValueError("two-atoms model needs two values: two-atoms:a,b")
        return models.CollectiveBias(
            models.TwoAtoms(float(parts[0]), float(parts[1]))
        ), "closed-form"
    raise ValueError(
        f"unknown model {text!r}; choose fair, uniform-bias, two-atoms:a,b, circular"
    )


def _cmd_influence(args) -> int:
    model, route = _parse_model(args.model)
    report = models.influence_report(model, args.m)
    columns = [("field", "field"), ("value", "value")]
    rows = [
        {"field": "model", "value": args.model},
        {"field": "m", "value": args.m},
        {"field": "alpha", "value": report.alpha},
        {"field": "kappa", "value": report.kappa},
        {"field": "eta", "value": report.eta},
        {"field": "mean_abs_margin", "value": report.mean_abs_margin},
        {"field": "route", "value": route},
    ]
    payload = {
        "model": args.model,
        "m": args.m,
        "alpha": report.alpha,
        "kappa": report.kappa,
        "eta": report.eta,
        "mean_abs_margin": report.mean_abs_margin,
        "route": route,
    }
    _emit_rows(args, columns, rows, json_payload=payload)
    return 0


# ---------------------------------------------------------------------------
# Parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="twotier",
        description="Voting power analysis for two-tier voting systems.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, dataset=True):
        if dataset:
            p.add_argument("dataset", help="CSV with header name,population")
            p.add_argument(
                "--threads",
                type=int,
                default=0,
                help="worker threads for the exact enumeration (0 = auto)",
            )
        p.add_argument(
            "--format", choices=("table", "csv", "json"), default="table"
        )
        p.add_argument("--output", help="also write the output to this path")

    p_analyze = sub.add_parser("analyze", help="exact influence table")
    add_common(p_analyze)
    p_analyze.add_argument("--quota", required=True, help="zero | star | <real>")
    p_analyze.set_defaults(func=_cmd_analyze)

    p_approx = sub.add_parser("approx", help="Gaussian estimates and BE intervals")
    add_common(p_approx)
    p_approx.add_argument("--quota", required=True, help="zero | star | <real>")
    p_approx.add_argument(
        "--clip", action="store_true", help="clip BE intervals to [0,1]"
    )
    p_approx.set_defaults(func=_cmd_approx)

    p_sweep = sub.add_parser("quota-sweep", help="objective over a quota grid")
    add_common(p_sweep)
    p_sweep.add_argument(
        "--grid",
        required=True,
        help="comma list of quotas (zero/star/<real>) or 'paper' for "
        "{0, star/2, star, 3*star/2}",
    )
    p_sweep.set_defaults(func=_cmd_quota_sweep)

    p_inf = sub.add_parser("influence", help="within-state influence report")
    add_common(p_inf, dataset=False)
    p_inf.add_argument(
        "--model",
        required=True,
        help="fair | uniform-bias | two-atoms:a,b | circular",
    )
    p_inf.add_argument("--m", type=int, required=True, help="odd electorate size")
    p_inf.set_defaults(func=_cmd_influence)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return args.func(args)
    except SizeLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (DatasetError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
