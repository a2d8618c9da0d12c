"""Deterministic text artifacts: CSV tables, JSON reports, config files.

Identical inputs must produce byte-identical output, so everything routes
through one float formatter (17 significant digits, lossless for doubles)
and emits no timestamps. JSON keys are sorted; NaN and infinities map to
null since strict JSON has no spelling for them.
"""

import configparser
import csv
import io
import json
import math

from .errors import ValidationError

__all__ = [
    "fmt_float",
    "region_csv",
    "scan_csv",
    "witness_csv",
    "witness_summary_json",
    "trajectory_csv",
    "decay_fit_json",
    "abscissa_json",
    "json_dumps",
    "config_dumps",
    "config_loads",
]


def fmt_float(x) -> str:
    """Format one float with 17 significant digits."""
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if x == 0.0:
        x = 0.0  # normalize -0.0
    return "%.17g" % x


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(row)
    return buf.getvalue()


def region_csv(labels) -> str:
    """Region table: one row per (beta, alpha) classification."""
    rows = [
        (
            fmt_float(lab.beta),
            fmt_float(lab.alpha),
            lab.s_class,
            lab.r_class,
            "true" if lab.in_q else "false",
            lab.expected_regularity,
            lab.expected_stability,
        )
        for lab in labels
    ]
    return _csv_text(
        (
            "beta",
            "alpha",
            "s_class",
            "r_class",
            "in_q",
            "expected_regularity",
            "expected_stability",
        ),
        rows,
    )


def scan_csv(rows) -> str:
    """Resolvent scan table: lambda, sup bound, maximizing mode, skips."""
    out = [
        (
            fmt_float(r.lam),
            fmt_float(r.sup_lb),
            str(r.argmax_n),
            ";".join(str(n) for n in r.skipped_modes),
        )
        for r in rows
    ]
    return _csv_text(("lambda", "sup_lb", "argmax_n", "skipped_modes"), out)


def witness_csv(rows) -> str:
    """Witness sweep table with every row field; phi split into re/im."""
    out = [
        (
            str(r.n),
            fmt_float(r.mu),
            fmt_float(r.lam),
            fmt_float(r.exponents.p),
            fmt_float(r.exponents.q),
            "" if r.exponents.delta is None else fmt_float(r.exponents.delta),
            r.exponents.case,
            fmt_float(r.phi.real),
            fmt_float(r.phi.imag),
            fmt_float(r.norm_u),
            fmt_float(r.norm_f),
            fmt_float(r.ratio),
            fmt_float(r.residual),
        )
        for r in rows
    ]
    return _csv_text(
        (
            "n",
            "mu",
            "lambda",
            "p",
            "q",
            "delta",
            "case",
            "phi_re",
            "phi_im",
            "norm_u",
            "norm_f",
            "ratio",
            "residual",
        ),
        out,
    )


def _sanitize(obj):
    """Replace NaN/inf with None recursively so strict JSON can hold it."""
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else None
    if isinstance(obj, complex):
        return [_sanitize(obj.real), _sanitize(obj.imag)]
    if isinstance(obj, dict):
        return {str(k): _sanitize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_sanitize(v) for v in obj]
    if hasattr(obj, "item") and not isinstance(obj, (str, bytes)):
        try:
            return _sanitize(obj.item())
        except (AttributeError, ValueError):
            return obj
    return obj


def json_dumps(obj) -> str:
    """Strict, key-sorted JSON with a trailing newline."""
    return json.dumps(_sanitize(obj), sort_keys=True, indent=2, allow_nan=False) + "\n"


def witness_summary_json(sweep) -> str:
    return json_dumps(
        {
            "limit_estimate": sweep.limit_estimate,
            "certified": sweep.certified,
            "criterion": sweep.criterion,
        }
    )


def trajectory_csv(traj) -> str:
    """Energy table: t, total, then one column per mode."""
    n_modes = traj.mode_energy.shape[1]
    header = ["t", "E_total"] + ["E_mode_%d" % (i + 1) for i in range(n_modes)]
    rows = []
    for k in range(traj.times.size):
        row = [fmt_float(traj.times[k]), fmt_float(traj.total_energy[k])]
        row.extend(fmt_float(v) for v in traj.mode_energy[k])
        rows.append(row)
    return _csv_text(header, rows)


def decay_fit_json(fit) -> str:
    return json_dumps(
        {
            "model": fit.model,
            "rate": fit.rate,
            "fit_quality": fit.fit_quality,
            "quality_defined": fit.quality_defined,
            "window": list(fit.window),
            "n_modes": fit.n_modes,
            "caveat": fit.caveat,
        }
    )


def abscissa_json(entries) -> str:
    """List of per-mode abscissa results with scan diagnostics."""
    return json_dumps(list(entries))


# ---------------------------------------------------------------------------
# config files: flat key=value with [sections]


def config_dumps(sections) -> str:
    """Serialize {section: {key: value}} to config text.

    Values are written as strings; floats go through the lossless
    formatter. Sections and keys keep their given order and case.
    """
    lines = []
    for name, table in sections.items():
        lines.append("[%s]" % name)
        for key, value in table.items():
            if isinstance(value, bool):
                value = "true" if value else "false"
            elif isinstance(value, float):
                value = fmt_float(value)
            lines.append("%s = %s" % (key, value))
        lines.append("")
    return "\n".join(lines)


def config_loads(text) -> dict:
    """Parse config text back to {section: {key: str-value}}."""
    parser = configparser.ConfigParser(interpolation=None)
    parser.optionxform = str
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ValidationError("bad config file: %s" % exc) from exc
    return {name: dict(parser.items(name)) for name in parser.sections()}
