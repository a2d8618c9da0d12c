"""Command-line frontend.

Subcommands: region, witness, scan, simulate, abscissa, report. Every run
resolves its inputs (defaults, then config file, then explicit flags) into a
RunConfig whose values are canonical strings, writes the artifacts for the
subcommand into --out, and drops a config echo (config-echo.cfg) that parses
back to the identical RunConfig. Artifacts are deterministic: same config,
same bytes. Exit status 0 on success, 2 on a validation error, 3 on a
numerical one. THERMOSEMI_THREADS caps internal parallelism.
"""

import argparse
import math
import os
import sys
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import dynamics, serialize
from .core import (
    ModelParams,
    SystemKind,
    classify_region,
    make_spectrum,
    region_grid,
    xi_admissible,
)
from .errors import (
    AdmissibilityError,
    NumericalError,
    ThermosemiError,
    UnsupportedCaseError,
    ValidationError,
)
from .models import PRESET_NAMES, preset
from .resolvent import resolvent_scan, spectral_abscissa_estimate
from .witness import witness_sweep

COMMANDS = ("region", "witness", "scan", "simulate", "abscissa", "report")

_MODEL_KEYS = ("kind", "beta", "alpha", "a", "kappa", "tau", "xi")

# command -> ordered option names with defaults, stored as canonical strings;
# "" marks an auto value resolved at dispatch time
_OPTION_SPECS = {
    "region": (("grid", "101"), ("plot", "false")),
    "witness": (
        ("indices", "16,32,64,128,256"),
        ("delta", ""),
        ("plot", "false"),
    ),
    "scan": (
        ("lambdas", "100,1000,10000"),
        ("n_max", "0"),
        ("k_trial", "2"),
        ("plot", "false"),
    ),
    "simulate": (
        ("n_modes", "16"),
        ("T", "20"),
        ("M", "64"),
        ("initial", "smooth"),
        ("fit_window", ""),
        ("fit_model", "exponential"),
        ("z_crosscheck", "false"),
        ("plot", "false"),
    ),
    "abscissa": (("mus", "10,100,1000,10000"), ("window", "")),
    "report": (
        ("list_presets", "false"),
        ("indices", "16,32,64,128"),
        ("mus", "10,100,1000"),
    ),
}

_TRUNCATION_CAVEAT = (
    "per-mode abscissas approach zero from below, so every finite truncation "
    "decays exponentially at the slowest retained mode's rate; the "
    "polynomial decay order of the full system is not reproduced by any "
    "finite truncation"
)


@dataclass(frozen=True)
class RunConfig:
    """Fully resolved run description with canonical string values."""

    command: str
    params: Optional[ModelParams]
    spectrum_rule: str
    spectrum_args: tuple  # ordered (key, canonical string) pairs
    options: tuple  # ordered (key, canonical string) pairs
    out: str


# ---------------------------------------------------------------------------
# config echo


def sections_from_runconfig(cfg: RunConfig) -> dict:
    sections = {"run": {"command": cfg.command, "out": cfg.out}}
    if cfg.params is not None:
        p = cfg.params
        sections["model"] = {
            "kind": p.kind.value,
            "beta": serialize.fmt_float(p.beta),
            "alpha": serialize.fmt_float(p.alpha),
            "a": serialize.fmt_float(p.a),
            "kappa": serialize.fmt_float(p.kappa),
            "tau": serialize.fmt_float(p.tau),
            "xi": serialize.fmt_float(p.xi),
        }
    if cfg.spectrum_rule:
        sec = {"rule": cfg.spectrum_rule}
        sec.update(dict(cfg.spectrum_args))
        sections["spectrum"] = sec
    sections["options"] = dict(cfg.options)
    return sections


def runconfig_from_sections(sections: dict) -> RunConfig:
    run = sections.get("run", {})
    command = run.get("command", "")
    if command not in COMMANDS:
        raise ValidationError("config names unknown command %r" % command)
    out = run.get("out", ".")
    params = None
    if "model" in sections:
        m = sections["model"]
        try:
            params = ModelParams(
                kind=SystemKind.parse(m["kind"]),
                beta=float(m.get("beta", 0.5)),
                alpha=float(m.get("alpha", 0.5)),
                a=float(m.get("a", 1.0)),
                kappa=float(m.get("kappa", 1.0)),
                tau=float(m.get("tau", 1.0)),
                xi=float(m.get("xi", 1.0)),
            )
        except KeyError as exc:
            raise ValidationError("config model section lacks %s" % exc) from exc
    rule, sargs = "", ()
    if "spectrum" in sections:
        s = dict(sections["spectrum"])
        rule = s.pop("rule", "")
        sargs = tuple(sorted(s.items()))
    opts = tuple(sorted(sections.get("options", {}).items()))
    return RunConfig(command, params, rule, sargs, opts, out)


def _echo_text(cfg: RunConfig) -> str:
    return serialize.config_dumps(sections_from_runconfig(cfg))


def parse_config_text(text: str) -> RunConfig:
    return runconfig_from_sections(serialize.config_loads(text))


# ---------------------------------------------------------------------------
# value parsing helpers


def _parse_bool(raw: str, name: str) -> bool:
    if raw in ("true", "false"):
        return raw == "true"
    raise ValidationError("option %s must be true or false, got %r" % (name, raw))


def _parse_int(raw: str, name: str) -> int:
    try:
        return int(raw)
    except ValueError as exc:
        raise ValidationError("option %s must be an integer, got %r" % (name, raw)) from exc


def _parse_float(raw: str, name: str) -> float:
    try:
        return float(raw)
    except ValueError as exc:
        raise ValidationError("option %s must be a number, got %r" % (name, raw)) from exc


def _parse_int_list(raw: str, name: str) -> list:
    if not raw.strip():
        raise ValidationError("option %s must list integers" % name)
    return [_parse_int(tok.strip(), name) for tok in raw.split(",")]


def _parse_float_list(raw: str, name: str) -> list:
    if not raw.strip():
        raise ValidationError("option %s must list numbers" % name)
    return [_parse_float(tok.strip(), name) for tok in raw.split(",")]


def _canon_number(raw: str, name: str) -> str:
    return serialize.fmt_float(_parse_float(raw, name))


def _canon_int(raw: str, name: str) -> str:
    return str(_parse_int(raw, name))


def _canon_number_list(raw: str, name: str) -> str:
    return ",".join(serialize.fmt_float(v) for v in _parse_float_list(raw, name))


def _canon_int_list(raw: str, name: str) -> str:
    return ",".join(str(v) for v in _parse_int_list(raw, name))


def _canon_bool(raw: str, name: str) -> str:
    raw = raw.strip().lower()
    if raw in ("true", "1", "yes", "on"):
        return "true"
    if raw in ("false", "0", "no", "off"):
        return "false"
    raise ValidationError("option %s must be true or false, got %r" % (name, raw))


_CANON = {
    "grid": _canon_int,
    "plot": _canon_bool,
    "indices": _canon_int_list,
    "delta": lambda raw, name: "" if raw == "" else _canon_number(raw, name),
    "lambdas": _canon_number_list,
    "n_max": _canon_int,
    "k_trial": _canon_int,
    "n_modes": _canon_int,
    "T": _canon_number,
    "M": _canon_int,
    "initial": lambda raw, name: raw,
    "fit_window": lambda raw, name: "" if raw == "" else _canon_number_list(raw, name),
    "fit_model": lambda raw, name: raw,
    "z_crosscheck": _canon_bool,
    "mus": _canon_number_list,
    "window": lambda raw, name: "" if raw == "" else _canon_number_list(raw, name),
    "list_presets": _canon_bool,
}


# ---------------------------------------------------------------------------
# argument parser


def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="thermosemi",
        description=(
            "Spectral toolkit for delayed thermoelastic coupled systems: "
            "region classification, resolvent witness certificates, "
            "imaginary-axis scans, time-domain energy decay, and "
            "characteristic-root estimates."
        ),
        epilog="THERMOSEMI_THREADS caps internal parallelism.",
    )
    sub = top.add_subparsers(dest="command", required=True)

    def add_common(p, with_model=True):
        p.add_argument("--config", help="config file; explicit flags override it")
        p.add_argument("--out", help="output directory (default .)")
        if with_model:
            p.add_argument("--preset", help="preset name: %s" % ", ".join(PRESET_NAMES))
            p.add_argument("--kind", help="system kind: %s" % ", ".join(k.value for k in SystemKind))
            p.add_argument("--beta", help="coupling exponent in [0, 1]")
            p.add_argument("--alpha", help="dissipation exponent in [0, 1]")
            p.add_argument("--a", help="damping coefficient")
            p.add_argument("--kappa", help="delayed thermal coefficient")
            p.add_argument("--tau", help="delay length")
            p.add_argument("--xi", help="history weight")
            p.add_argument("--spectrum", help="spectrum rule: power, string, plate, beam")
            p.add_argument("--coefficient", help="power rule: mu_n = coefficient * n**exponent")
            p.add_argument("--exponent", help="power rule exponent")
            p.add_argument("--length", help="beam length L")
            p.add_argument("--values", help="explicit eigenvalues, comma separated")

    p = sub.add_parser("region", help="classify the (beta, alpha) square")
    add_common(p, with_model=False)
    p.add_argument("--grid", help="points per side (default 101)")
    p.add_argument("--plot", action="store_true", default=None)

    p = sub.add_parser("witness", help="witness sweep certifying a resolvent lower bound")
    add_common(p)
    p.add_argument("--indices", help="mode indices, comma separated")
    p.add_argument("--delta", help="auxiliary exponent where the case admits one")
    p.add_argument("--plot", action="store_true", default=None)

    p = sub.add_parser("scan", help="resolvent norm lower bounds along the imaginary axis")
    add_common(p)
    p.add_argument("--lambdas", help="frequencies, comma separated")
    p.add_argument("--n-max", dest="n_max", help="modes per frequency (0 = auto)")
    p.add_argument("--k-trial", dest="k_trial", help="Fourier trial depth")
    p.add_argument("--plot", action="store_true", default=None)

    p = sub.add_parser("simulate", help="integrate a truncation and fit its decay")
    add_common(p)
    p.add_argument("--n-modes", dest="n_modes", help="number of modes")
    p.add_argument("--T", help="final time")
    p.add_argument("--M", help="steps per delay interval")
    p.add_argument("--initial", help="initial data: smooth, thermal, characteristic")
    p.add_argument("--fit-window", dest="fit_window", help="fit window t0,t1 (default T/2,T)")
    p.add_argument("--fit-model", dest="fit_model", help="exponential or polynomial")
    p.add_argument("--z-crosscheck", dest="z_crosscheck", action="store_true", default=None)
    p.add_argument("--plot", action="store_true", default=None)

    p = sub.add_parser("abscissa", help="rightmost characteristic roots per mode")
    add_common(p)
    p.add_argument("--mus", help="eigenvalues to probe, comma separated")
    p.add_argument("--window", help="real-part search window lo,hi")

    p = sub.add_parser("report", help="one-stop summary for a model or preset")
    add_common(p)
    p.add_argument("--list-presets", dest="list_presets", action="store_true", default=None)
    p.add_argument("--indices", help="witness indices for the report")
    p.add_argument("--mus", help="abscissa eigenvalues for the report")

    return top


# ---------------------------------------------------------------------------
# resolution: defaults <- config file <- flags


def _resolve(args: argparse.Namespace) -> RunConfig:
    command = args.command
    file_sections = {}
    if getattr(args, "config", None):
        with open(args.config, "r", encoding="utf-8") as fh:
            file_sections = serialize.config_loads(fh.read())
        file_cmd = file_sections.get("run", {}).get("command")
        if file_cmd and file_cmd != command:
            raise ValidationError(
                "config file is for command %r, invoked %r" % (file_cmd, command)
            )

    out = args.out or file_sections.get("run", {}).get("out") or "."

    # model parameters
    params = None
    rule, sargs = "", ()
    if command != "region":
        cfg_model = dict(file_sections.get("model", {}))
        cfg_spectrum = dict(file_sections.get("spectrum", {}))
        flag_model = {
            key: getattr(args, key)
            for key in _MODEL_KEYS
            if getattr(args, key, None) is not None
        }
        preset_name = getattr(args, "preset", None) or file_sections.get(
            "options", {}
        ).get("preset")
        need_model = not (
            command == "report" and _flag_or_cfg_bool(args, file_sections, "list_presets")
        )
        if preset_name:
            overrides = {}
            for key in ("beta", "alpha", "a", "kappa", "tau", "xi"):
                if key in flag_model:
                    overrides[key] = float(flag_model[key])
                elif key in cfg_model:
                    overrides[key] = float(cfg_model[key])
            pre_kw = {}
            if getattr(args, "length", None) is not None:
                pre_kw["L"] = float(args.length)
            if preset_name == "abstract-power":
                kind_raw = flag_model.get("kind") or cfg_model.get("kind")
                if kind_raw:
                    pre_kw["kind"] = kind_raw
                if getattr(args, "coefficient", None) is not None:
                    pre_kw["coefficient"] = float(args.coefficient)
                if getattr(args, "exponent", None) is not None:
                    pre_kw["exponent"] = float(args.exponent)
            built = preset(preset_name, **pre_kw, **overrides)
            params = built.params
            rule, sargs = _spectrum_descriptor_for_preset(preset_name, pre_kw)
        elif "kind" in flag_model or "kind" in cfg_model:
            merged = dict(cfg_model)
            merged.update(flag_model)
            params = ModelParams(
                kind=SystemKind.parse(merged["kind"]),
                beta=float(merged.get("beta", 0.5)),
                alpha=float(merged.get("alpha", 0.5)),
                a=float(merged.get("a", 1.0)),
                kappa=float(merged.get("kappa", 1.0)),
                tau=float(merged.get("tau", 1.0)),
                xi=float(merged.get("xi", 1.0)),
            )
        elif need_model:
            raise ValidationError("command %s needs --preset or --kind" % command)

        # explicit spectrum flags override the preset's descriptor
        srule = getattr(args, "spectrum", None) or cfg_spectrum.get("rule")
        svals = getattr(args, "values", None) or cfg_spectrum.get("values")
        if svals is not None and getattr(args, "spectrum", None) is None and srule in (None, "explicit"):
            srule = "explicit"
        if srule:
            if srule == "explicit":
                if svals is None:
                    raise ValidationError("explicit spectrum needs --values")
                rule = "explicit"
                sargs = (("values", _canon_number_list(svals, "values")),)
            elif srule == "power":
                co = getattr(args, "coefficient", None) or cfg_spectrum.get("coefficient", "1")
                ex = getattr(args, "exponent", None) or cfg_spectrum.get("exponent", "2")
                rule = "power"
                sargs = (
                    ("coefficient", _canon_number(co, "coefficient")),
                    ("exponent", _canon_number(ex, "exponent")),
                )
            elif srule in ("string", "plate"):
                rule, sargs = srule, ()
            elif srule == "beam":
                ln = getattr(args, "length", None) or cfg_spectrum.get("length", str(math.pi))
                rule = "beam"
                sargs = (("length", _canon_number(ln, "length")),)
            else:
                raise ValidationError("unknown spectrum rule %r" % srule)
        elif not rule and params is not None:
            rule = "power"
            sargs = (("coefficient", "1"), ("exponent", "2"))

    # command options
    opts = {}
    cfg_options = dict(file_sections.get("options", {}))
    cfg_options.pop("preset", None)
    for name, default in _OPTION_SPECS[command]:
        raw = getattr(args, name, None)
        if raw is None:
            raw = cfg_options.get(name, default)
        if isinstance(raw, bool):
            raw = "true" if raw else "false"
        opts[name] = _CANON[name](str(raw), name)
    if preset_used := (command != "region" and (getattr(args, "preset", None) or file_sections.get("options", {}).get("preset"))):
        opts["preset"] = preset_used

    options = tuple(sorted(opts.items()))
    return RunConfig(command, params, rule, sargs, options, out)


def _flag_or_cfg_bool(args, file_sections, name) -> bool:
    raw = getattr(args, name, None)
    if raw is not None:
        return bool(raw)
    return file_sections.get("options", {}).get(name, "false") == "true"


def _spectrum_descriptor_for_preset(name: str, pre_kw: dict):
    if name == "plate-1d":
        return "plate", ()
    if name == "string":
        return "string", ()
    if name == "beam":
        length = pre_kw.get("L", math.pi)
        return "beam", (("length", serialize.fmt_float(length)),)
    co = pre_kw.get("coefficient", 1.0)
    ex = pre_kw.get("exponent", 2.0)
    return "power", (
        ("coefficient", serialize.fmt_float(co)),
        ("exponent", serialize.fmt_float(ex)),
    )


def _spectrum_from_config(cfg: RunConfig):
    if not cfg.spectrum_rule:
        raise ValidationError("no spectrum specified")
    table = dict(cfg.spectrum_args)
    if cfg.spectrum_rule == "explicit":
        vals = _parse_float_list(table["values"], "values")
        return make_spectrum(vals)
    kwargs = {}
    if cfg.spectrum_rule == "power":
        kwargs["coefficient"] = float(table["coefficient"])
        kwargs["exponent"] = float(table["exponent"])
    if cfg.spectrum_rule == "beam":
        kwargs["length"] = float(table["length"])
    return make_spectrum(cfg.spectrum_rule, **kwargs)


# ---------------------------------------------------------------------------
# artifact helpers


def _write(out_dir: str, name: str, text: str) -> str:
    os.makedirs(out_dir, exist_ok=True)
    path = os.path.join(out_dir, name)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    return path


def _emit_echo(cfg: RunConfig) -> None:
    _write(cfg.out, "config-echo.cfg", _echo_text(cfg))


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    matplotlib.rcParams["svg.hashsalt"] = "thermosemi"
    import matplotlib.pyplot as plt

    return plt


def _save_svg(fig, out_dir: str, name: str) -> None:
    os.makedirs(out_dir, exist_ok=True)
    fig.savefig(
        os.path.join(out_dir, name), format="svg", metadata={"Date": None}
    )


# ---------------------------------------------------------------------------
# dispatchers


def _run_region(cfg: RunConfig) -> int:
    opts = dict(cfg.options)
    grid = _parse_int(opts["grid"], "grid")
    labels = region_grid(grid)
    _write(cfg.out, "region.csv", serialize.region_csv(labels))
    _emit_echo(cfg)
    counts = {}
    for lab in labels:
        counts[lab.r_class] = counts.get(lab.r_class, 0) + 1
    print("region grid %dx%d -> region.csv (%d rows)" % (grid, grid, len(labels)))
    for name in sorted(counts):
        print("  %s: %d points" % (name, counts[name]))
    if opts["plot"] == "true":
        _plot_region(cfg, labels, grid)
    return 0


def _plot_region(cfg: RunConfig, labels, grid: int) -> None:
    plt = _pyplot()
    order = sorted({lab.r_class for lab in labels})
    index = {name: i for i, name in enumerate(order)}
    img = np.zeros((grid, grid))
    for k, lab in enumerate(labels):
        img[k // grid, k % grid] = index[lab.r_class]
    fig, ax = plt.subplots(figsize=(6, 5))
    im = ax.imshow(
        img, origin="lower", extent=(0, 1, 0, 1), cmap="viridis", aspect="auto"
    )
    cbar = fig.colorbar(im, ax=ax, ticks=range(len(order)))
    cbar.ax.set_yticklabels(order)
    ax.set_xlabel("alpha")
    ax.set_ylabel("beta")
    ax.set_title("stability classes over (beta, alpha)")
    _save_svg(fig, cfg.out, "region.svg")
    plt.close(fig)


def _run_witness(cfg: RunConfig) -> int:
    opts = dict(cfg.options)
    indices = _parse_int_list(opts["indices"], "indices")
    delta = None if opts["delta"] == "" else float(opts["delta"])
    spectrum = _spectrum_from_config(cfg)
    sweep = witness_sweep(cfg.params, spectrum, indices, delta=delta)
    _write(cfg.out, "witness.csv", serialize.witness_csv(sweep.rows))
    _write(cfg.out, "witness-summary.json", serialize.witness_summary_json(sweep))
    _emit_echo(cfg)
    for row in sweep.rows:
        print(
            "n=%d mu=%.6g lambda=%.6g ratio=%.9g residual=%.3g"
            % (row.n, row.mu, row.lam, row.ratio, row.residual)
        )
    print("limit estimate: %.9g (certified: %s)" % (sweep.limit_estimate, sweep.certified))
    print(sweep.conclusion)
    if opts["plot"] == "true":
        plt = _pyplot()
        fig, ax = plt.subplots(figsize=(6, 4))
        ax.semilogx([r.n for r in sweep.rows], [r.ratio for r in sweep.rows], "o-")
        ax.axhline(sweep.limit_estimate, color="gray", linestyle="--")
        ax.set_xlabel("mode index n")
        ax.set_ylabel("|U| / |F|")
        ax.set_title("witness ratio against mode index")
        _save_svg(fig, cfg.out, "witness.svg")
        plt.close(fig)
    return 0


def _auto_n_max(spectrum, lam_max: float) -> int:
    target = 4.0 * lam_max * lam_max
    n = 8
    while spectrum.mu(n) < target and n < 50000:
        n *= 2
    lo, hi = n // 2, min(n, 50000)
    while lo < hi:
        mid = (lo + hi) // 2
        if spectrum.mu(mid) < target:
            lo = mid + 1
        else:
            hi = mid
    return min(max(lo, 8), 50000)


def _run_scan(cfg: RunConfig) -> int:
    opts = dict(cfg.options)
    lambdas = _parse_float_list(opts["lambdas"], "lambdas")
    spectrum = _spectrum_from_config(cfg)
    n_max = _parse_int(opts["n_max"], "n_max")
    if n_max <= 0:
        if spectrum.explicit is not None:
            n_max = len(spectrum.explicit)
        else:
            n_max = _auto_n_max(spectrum, max(lambdas))
    k_trial = _parse_int(opts["k_trial"], "k_trial")
    rows = resolvent_scan(cfg.params, spectrum, lambdas, n_max, k_trial=k_trial)
    _write(cfg.out, "scan.csv", serialize.scan_csv(rows))
    _emit_echo(cfg)
    for row in rows:
        print(
            "lambda=%.6g sup_lb=%.9g argmax_n=%d skipped=%d"
            % (row.lam, row.sup_lb, row.argmax_n, len(row.skipped_modes))
        )
    if opts["plot"] == "true":
        plt = _pyplot()
        fig, ax = plt.subplots(figsize=(6, 4))
        ax.loglog([r.lam for r in rows], [r.sup_lb for r in rows], "o-")
        ax.set_xlabel("lambda")
        ax.set_ylabel("resolvent norm lower bound")
        ax.set_title("imaginary-axis scan")
        _save_svg(fig, cfg.out, "scan.svg")
        plt.close(fig)
    return 0


def _initial_data(name: str, params: ModelParams, spectrum, n_modes: int):
    ns = np.arange(1, n_modes + 1, dtype=float)
    if name == "smooth":
        u0 = 1.0 / ns**2
        v0 = np.zeros(n_modes)
        th0 = np.where(np.arange(n_modes) % 2 == 0, 1.0, -1.0) / ns**2
        return dynamics.InitialData(u0, v0, th0)
    if name == "thermal":
        zero = np.zeros(n_modes)
        return dynamics.InitialData(zero, zero, 1.0 / ns)
    if name == "characteristic":
        return dynamics.characteristic_initial(params, spectrum, n_modes)
    raise ValidationError(
        "initial must be smooth, thermal, or characteristic; got %r" % name
    )


def _hypothesis_note(params: ModelParams) -> str:
    if params.kind is SystemKind.NO_DELAY_BASELINE:
        return "ok"
    try:
        interval = xi_admissible(params)
    except AdmissibilityError as exc:
        return "hypothesis unmet: %s" % exc
    if not interval.contains(params.xi):
        return (
            "hypothesis unmet: xi=%g outside the admissible interval %s"
            % (params.xi, interval.describe())
        )
    return "ok"


def _run_simulate(cfg: RunConfig) -> int:
    opts = dict(cfg.options)
    n_modes = _parse_int(opts["n_modes"], "n_modes")
    T = _parse_float(opts["T"], "T")
    M = _parse_int(opts["M"], "M")
    spectrum = _spectrum_from_config(cfg)
    initial = _initial_data(opts["initial"], cfg.params, spectrum, n_modes)
    traj = dynamics.simulate(
        cfg.params,
        spectrum,
        n_modes,
        initial,
        T,
        M=M,
        z_crosscheck=opts["z_crosscheck"] == "true",
    )
    _write(cfg.out, "trajectory.csv", serialize.trajectory_csv(traj))
    note = _hypothesis_note(cfg.params)
    fit_err = None
    fit = None
    if opts["fit_window"] == "":
        window = (T / 2.0, T)
    else:
        pair = _parse_float_list(opts["fit_window"], "fit_window")
        if len(pair) != 2:
            raise ValidationError("fit_window must be two numbers t0,t1")
        window = (pair[0], pair[1])
    try:
        fit = dynamics.fit_decay(traj, window, model=opts["fit_model"])
        _write(cfg.out, "decay-fit.json", serialize.decay_fit_json(fit))
    except NumericalError as exc:
        fit_err = str(exc)
    summary = {
        "n_modes": n_modes,
        "T": T,
        "M": M,
        "m_eff": traj.m_eff,
        "initial": opts["initial"],
        "stability_hypothesis": note,
        "final_energy": float(traj.total_energy[-1]),
        "fit": None
        if fit is None
        else {
            "model": fit.model,
            "rate": fit.rate,
            "fit_quality": fit.fit_quality,
            "quality_defined": fit.quality_defined,
            "window": list(fit.window),
        },
        "fit_error": fit_err,
        "caveat": (
            fit.caveat
            if fit is not None
            else "rates describe the truncated %d-mode system only" % n_modes
        ),
    }
    _write(cfg.out, "simulate.json", serialize.json_dumps(summary))
    _emit_echo(cfg)
    print(
        "simulated %d modes to T=%g with %d steps per block (m_eff=%d)"
        % (n_modes, T, M, traj.m_eff)
    )
    print("stability hypothesis: %s" % note)
    if fit is not None:
        print(
            "decay fit (%s) on [%g, %g]: rate=%.6g quality=%s"
            % (
                fit.model,
                fit.window[0],
                fit.window[1],
                fit.rate,
                "%.4f" % fit.fit_quality if fit.quality_defined else "undefined",
            )
        )
        print("note: %s" % fit.caveat)
    else:
        print("decay fit unavailable: %s" % fit_err)
    if opts["plot"] == "true":
        plt = _pyplot()
        fig, ax = plt.subplots(figsize=(6, 4))
        ax.semilogy(traj.times, np.maximum(traj.total_energy, 1e-300))
        ax.set_xlabel("t")
        ax.set_ylabel("total energy")
        ax.set_title("energy decay, %d modes" % n_modes)
        _save_svg(fig, cfg.out, "energy.svg")
        plt.close(fig)
    return 0


def _run_abscissa(cfg: RunConfig) -> int:
    opts = dict(cfg.options)
    mus = _parse_float_list(opts["mus"], "mus")
    window = None
    if opts["window"]:
        pair = _parse_float_list(opts["window"], "window")
        if len(pair) != 2:
            raise ValidationError("window must be two numbers lo,hi")
        window = (pair[0], pair[1])
    entries = []
    print("mu, spectral abscissa")
    for mu in mus:
        value, diag = spectral_abscissa_estimate(
            cfg.params, mu, window=window, with_diagnostics=True
        )
        entries.append(
            {
                "mu": mu,
                "abscissa": value,
                "root": diag["root"],
                "residual": diag["residual"],
                "window": diag["window"],
                "imag_cap": diag["imag_cap"],
                "rectangles": diag["rectangles"],
            }
        )
        print("%.6g, %.10g" % (mu, value))
    payload = {"entries": entries, "caveat": _TRUNCATION_CAVEAT}
    _write(cfg.out, "abscissa.json", serialize.json_dumps(payload))
    _emit_echo(cfg)
    print("note: %s" % _TRUNCATION_CAVEAT)
    return 0


def _run_report(cfg: RunConfig) -> int:
    opts = dict(cfg.options)
    if opts["list_presets"] == "true":
        for name in PRESET_NAMES:
            print("preset %s" % name)
            if name == "abstract-power":
                print("  # requires --kind; spectrum mu_n = coefficient * n**exponent")
                print("")
                continue
            built = preset(name)
            rule, sargs = _spectrum_descriptor_for_preset(name, {})
            spectrum_sec = {"rule": rule}
            spectrum_sec.update(dict(sargs))
            sections = {
                "model": {
                    "kind": built.params.kind.value,
                    "beta": serialize.fmt_float(built.params.beta),
                    "alpha": serialize.fmt_float(built.params.alpha),
                    "a": serialize.fmt_float(built.params.a),
                    "kappa": serialize.fmt_float(built.params.kappa),
                    "tau": serialize.fmt_float(built.params.tau),
                    "xi": serialize.fmt_float(built.params.xi),
                },
                "spectrum": spectrum_sec,
            }
            text = serialize.config_dumps(sections)
            for line in text.splitlines():
                print("  " + line if line else "")
            print("  # %s" % built.notes)
            print("")
        return 0

    params = cfg.params
    label = classify_region(params.beta, params.alpha)
    report = {
        "model": dict(sections_from_runconfig(cfg).get("model", {})),
        "spectrum": dict(dict(cfg.spectrum_args), rule=cfg.spectrum_rule),
        "region": {
            "s_class": label.s_class,
            "r_class": label.r_class,
            "in_q": label.in_q,
            "expected_regularity": label.expected_regularity,
            "expected_stability": label.expected_stability,
        },
    }
    try:
        interval = xi_admissible(params)
        report["xi_admissible"] = interval.describe()
        report["xi_ok"] = interval.contains(params.xi)
    except AdmissibilityError as exc:
        report["xi_admissible"] = "undefined: %s" % exc
        report["xi_ok"] = False

    spectrum = _spectrum_from_config(cfg)
    indices = _parse_int_list(opts["indices"], "indices")
    try:
        sweep = witness_sweep(params, spectrum, indices)
        report["witness"] = {
            "limit_estimate": sweep.limit_estimate,
            "certified": sweep.certified,
            "criterion": sweep.criterion,
            "ratios": [r.ratio for r in sweep.rows],
        }
    except (UnsupportedCaseError, ValidationError, NumericalError) as exc:
        report["witness"] = {"unavailable": str(exc)}

    mus = _parse_float_list(opts["mus"], "mus")
    absc = []
    for mu in mus:
        try:
            absc.append({"mu": mu, "abscissa": spectral_abscissa_estimate(params, mu)})
        except NumericalError as exc:
            absc.append({"mu": mu, "error": str(exc)})
    report["abscissa"] = absc
    report["abscissa_caveat"] = _TRUNCATION_CAVEAT

    _write(cfg.out, "report.json", serialize.json_dumps(report))
    _emit_echo(cfg)
    print("region: %s / %s (in Q: %s)" % (label.s_class, label.r_class, label.in_q))
    print("admissible xi: %s" % report["xi_admissible"])
    if "limit_estimate" in report["witness"]:
        print(
            "witness limit: %.9g (certified: %s)"
            % (report["witness"]["limit_estimate"], report["witness"]["certified"])
        )
    else:
        print("witness: %s" % report["witness"]["unavailable"])
    for row in absc:
        if "abscissa" in row:
            print("abscissa(mu=%.6g) = %.10g" % (row["mu"], row["abscissa"]))
        else:
            print("abscissa(mu=%.6g) failed: %s" % (row["mu"], row["error"]))
    print("report written to %s" % os.path.join(cfg.out, "report.json"))
    return 0


_DISPATCH = {
    "region": _run_region,
    "witness": _run_witness,
    "scan": _run_scan,
    "simulate": _run_simulate,
    "abscissa": _run_abscissa,
    "report": _run_report,
}


def run(cfg: RunConfig) -> int:
    """Execute a resolved RunConfig; returns the process exit status."""
    return _DISPATCH[cfg.command](cfg)


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _resolve(args)
        return run(cfg)
    except ValidationError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    except NumericalError as exc:
        print("numerical error: %s" % exc, file=sys.stderr)
        return 3
    except ThermosemiError as exc:  # pragma: no cover - base-class safety net
        print("error: %s" % exc, file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
