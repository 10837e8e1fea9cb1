"""Command-line front end.

Subcommands: ``analyze`` (Table-style 1-norm reports), ``shift`` (optimize
a shift and print the summary), ``export`` (optimize and write the shifted
Hamiltonian + sidecar), ``scaling`` (log-log 1-norm scaling fit over a file
series) and ``fit`` (regression protocols on explicit data).

Exit codes: 0 full success, 1 partial failure (some molecule rows failed),
2 configuration error.
"""

from __future__ import annotations

import json
import pathlib
import sys

import click

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .fcidump import load_fcidump
from .fitting import proportional_fit, scaling_fit
from .norms import pauli_one_norm
from .report import (
    ConfigError,
    METHODS,
    RunConfig,
    SHIFTS,
    export_shift_result,
    render_report,
    run_analysis,
)
from .shift import optimize_bliss, optimize_symmetry_shift


def _comma_list(value, allowed, label):
    items = tuple(part.strip().lower() for part in value.split(",") if part.strip())
    for item in items:
        if item not in allowed:
            raise click.UsageError(f"unknown {label} {item!r}; choose from {', '.join(allowed)}")
    if not items:
        raise click.UsageError(f"{label} list is empty")
    return items


@click.group()
def main():
    """Symmetry-shift preprocessing and LCU 1-norm analysis for molecular
    Hamiltonians in FCIDUMP form."""


def _merge_config_file(ctx, config_path, values):
    """Use TOML entries as defaults for parameters not given on the line."""
    try:
        with open(config_path, "rb") as handle:
            data = tomllib.load(handle)
    except tomllib.TOMLDecodeError as exc:
        raise click.UsageError(f"could not parse {config_path}: {exc}") from exc
    from click.core import ParameterSource

    def listy(value):
        return ",".join(value) if isinstance(value, list) else value

    mapping = {
        "input": ("inputs", lambda v: tuple(v) if isinstance(v, list) else (v,)),
        "nelec": ("nelec", int),
        "methods": ("methods", listy),
        "shifts": ("shifts", listy),
        "cutoff": ("cutoff", float),
        "seed": ("seed", int),
        "format": ("output_format", str),
        "jobs": ("jobs", int),
        "no_spectra": ("no_spectra", bool),
        "out": ("out", str),
    }
    for key, value in data.items():
        if key not in mapping:
            raise click.UsageError(f"unknown config key {key!r} in {config_path}")
        name, convert = mapping[key]
        if ctx.get_parameter_source(name) != ParameterSource.COMMANDLINE:
            values[name] = convert(value)
    return values


@main.command()
@click.option("--input", "inputs", multiple=True,
              type=click.Path(exists=True, dir_okay=False), help="FCIDUMP files.")
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False),
              default=None,
              help="TOML file supplying defaults for any of the flags below.")
@click.option("--nelec", type=int, default=None,
              help="Override the electron count from the file header.")
@click.option("--methods", default="pauli,ac,df", show_default=True,
              help=f"Comma list from: {','.join(METHODS)}.")
@click.option("--shifts", default="none,s,t", show_default=True,
              help=f"Comma list from: {','.join(SHIFTS)}.")
@click.option("--cutoff", type=float, default=1e-6, show_default=True,
              help="Coefficient cutoff for unitary counting.")
@click.option("--seed", type=int, default=0, show_default=True,
              help="Seed for the stochastic fragment fits.")
@click.option("--format", "output_format", default="json", show_default=True,
              type=click.Choice(["json", "csv", "markdown"]))
@click.option("--jobs", type=int, default=1, show_default=True,
              help="Molecules processed in parallel.")
@click.option("--no-spectra", is_flag=True, default=False,
              help="Skip exact spectral ranges even when sizes permit.")
@click.option("--out", type=click.Path(dir_okay=False), default=None,
              help="Write the report here instead of stdout.")
@click.pass_context
def analyze(ctx, inputs, config_path, nelec, methods, shifts, cutoff, seed,
            output_format, jobs, no_spectra, out):
    """Compute 1-norms, unitary counts and spectral ranges per molecule."""
    values = {
        "inputs": tuple(inputs), "nelec": nelec, "methods": methods,
        "shifts": shifts, "cutoff": cutoff, "seed": seed,
        "output_format": output_format, "jobs": jobs,
        "no_spectra": no_spectra, "out": out,
    }
    if config_path:
        values = _merge_config_file(ctx, config_path, values)
    if not values["inputs"]:
        raise click.UsageError("no input files given (use --input or a config file)")
    for path in values["inputs"]:
        if not pathlib.Path(path).is_file():
            raise click.UsageError(f"input file {path!r} does not exist")
    try:
        cfg = RunConfig(
            input_paths=tuple(str(p) for p in values["inputs"]),
            n_elec_override=values["nelec"],
            methods=_comma_list(values["methods"], METHODS, "method"),
            shifts=_comma_list(values["shifts"], SHIFTS, "shift"),
            cutoff=values["cutoff"],
            seed=values["seed"],
            output_format=values["output_format"],
            jobs=values["jobs"],
            compute_spectra=not values["no_spectra"],
        )
    except ConfigError as exc:
        raise click.UsageError(str(exc)) from exc
    output_format = cfg.output_format
    out = values["out"]
    report = run_analysis(cfg)
    text = render_report(report, output_format)
    if out:
        pathlib.Path(out).write_text(text)
        click.echo(f"wrote {out}")
    else:
        click.echo(text, nl=False)
    if not report["ok"]:
        sys.exit(1)


def _run_shift(path, nelec, kind, method):
    H = load_fcidump(path)
    optimizer = optimize_symmetry_shift if kind == "s" else optimize_bliss
    return H, optimizer(H, n_elec=nelec, method=method)


_SHIFT_OPTIONS = (
    click.option("--input", "path", required=True,
                 type=click.Path(exists=True, dir_okay=False)),
    click.option("--nelec", type=int, default=None,
                 help="Target electron sector (default: file header)."),
    click.option("--kind", type=click.Choice(["s", "t"]), default="t",
                 show_default=True, help="s: symmetry polynomial only; t: full shift."),
    click.option("--method", type=click.Choice(["lp", "bfgs"]), default="lp",
                 show_default=True),
)


def _with_shift_options(func):
    for option in reversed(_SHIFT_OPTIONS):
        func = option(func)
    return func


@main.command()
@_with_shift_options
@click.option("--out", type=click.Path(dir_okay=False), default=None,
              help="Also export the shifted Hamiltonian to this path.")
def shift(path, nelec, kind, method, out):
    """Optimize a shift and print the norm summary as JSON."""
    _, result = _run_shift(path, nelec, kind, method)
    summary = {
        "input": str(path),
        "kind": kind,
        "n_elec": result.params.n_elec,
        "norm_before": result.norm_before,
        "norm_after": result.norm_after,
        "kappa1": result.params.kappa1,
        "kappa2": result.params.kappa2,
        "converged": result.converged,
    }
    if out:
        fcidump_path, sidecar_path = export_shift_result(result, out)
        summary["fcidump"] = fcidump_path
        summary["sidecar"] = sidecar_path
    click.echo(json.dumps(summary, indent=2, sort_keys=True))


@main.command()
@_with_shift_options
@click.option("--out", type=click.Path(dir_okay=False), required=True,
              help="Output FCIDUMP path; the JSON sidecar sits next to it.")
def export(path, nelec, kind, method, out):
    """Optimize a shift and write the shifted Hamiltonian + sidecar."""
    _, result = _run_shift(path, nelec, kind, method)
    fcidump_path, sidecar_path = export_shift_result(result, out)
    click.echo(f"wrote {fcidump_path} and {sidecar_path}")


@main.command()
@click.option("--input", "inputs", multiple=True, required=True,
              type=click.Path(exists=True, dir_okay=False),
              help="FCIDUMP series, one file per system size.")
@click.option("--method", type=click.Choice(["pauli"]), default="pauli", show_default=True)
@click.option("--shift", "shift_kind", type=click.Choice(["none", "s", "t"]),
              default="none", show_default=True)
@click.option("--nelec", type=int, default=None)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def scaling(inputs, method, shift_kind, nelec, out):
    """Fit log10(1-norm) against log10(system size) across a file series."""
    sizes = []
    norms = []
    for path in inputs:
        H = load_fcidump(path)
        if shift_kind != "none":
            optimizer = optimize_symmetry_shift if shift_kind == "s" else optimize_bliss
            H = optimizer(H, n_elec=nelec).shifted
        sizes.append(H.n_orbitals)
        norms.append(pauli_one_norm(H))
    fit = scaling_fit(sizes, norms)
    payload = {
        "method": method,
        "shift": shift_kind,
        "sizes": sizes,
        "one_norms": norms,
        "alpha": fit.slope,
        "beta": fit.intercept,
        "stderr": fit.stderr,
        "r_squared": fit.r_squared,
    }
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if out:
        pathlib.Path(out).write_text(text)
        click.echo(f"wrote {out}")
    else:
        click.echo(text, nl=False)


@main.command()
@click.option("--x", "xs", required=True, help="Comma-separated x values.")
@click.option("--y", "ys", required=True, help="Comma-separated y values.")
@click.option("--kind", type=click.Choice(["proportional", "loglog"]),
              default="proportional", show_default=True)
def fit(xs, ys, kind):
    """Regression protocols on explicit data points."""
    try:
        x_values = [float(v) for v in xs.split(",") if v.strip()]
        y_values = [float(v) for v in ys.split(",") if v.strip()]
    except ValueError as exc:
        raise click.UsageError(f"could not parse data: {exc}") from exc
    try:
        if kind == "proportional":
            result = proportional_fit(x_values, y_values)
        else:
            result = scaling_fit(x_values, y_values)
    except ValueError as exc:
        raise click.UsageError(str(exc)) from exc
    payload = {"kind": kind, "slope": result.slope, "stderr": result.stderr}
    if result.intercept is not None:
        payload["intercept"] = result.intercept
    if result.r_squared is not None:
        payload["r_squared"] = result.r_squared
    click.echo(json.dumps(payload, indent=2, sort_keys=True))


if __name__ == "__main__":
    main()
