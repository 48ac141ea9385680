"""Command-line front end.

Four subcommands: ``curve`` evaluates one measure curve N(t, tau) and
writes it as CSV (optionally with an SVG chart), ``fig`` renders the
preset parameter sweeps behind the three figure datasets, ``localized``
reports the bound-mode parameters for a given coupling, and ``validate``
runs the cross-oracle suite.

CSV format: ASCII, comma separated, 9 significant digits, LF endings,
'#'-prefixed header comments.  The header echoes every resolved parameter
(a RunRecord) so that a run can be replayed from its own output via
``--record``; only the timestamp line varies between identical runs.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from datetime import datetime, timezone
from typing import Dict, List, Optional, Sequence

import numpy as np

from . import __version__, measure, spectral, svgchart, validation
from .correlators import InitialState
from .errors import NonMarkovError
from .fluctuation import FluctuationTable
from .propagator import TimeGrid, solve_u_volterra
from .spectral import KB_OVER_HBAR, SpectralDensity

__all__ = ["main"]

_COLUMNS = "# tau*omega0,re_gE,im_gE,re_gM,im_gM,N"
_STEPS_PER_UNIT = 80


@dataclass(frozen=True)
class CurveParams:
    """Fully resolved parameters of one curve run."""

    s: float
    eta: float
    omega_c: float
    temp_k: float
    n0: float
    t: float
    tau_max: float
    points: int
    nprime: bool
    omega0_ghz: float
    kb_over_hbar: float
    time_stride: int = 1

    def bath(self) -> spectral.BathSpec:
        return spectral.bath_from_kelvin(
            self.temp_k, 2.0 * math.pi * self.omega0_ghz * 1e9, self.kb_over_hbar
        )

    def spectrum(self) -> SpectralDensity:
        return SpectralDensity(s=self.s, eta=self.eta, omega_c=self.omega_c)


@dataclass(frozen=True)
class CurveData:
    tau: np.ndarray
    g_exact: np.ndarray
    g_markov: np.ndarray
    n_value: np.ndarray
    nprime: Optional[np.ndarray]


def _compute_curve(params: CurveParams) -> CurveData:
    """Evaluate the curve on a grid fine enough for the integrator and
    subsample it to ``points + 1`` output rows."""
    dt_out = params.tau_max / params.points
    sub = max(params.time_stride, int(math.ceil(_STEPS_PER_UNIT * dt_out)))
    sub -= sub % params.time_stride
    dt = dt_out / sub

    kt = int(round(params.t / dt))
    kt -= kt % params.time_stride
    n_steps = kt + params.points * sub
    t_snap = kt * dt

    sd = params.spectrum()
    bath = params.bath()
    ptable = solve_u_volterra(sd, TimeGrid(t_max=n_steps * dt, n_steps=n_steps))
    flt = FluctuationTable(sd, bath, ptable, time_stride=params.time_stride)
    state = InitialState(n0=params.n0)
    curve = measure.non_markovianity(sd, bath, state, ptable, flt, t_snap)

    out = slice(None, None, sub // params.time_stride)
    nprime = None
    if params.nprime:
        nprime = measure.ratio_measure(state, ptable, flt, t_snap).values[out]
    return CurveData(
        tau=curve.tau[out],
        g_exact=curve.g_exact[out],
        g_markov=curve.g_markov[out],
        n_value=curve.n_value[out],
        nprime=nprime,
    )


def _record_lines(params: CurveParams, elapsed: float) -> List[str]:
    """RunRecord header comments; only the 'generated' line is run-varying."""
    stamp = datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")
    eta_c = spectral.critical_coupling(params.spectrum())
    # parameters are echoed at full precision (repr) so that feeding them
    # back through --record reproduces the run byte for byte
    lines = [
        f"# nonmarkov {__version__}",
        f"# generated: {stamp} (elapsed {elapsed:.1f} s)",
        f"# s: {params.s!r}",
        f"# eta: {params.eta!r}",
        f"# omega_c: {params.omega_c!r}",
        f"# temp_k: {params.temp_k!r}",
        f"# n0: {params.n0!r}",
        f"# t: {params.t!r}",
        f"# tau_max: {params.tau_max!r}",
        f"# points: {params.points}",
        f"# nprime: {int(params.nprime)}",
        f"# omega0_ghz: {params.omega0_ghz!r}",
        f"# kb_over_hbar: {params.kb_over_hbar!r}",
        f"# derived eta_c: {eta_c:.9g}",
        f"# derived theta: {params.bath().theta:.9g}",
    ]
    return lines


def _write_curve_csv(
    path: str, params: CurveParams, data: CurveData, elapsed: float
) -> None:
    columns = [
        data.tau,
        data.g_exact.real,
        data.g_exact.imag,
        data.g_markov.real,
        data.g_markov.imag,
        data.n_value,
    ]
    header = _COLUMNS
    if data.nprime is not None:
        columns.append(data.nprime)
        header += ",Nprime"
    table = np.column_stack(columns)
    if not np.all(np.isfinite(table)):
        raise NonMarkovError(f"non-finite value in curve output for {path}")
    rows = [",".join("%.9g" % x for x in row) for row in table]
    body = "\n".join(_record_lines(params, elapsed) + [header] + rows) + "\n"
    with open(path, "w", newline="\n") as fh:
        fh.write(body)


def _write_curve_svg(path: str, data: CurveData, title: str) -> None:
    series = [svgchart.Series(label="N", x=data.tau, y=data.n_value)]
    if data.nprime is not None:
        series.append(svgchart.Series(label="N'", x=data.tau, y=data.nprime))
    svgchart.write_chart(
        path, series, title=title, x_label="tau * omega0", y_label="measure"
    )


def _parse_record(path: str) -> Dict[str, str]:
    values: Dict[str, str] = {}
    with open(path) as fh:
        for line in fh:
            if not line.startswith("#"):
                break
            text = line[1:].strip()
            if ":" not in text:
                continue
            key, _, val = text.partition(":")
            values[key.strip()] = val.strip().split()[0] if val.strip() else ""
    return values


def _params_from_record(path: str, nprime: bool) -> CurveParams:
    rec = _parse_record(path)
    try:
        return CurveParams(
            s=float(rec["s"]),
            eta=float(rec["eta"]),
            omega_c=float(rec["omega_c"]),
            temp_k=float(rec["temp_k"]),
            n0=float(rec["n0"]),
            t=float(rec["t"]),
            tau_max=float(rec["tau_max"]),
            points=int(rec["points"]),
            nprime=nprime or bool(int(rec.get("nprime", "0"))),
            omega0_ghz=float(rec["omega0_ghz"]),
            kb_over_hbar=float(rec["kb_over_hbar"]),
        )
    except KeyError as exc:
        raise NonMarkovError(f"record {path} is missing field {exc}") from exc


def _resolve_eta(parser: argparse.ArgumentParser, args) -> float:
    if args.eta is not None and args.eta_rel is not None:
        parser.error("--eta and --eta-rel are mutually exclusive")
    sd = SpectralDensity(s=args.s, eta=1.0, omega_c=args.omega_c)
    if args.eta is not None:
        return args.eta
    rel = 0.5 if args.eta_rel is None else args.eta_rel
    return rel * spectral.critical_coupling(sd)


def _add_model_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--s", type=float, default=1.0, help="Ohmicity exponent")
    p.add_argument(
        "--eta-rel",
        type=float,
        default=None,
        help="coupling in units of the critical coupling eta_c (default 0.5)",
    )
    p.add_argument(
        "--eta", type=float, default=None, help="absolute coupling strength"
    )
    p.add_argument(
        "--omega-c",
        type=float,
        default=5.0,
        help="spectral cutoff in units of omega0",
    )


def _add_unit_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument(
        "--omega0-ghz",
        type=float,
        default=10.0,
        help="system frequency in GHz, used only to convert Kelvin",
    )
    p.add_argument(
        "--kb-over-hbar",
        type=float,
        default=KB_OVER_HBAR,
        help="k_B/hbar in rad/s/K",
    )


def cmd_curve(parser: argparse.ArgumentParser, args) -> int:
    if args.record is not None:
        params = _params_from_record(args.record, args.nprime)
    else:
        if args.points < 1:
            parser.error("--points must be positive")
        if args.tau_max <= 0.0:
            parser.error("--tau-max must be positive")
        params = CurveParams(
            s=args.s,
            eta=_resolve_eta(parser, args),
            omega_c=args.omega_c,
            temp_k=args.temp_k,
            n0=args.n0,
            t=args.t,
            tau_max=args.tau_max,
            points=args.points,
            nprime=args.nprime,
            omega0_ghz=args.omega0_ghz,
            kb_over_hbar=args.kb_over_hbar,
        )
    start = time.time()
    data = _compute_curve(params)
    _write_curve_csv(args.out, params, data, time.time() - start)
    if args.svg is not None:
        _write_curve_svg(
            args.svg,
            data,
            f"s = {params.s:g}, eta = {params.eta:g}, T = {params.temp_k:g} K",
        )
    return 0


# Figure presets: (figure id) -> panels of (label, s, tau_max) and the
# swept axis with its values.  Base point: T = 0.5 K, n0 = 1, t = 0.
_FIG_EXPONENTS = (0.5, 1.0, 2.0, 3.0)
_FIG_AXES = {
    1: ("coupling_rel", (0.1, 0.5, 1.0, 1.2, 1.5)),
    2: ("temperature", (0.05, 0.5, 5.0)),
    3: ("initial_occupation", (1.0, 10.0, 50.0)),
}


def _fig_panels(fig_id: int) -> List[dict]:
    """One entry per (panel, curve): resolved CurveParams plus file label."""
    axis, values = _FIG_AXES[fig_id]
    panels = []
    if fig_id == 1:
        combos = [(s, None) for s in _FIG_EXPONENTS]
    else:
        combos = [(s, rel) for s in _FIG_EXPONENTS for rel in (0.5, 1.5)]
    for i, (s, rel) in enumerate(combos):
        letter = "abcdefgh"[i]
        # the s = 3 coupling sweep develops its plateau very slowly; give
        # that panel a longer horizon on a strided fluctuation grid
        long_run = fig_id == 1 and s == 3.0
        panels.append(
            {
                "panel": letter,
                "s": s,
                "rel": rel,
                "axis": axis,
                "values": values,
                "tau_max": 1000.0 if long_run else 200.0,
                "time_stride": 4 if long_run else 1,
            }
        )
    return panels


def _curve_label(axis: str, value: float) -> str:
    if axis == "coupling_rel":
        return f"eta{value:g}"
    if axis == "temperature":
        return f"T{value:g}K"
    return f"n0{value:g}"


def _render_panel(task: dict) -> List[str]:
    """Compute one panel (all curves, shared tables) and write its files."""
    fig_id = task["fig_id"]
    outdir = task["outdir"]
    panel = task["panel"]
    axis = panel["axis"]
    tau_max = task["tau_max"] or panel["tau_max"]
    stride = panel["time_stride"] if task["tau_max"] is None else 1
    points = task["points"]

    sd0 = SpectralDensity(s=panel["s"], eta=1.0, omega_c=5.0)
    eta_c = spectral.critical_coupling(sd0)
    base = CurveParams(
        s=panel["s"],
        eta=(panel["rel"] or 1.0) * eta_c,
        omega_c=5.0,
        temp_k=0.5,
        n0=1.0,
        t=0.0,
        tau_max=tau_max,
        points=points,
        nprime=False,
        omega0_ghz=10.0,
        kb_over_hbar=KB_OVER_HBAR,
        time_stride=stride,
    )

    written: List[str] = []
    all_series: List[svgchart.Series] = []
    shared: dict = {}
    for value in panel["values"]:
        if axis == "coupling_rel":
            params = replace(base, eta=value * eta_c)
        elif axis == "temperature":
            params = replace(base, temp_k=value)
        else:
            params = replace(base, n0=value)
        start = time.time()
        data = _compute_shared_curve(params, shared)
        name = f"fig{fig_id}_{panel['panel']}_{_curve_label(axis, value)}.csv"
        path = os.path.join(outdir, name)
        _write_curve_csv(path, params, data, time.time() - start)
        written.append(name)
        all_series.append(
            svgchart.Series(
                label=_curve_label(axis, value), x=data.tau, y=data.n_value
            )
        )
    if task["svg"]:
        svg_name = f"fig{fig_id}_{panel['panel']}.svg"
        svgchart.write_chart(
            os.path.join(outdir, svg_name),
            all_series,
            title=f"figure {fig_id}, panel {panel['panel']} (s = {panel['s']:g})",
            x_label="tau * omega0",
            y_label="N",
        )
        written.append(svg_name)
    return written


def _compute_shared_curve(params: CurveParams, shared: dict) -> CurveData:
    """Like _compute_curve, reusing tables across curves of one panel.

    The propagator depends only on the spectrum and the fluctuation table
    additionally on the bath, so occupation sweeps share everything and
    temperature sweeps share the propagator.
    """
    dt_out = params.tau_max / params.points
    sub = max(params.time_stride, int(math.ceil(_STEPS_PER_UNIT * dt_out)))
    sub -= sub % params.time_stride
    dt = dt_out / sub
    n_steps = params.points * sub

    sd = params.spectrum()
    bath = params.bath()
    key_p = (sd, n_steps)
    if key_p not in shared:
        shared[key_p] = solve_u_volterra(
            sd, TimeGrid(t_max=n_steps * dt, n_steps=n_steps)
        )
    ptable = shared[key_p]
    key_f = (sd, bath, n_steps, params.time_stride)
    if key_f not in shared:
        shared[key_f] = FluctuationTable(
            sd, bath, ptable, time_stride=params.time_stride
        )
    flt = shared[key_f]
    state = InitialState(n0=params.n0)
    curve = measure.non_markovianity(sd, bath, state, ptable, flt, 0.0)
    out = slice(None, None, sub // params.time_stride)
    return CurveData(
        tau=curve.tau[out],
        g_exact=curve.g_exact[out],
        g_markov=curve.g_markov[out],
        n_value=curve.n_value[out],
        nprime=None,
    )


def cmd_fig(parser: argparse.ArgumentParser, args) -> int:
    if args.points < 1:
        parser.error("--points must be positive")
    os.makedirs(args.outdir, exist_ok=True)
    panels = _fig_panels(args.id)
    tasks = [
        {
            "fig_id": args.id,
            "outdir": args.outdir,
            "panel": panel,
            "points": args.points,
            "tau_max": args.tau_max,
            "svg": args.svg,
        }
        for panel in panels
    ]
    jobs = args.jobs if args.jobs is not None else os.cpu_count() or 1
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_render_panel, tasks))
    else:
        results = [_render_panel(t) for t in tasks]

    index_path = os.path.join(args.outdir, f"fig{args.id}_index.csv")
    with open(index_path, "w", newline="\n") as fh:
        fh.write("# file,panel,s,axis,value\n")
        for panel, names in zip(panels, results):
            values = list(panel["values"])
            for name in names:
                if not name.endswith(".csv"):
                    continue
                value = values.pop(0)
                fh.write(
                    f"{name},{panel['panel']},{panel['s']:g},"
                    f"{panel['axis']},{value:g}\n"
                )
    total = sum(len([n for n in names if n.endswith(".csv")]) for names in results)
    print(f"wrote {total} curve files and {index_path}")
    return 0


def cmd_localized(parser: argparse.ArgumentParser, args) -> int:
    eta = _resolve_eta(parser, args)
    sd = SpectralDensity(s=args.s, eta=eta, omega_c=args.omega_c)
    eta_c = spectral.critical_coupling(sd)
    print(f"s = {sd.s:g}, omega_c = {sd.omega_c:g}, eta = {eta:.6g}")
    print(f"eta_c = {eta_c:.6g} (eta / eta_c = {eta / eta_c:.6g})")
    lm = spectral.localized_mode(sd)
    if lm is None:
        print("no localized mode (eta <= eta_c)")
        return 0
    residual = abs(lm.omega_b - sd.omega0 - spectral.lamb_shift(sd, lm.omega_b))
    print(f"omega_b = {lm.omega_b:.9g}")
    print(f"Z = {lm.residue_z:.9g}")
    print(f"pole residual = {residual:.3g}")
    return 0


def cmd_validate(parser: argparse.ArgumentParser, args) -> int:
    results = validation.run_validation(quick=args.quick, log=print)
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    return 1 if failed else 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nonmarkov",
        description=(
            "Two-time correlations and non-Markovianity of a bosonic mode "
            "in an Ohmic-family thermal bath"
        ),
    )
    parser.add_argument(
        "--version", action="version", version=f"%(prog)s {__version__}"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("curve", help="evaluate one measure curve N(t, tau)")
    _add_model_flags(p)
    _add_unit_flags(p)
    p.add_argument("--temp-k", type=float, default=0.5, help="temperature in K")
    p.add_argument("--n0", type=float, default=1.0, help="initial occupation")
    p.add_argument(
        "--t", type=float, default=0.0, help="first time of the two-time pair"
    )
    p.add_argument("--tau-max", type=float, default=200.0)
    p.add_argument("--points", type=int, default=2000, help="output rows - 1")
    p.add_argument(
        "--nprime",
        action="store_true",
        help="append the regression-comparison column N'",
    )
    p.add_argument("--out", default="curve.csv", help="output CSV path")
    p.add_argument("--svg", default=None, help="optional SVG chart path")
    p.add_argument(
        "--record",
        default=None,
        help="replay the parameters recorded in an earlier CSV header",
    )
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser("fig", help="render a preset figure dataset")
    p.add_argument("id", type=int, choices=(1, 2, 3))
    p.add_argument("--outdir", default=".", help="output directory")
    p.add_argument("--points", type=int, default=2000)
    p.add_argument(
        "--tau-max",
        type=float,
        default=None,
        help="override every panel's tau range (preview use)",
    )
    p.add_argument("--svg", action="store_true", help="also render panel SVGs")
    p.add_argument(
        "--jobs",
        type=int,
        default=None,
        help="worker processes (default: available parallelism)",
    )
    p.set_defaults(func=cmd_fig)

    p = sub.add_parser("localized", help="report the localized-mode parameters")
    _add_model_flags(p)
    p.set_defaults(func=cmd_localized)

    p = sub.add_parser("validate", help="run the cross-oracle checks")
    p.add_argument("--quick", action="store_true", help="fast subset")
    p.set_defaults(func=cmd_validate)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(parser, args)
    except NonMarkovError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
