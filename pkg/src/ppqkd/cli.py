"""Command-line front end: key-rate reports, sweeps, simulation, verification
suites, and figure-reproduction CSV/plot-script emission.

Exit codes are a stable contract for harnesses: 0 success, 1 usage or
validation error, 2 protocol abort (zero key length), 3 I/O failure.

Every numeric flag accepts scientific notation.  A ``--config`` file with
``key = value`` lines supplies defaults; explicit flags override it.  CSV
output uses comma separators, a '.' decimal point, lower-case exponents, and
'#'-prefixed comment lines, so runs with identical flags and seeds are
byte-reproducible.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from decimal import Decimal, InvalidOperation
from pathlib import Path

from .channels import ChannelScenario, normalize_mode
from .errors import CertificationError, NoRootError, ResourceLimitError
from .keyrate import (
    KeyRateReport,
    Observation,
    ProtocolParams,
    expected_observation,
    keyrate_ideal,
    keyrate_lossy,
    matching_test_error,
)
from .simulate import SimConfig, run_protocol
from . import suites

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_ABORT = 2
EXIT_IO = 3

OUT_DIR_ENV = "PPQKD_OUT_DIR"

SCAN_VARIABLES = ("N", "Q", "mu", "raw_error")


# --- flag parsing helpers ---------------------------------------------------


def parse_count(text: str) -> int:
    """Integer flag value; scientific notation like 2e6 round-trips exactly."""
    try:
        value = Decimal(str(text))
    except InvalidOperation:
        raise ValueError(f"not a number: {text!r}") from None
    if value != value.to_integral_value():
        raise ValueError(f"expected an integer, got {text!r}")
    return int(value)


def parse_real(text: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise ValueError(f"not a number: {text!r}") from None


def parse_bool(text: str) -> bool:
    lowered = str(text).strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"expected a boolean, got {text!r}")


def _count_flag(text: str) -> int:
    try:
        return parse_count(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _real_flag(text: str) -> float:
    try:
        return parse_real(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def load_config(path: str | None) -> dict[str, str]:
    """Read key = value lines; '#' starts a comment; '-' and '_' equivalent."""
    if path is None:
        return {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ValueError(f"cannot read config file {path}: {exc}") from None
    entries: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ValueError(f"{path}:{lineno}: expected key = value, got {line!r}")
        key, value = stripped.split("=", 1)
        entries[key.strip().replace("-", "_")] = value.strip()
    return entries


def _resolved(args, config: dict[str, str], name: str, default, cast):
    value = getattr(args, name, None)
    if value is not None:
        return value
    if name in config:
        return cast(config[name])
    return default


# --- shared option groups ---------------------------------------------------


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="key = value file with flag defaults")


def _add_protocol_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--d", type=_count_flag, help="signal dimension (default 2)")
    parser.add_argument("--signals", type=_count_flag, help="total signal count N")
    parser.add_argument(
        "--test-fraction", dest="test_fraction", type=_real_flag,
        help="fraction of signals used for testing (default 0.5)",
    )
    parser.add_argument("--epsilon", type=_real_flag, help="security parameter (default 1e-36)")
    parser.add_argument(
        "--ec-factor", dest="ec_factor", type=_real_flag,
        help="error-correction inefficiency factor (default 1.2)",
    )
    parser.add_argument(
        "--subset-cost", dest="subset_cost", action="store_const", const=True,
        help="charge log2 C(N, m) bits for the test-subset selection",
    )


def _add_channel_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--Q", type=_real_flag, help="depolarization rate (default 0)")
    parser.add_argument("--mode", help="channel mode: dep(endent) or ind(ependent)")
    parser.add_argument("--mu", type=_real_flag, help="vacuum-event probability (default 0)")
    parser.add_argument("--eta", type=_real_flag, help="detector efficiency, simulation only")


def _test_size(N: int, test_fraction: float) -> int:
    """Test set size floor(N * fraction), kept inside 1..N-1."""
    if not 0.0 < test_fraction < 1.0:
        raise ValueError(f"test fraction must lie in (0, 1), got {test_fraction}")
    return min(max(1, math.floor(N * test_fraction)), N - 1)


def _build_params(args, config) -> ProtocolParams:
    d = _resolved(args, config, "d", 2, parse_count)
    N = _resolved(args, config, "signals", None, parse_count)
    if N is None:
        raise ValueError("--signals is required")
    test_fraction = _resolved(args, config, "test_fraction", 0.5, parse_real)
    m = _test_size(N, test_fraction)
    return ProtocolParams(
        d=d,
        N=N,
        m=m,
        epsilon=_resolved(args, config, "epsilon", 1e-36, parse_real),
        subset_cost=bool(_resolved(args, config, "subset_cost", False, parse_bool)),
        ec_factor=_resolved(args, config, "ec_factor", 1.2, parse_real),
    )


def _build_scenario(args, config) -> ChannelScenario:
    return ChannelScenario(
        Q=_resolved(args, config, "Q", 0.0, parse_real),
        mode=normalize_mode(_resolved(args, config, "mode", "dependent", str)),
        mu=_resolved(args, config, "mu", 0.0, parse_real),
        eta=_resolved(args, config, "eta", 1.0, parse_real),
    )


# --- CSV helpers --------------------------------------------------------------


def _fmt(x: float) -> str:
    return format(float(x), ".12g")


def _csv_header(variable: str) -> str:
    return f"{variable},delta,entropy_bound_bits,leak_bits,ell_bits,rate_per_signal,aborted"


def _csv_row(value: str, report: KeyRateReport) -> str:
    return ",".join(
        (
            value,
            _fmt(report.delta),
            _fmt(report.entropy_bound_bits),
            _fmt(report.leak_bits),
            str(report.ell_bits),
            _fmt(report.rate_per_signal),
            "1" if report.aborted else "0",
        )
    )


@dataclass(frozen=True)
class SweepSpec:
    """One swept variable over a validated grid; everything else held fixed."""

    variable: str
    start: float
    stop: float
    points: int
    log_scale: bool

    def __post_init__(self) -> None:
        if self.variable not in SCAN_VARIABLES:
            raise ValueError(
                f"unknown sweep variable {self.variable!r}; expected one of {SCAN_VARIABLES}"
            )
        if self.points < 2:
            raise ValueError(f"points must be >= 2, got {self.points}")
        if not self.start < self.stop:
            raise ValueError(f"need from < to, got {self.start} >= {self.stop}")
        if self.log_scale and self.start <= 0.0:
            raise ValueError("log-scale sweeps require from > 0")

    def grid(self) -> list[float]:
        last = self.points - 1
        if self.log_scale:
            lo, hi = math.log(self.start), math.log(self.stop)
            return [math.exp(lo + (hi - lo) * i / last) for i in range(self.points)]
        return [self.start + (self.stop - self.start) * i / last for i in range(self.points)]


def _report_for(params: ProtocolParams, scenario: ChannelScenario) -> KeyRateReport:
    lossy = scenario.mu > 0.0
    obs = expected_observation(params, scenario, lossy)
    return keyrate_lossy(params, obs) if lossy else keyrate_ideal(params, obs)


def _report_for_raw_error(params: ProtocolParams, mode: str, raw_error: float) -> KeyRateReport:
    obs = Observation(
        test_error=matching_test_error(params.d, mode, raw_error),
        raw_key_error=raw_error,
        vac_decode_count=0,
        n_kept=params.n,
    )
    return keyrate_ideal(params, obs)


def _write_text(path: Path, text: str) -> None:
    with open(path, "w", newline="\n") as handle:
        handle.write(text)


# --- commands -----------------------------------------------------------------


def cmd_keyrate(args) -> int:
    config = load_config(args.config)
    params = _build_params(args, config)
    scenario = _build_scenario(args, config)
    lossy = scenario.mu > 0.0

    obs = expected_observation(params, scenario, lossy)
    test_error = _resolved(args, config, "test_error", None, parse_real)
    raw_error = _resolved(args, config, "raw_error", None, parse_real)
    vac_count = _resolved(args, config, "vac_count", None, parse_count)
    if test_error is not None or raw_error is not None or vac_count is not None:
        v = obs.vac_decode_count if vac_count is None else vac_count
        obs = Observation(
            test_error=obs.test_error if test_error is None else test_error,
            raw_key_error=obs.raw_key_error if raw_error is None else raw_error,
            vac_decode_count=v,
            n_kept=params.n - v,
        )
    report = keyrate_lossy(params, obs) if lossy else keyrate_ideal(params, obs)

    if args.csv:
        print(_csv_header("N"))
        print(_csv_row(str(params.N), report))
    else:
        _print_report(params, scenario, obs, report)
    return EXIT_ABORT if report.aborted else EXIT_OK


def _print_report(params, scenario, obs, report) -> None:
    print(f"d                   = {params.d}")
    print(f"signals N           = {params.N}")
    print(f"test rounds m       = {params.m}")
    print(f"key rounds n        = {params.n}")
    print(f"epsilon             = {_fmt(params.epsilon)}")
    print(f"channel             = {scenario.mode}, Q = {_fmt(scenario.Q)}, mu = {_fmt(scenario.mu)}")
    print(f"test_error          = {_fmt(obs.test_error)}")
    print(f"raw_key_error       = {_fmt(obs.raw_key_error)}")
    print(f"vac_decode_count    = {obs.vac_decode_count}")
    print(f"delta               = {_fmt(report.delta)}")
    print(f"entropy_bound_bits  = {_fmt(report.entropy_bound_bits)}")
    print(f"leak_bits           = {_fmt(report.leak_bits)}")
    print(f"subset_cost_bits    = {_fmt(report.subset_cost_bits)}")
    print(f"security_cost_bits  = {_fmt(report.security_cost_bits)}")
    print(f"ell_bits            = {report.ell_bits}")
    print(f"rate_per_signal     = {_fmt(report.rate_per_signal)}")
    print(f"smooth_eps          = {_fmt(report.smooth_eps)}")
    print(f"eps_pa              = {_fmt(report.eps_pa)}")
    print(f"eps_fail            = {_fmt(report.eps_fail)}")
    print(f"aborted             = {'yes' if report.aborted else 'no'}")


def cmd_scan(args) -> int:
    config = load_config(args.config)
    variable = args.variable
    start = _resolved(args, config, "start", None, parse_real)
    stop = _resolved(args, config, "stop", None, parse_real)
    if start is None or stop is None:
        raise ValueError("--from and --to are required")
    points = _resolved(args, config, "points", 25, parse_count)
    log_scale = bool(_resolved(args, config, "log", variable == "N", parse_bool))
    spec = SweepSpec(variable, start, stop, points, log_scale)
    values = spec.grid()

    scenario = _build_scenario(args, config)
    d = _resolved(args, config, "d", 2, parse_count)
    test_fraction = _resolved(args, config, "test_fraction", 0.5, parse_real)
    epsilon = _resolved(args, config, "epsilon", 1e-36, parse_real)
    subset_cost = bool(_resolved(args, config, "subset_cost", False, parse_bool))
    ec_factor = _resolved(args, config, "ec_factor", 1.2, parse_real)

    def params_for(N: int) -> ProtocolParams:
        return ProtocolParams(d=d, N=N, m=_test_size(N, test_fraction), epsilon=epsilon,
                              subset_cost=subset_cost, ec_factor=ec_factor)

    lines = [
        f"# scan {variable} from {_fmt(start)} to {_fmt(stop)} points={points} "
        f"log={1 if log_scale else 0}",
        f"# fixed: d={d} Q={_fmt(scenario.Q)} mode={scenario.mode} mu={_fmt(scenario.mu)} "
        f"epsilon={_fmt(epsilon)} ec_factor={_fmt(ec_factor)} "
        f"test_fraction={_fmt(test_fraction)} subset_cost={1 if subset_cost else 0}",
        _csv_header(variable),
    ]
    if variable == "N":
        for value in values:
            N = max(4, int(round(value)))
            lines.append(_csv_row(str(N), _report_for(params_for(N), scenario)))
    else:
        N = _resolved(args, config, "signals", None, parse_count)
        if N is None:
            raise ValueError(f"--signals is required for a {variable} sweep")
        params = params_for(N)
        for value in values:
            if variable == "Q":
                point = ChannelScenario(Q=value, mode=scenario.mode,
                                        mu=scenario.mu, eta=scenario.eta)
                report = _report_for(params, point)
            elif variable == "mu":
                point = ChannelScenario(Q=scenario.Q, mode=scenario.mode,
                                        mu=value, eta=scenario.eta)
                obs = expected_observation(params, point, lossy=True)
                report = keyrate_lossy(params, obs)
            else:  # raw_error
                if scenario.mu > 0.0:
                    raise ValueError("raw_error sweeps use the ideal-device path; set mu = 0")
                report = _report_for_raw_error(params, scenario.mode, value)
            lines.append(_csv_row(_fmt(value), report))

    text = "\n".join(lines) + "\n"
    if args.out:
        _write_text(Path(args.out), text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_simulate(args) -> int:
    config = load_config(args.config)
    params = _build_params(args, config)
    scenario = _build_scenario(args, config)
    seed = _resolved(args, config, "seed", 0, parse_count)
    rounds = _resolved(args, config, "rounds", None, parse_count)
    if params.N > 10**8 and rounds is None:
        raise ValueError(
            "simulation is capped at 1e8 signals; use --rounds to sample a proxy run"
        )
    sim = SimConfig(params=params, scenario=scenario, seed=seed, rounds_override=rounds)
    result = run_protocol(sim)
    lossy = scenario.mu > 0.0
    report = (keyrate_lossy if lossy else keyrate_ideal)(params, result.observation)

    print(f"seed                     = {seed}")
    print(f"simulated test rounds    = {result.counts.test_rounds}")
    print(f"simulated key rounds     = {result.counts.key_rounds}")
    print(f"empirical_test_error     = {_fmt(result.empirical_test_error)}")
    print(f"empirical_decode_error   = {_fmt(result.empirical_decode_error)}")
    print(f"empirical_vac_fraction   = {_fmt(result.empirical_vac_fraction)}")
    print()
    _print_report(params, scenario, result.observation, report)
    return EXIT_ABORT if report.aborted else EXIT_OK


def cmd_verify(args) -> int:
    config = load_config(args.config)
    trials = _resolved(args, config, "trials", 100, parse_count)
    seed = _resolved(args, config, "seed", 7, parse_count)
    results = suites.run_suite(args.suite, trials=trials, seed=seed)
    failed = 0
    for result in results:
        status = "ok  " if result.passed else "FAIL"
        detail = f"  ({result.detail})" if result.detail else ""
        print(f"{status} {result.name}{detail}")
        if not result.passed:
            failed += 1
    print(f"{len(results) - failed}/{len(results)} checks passed")
    return EXIT_OK if failed == 0 else EXIT_USAGE


# --- figure reproduction --------------------------------------------------------

_FIGURE_DIMS = (2, 4, 8)


def _figure_defaults(which: int) -> dict:
    common = dict(epsilon=1e-36, ec_factor=1.2, test_fraction=0.5)
    if which == 2:
        return dict(common, Q=0.1, n_min=1e4, n_max=1e12, points=33)
    if which == 3:
        return dict(common, Q=0.1, n_min=1e4, n_max=1e12, points=33)
    if which == 5:
        return dict(common, signals=10**20, e_min=0.0, e_max=0.3, points=61)
    if which == 6:
        return dict(common, Q=0.05, signals=10**20, mu_min=0.0, mu_max=0.4, points=41)
    raise ValueError(f"unknown figure {which}; expected one of 2, 3, 5, 6")


def _figure_files(which: int, settings: dict, override_note: str) -> list[tuple[str, str]]:
    epsilon = settings["epsilon"]
    ec = settings["ec_factor"]
    tf = settings["test_fraction"]
    points = settings["points"]

    def params_for(d: int, N: int) -> ProtocolParams:
        return ProtocolParams(d=d, N=N, m=_test_size(N, tf), epsilon=epsilon, ec_factor=ec)

    def comment(lines: list[str], curve: str) -> list[str]:
        header = [f"# figure {which} curve: {curve}"]
        if override_note:
            header.append(f"# overrides: {override_note}")
        header.extend(lines)
        return header

    files: list[tuple[str, str]] = []

    if which in (2, 3):
        Q = settings["Q"]
        values = _grid(settings["n_min"], settings["n_max"], points, log_scale=True)
        grid_note = (
            f"# N log-spaced {_fmt(settings['n_min'])}..{_fmt(settings['n_max'])} "
            f"points={points} Q={_fmt(Q)} epsilon={_fmt(epsilon)} ec_factor={_fmt(ec)}"
        )
        if which == 2:
            for mode in ("dependent", "independent"):
                scenario = ChannelScenario(Q=Q, mode=mode)
                for d in _FIGURE_DIMS:
                    lines = comment([grid_note, _csv_header("N")], f"mode={mode} d={d}")
                    for value in values:
                        N = max(4, int(round(value)))
                        lines.append(_csv_row(str(N), _report_for(params_for(d, N), scenario)))
                    files.append((f"fig2_{mode}_d{d}.csv", "\n".join(lines) + "\n"))
            files.append(("fig2.gp", _gnuplot_fig2()))
        else:
            scenario = ChannelScenario(Q=Q, mode="dependent")
            lines_high = comment([grid_note, _csv_header("N")], "single run d=4")
            lines_low = comment(
                [grid_note, "# ell_bits and rate are doubled: two parallel d=2 runs",
                 _csv_header("N")],
                "two parallel runs d=2",
            )
            for value in values:
                N = max(4, int(round(value)))
                report_high = _report_for(params_for(4, N), scenario)
                report_low = _report_for(params_for(2, N), scenario)
                lines_high.append(_csv_row(str(N), report_high))
                doubled = ",".join(
                    (
                        str(N),
                        _fmt(report_low.delta),
                        _fmt(report_low.entropy_bound_bits),
                        _fmt(report_low.leak_bits),
                        str(2 * report_low.ell_bits),
                        _fmt(2 * report_low.rate_per_signal),
                        "1" if report_low.aborted else "0",
                    )
                )
                lines_low.append(doubled)
            files.append(("fig3_d4.csv", "\n".join(lines_high) + "\n"))
            files.append(("fig3_two_d2.csv", "\n".join(lines_low) + "\n"))
            files.append(("fig3.gp", _gnuplot_fig3()))

    elif which == 5:
        N = settings["signals"]
        values = _grid(settings["e_min"], max(settings["e_max"], 1e-9), points, log_scale=False)
        grid_note = (
            f"# raw_error linear {_fmt(settings['e_min'])}..{_fmt(settings['e_max'])} "
            f"points={points} N={N} epsilon={_fmt(epsilon)} ec_factor={_fmt(ec)} mode=dependent"
        )
        for d in _FIGURE_DIMS:
            params = params_for(d, N)
            lines = comment([grid_note, _csv_header("raw_error")], f"d={d} dependent")
            for e in values:
                e = min(e, (d - 1) / d)
                lines.append(_csv_row(_fmt(e), _report_for_raw_error(params, "dependent", e)))
            files.append((f"fig5_d{d}.csv", "\n".join(lines) + "\n"))
        files.append(("fig5.gp", _gnuplot_sweep(5, "fig5_d{d}.csv", "raw key error rate")))

    else:  # which == 6
        N = settings["signals"]
        Q = settings["Q"]
        values = _grid(settings["mu_min"], max(settings["mu_max"], 1e-9), points, log_scale=False)
        grid_note = (
            f"# mu linear {_fmt(settings['mu_min'])}..{_fmt(settings['mu_max'])} "
            f"points={points} N={N} Q={_fmt(Q)} epsilon={_fmt(epsilon)} ec_factor={_fmt(ec)}"
        )
        for mode in ("dependent", "independent"):
            for d in _FIGURE_DIMS:
                params = params_for(d, N)
                lines = comment([grid_note, _csv_header("mu")], f"mode={mode} d={d}")
                for mu in values:
                    scenario = ChannelScenario(Q=Q, mode=mode, mu=mu)
                    obs = expected_observation(params, scenario, lossy=True)
                    lines.append(_csv_row(_fmt(mu), keyrate_lossy(params, obs)))
                files.append((f"fig6_{mode}_d{d}.csv", "\n".join(lines) + "\n"))
        files.append(("fig6.gp", _gnuplot_fig6()))

    return files


def _gnuplot_fig2() -> str:
    lines = [
        "# gnuplot script: key rate vs signal count, both channel modes",
        "set datafile separator comma",
        "set terminal pngcairo size 900,600",
        "set logscale x",
        "set xlabel 'number of signals N'",
        "set ylabel 'secret key bits per signal'",
        "set key left top",
    ]
    for mode in ("dependent", "independent"):
        lines.append(f"set output 'fig2_{mode}.png'")
        plot = ", \\\n  ".join(
            f"'fig2_{mode}_d{d}.csv' using 1:6 with lines title 'd={d}'"
            for d in _FIGURE_DIMS
        )
        lines.append(f"plot \\\n  {plot}")
    return "\n".join(lines) + "\n"


def _gnuplot_fig3() -> str:
    return "\n".join(
        [
            "# gnuplot script: one d=4 run vs two parallel d=2 runs",
            "set datafile separator comma",
            "set terminal pngcairo size 900,600",
            "set logscale x",
            "set xlabel 'number of signals N'",
            "set ylabel 'secret key bits per signal'",
            "set key left top",
            "set output 'fig3.png'",
            "plot \\",
            "  'fig3_d4.csv' using 1:6 with lines title 'single run, d=4', \\",
            "  'fig3_two_d2.csv' using 1:6 with lines title 'two parallel runs, d=2'",
        ]
    ) + "\n"


def _gnuplot_sweep(which: int, pattern: str, xlabel: str) -> str:
    lines = [
        f"# gnuplot script: figure {which} sweep",
        "set datafile separator comma",
        "set terminal pngcairo size 900,600",
        f"set xlabel '{xlabel}'",
        "set ylabel 'secret key bits per signal'",
        "set key right top",
        f"set output 'fig{which}.png'",
    ]
    plot = ", \\\n  ".join(
        f"'{pattern.format(d=d)}' using 1:6 with lines title 'd={d}'" for d in _FIGURE_DIMS
    )
    lines.append(f"plot \\\n  {plot}")
    return "\n".join(lines) + "\n"


def _gnuplot_fig6() -> str:
    lines = [
        "# gnuplot script: key rate vs vacuum probability, both channel modes",
        "set datafile separator comma",
        "set terminal pngcairo size 900,600",
        "set xlabel 'vacuum probability mu'",
        "set ylabel 'secret key bits per signal'",
        "set key right top",
    ]
    for mode in ("dependent", "independent"):
        lines.append(f"set output 'fig6_{mode}.png'")
        plot = ", \\\n  ".join(
            f"'fig6_{mode}_d{d}.csv' using 1:6 with lines title 'd={d}'"
            for d in _FIGURE_DIMS
        )
        lines.append(f"plot \\\n  {plot}")
    return "\n".join(lines) + "\n"


def cmd_figures(args) -> int:
    config = load_config(args.config)
    which = args.which
    settings = _figure_defaults(which)
    overrides = []
    for name, cast in (
        ("Q", parse_real),
        ("epsilon", parse_real),
        ("ec_factor", parse_real),
        ("test_fraction", parse_real),
        ("points", parse_count),
        ("signals", parse_count),
    ):
        value = _resolved(args, config, name, None, cast)
        if value is not None and name in settings and value != settings[name]:
            settings[name] = value
            overrides.append(f"{name}={value}")
    out_dir = args.out_dir or config.get("out_dir") or os.environ.get(OUT_DIR_ENV) or "."
    files = _figure_files(which, settings, " ".join(overrides))
    out_path = Path(out_dir)
    try:
        out_path.mkdir(parents=True, exist_ok=True)
        for name, text in files:
            _write_text(out_path / name, text)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    for name, _ in files:
        print(out_path / name)
    return EXIT_OK


# --- parser -----------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    """argparse parser whose usage errors exit with code 1, not 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: {message}\n")
        raise SystemExit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ppqkd", description=__doc__.split("\n\n", 1)[0])
    sub = parser.add_subparsers(dest="command", required=True)

    keyrate = sub.add_parser("keyrate", help="finite-key length for one parameter set")
    _add_common(keyrate)
    _add_protocol_options(keyrate)
    _add_channel_options(keyrate)
    keyrate.add_argument("--test-error", dest="test_error", type=_real_flag,
                         help="override the observed test-round error")
    keyrate.add_argument("--raw-error", dest="raw_error", type=_real_flag,
                         help="override the observed raw-key error")
    keyrate.add_argument("--vac-count", dest="vac_count", type=_count_flag,
                         help="override the decode-vacuum count")
    keyrate.add_argument("--csv", action="store_true", help="emit a CSV header + row")
    keyrate.set_defaults(func=cmd_keyrate)

    scan = sub.add_parser("scan", help="sweep one variable and stream CSV rows")
    _add_common(scan)
    _add_protocol_options(scan)
    _add_channel_options(scan)
    scan.add_argument("--variable", required=True, choices=SCAN_VARIABLES)
    scan.add_argument("--from", dest="start", type=_real_flag)
    scan.add_argument("--to", dest="stop", type=_real_flag)
    scan.add_argument("--points", type=_count_flag)
    scan.add_argument("--log", dest="log", action="store_const", const=True,
                      help="log-spaced grid (default for N sweeps)")
    scan.add_argument("--out", help="write CSV here instead of stdout")
    scan.set_defaults(func=cmd_scan)

    simulate = sub.add_parser("simulate", help="seeded Monte Carlo protocol run")
    _add_common(simulate)
    _add_protocol_options(simulate)
    _add_channel_options(simulate)
    simulate.add_argument("--seed", type=_count_flag, help="master seed (default 0)")
    simulate.add_argument("--rounds", type=_count_flag,
                          help="simulate this many rounds and extrapolate to N")
    simulate.set_defaults(func=cmd_simulate)

    verify = sub.add_parser("verify", help="run a numerical certification suite")
    _add_common(verify)
    verify.add_argument("--suite", required=True, choices=suites.SUITES)
    verify.add_argument("--trials", type=_count_flag)
    verify.add_argument("--seed", type=_count_flag)
    verify.set_defaults(func=cmd_verify)

    figures = sub.add_parser("figures", help="emit figure-reproduction CSVs + plot script")
    _add_common(figures)
    figures.add_argument("--which", required=True, type=_count_flag, choices=(2, 3, 5, 6))
    figures.add_argument("--out-dir", dest="out_dir",
                         help=f"output directory (default ${OUT_DIR_ENV} or '.')")
    figures.add_argument("--Q", type=_real_flag)
    figures.add_argument("--epsilon", type=_real_flag)
    figures.add_argument("--ec-factor", dest="ec_factor", type=_real_flag)
    figures.add_argument("--test-fraction", dest="test_fraction", type=_real_flag)
    figures.add_argument("--points", type=_count_flag)
    figures.add_argument("--signals", type=_count_flag)
    figures.set_defaults(func=cmd_figures)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (ValueError, ResourceLimitError, NoRootError, CertificationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
