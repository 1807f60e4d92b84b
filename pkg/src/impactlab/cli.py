"""Command-line orchestration: seeded experiments, strict configs, manifests.

Subcommands: generate, simulate, estimate, calibrate, jumps, feedback, report,
and `run` (executes whatever experiment the config names, including
full-pipeline).  Global flags: --config, --seed, --out, --threads.  Exit
codes: 0 success, 2 config error, 3 data error, 4 numeric failure.

All randomness flows from the single master seed through named substreams
(one per stage), so adding a stage never perturbs earlier stages' draws, and
identical config + seed reproduce every data output byte for byte.
"""

from __future__ import annotations

import argparse
import copy
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np
import yaml

from . import __version__, calibration, feedback, jumps, orderflow, propagator, surprise
from .errors import ConfigError, DataError, ImpactLabError, NumericError
from .io import (
    RunManifest,
    ingest_trades,
    read_lagcurve_csv,
    read_news_csv,
    read_returns_csv,
    stage_seed,
    write_coupled_csv,
    write_events_csv,
    write_filter_csv,
    write_json,
    write_kernel_csv,
    write_lagcurve_csv,
    write_returns_csv,
    write_trades_csv,
)
from .series import PriceSeries, SignSeries, TradeSeries, unit_marks

EXPERIMENTS = (
    "generate",
    "simulate",
    "estimate",
    "calibrate",
    "jumps",
    "feedback",
    "full-pipeline",
    "report",
)

_LAW = {"kind": str, "value": float, "mu": float, "sigma": float, "low": float,
        "high": float, "exponent": float, "minimum": float}

SCHEMA = {
    "experiment": str,
    "seed": int,
    "out": str,
    "threads": int,
    "orderflow": {
        "n": int,
        "gamma": float,
        "c0": float,
        "psi": float,
        "spread_law": _LAW,
        "volume_law": _LAW,
    },
    "kernel": {
        "family": str,
        "L": int,
        "beta": float,
        "gamma0": float,
        "ell0": float,
        "g0": float,
        "tau": float,
    },
    "price": {"p0": float},
    "estimate": {
        "input": str,
        "max_lag": int,
        "corr_lag": int,
        "fit_lo": int,
        "fit_hi": int,
        "filter_order": int,
        "burn_in": int,
    },
    "calibrate": {
        "response": str,
        "corr": str,
        "K": float,
        "L": int,
        "ridge": float,
        "noise_scale": float,
    },
    "jumps": {
        "returns": str,
        "news": str,
        "synthetic": {
            "n_bins": int,
            "jump_spacing": int,
            "tail_exponent": float,
            "tail_minimum": float,
            "relax_zeta": float,
            "relax_amplitude": float,
            "relax_horizon": int,
        },
        "window": int,
        "threshold": float,
        "s_min": float,
        "horizon": int,
        "fit_lo": int,
        "fit_hi": int,
        "min_separation": int,
        "window_before": float,
        "window_after": float,
        "ticker": str,
    },
    "feedback": {
        "c": float,
        "g_sv": float,
        "g_vs": float,
        "noise_s": float,
        "noise_v": float,
        "s_floor": float,
        "crisis_multiple": float,
        "n": int,
        "n_seeds": int,
    },
    "report": {"manifests": list},
}

DEFAULTS = {
    "experiment": "full-pipeline",
    "seed": 12345,
    "out": "runs/out",
    "threads": 1,
    "orderflow": {
        "n": 200_000,
        "gamma": 0.5,
        "c0": 0.3,
        "psi": 0.1,
        "spread_law": {"kind": "constant", "value": 1.0},
        "volume_law": {"kind": "constant", "value": 1.0},
    },
    "kernel": {
        "family": "power_law",
        "L": 2000,
        "beta": None,  # None -> (1 - gamma) / 2
        "gamma0": 1.0,
        "ell0": 0.0,
        "g0": 1.0,
        "tau": 100.0,
    },
    "price": {"p0": 100.0},
    "estimate": {
        "input": None,
        "max_lag": 1000,
        "corr_lag": None,  # None -> kernel L
        "fit_lo": 10,
        "fit_hi": 1000,
        "filter_order": 512,
        "burn_in": None,  # None -> kernel L (capped at n // 4)
    },
    "calibrate": {
        "response": None,
        "corr": None,
        "K": 1.0,
        "L": 200,
        "ridge": 0.0,
        "noise_scale": None,
    },
    "jumps": {
        "returns": None,
        "news": None,
        "synthetic": {
            "n_bins": 200_000,
            "jump_spacing": 400,
            "tail_exponent": 4.0,
            "tail_minimum": 4.0,
            "relax_zeta": None,
            "relax_amplitude": 0.0,
            "relax_horizon": 300,
        },
        "window": 120,
        "threshold": 4.0,
        "s_min": 4.0,
        "horizon": 150,
        "fit_lo": 1,
        "fit_hi": None,  # None -> horizon
        "min_separation": 0,
        "window_before": 2.0,
        "window_after": 10.0,
        "ticker": None,
    },
    "feedback": {
        "c": 0.5,
        "g_sv": 0.2,
        "g_vs": 0.2,
        "noise_s": 0.001,
        "noise_v": 0.001,
        "s_floor": 0.01,
        "crisis_multiple": 4.0,
        "n": 100_000,
        "n_seeds": 1,
    },
    "report": {"manifests": []},
}


def _validate(node, schema, path: str) -> None:
    if not isinstance(node, dict):
        raise ConfigError(f"config section '{path or '<root>'}' must be a mapping")
    for key, value in node.items():
        where = f"{path}.{key}" if path else key
        if key not in schema:
            raise ConfigError(f"unknown config key '{where}'")
        expected = schema[key]
        if isinstance(expected, dict):
            if value is None:
                continue
            _validate(value, expected, where)
        else:
            if value is None:
                continue
            if expected is float and isinstance(value, (int, float)) and not isinstance(value, bool):
                continue
            if expected is int and isinstance(value, bool):
                raise ConfigError(f"config key '{where}' must be an integer")
            if not isinstance(value, expected):
                raise ConfigError(
                    f"config key '{where}' must be {expected.__name__}, got {type(value).__name__}"
                )


def _merge(base: dict, override: dict) -> dict:
    out = copy.deepcopy(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(out.get(key), dict):
            out[key] = _merge(out[key], value)
        else:
            out[key] = copy.deepcopy(value)
    return out


def load_config(path: str | None) -> dict:
    """Read, strictly validate and merge a YAML config over the defaults."""
    if path is None:
        return copy.deepcopy(DEFAULTS)
    p = Path(path)
    if not p.exists():
        raise ConfigError(f"config file not found: {p}")
    try:
        raw = yaml.safe_load(p.read_text())
    except yaml.YAMLError as exc:
        raise ConfigError(f"could not parse config: {exc}") from None
    if raw is None:
        raw = {}
    _validate(raw, SCHEMA, "")
    cfg = _merge(DEFAULTS, raw)
    if cfg["experiment"] not in EXPERIMENTS:
        raise ConfigError(
            f"unknown experiment '{cfg['experiment']}'; expected one of {', '.join(EXPERIMENTS)}"
        )
    return cfg


# ---------------------------------------------------------------------------
# Stage helpers
# ---------------------------------------------------------------------------


def _flow_from_config(cfg: dict) -> tuple[SignSeries, "orderflow.MarkSeries"]:
    ofc = cfg["orderflow"]
    seed = cfg["seed"]
    signs = orderflow.gen_signs(ofc["n"], ofc["gamma"], ofc["c0"], seed=stage_seed(seed, "signs"))
    marks = orderflow.gen_marks(
        ofc["n"],
        spread_law=orderflow.law_from_spec(ofc["spread_law"]),
        volume_law=orderflow.law_from_spec(ofc["volume_law"]),
        psi=ofc["psi"],
        seed=stage_seed(seed, "marks"),
    )
    return signs, marks


def _kernel_from_config(cfg: dict) -> propagator.Kernel:
    kc = cfg["kernel"]
    family = kc["family"]
    if family == "power_law":
        beta = kc["beta"]
        if beta is None:
            beta = propagator.critical_beta(cfg["orderflow"]["gamma"])
        return propagator.make_kernel(
            "power_law", kc["L"], beta=beta, gamma0=kc["gamma0"], ell0=kc["ell0"]
        )
    if family == "permanent":
        return propagator.make_kernel("permanent", kc["L"], g0=kc["g0"])
    if family == "exponential":
        return propagator.make_kernel("exponential", kc["L"], g0=kc["g0"], tau=kc["tau"])
    raise ConfigError(f"kernel.family must be power_law, permanent or exponential, not {family!r}")


def _trades_for_estimation(cfg: dict, out: Path, manifest: RunManifest) -> TradeSeries:
    src = cfg["estimate"]["input"]
    if src is not None:
        trades = ingest_trades(src, psi=cfg["orderflow"]["psi"])
        if trades.mid is None:
            raise DataError(f"{src}: estimation needs the mid column")
        manifest.add_stage("ingest", {"rows": len(trades), "source": str(src)})
        return trades
    signs, marks = _flow_from_config(cfg)
    kernel = _kernel_from_config(cfg)
    price = propagator.build_price(signs, marks, kernel, p0=cfg["price"]["p0"])
    trades = TradeSeries(signs=signs, marks=marks, mid=price.mid)
    write_trades_csv(out / "trades.csv", trades)
    manifest.add_output(out / "trades.csv")
    write_kernel_csv(out / "kernel.csv", kernel)
    manifest.add_output(out / "kernel.csv")
    manifest.add_stage(
        "simulate",
        {"n": len(trades), "kernel_family": kernel.family, "kernel_L": kernel.truncation,
         **{k: v for k, v in kernel.params.items()}},
    )
    return trades


# ---------------------------------------------------------------------------
# Experiments
# ---------------------------------------------------------------------------


def run_generate(cfg: dict, out: Path, manifest: RunManifest) -> None:
    signs, marks = _flow_from_config(cfg)
    trades = TradeSeries(signs=signs, marks=marks)
    write_trades_csv(out / "trades.csv", trades)
    manifest.add_output(out / "trades.csv")
    manifest.add_stage("generate", {
        "n": len(trades),
        "gamma": cfg["orderflow"]["gamma"],
        "c0": cfg["orderflow"]["c0"],
        "mean_sign": float(signs.to_float().mean()),
    })


def run_simulate(cfg: dict, out: Path, manifest: RunManifest) -> None:
    _trades_for_estimation(cfg, out, manifest)


def _estimate_stages(cfg: dict, trades: TradeSeries, out: Path, manifest: RunManifest) -> dict:
    est = cfg["estimate"]
    n = len(trades)
    kernel_L = cfg["kernel"]["L"]
    burn = est["burn_in"]
    if burn is None:
        burn = min(kernel_L, n // 4)
    if n - burn < 10 * max(est["max_lag"], 1):
        burn = 0
    signs = SignSeries(trades.signs.signs[burn:])
    price = PriceSeries(trades.mid[burn:], float(trades.mid[burn]))
    max_lag = min(est["max_lag"], len(signs) - 2)
    corr_lag = est["corr_lag"] if est["corr_lag"] is not None else kernel_L
    corr_lag = min(corr_lag, len(signs) - 2)

    corr = orderflow.estimate_sign_corr(signs, corr_lag)
    write_lagcurve_csv(out / "corr.csv", corr)
    manifest.add_output(out / "corr.csv")
    fit_hi = min(est["fit_hi"], max_lag)
    gamma_fit = calibration.fit_powerlaw(
        corr, (est["fit_lo"], fit_hi), offset_mode="fit_asymptote", n_bins=20, weighted=True
    )

    resp = propagator.response(price, signs, max_lag)
    write_lagcurve_csv(out / "response.csv", resp)
    manifest.add_output(out / "response.csv")

    sig = propagator.signature_plot(price, max_lag)
    write_lagcurve_csv(out / "signature.csv", sig)
    manifest.add_output(out / "signature.csv")
    sig_fit = calibration.fit_powerlaw(sig, (est["fit_lo"], fit_hi), n_bins=17)
    lo_ref = max(est["fit_lo"], 1)
    flatness = float(sig.values[fit_hi] / sig.values[lo_ref])

    order = min(est["filter_order"], max(2, len(signs) // 20))
    filt = surprise.fit_linear_predictor(signs, order)
    write_filter_csv(out / "filter.csv", filt.b)
    manifest.add_output(out / "filter.csv")
    implied = surprise.kernel_from_filter(filt, g1=max(resp.values[1], 1e-12))
    write_kernel_csv(out / "kernel_implied.csv", implied)
    manifest.add_output(out / "kernel_implied.csv")
    from .series import LagCurve

    kcurve = LagCurve.model_curve(np.concatenate([[np.nan], implied.g]))
    beta_fit = calibration.fit_powerlaw(kcurve, (5, max(order // 2, 20)), n_bins=12)

    cond = surprise.conditional_impact(price, signs)
    write_json(out / "conditional.json", cond.to_dict())
    manifest.add_output(out / "conditional.json")

    fits = {
        "gamma_hat": -gamma_fit.exponent,
        "gamma_stderr": gamma_fit.stderr_exponent,
        "corr_amplitude": gamma_fit.amplitude,
        "beta_hat": -beta_fit.exponent,
        "signature_slope": sig_fit.exponent,
        "signature_flatness_ratio": flatness,
        "balance": cond.balance,
        "balance_stderr": cond.balance_stderr,
        "p_plus": cond.p_plus,
    }
    write_json(out / "fits.json", fits)
    manifest.add_output(out / "fits.json")
    manifest.add_stage("estimate", fits)
    return fits


def run_estimate(cfg: dict, out: Path, manifest: RunManifest) -> None:
    trades = _trades_for_estimation(cfg, out, manifest)
    _estimate_stages(cfg, trades, out, manifest)


def run_full_pipeline(cfg: dict, out: Path, manifest: RunManifest) -> None:
    trades = _trades_for_estimation(cfg, out, manifest)
    fits = _estimate_stages(cfg, trades, out, manifest)
    manifest.add_stage("summary", {
        "signature_flatness_ratio": fits["signature_flatness_ratio"],
        "conditional_impact_balance": fits["balance"],
        "balance_over_stderr": fits["balance"] / fits["balance_stderr"]
        if fits["balance_stderr"] > 0 else float("nan"),
    })


def run_calibrate(cfg: dict, out: Path, manifest: RunManifest) -> None:
    cal = cfg["calibrate"]
    if cal["response"] is None or cal["corr"] is None:
        raise ConfigError("calibrate.response and calibrate.corr paths are required")
    resp = read_lagcurve_csv(cal["response"])
    corr = read_lagcurve_csv(cal["corr"])
    L = min(cal["L"], resp.max_lag, corr.max_lag)
    noise = cal["noise_scale"]
    try:
        result = calibration.calibrate_kernel(
            resp, corr, K=cal["K"], L=L, ridge=cal["ridge"],
            noise_scale=noise if noise is not None else None,
        )
    except np.linalg.LinAlgError as exc:
        raise NumericError(str(exc)) from None
    write_kernel_csv(out / "kernel_hat.csv", result.kernel)
    manifest.add_output(out / "kernel_hat.csv")
    write_json(out / "calibration.json", result.to_dict())
    manifest.add_output(out / "calibration.json")
    manifest.add_stage("calibrate", result.to_dict())


def run_jumps(cfg: dict, out: Path, manifest: RunManifest) -> None:
    jc = cfg["jumps"]
    if jc["returns"] is not None:
        series = read_returns_csv(jc["returns"])
        planted = None
    else:
        syn = jc["synthetic"]
        series, planted_bins = jumps.synthetic_returns(
            syn["n_bins"],
            seed=stage_seed(cfg["seed"], "jumps"),
            jump_spacing=syn["jump_spacing"],
            jump_law=orderflow.ParetoLaw(exponent=syn["tail_exponent"], minimum=syn["tail_minimum"]),
            relax_zeta=syn["relax_zeta"],
            relax_amplitude=syn["relax_amplitude"],
            relax_horizon=syn["relax_horizon"],
            window=jc["window"],
        )
        planted = len(planted_bins)
        write_returns_csv(out / "returns.csv", series)
        manifest.add_output(out / "returns.csv")
    vol = jumps.local_vol(series, jc["window"])
    events = jumps.detect_jumps(series, vol, jc["threshold"])
    if jc["min_separation"] > 0:
        kept, last = [], -(10**9)
        for ev in events:
            if ev.index - last >= jc["min_separation"]:
                kept.append(ev)
            last = ev.index
        events = kept
    if jc["news"] is not None:
        feed = read_news_csv(jc["news"])
        events = jumps.match_news(
            events, feed, jc["window_before"], jc["window_after"], ticker=jc["ticker"]
        )
    write_events_csv(out / "events.csv", events)
    manifest.add_output(out / "events.csv")
    summary: dict = {"n_events": len(events)}
    if planted is not None:
        summary["n_planted"] = planted
    if len(events) > 50:
        tail = jumps.jump_tail(events, jc["s_min"])
        curve_lines = ["s,count"]
        for s_val, cnt in zip(tail.s, tail.cumulative):
            curve_lines.append(f"{repr(float(s_val))},{int(cnt)}")
        from .io import atomic_write_text

        atomic_write_text(out / "tail_curve.csv", "\n".join(curve_lines) + "\n")
        manifest.add_output(out / "tail_curve.csv")
        summary["mu_hat"] = tail.fit.exponent
        summary["mu_stderr"] = tail.fit.stderr_exponent
    fit_hi = jc["fit_hi"] if jc["fit_hi"] is not None else jc["horizon"]
    try:
        profiles = jumps.relaxation_profile(
            series, events, jc["horizon"], fit_range=(jc["fit_lo"], fit_hi)
        )
    except ValueError:
        profiles = {}
    for label, prof in profiles.items():
        write_lagcurve_csv(out / f"relaxation_{label}.csv", prof.curve)
        manifest.add_output(out / f"relaxation_{label}.csv")
        summary[f"zeta_hat_{label}"] = -prof.fit.exponent
        summary[f"n_events_{label}"] = prof.n_events
    write_json(out / "jumps.json", summary)
    manifest.add_output(out / "jumps.json")
    manifest.add_stage("jumps", summary)


def run_feedback(cfg: dict, out: Path, manifest: RunManifest) -> None:
    fc = cfg["feedback"]
    params = feedback.FeedbackParams(
        c=fc["c"], g_sv=fc["g_sv"], g_vs=fc["g_vs"], noise_s=fc["noise_s"],
        noise_v=fc["noise_v"], s_floor=fc["s_floor"], crisis_multiple=fc["crisis_multiple"],
    )
    threshold = feedback.stability_threshold(params)
    seeds = [stage_seed(cfg["seed"], f"feedback:{i}") for i in range(fc["n_seeds"])]
    workers = max(1, cfg["threads"])
    if workers > 1 and len(seeds) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            runs = list(pool.map(lambda s: feedback.simulate_feedback(params, fc["n"], s), seeds))
    else:
        runs = [feedback.simulate_feedback(params, fc["n"], s) for s in seeds]
    first = runs[0]
    write_coupled_csv(out / "coupled.csv", first.spread, first.vol, first.crisis_flags)
    manifest.add_output(out / "coupled.csv")
    stats = feedback.crisis_statistics(first)
    stable = [r.stable for r in runs]
    ratios = [float(np.mean(r.vol / r.spread)) for r in runs if r.stable]
    summary = {
        "stability_threshold": threshold,
        "n_seeds": len(seeds),
        "unstable_fraction": 1.0 - float(np.mean(stable)),
        "mean_vol_over_spread": float(np.mean(ratios)) if ratios else float("nan"),
        "crisis": stats.to_dict(),
    }
    write_json(out / "feedback.json", summary)
    manifest.add_output(out / "feedback.json")
    manifest.add_stage("feedback", summary)


_EXPONENT_KEYS = ("gamma_hat", "beta_hat", "mu_hat", "zeta_hat_unclassified",
                  "zeta_hat_news", "zeta_hat_no_news", "signature_slope")


def run_report(cfg: dict, out: Path, manifest: RunManifest) -> None:
    paths = cfg["report"]["manifests"]
    if not paths:
        raise DataError("report needs at least one manifest path")
    rows = []
    sections = []
    for p in paths:
        mp = Path(p)
        if not mp.exists():
            raise DataError(f"manifest not found: {mp}")
        try:
            data = json.loads(mp.read_text())
        except json.JSONDecodeError as exc:
            raise DataError(f"corrupt manifest {mp}: {exc}") from None
        section = {"manifest": str(mp), "experiment": data.get("experiment"),
                   "seed": data.get("seed"), "exponents": {}, "checks": {}}
        for stage in data.get("stages", []):
            for key, value in stage.get("summary", {}).items():
                if key in _EXPONENT_KEYS and isinstance(value, (int, float)):
                    section["exponents"][key] = value
                    rows.append((str(mp), key, float(value)))
                if key in ("balance", "balance_stderr", "signature_flatness_ratio",
                           "unstable_fraction", "stability_threshold"):
                    section["checks"][key] = value
        sections.append(section)
    write_json(out / "summary.json", {"n_runs": len(sections), "runs": sections})
    manifest.add_output(out / "summary.json")
    lines = ["manifest,name,value"]
    for m, k, v in rows:
        lines.append(f"{m},{k},{repr(v)}")
    from .io import atomic_write_text

    atomic_write_text(out / "exponents.csv", "\n".join(lines) + "\n")
    manifest.add_output(out / "exponents.csv")
    gp = [
        "# gnuplot script for curve outputs collected by `impactlab report`",
        "set logscale xy",
        "set datafile separator ','",
        "set key outside",
    ]
    plot_lines = []
    for p in paths:
        base = Path(p).parent
        for name in ("corr.csv", "response.csv", "signature.csv"):
            f = base / name
            if f.exists():
                plot_lines.append(f"'{f}' every ::1 using 1:2 with lines title '{base.name}/{name}'")
    if plot_lines:
        gp.append("plot \\\n  " + ", \\\n  ".join(plot_lines))
    atomic_write_text(out / "plots.gp", "\n".join(gp) + "\n")
    manifest.add_output(out / "plots.gp")
    manifest.add_stage("report", {"n_runs": len(sections), "n_exponents": len(rows)})


_RUNNERS = {
    "generate": run_generate,
    "simulate": run_simulate,
    "estimate": run_estimate,
    "calibrate": run_calibrate,
    "jumps": run_jumps,
    "feedback": run_feedback,
    "full-pipeline": run_full_pipeline,
    "report": run_report,
}


def run_experiment(cfg: dict) -> Path:
    """Execute the configured experiment; returns the manifest path."""
    out = Path(cfg["out"])
    out.mkdir(parents=True, exist_ok=True)
    manifest = RunManifest(cfg["experiment"], cfg["seed"], cfg, out)
    runner = _RUNNERS[cfg["experiment"]]
    try:
        runner(cfg, out, manifest)
    except np.linalg.LinAlgError as exc:
        raise NumericError(str(exc)) from None
    return manifest.write()


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="impactlab",
        description="Transient-impact microstructure experiments with seeded, manifest-tracked runs.",
    )
    parser.add_argument("--version", action="version", version=f"impactlab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("run",) + EXPERIMENTS:
        sp = sub.add_parser(name, help=f"run the {name} experiment" if name != "run"
                            else "run the experiment named in the config")
        sp.add_argument("--config", default=None, help="YAML config path")
        sp.add_argument("--seed", type=int, default=None, help="master seed override")
        sp.add_argument("--out", default=None, help="output directory override")
        sp.add_argument("--threads", type=int, default=None, help="worker threads for sweeps")
        if name == "report":
            sp.add_argument("manifests", nargs="*", help="manifest.json paths to aggregate")

    args = parser.parse_args(argv)
    try:
        cfg = load_config(args.config)
        if args.command != "run":
            cfg["experiment"] = args.command
        if args.seed is not None:
            cfg["seed"] = args.seed
        if args.out is not None:
            cfg["out"] = args.out
        if args.threads is not None:
            if args.threads < 1:
                raise ConfigError("--threads must be at least 1")
            cfg["threads"] = args.threads
        if args.command == "report" and getattr(args, "manifests", None):
            cfg["report"]["manifests"] = list(args.manifests)
        manifest_path = run_experiment(cfg)
    except ImpactLabError as exc:
        record = {"error": {"type": type(exc).__name__, "message": str(exc),
                            "exit_code": exc.exit_code}}
        print(json.dumps(record), file=sys.stderr)
        return exc.exit_code
    except ValueError as exc:
        record = {"error": {"type": "NumericError", "message": str(exc), "exit_code": 4}}
        print(json.dumps(record), file=sys.stderr)
        return 4
    print(manifest_path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
