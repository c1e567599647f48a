"""Command-line entry point: ``python3 -m tailrisk <command> ...``.

Commands
--------
measure         risk measures of a parametric law or a CSV sample
backtest        kupiec | traffic-light | christoffersen | compare
aggregate       scenario file -> capital charge
forecast        IGARCH model comparison table from a price/return CSV
counterexample  bank vs benchmark joint-score curves as CSV
cls-check       convex-level-set suite for a risk measure

Risk-measure grammar: ``name[@alpha][:key=value,...]`` with names
``var``, ``es``, ``ms``, ``mean``, ``qmix`` (``c=``), ``emix`` (``c=``),
``minmaxvar`` (``alpha=``) and ``gspec`` (``u=w`` pairs); every measure
accepts ``scale=``.

Distribution grammar: ``normal:mu=,sigma=``, ``t:nu=,loc=,scale=``,
``weibull:shape=,scale=``, ``exp:rate=,loc=``, ``uniform:a=,b=``,
``tem:c=,lam=,mu=,n=``, ``discrete:x1=p1,x2=p2,...`` and ``point:x``.

``--config FILE`` reads ``key = value`` lines whose keys are long option
names (``command`` selects the subcommand); options given on the command
line take precedence. Files written with ``--out`` start with a
``# config-digest: <sha256>`` line.

Exit status: 0 on success, 2 on configuration errors, 1 on numerical
failures.
"""
from __future__ import annotations

import argparse
import hashlib
import io
import json
import sys
from pathlib import Path


from . import backtest as bt
from . import elicit, forecast, scenario
from .dist import EmpiricalDistribution, parse_distribution, read_series
from .errors import ConfigError, TailRiskError
from .measures import RiskMeasureSpec


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(f"{self.prog}: {message}")


def _common():
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--config", help="key = value file with default options")
    p.add_argument("--seed", type=int, default=0, help="random seed (default 0)")
    p.add_argument("--out", help="write results to this file instead of stdout")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    root = _Parser(prog="tailrisk", description="Tail-risk measurement toolkit.")
    sub = root.add_subparsers(dest="command", required=True, parser_class=_Parser)

    m = sub.add_parser("measure", parents=[common], help="evaluate risk measures")
    src = m.add_mutually_exclusive_group(required=True)
    src.add_argument("--dist", help="parametric law, e.g. normal:mu=-1.5,sigma=1")
    src.add_argument("--data", help="CSV with header date,<value>")
    m.add_argument("--column", help="value column of --data (default: second column)")
    m.add_argument("--spec", action="append", required=True, help="risk measure; repeatable")

    b = sub.add_parser("backtest", parents=[common], help="exceedance and score backtests")
    b.add_argument("test", choices=["kupiec", "traffic-light", "christoffersen", "compare"])
    b.add_argument("--alpha", type=float, help="VaR level")
    b.add_argument("--exceedances", type=int, help="exceedance count N")
    b.add_argument("--window", type=int, help="number of days T")
    b.add_argument("--losses", help="CSV of realised losses")
    b.add_argument("--forecasts", help="CSV of VaR forecasts")
    b.add_argument("--model-scores", help="CSV of model scores")
    b.add_argument("--benchmark-scores", help="CSV of benchmark scores")
    b.add_argument("--side", choices=[bt.MODEL_WORSE, bt.MODEL_BETTER], default=bt.MODEL_WORSE)
    b.add_argument("--size", type=float, default=0.05)

    a = sub.add_parser("aggregate", parents=[common], help="scenario file -> charge")
    a.add_argument("--scenarios", required=True, help="scenario/prior file")

    f = sub.add_parser("forecast", parents=[common], help="IGARCH model comparison")
    f.add_argument("--data", required=True, help="CSV date,price or date,return")
    f.add_argument("--kind", choices=["price", "return"], default="price")
    f.add_argument("--returns", choices=["log", "simple"], default="log",
                   help="return convention when --kind price")
    f.add_argument("--notional", type=float, default=1_000_000.0)
    f.add_argument("--alpha", action="append", type=float, help="level; repeatable")
    f.add_argument("--standardized", action="store_true", help="unit-variance t innovations")

    c = sub.add_parser("counterexample", parents=[common], help="joint-score curves")
    c.add_argument("--mu", type=float, default=-1.5)
    c.add_argument("--sigma", type=float, default=1.0)
    c.add_argument("--alpha", type=float, default=0.975)
    c.add_argument("--scale", type=float, default=1.0, help="loss scale k")
    c.add_argument("--g2", choices=["logistic", "exp"], default="logistic")
    c.add_argument("--points", type=int, default=46)
    c.add_argument("--lo", type=float, default=0.55)
    c.add_argument("--hi", type=float, default=1.0)

    k = sub.add_parser("cls-check", parents=[common], help="convex-level-set suite")
    k.add_argument("--spec", action="append", required=True, help="risk measure; repeatable")
    k.add_argument("--pairs", type=int, default=1000)
    k.add_argument("--support", type=int, default=3)
    k.add_argument("--tol", type=float, default=1e-8)
    return root


_FLAGS = {"standardized"}


def read_config(path) -> list[tuple[str, str]]:
    """``key = value`` pairs from a config file, in order."""
    items = []
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"{path}: {exc.strerror}") from None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, eq, value = line.partition("=")
        if not eq or not key.strip():
            raise ConfigError(f"{path}:{lineno}: expected key = value")
        items.append((key.strip().replace("_", "-"), value.strip()))
    return items


def _merge_config(argv: list[str]) -> list[str]:
    path = None
    for i, tok in enumerate(argv):
        if tok == "--config" and i + 1 < len(argv):
            path = argv[i + 1]
        elif tok.startswith("--config="):
            path = tok.split("=", 1)[1]
    if path is None:
        return argv
    items = read_config(path)
    command = [v for k, v in items if k == "command"]
    positional = [v for k, v in items if k == "test"]
    tokens = []
    for key, value in items:
        if key in ("command", "test"):
            continue
        if key in _FLAGS:
            if value.lower() in ("1", "true", "yes"):
                tokens.append(f"--{key}")
            continue
        tokens += [f"--{key}", value]
    argv = list(argv)
    if argv and not argv[0].startswith("-"):
        head, rest = argv[:1], argv[1:]
    elif command:
        head, rest = command[-1:], argv
    else:
        raise ConfigError(f"{path}: no command given")
    if head[0] == "backtest" and positional and not (rest and not rest[0].startswith("-")):
        head = head + positional[-1:]
    elif head[0] == "backtest" and rest and not rest[0].startswith("-"):
        head, rest = head + rest[:1], rest[1:]
    return head + tokens + rest


def _digest(args) -> str:
    cfg = {k: v for k, v in sorted(vars(args).items()) if k not in ("out", "config")}
    blob = json.dumps(cfg, sort_keys=True, default=str).encode()
    return hashlib.sha256(blob).hexdigest()


def _values(path):
    return read_series(path)[1]


# --- subcommands ----------------------------------------------------------


def _cmd_measure(args, out):
    if args.dist:
        law = parse_distribution(args.dist)
    else:
        _, values = read_series(args.data, args.column)
        law = EmpiricalDistribution(values)
    specs = [RiskMeasureSpec.parse(s) for s in args.spec]
    out.write("spec,value\n")
    for text, spec in zip(args.spec, specs):
        out.write(f"{text},{spec.evaluate(law):.10g}\n")


def _exceedance_series(args):
    if args.alpha is None:
        raise ConfigError("backtest: --alpha is required")
    if args.losses or args.forecasts:
        if not (args.losses and args.forecasts):
            raise ConfigError("backtest: --losses and --forecasts go together")
        return bt.exceedances(_values(args.losses), _values(args.forecasts), args.alpha)
    if args.exceedances is None or args.window is None:
        raise ConfigError("backtest: give --exceedances and --window, or --losses and --forecasts")
    return bt.ExceedanceSeries.from_counts(args.window, args.exceedances, args.alpha)


def _cmd_backtest(args, out):
    if args.test == "compare":
        if not (args.model_scores and args.benchmark_scores):
            raise ConfigError("backtest compare: --model-scores and --benchmark-scores are required")
        rep = bt.comparative_score_backtest(_values(args.model_scores), _values(args.benchmark_scores),
                                            args.side, args.size)
    else:
        e = _exceedance_series(args)
        if args.test == "kupiec":
            rep = bt.kupiec_pof(e, args.size)
        elif args.test == "traffic-light":
            rep = bt.traffic_light(e)
        else:
            rep = bt.christoffersen_cc(e, args.size)
    out.write(rep.to_line() + "\n")


def _cmd_aggregate(args, out):
    cfg = scenario.parse_scenario_file(args.scenarios)
    x = cfg.risk_input(Path(args.scenarios).parent)
    out.write("scenario,value\n")
    for sc, v in zip(cfg.scenarios, x.values):
        out.write(f"{sc.label},{v:.10g}\n")
    out.write(f"charge,{scenario.aggregate(x, cfg.priors):.10g}\n")


def _cmd_forecast(args, out):
    _, values = read_series(args.data)
    r = forecast.returns_from_prices(values, args.returns) if args.kind == "price" else values
    alphas = tuple(args.alpha) if args.alpha else forecast.TABLE_ALPHAS
    res = forecast.model_comparison(r, args.notional, alphas, args.standardized)
    m1, m2 = res.model1, res.model2
    notes = [f"model1 gaussian mu={m1.mu:.6g} beta={m1.beta:.6g} loglik={m1.loglik:.6f}",
             f"model2 t mu={m2.mu:.6g} beta={m2.beta:.6g} nu={m2.nu:.6g} loglik={m2.loglik:.6f}"]
    forecast.write_table_csv(res.rows, out, notes)


def _cmd_counterexample(args, out):
    xs = elicit.score_grid(args.points, args.lo, args.hi)
    table = elicit.counterexample_curves(args.mu, args.sigma, args.alpha, args.scale, xs, args.g2)
    table.to_csv(out)


def _cmd_cls(args, out):
    out.write("spec,pairs,violations,witness\n")
    for text in args.spec:
        spec = RiskMeasureSpec.parse(text)
        bad, w = elicit.count_cls_violations(spec, args.pairs, args.support, args.seed, args.tol)
        desc = "" if w is None else f"lam={w.lam:g} rho={w.rho1:.10g} rho_mix={w.rho_mix:.10g}"
        out.write(f"{text},{args.pairs},{bad},{desc}\n")


_COMMANDS = {
    "measure": _cmd_measure,
    "backtest": _cmd_backtest,
    "aggregate": _cmd_aggregate,
    "forecast": _cmd_forecast,
    "counterexample": _cmd_counterexample,
    "cls-check": _cmd_cls,
}


def execute(argv=None, stdout=None, stderr=None) -> int:
    """Run one command; returns the process exit status."""
    argv = list(sys.argv[1:] if argv is None else argv)
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    try:
        args = build_parser().parse_args(_merge_config(argv))
        buf = io.StringIO()
        _COMMANDS[args.command](args, buf)
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    except (ConfigError, ValueError, FileNotFoundError) as exc:
        stderr.write(f"tailrisk: config error: {exc}\n")
        return 2
    except TailRiskError as exc:
        stderr.write(f"tailrisk: {type(exc).__name__}: {exc}\n")
        return 1
    text = buf.getvalue()
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(f"# config-digest: {_digest(args)}\n")
            fh.write(text)
    else:
        stdout.write(text)
    return 0


def main():
    sys.exit(execute())
