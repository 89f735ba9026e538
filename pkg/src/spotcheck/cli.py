"""``spotcheck`` command line front end.

Exit codes: 0 success (an infeasible analytic result is still a success),
1 verification failure, 2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import asdict, dataclass, field, fields
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from . import experiments
from .errors import SpotCheckError
from .incentives import Concept, Strategy, verify
from .mechanisms import (
    EconParams,
    Feasibility,
    Mechanism,
    PersonalPolicy,
    feasibility_report,
    optimal_hetero_prss,
    optimal_ros,
    optimal_rss,
    optimal_rsus,
    prss_policy,
)
from .prob_model import HeteroModel, SignalModel, build_model
from .sim import SimConfig, simulate
from .workload import compare_mechanisms, hetero_workload, ta_workload

COMMANDS = ("optimal", "verify", "compare", "sweep-rc", "sweep-n", "simulate")
FAMILIES = ("ros", "rss", "rsus", "hetero", "custom")


class ConfigError(Exception):
    pass


@dataclass
class RunConfig:
    prior_a: float = 0.8
    p_a_given_a: float = 0.9
    p_b_given_b: float = 0.9
    hetero_model: Optional[Dict[str, Any]] = None
    cost: float = 1.0
    reward: float = 25.0
    n: int = 3
    family: str = "rss"
    concept: str = "dsic"
    x_a: Optional[float] = None
    x_b: Optional[float] = None
    trials: int = 100_000
    seed: int = 0
    profile: Optional[List[str]] = None
    r_over_c: List[float] = field(default_factory=lambda: [2.0, 5.0, 10.0, 20.0, 50.0, 100.0, 200.0, 500.0, 1000.0])
    p_signal: List[float] = field(default_factory=lambda: [0.6, 0.7, 0.8, 0.9, 1.0])
    prior_step: float = 0.001
    n_min: int = 1
    n_max: int = 50
    out: Optional[str] = None
    format: Optional[str] = None

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "RunConfig":
        """Accept either the flat layout or ``{model, econ, ...}`` sections."""
        flat = dict(data)
        if "model" in flat:
            model = flat.pop("model")
            if not isinstance(model, dict) or set(model) - {"prior_a", "p_a_given_a", "p_b_given_b"}:
                raise ConfigError(f"bad 'model' section: {model!r}")
            flat.update(model)
        if "econ" in flat:
            econ = flat.pop("econ")
            if not isinstance(econ, dict) or set(econ) - {"cost", "reward"}:
                raise ConfigError(f"bad 'econ' section: {econ!r}")
            flat.update(econ)
        known = {f.name for f in fields(cls)}
        unknown = set(flat) - known
        if unknown:
            raise ConfigError(f"unknown configuration keys: {sorted(unknown)}")
        cfg = cls(**flat)
        cfg.validate()
        return cfg

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    def validate(self):
        try:
            for name in ("prior_a", "p_a_given_a", "p_b_given_b", "cost", "reward", "prior_step"):
                setattr(self, name, float(getattr(self, name)))
            for name in ("n", "trials", "seed", "n_min", "n_max"):
                setattr(self, name, int(getattr(self, name)))
            self.r_over_c = [float(v) for v in self.r_over_c]
            self.p_signal = [float(v) for v in self.p_signal]
        except (TypeError, ValueError) as exc:
            raise ConfigError(str(exc)) from None
        if self.family not in FAMILIES:
            raise ConfigError(f"family must be one of {FAMILIES}")
        if self.concept not in ("dsic", "iccp"):
            raise ConfigError("concept must be dsic or iccp")
        if self.n < 1:
            raise ConfigError("n must be >= 1")
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if not 0 < self.prior_step < 0.5:
            raise ConfigError("prior_step must be in (0, 0.5)")
        if not self.r_over_c or not self.p_signal or any(v <= 0 for v in self.r_over_c):
            raise ConfigError("sweep grids must be nonempty and R/c positive")
        if not 1 <= self.n_min <= self.n_max:
            raise ConfigError("need 1 <= n_min <= n_max")
        if self.format not in (None, "csv", "json", "text"):
            raise ConfigError("format must be csv, json or text")
        if self.family == "custom" and (self.x_a is None or self.x_b is None):
            raise ConfigError("family=custom needs x_a and x_b")
        if self.profile is not None:
            try:
                self.profile = [Strategy[s.upper()].name for s in self.profile]
            except KeyError as exc:
                raise ConfigError(f"unknown strategy {exc}") from None
        if self.hetero_model is not None:
            h = self.hetero_model
            if set(h) != {"prior_a", "student_noise", "ta_noise", "costs"}:
                raise ConfigError("hetero_model needs exactly prior_a, student_noise, ta_noise, costs")
        # build once so model / econ errors surface as config errors
        self.signal_model()
        self.econ()
        if self.hetero_model is not None:
            self.hetero()

    def signal_model(self) -> SignalModel:
        return build_model(self.prior_a, self.p_a_given_a, self.p_b_given_b)

    def econ(self) -> EconParams:
        return EconParams(self.cost, self.reward)

    def hetero(self) -> HeteroModel:
        if self.hetero_model is None:
            return HeteroModel.homogeneous(self.signal_model(), self.n, self.cost)
        h = self.hetero_model
        return HeteroModel(
            h["prior_a"],
            tuple(tuple(p) for p in h["student_noise"]),
            tuple(h["ta_noise"]),
            tuple(h["costs"]),
        )


def _build_mechanism(cfg: RunConfig):
    """Returns (model, mechanism or Feasibility)."""
    if cfg.family == "hetero" or cfg.hetero_model is not None:
        model = cfg.hetero()
        if cfg.family in ("hetero", "rss"):
            return model, optimal_hetero_prss(model, cfg.reward)
        if cfg.family == "custom":
            pol = PersonalPolicy(((cfg.x_a, cfg.x_b),) * model.n)
            return model, Mechanism(pol, EconParams(max(model.costs), cfg.reward))
        raise ConfigError(f"family {cfg.family} is not available for heterogeneous models")
    model = cfg.signal_model()
    econ = cfg.econ()
    if cfg.family == "custom":
        x_a, x_b = (cfg.x_b, cfg.x_a) if model.label_swapped else (cfg.x_a, cfg.x_b)
        return model, Mechanism(prss_policy(cfg.n, x_a, x_b), econ)
    build = {"ros": optimal_ros, "rss": optimal_rss, "rsus": optimal_rsus}[cfg.family]
    return model, build(model, econ, cfg.n)


def _policy_dict(model, mech: Mechanism) -> Dict[str, Any]:
    p = mech.policy
    if isinstance(p, PersonalPolicy):
        return {"pairs": [list(pair) for pair in p.pairs]}
    x_a, x_b = list(p.x_a), list(p.x_b)
    if isinstance(model, SignalModel) and model.label_swapped:
        # back to the caller's naming: raw count k' of 'a' reports is n - k
        x_a, x_b = x_b[::-1], x_a[::-1]
    out = {"x_a": x_a, "x_b": x_b}
    if mech.family.value == "RSUS_OPT":
        out["x"] = [max(a, b) for a, b in zip(x_a, x_b)]
    return out


def _workload(model, mech: Mechanism) -> float:
    if isinstance(mech.policy, PersonalPolicy):
        return hetero_workload(model, mech.policy)
    return ta_workload(model, mech).workload


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _csv(columns, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        d = r.as_dict() if hasattr(r, "as_dict") else r
        w.writerow([_fmt(d[c]) for c in columns])
    return buf.getvalue()


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, float) and not np.isfinite(obj):
        return None
    return obj


def _color(text, code):
    if os.environ.get("NO_COLOR") is not None or not sys.stdout.isatty():
        return text
    return f"\033[{code}m{text}\033[0m"


def _text(result: Dict[str, Any], indent=0) -> str:
    lines = []
    pad = "  " * indent
    for k, v in result.items():
        if isinstance(v, dict):
            lines.append(f"{pad}{k}:")
            lines.append(_text(v, indent + 1))
        elif isinstance(v, (list, tuple)):
            lines.append(f"{pad}{k}: " + ", ".join(_fmt(x) if not isinstance(x, list) else str(x) for x in v))
        else:
            lines.append(f"{pad}{k}: {_fmt(v)}")
    return "\n".join(lines)


def cmd_optimal(cfg: RunConfig):
    model, mech = _build_mechanism(cfg)
    result: Dict[str, Any] = {"family": cfg.family}
    if isinstance(model, SignalModel):
        fr = feasibility_report(model, cfg.econ())
        result["margins"] = {"ros": fr.ros_margin, "rss": fr.rss_margin}
        result["label_swapped"] = model.label_swapped
    if isinstance(mech, Feasibility):
        result.update(feasible=False, margin=mech.margin, reason=mech.reason)
    else:
        result.update(feasible=True, margin=mech.feasibility.margin,
                      policy=_policy_dict(model, mech), workload=_workload(model, mech))
    return 0, result


def cmd_verify(cfg: RunConfig):
    model, mech = _build_mechanism(cfg)
    if isinstance(mech, Feasibility):
        raise ConfigError(f"mechanism is infeasible: {mech.reason}")
    rep = verify(model, mech, Concept(cfg.concept.upper()))
    w = rep.worst
    result = {
        "concept": rep.concept.value,
        "passed": rep.passed,
        "profiles_checked": rep.profiles_checked,
        "tolerance": rep.tolerance,
        "worst": {
            "student": w.student,
            "opponent_profile": [s.name for s in w.opponent_profile],
            "strategy": w.strategy.name,
            "utility_gap": w.utility_gap,
        },
    }
    return (0 if rep.passed else 1), result


def cmd_compare(cfg: RunConfig):
    cmp = compare_mechanisms(cfg.signal_model(), cfg.econ(), cfg.n)
    result = {
        "ros_workload": cmp.ros_workload,
        "rss_workload": cmp.rss_workload,
        "rsus_workload": cmp.rsus_workload,
        "scaled_rss": cmp.scaled_rss,
        "scaled_rsus": cmp.scaled_rsus,
    }
    for name in ("ros", "rss", "rsus"):
        r = getattr(cmp, name)
        if isinstance(r, Feasibility):
            result[f"{name}_reason"] = r.reason
    return 0, result


def cmd_sweep_rc(cfg: RunConfig):
    rows = experiments.sweep_rc(cfg.r_over_c, cfg.p_signal, cfg.n, cfg.prior_step)
    return 0, {"columns": experiments.RC_COLUMNS, "rows": rows}


def cmd_sweep_n(cfg: RunConfig):
    rows = experiments.sweep_n(range(cfg.n_min, cfg.n_max + 1), cfg.prior_a, cfg.p_a_given_a,
                               cfg.p_b_given_b, cfg.cost, cfg.reward)
    return 0, {"columns": experiments.N_COLUMNS, "rows": rows}


def cmd_simulate(cfg: RunConfig):
    model, mech = _build_mechanism(cfg)
    if isinstance(mech, Feasibility):
        raise ConfigError(f"mechanism is infeasible: {mech.reason}")
    profile = [Strategy[s] for s in cfg.profile] if cfg.profile else [Strategy.TRUTHFUL] * mech.n
    res = simulate(SimConfig(model, mech, profile, cfg.trials, cfg.seed))
    analytic = _workload(model, mech)
    per_student = [
        {"student": i, "mean_utility": float(res.mean_utility[i]), "utility_se": float(res.utility_se[i]),
         "spot_check_rate": float(res.spot_check_rate[i])}
        for i in range(mech.n)
    ]
    result = {
        "trials": res.trials,
        "seed": cfg.seed,
        "empirical_workload": res.empirical_workload,
        "workload_se": res.workload_se,
        "analytic_workload": analytic,
        "delta": res.empirical_workload - analytic,
        "agreement_rate": res.agreement_rate,
        "students": per_student,
    }
    return 0, result


HANDLERS = {
    "optimal": cmd_optimal,
    "verify": cmd_verify,
    "compare": cmd_compare,
    "sweep-rc": cmd_sweep_rc,
    "sweep-n": cmd_sweep_n,
    "simulate": cmd_simulate,
}


def _floats(text):
    return [float(v) for v in text.split(",") if v.strip()]


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="spotcheck", description="Spot-checking peer grading mechanisms")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--config", help="JSON configuration file")
    p.add_argument("--prior", dest="prior_a", type=float)
    p.add_argument("--p-aa", dest="p_a_given_a", type=float)
    p.add_argument("--p-bb", dest="p_b_given_b", type=float)
    p.add_argument("--cost", type=float)
    p.add_argument("--reward", type=float)
    p.add_argument("--n", type=int)
    p.add_argument("--family", choices=FAMILIES)
    p.add_argument("--concept", choices=("dsic", "iccp"))
    p.add_argument("--x-a", dest="x_a", type=float, help="custom family: check probability for A reports")
    p.add_argument("--x-b", dest="x_b", type=float, help="custom family: check probability for B reports")
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--profile", type=lambda s: s.split(","), help="comma-separated strategies")
    p.add_argument("--r-over-c", dest="r_over_c", type=_floats)
    p.add_argument("--p-signal", dest="p_signal", type=_floats)
    p.add_argument("--prior-step", dest="prior_step", type=float)
    p.add_argument("--n-min", dest="n_min", type=int)
    p.add_argument("--n-max", dest="n_max", type=int)
    p.add_argument("--out")
    p.add_argument("--format", choices=("csv", "json", "text"))
    return p


def load_config(args: argparse.Namespace) -> RunConfig:
    data: Dict[str, Any] = {}
    if args.config:
        try:
            with open(args.config) as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config: {exc}") from None
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
        data.pop("command", None)
    overrides = {k: v for k, v in vars(args).items() if k not in ("command", "config") and v is not None}
    cfg = RunConfig.from_dict(data)
    for k, v in overrides.items():
        setattr(cfg, k, v)
    cfg.validate()
    return cfg


def render(command: str, cfg: RunConfig, result: Dict[str, Any]) -> str:
    fmt = cfg.format or ("csv" if command.startswith("sweep") else "text")
    if fmt == "json":
        payload = {"command": command, "config": cfg.to_dict(), "result": result}
        if "rows" in result:
            payload["result"] = {"columns": list(result["columns"]),
                                 "rows": [r.as_dict() for r in result["rows"]]}
        return json.dumps(_jsonable(payload), indent=2, sort_keys=True) + "\n"
    if fmt == "csv":
        if "rows" in result:
            return _csv(result["columns"], result["rows"])
        if command == "simulate":
            cols = ("student", "mean_utility", "utility_se", "spot_check_rate")
            return _csv(cols, result["students"])
        flat = {k: v for k, v in result.items() if not isinstance(v, (dict, list, tuple))}
        return _csv(tuple(flat), [flat])
    if "rows" in result:
        return _csv(result["columns"], result["rows"])
    text = _text(result) + "\n"
    if "passed" in result:
        verdict = _color("PASS", "32") if result["passed"] else _color("FAIL", "31")
        text = f"{result['concept']}: {verdict}\n" + text
    return text


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = load_config(args)
        code, result = HANDLERS[args.command](cfg)
    except (ConfigError, SpotCheckError, ValueError) as exc:
        print(f"spotcheck: error: {exc}", file=sys.stderr)
        return 2
    output = render(args.command, cfg, result)
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(output)
    else:
        sys.stdout.write(output)
    return code


if __name__ == "__main__":
    sys.exit(main())
