"""Command-line front end: experiment configs in, machine-readable reports out.

Exit codes: 0 computed, 1 suite criterion failed, 2 bad configuration,
3 numerical refusal (ambiguous rank, tail bound, or kernel shape).
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import __version__
from .blaschke import make_blaschke
from .errors import (
    AmbiguousMatching,
    AmbiguousRank,
    ConfigInvalid,
    HankelLiftError,
    KernelNotBeurling,
    NoConvergence,
    TailBoundExceeded,
    UnsupportedFormat,
)
from .fourier import materialize, symbol_from_laurent
from .intertwine import (
    gcd_symbol_theta,
    intertwiner_from_symbol,
    lifting_symbol,
    report_to_payload,
    solve_intertwiner_space,
    solve_toeplitz_fixed_space,
    verify_block_lift,
)
from .model_space import tm_basis
from .operators import hilbert_generator, hilbert_hankel
from .subspaces import (
    check_invariance,
    check_reducing,
    invariance_payload,
    verify_kernel_identity,
)
from .suite import run_suite

COMMANDS = (
    "gcd",
    "intertwine",
    "lift-check",
    "invariance",
    "reduce",
    "kernel",
    "toeplitz-fixed",
    "hilbert",
    "suite",
)

REFUSALS = (AmbiguousRank, TailBoundExceeded, NoConvergence, AmbiguousMatching, KernelNotBeurling)


@dataclass
class ExperimentConfig:
    command: str
    zeros: list = field(default_factory=list)
    constant: complex = 1.0 + 0.0j
    symbol_pairs: Optional[list] = None  # [(index, complex)] Laurent data
    generator: Optional[str] = None
    order: int = 64
    rank_tol: float = 1e-8
    residual_tol: float = 1e-8
    seed: int = 0
    out: Optional[str] = None
    format: str = "json"

    def echo(self) -> dict:
        return {
            "command": self.command,
            "zeros": [[z.real, z.imag] for z in self.zeros],
            "constant": [self.constant.real, self.constant.imag],
            "symbol_coeffs": (
                None
                if self.symbol_pairs is None
                else [[k, v.real, v.imag] for k, v in self.symbol_pairs]
            ),
            "generator": self.generator,
            "order": self.order,
            "rank_tol": self.rank_tol,
            "residual_tol": self.residual_tol,
            "seed": self.seed,
            "format": self.format,
        }


@dataclass
class Report:
    command: str
    config: dict
    payload: dict
    checks: list
    error: Optional[dict]
    wall_time: float

    def to_jsonable(self) -> dict:
        # wall time deliberately excluded: identical configs must produce
        # byte-identical canonical reports
        return {
            "command": self.command,
            "config": self.config,
            "payload": self.payload,
            "checks": self.checks,
            "error": self.error,
            "provenance": {"version": __version__},
        }


def _parse_complex_pair(text: str) -> complex:
    parts = text.split(",")
    if len(parts) != 2:
        raise ConfigInvalid(f"expected 're,im', got {text!r}")
    try:
        return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        raise ConfigInvalid(f"cannot parse complex pair {text!r}")


def _parse_zeros(text: str) -> list:
    text = text.strip()
    if not text:
        return []
    return [_parse_complex_pair(chunk) for chunk in text.split(";") if chunk.strip()]


def _load_symbol_file(path: str) -> list:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigInvalid(f"cannot read symbol file {path}: {exc}")
    pairs = []
    for item in data:
        if not isinstance(item, list) or len(item) != 3:
            raise ConfigInvalid("symbol file entries must be [index, re, im] triples")
        pairs.append((int(item[0]), complex(float(item[1]), float(item[2]))))
    return pairs


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hankellift",
        description="Numerical checks for Hankel lifts, invariant subspaces, and kernels "
        "on finite-Blaschke model spaces.",
    )
    parser.add_argument("--command", choices=COMMANDS)
    parser.add_argument("--config", help="JSON config file; wins over flags on conflict")
    parser.add_argument("--zeros", help="Blaschke zeros as 're,im;re,im;...'")
    parser.add_argument("--constant", help="unimodular constant as 're,im'")
    parser.add_argument("--symbol-coeffs", help="JSON file of [index, re, im] triples")
    parser.add_argument("--generator", choices=["hilbert"], help="named coefficient rule")
    parser.add_argument("--order", type=int, help="truncation order N (default 64)")
    parser.add_argument("--rank-tol", type=float, help="relative rank cut (default 1e-8)")
    parser.add_argument("--residual-tol", type=float, help="residual tolerance (default 1e-8)")
    parser.add_argument("--seed", type=int, help="seed for randomized payloads")
    parser.add_argument("--out", help="write the report to this path instead of stdout")
    parser.add_argument("--format", choices=["json", "csv-summary", "text"])
    return parser


_FLAG_FIELDS = {
    "command": "command",
    "zeros": "zeros",
    "constant": "constant",
    "symbol_coeffs": "symbol_coeffs",
    "generator": "generator",
    "order": "order",
    "rank_tol": "rank_tol",
    "residual_tol": "residual_tol",
    "seed": "seed",
    "out": "out",
    "format": "format",
}


def load_config(argv) -> ExperimentConfig:
    ns = build_parser().parse_args(argv)
    values = {
        "command": ns.command,
        "zeros": ns.zeros,
        "constant": ns.constant,
        "symbol_coeffs": ns.symbol_coeffs,
        "generator": ns.generator,
        "order": ns.order,
        "rank_tol": ns.rank_tol,
        "residual_tol": ns.residual_tol,
        "seed": ns.seed,
        "out": ns.out,
        "format": ns.format,
    }
    file_values = {}
    if ns.config:
        try:
            with open(ns.config) as fh:
                file_values = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigInvalid(f"cannot read config file {ns.config}: {exc}")
        if not isinstance(file_values, dict):
            raise ConfigInvalid("config file must hold a JSON object")
        for key in file_values:
            if key not in _FLAG_FIELDS:
                raise ConfigInvalid(f"unknown config key {key!r}")
        for key, file_val in file_values.items():
            if values.get(key) is not None and values[key] != file_val:
                print(
                    f"warning: config file overrides --{key.replace('_', '-')}",
                    file=sys.stderr,
                )
            values[key] = file_val

    if not values.get("command"):
        raise ConfigInvalid("no command given (use --command or a config file)")
    if values["command"] not in COMMANDS:
        raise ConfigInvalid(f"unknown command {values['command']!r}")

    cfg = ExperimentConfig(command=values["command"])
    raw_zeros = values.get("zeros")
    if isinstance(raw_zeros, str):
        cfg.zeros = _parse_zeros(raw_zeros)
    elif isinstance(raw_zeros, list):
        cfg.zeros = [complex(float(p[0]), float(p[1])) for p in raw_zeros]
    raw_const = values.get("constant")
    if isinstance(raw_const, str):
        cfg.constant = _parse_complex_pair(raw_const)
    elif isinstance(raw_const, list):
        cfg.constant = complex(float(raw_const[0]), float(raw_const[1]))
    raw_sym = values.get("symbol_coeffs")
    if isinstance(raw_sym, str):
        cfg.symbol_pairs = _load_symbol_file(raw_sym)
    elif isinstance(raw_sym, list):
        cfg.symbol_pairs = [
            (int(t[0]), complex(float(t[1]), float(t[2]))) for t in raw_sym
        ]
    if values.get("generator") is not None:
        if values["generator"] != "hilbert":
            raise ConfigInvalid(f"unknown generator {values['generator']!r}")
        cfg.generator = values["generator"]
    for key, cast in (("order", int), ("seed", int)):
        if values.get(key) is not None:
            cfg.__setattr__(key, cast(values[key]))
    for key in ("rank_tol", "residual_tol"):
        if values.get(key) is not None:
            cfg.__setattr__(key, float(values[key]))
    if values.get("out") is not None:
        cfg.out = str(values["out"])
    if values.get("format") is not None:
        cfg.format = str(values["format"])

    if cfg.order < 1:
        raise ConfigInvalid("order must be >= 1")
    if cfg.rank_tol <= 0 or cfg.residual_tol <= 0:
        raise ConfigInvalid("tolerances must be positive")
    if cfg.format not in ("json", "csv-summary", "text"):
        raise ConfigInvalid(f"unknown format {cfg.format!r}")
    return cfg


def _require_u(cfg: ExperimentConfig):
    if not cfg.zeros and cfg.command not in ("hilbert", "suite"):
        raise ConfigInvalid(f"command {cfg.command!r} needs --zeros")
    return make_blaschke(cfg.zeros, cfg.constant)


def _require_symbol(cfg: ExperimentConfig, default_window: int):
    if cfg.symbol_pairs is not None:
        return symbol_from_laurent(cfg.symbol_pairs)
    if cfg.generator == "hilbert":
        return materialize(hilbert_generator(), default_window)
    raise ConfigInvalid(
        f"command {cfg.command!r} needs --symbol-coeffs or --generator"
    )


def _condition_check(cond, prefix="") -> dict:
    return {
        "name": prefix + cond.name,
        "passed": cond.holds,
        "value": cond.residual,
        "tolerance": cond.tolerance,
        "decisive": cond.decisive,
    }


def run_experiment(cfg: ExperimentConfig) -> Report:
    """Dispatch one experiment; computational refusals become error payloads."""
    t0 = time.perf_counter()
    payload: dict = {}
    checks: list = []
    error = None
    try:
        if cfg.command == "gcd":
            u = _require_u(cfg)
            theta = gcd_symbol_theta(u)
            payload = {
                "u": u.text(),
                "theta": theta.text(),
                "theta_degree": theta.degree,
                "theta_zeros": [[z.real, z.imag] for z in theta.zeros],
            }
            checks = [
                {
                    "name": "gcd nontrivial",
                    "passed": theta.degree > 0,
                    "value": float(theta.degree),
                    "tolerance": 0.0,
                }
            ]
        elif cfg.command == "intertwine":
            u = _require_u(cfg)
            rep = solve_intertwiner_space(u, cfg.order, rank_tol=cfg.rank_tol)
            payload = report_to_payload(rep)
            checks = [
                {
                    "name": "existence dichotomy",
                    "passed": (rep.solution_dim > 0) == (rep.theta.degree > 0),
                    "value": float(rep.solution_dim),
                    "tolerance": 0.0,
                }
            ]
        elif cfg.command == "lift-check":
            u = _require_u(cfg)
            basis = tm_basis(u, cfg.order)
            if cfg.symbol_pairs is not None or cfg.generator is not None:
                phi = _require_symbol(cfg, 2 * basis.order)
            else:
                phi = lifting_symbol(u, 2 * basis.order)
                if phi is None:
                    payload = {"u": u.text(), "gcd_trivial": True}
                    checks = []
                    raise _Done()
            x = intertwiner_from_symbol(basis, phi)
            rec = verify_block_lift(x, phi, u, cfg.order)
            payload = {
                "u": u.text(),
                "top_left_residual": rec.top_left_residual,
                "off_diagonal_max": rec.off_diagonal_max,
                "norm_H": rec.norm_h,
                "norm_X": rec.norm_x,
                "norm_gap": rec.norm_gap,
                "order": rec.order,
            }
            checks = [
                {
                    "name": "block lift",
                    "passed": rec.off_diagonal_max <= cfg.residual_tol
                    and rec.norm_gap <= cfg.residual_tol,
                    "value": max(rec.off_diagonal_max, rec.norm_gap),
                    "tolerance": cfg.residual_tol,
                }
            ]
        elif cfg.command == "invariance":
            u = _require_u(cfg)
            phi = _require_symbol(cfg, cfg.order // 2)
            rep = check_invariance(u, phi, cfg.order, cfg.residual_tol)
            payload = invariance_payload(rep)
            checks = [_condition_check(c) for c in rep.conditions]
        elif cfg.command == "reduce":
            u = _require_u(cfg)
            phi = _require_symbol(cfg, cfg.order // 2)
            rep = check_reducing(u, phi, cfg.order, cfg.residual_tol)
            payload = {
                "u": u.text(),
                "theta": rep.theta.text(),
                "forward": invariance_payload(rep.forward),
                "adjoint": invariance_payload(rep.adjoint),
                "verdicts": list(rep.verdicts),
                "agreement": rep.agreement,
                "decisive": rep.decisive,
            }
            checks = (
                [_condition_check(c, "forward ") for c in rep.forward.conditions]
                + [_condition_check(c, "adjoint ") for c in rep.adjoint.conditions]
                + [_condition_check(rep.gcd_membership)]
            )
        elif cfg.command == "kernel":
            u = _require_u(cfg)
            rep = verify_kernel_identity(u, cfg.order)
            payload = {
                "u": rep.u.text(),
                "inclusion_residual": rep.inclusion_residual,
                "inclusion_tolerance": rep.inclusion_tolerance,
                "restricted_sigma_min": rep.restricted_sigma_min,
                "k_range": list(rep.k_range),
                "order": rep.order,
            }
            checks = [
                {
                    "name": "kernel inclusion",
                    "passed": rep.inclusion_holds,
                    "value": rep.inclusion_residual,
                    "tolerance": rep.inclusion_tolerance,
                },
                {
                    "name": "no kernel in model space",
                    "passed": rep.restricted_sigma_min > 0.05,
                    "value": rep.restricted_sigma_min,
                    "tolerance": 0.05,
                },
            ]
        elif cfg.command == "toeplitz-fixed":
            u = _require_u(cfg)
            rep = solve_toeplitz_fixed_space(u, cfg.order, rank_tol=cfg.rank_tol)
            payload = {
                "u": rep.u.text(),
                "solution_dim": rep.solution_dim,
                "gap": [rep.gap.sv_below, None if rep.gap.sv_above == float("inf") else rep.gap.sv_above],
                "order": rep.order,
            }
            checks = [
                {
                    "name": "fixed-point triviality",
                    "passed": rep.solution_dim == 0,
                    "value": float(rep.solution_dim),
                    "tolerance": 0.0,
                }
            ]
        elif cfg.command == "hilbert":
            gamma = hilbert_hankel(cfg.order)
            svals = np.linalg.svd(gamma.entries, compute_uv=False)
            payload = {
                "order": cfg.order,
                "norm": float(svals[0]),
                "min_singular_value": float(svals[-1]),
            }
            checks = [
                {
                    "name": "norm below pi",
                    "passed": bool(svals[0] < np.pi),
                    "value": float(svals[0]),
                    "tolerance": float(np.pi),
                },
                {
                    "name": "positive definite section",
                    "passed": bool(svals[-1] > 0.0),
                    "value": float(svals[-1]),
                    "tolerance": 0.0,
                },
            ]
        elif cfg.command == "suite":
            results = run_suite()
            payload = {
                "criteria": [
                    {
                        "index": r.index,
                        "name": r.name,
                        "passed": r.passed,
                        "details": r.details,
                    }
                    for r in results
                ],
                "all_passed": all(r.passed for r in results),
            }
            checks = [
                {
                    "name": f"criterion {r.index}: {r.name}",
                    "passed": r.passed,
                    "value": 1.0 if r.passed else 0.0,
                    "tolerance": 1.0,
                }
                for r in results
            ]
    except _Done:
        pass
    except REFUSALS as exc:
        error = {"type": type(exc).__name__, "message": str(exc)}
    return Report(
        command=cfg.command,
        config=cfg.echo(),
        payload=payload,
        checks=checks,
        error=error,
        wall_time=time.perf_counter() - t0,
    )


class _Done(Exception):
    """Early exit from the dispatch body with payload already set."""


# check names -> the classical statement they exercise, for the text format
_CHECK_NOTES = {
    "gcd nontrivial": "nonzero intertwiner exists iff gcd{u, reflected u} != 1",
    "existence dichotomy": "solution space nontrivial iff gcd{u, reflected u} != 1",
    "block lift": "H = diag(X, 0) on Q_u + uH^2 with equal norms",
    "invariant": "uH^2 invariant under the Hankel operator",
    "kernel": "uH^2 inside ker of the Hankel operator",
    "symbol": "P_+ of the symbol lies in the model space of the reflection",
    "gcd-orthogonal": "P_+ of the symbol orthogonal to gcd{u, reflected u} H^2",
    "kernel inclusion": "uH^2 inside ker H for the kernel symbol",
    "no kernel in model space": "restriction of H to Q_u is injective",
    "fixed-point triviality": "S* X S = X forces X = 0 (Brown-Halmos + Coburn)",
    "norm below pi": "Hilbert matrix sections stay below the sharp bound pi",
    "positive definite section": "truncated Hilbert matrix has trivial kernel",
}


def emit_report(report: Report, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report.to_jsonable(), sort_keys=True, indent=2) + "\n"
    if fmt == "csv-summary":
        lines = ["check,passed,value,tolerance"]
        for chk in report.checks:
            name = chk["name"].replace('"', "'")
            lines.append(
                f"\"{name}\",{str(chk['passed']).lower()},{chk['value']:.12g},{chk['tolerance']:.12g}"
            )
        if report.error:
            lines.append(f"\"error: {report.error['type']}\",false,nan,nan")
        return "\n".join(lines) + "\n"
    if fmt == "text":
        lines = [f"hankellift {__version__} -- command: {report.command}"]
        if report.error:
            lines.append(f"REFUSED: {report.error['type']}: {report.error['message']}")
        for chk in report.checks:
            status = "ok" if chk["passed"] else "FAIL"
            note = _CHECK_NOTES.get(chk["name"], "")
            lines.append(
                f"  [{status}] {chk['name']}: value {chk['value']:.6g} "
                f"(tolerance {chk['tolerance']:.6g})" + (f" -- {note}" if note else "")
            )
        for key, value in sorted(report.payload.items()):
            if isinstance(value, (str, int, float, bool)):
                lines.append(f"  {key} = {value}")
        lines.append(f"  wall time: {report.wall_time:.2f}s")
        return "\n".join(lines) + "\n"
    raise UnsupportedFormat(f"unknown format {fmt!r}")


def main(argv=None) -> int:
    try:
        cfg = load_config(argv if argv is not None else sys.argv[1:])
    except ConfigInvalid as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except SystemExit as exc:  # argparse errors
        return 2 if exc.code not in (0, None) else 0
    try:
        report = run_experiment(cfg)
    except ConfigInvalid as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except HankelLiftError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    text = emit_report(report, cfg.format)
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if report.error is not None:
        return 3
    if cfg.command == "suite" and not report.payload.get("all_passed", False):
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
