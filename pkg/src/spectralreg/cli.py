"""Command-line front end.

Commands: solve, equiv-check, map-params, sample, power-demo, suite. Output
is JSON (default) or CSV on stdout or ``--out``; identical command lines
produce byte-identical output (sorted keys, shortest round-trip floats).
Domain errors exit 1 with a single machine-parsable JSON line on stderr;
internal guard failures exit 2.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

import numpy as np

from .diffusion import power_demo
from .equivalence import (
    CSV_HEADER,
    check_heat_kernel_lemma,
    check_lazy_walk_lemma,
    check_pagerank_lemma,
    full_suite,
)
from .errors import DomainError, InputError, InternalCheckError, SpectralRegError
from .graphs import Graph, build_walk_matrices, parse_graph
from .regularizers import (
    Regularizer,
    alpha_from_lambda,
    eta_for_alpha,
    eta_for_gamma,
    gamma_from_lambda,
)
from .sampling import SampleConfig, sample_vector, standard_normals
from .solver import solve
from .spectral import decompose


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spectralreg",
        description="Closed-form regularized spectral relaxations on graphs "
        "and their diffusion-operator equivalents.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, regularizer: bool = True):
        p.add_argument("--graph", required=True, help="edge-list file path")
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--out", default=None, help="output path (default stdout)")
        if regularizer:
            p.add_argument("--regularizer", required=True, choices=("entropy", "logdet", "pnorm"))
            p.add_argument("--p", type=float, default=None, help="pnorm exponent, p > 1")
            p.add_argument("--eta", type=float, default=None, help="regularization strength")
            p.add_argument("--t", type=float, default=None, help="heat time (entropy)")
            p.add_argument("--gamma", type=float, default=None, help="teleportation (logdet)")
            p.add_argument("--alpha", type=float, default=None, help="laziness (pnorm)")

    p_solve = sub.add_parser("solve", help="solve the regularized relaxation")
    common(p_solve)
    p_solve.add_argument("--dense", action="store_true", help="include the dense solution matrix")

    p_equiv = sub.add_parser("equiv-check", help="certify one diffusion equivalence")
    common(p_equiv)

    p_map = sub.add_parser("map-params", help="map between eta, lambda and t/gamma/alpha")
    common(p_map)

    p_sample = sub.add_parser("sample", help="draw representative vectors from the solution")
    common(p_sample)
    p_sample.add_argument("--count", type=int, default=1)
    p_sample.add_argument("--seed", type=int, default=0)

    p_power = sub.add_parser("power-demo", help="unnormalized lazy-walk power iteration")
    common(p_power, regularizer=False)
    p_power.add_argument("--alpha", type=float, required=True)
    p_power.add_argument("--steps", type=int, default=50)
    p_power.add_argument("--seed", type=int, default=0)

    p_suite = sub.add_parser("suite", help="run the full equivalence suite")
    common(p_suite, regularizer=False)
    return parser


def _load_graph(path: str) -> Graph:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read graph file {path!r}: {exc}") from exc
    return parse_graph(text)


def _regularizer(args) -> Regularizer:
    if args.regularizer == "pnorm":
        if args.p is None:
            raise DomainError("pnorm requires --p")
        return Regularizer("pnorm", p=args.p)
    if args.p is not None:
        raise DomainError(f"--p only applies to pnorm, not {args.regularizer}")
    return Regularizer(args.regularizer)


def _exclusive_param(args) -> tuple[str, float]:
    allowed = {"entropy": ("eta", "t"), "logdet": ("eta", "gamma"), "pnorm": ("eta", "alpha")}[
        args.regularizer
    ]
    given = [
        (name, getattr(args, name))
        for name in ("eta", "t", "gamma", "alpha")
        if getattr(args, name) is not None
    ]
    if len(given) != 1:
        raise DomainError(
            f"{args.regularizer} takes exactly one of "
            + "/".join(f"--{n}" for n in allowed)
            + f", got {[n for n, _ in given] or 'none'}"
        )
    name, value = given[0]
    if name not in allowed:
        raise DomainError(f"--{name} does not apply to {args.regularizer}")
    return name, float(value)


def _resolve_eta(g: Graph, reg: Regularizer, name: str, value: float) -> float:
    if name == "eta":
        return value
    if name == "t":
        return value
    if name == "gamma":
        return eta_for_gamma(g, value)
    return eta_for_alpha(g, value, q=reg.q)


def _basis(g: Graph):
    return decompose(build_walk_matrices(g).L, g.degrees)


def _cmd_solve(args):
    g = _load_graph(args.graph)
    reg = _regularizer(args)
    name, value = _exclusive_param(args)
    eta = _resolve_eta(g, reg, name, value)
    density, report = solve(_basis(g), reg, eta)
    payload = {"regularizer": args.regularizer, "p": args.p}
    payload.update(report.to_json_dict())
    if args.dense:
        payload["dense"] = [[float(x) for x in row] for row in density.dense()]
    if args.format == "csv":
        fields = report.to_json_dict()
        fields["weights"] = " ".join(repr(w) for w in fields["weights"])
        return _csv_table(list(fields), [[_cell(fields[k]) for k in fields]])
    return payload


def _cmd_equiv_check(args):
    g = _load_graph(args.graph)
    reg = _regularizer(args)
    name, value = _exclusive_param(args)
    if reg.kind == "entropy":
        report = check_heat_kernel_lemma(g, value)
    elif reg.kind == "logdet":
        if name != "gamma":
            raise DomainError("equiv-check for logdet takes --gamma")
        report = check_pagerank_lemma(g, value)
    else:
        if name != "alpha":
            raise DomainError("equiv-check for pnorm takes --alpha")
        report = check_lazy_walk_lemma(g, value, q_minus_1=1.0 / (reg.p - 1.0))
    if args.format == "csv":
        return _csv_table(CSV_HEADER, [report.to_csv_row()])
    return report.to_json_dict()


def _cmd_map_params(args):
    g = _load_graph(args.graph)
    reg = _regularizer(args)
    name, value = _exclusive_param(args)
    eta = _resolve_eta(g, reg, name, value)
    _, report = solve(_basis(g), reg, eta)
    lam = report.lambda_star
    if reg.kind == "entropy":
        param_name, param_value = "t", eta
    elif reg.kind == "logdet":
        param_name = "gamma"
        param_value = gamma_from_lambda(lam) if lam < 0.0 else None
    else:
        param_name, param_value = "alpha", alpha_from_lambda(lam)
    payload = {
        "regularizer": args.regularizer,
        "p": args.p,
        "given": name,
        "eta": float(eta),
        "lambda": float(lam),
        param_name: param_value,
    }
    if args.format == "csv":
        return _csv_table(list(payload), [[_cell(payload[k]) for k in payload]])
    return payload


def _cmd_sample(args):
    if args.count < 1:
        raise DomainError(f"--count must be >= 1, got {args.count}")
    g = _load_graph(args.graph)
    reg = _regularizer(args)
    name, value = _exclusive_param(args)
    eta = _resolve_eta(g, reg, name, value)
    density, _ = solve(_basis(g), reg, eta)
    samples = sample_vector(density, SampleConfig(seed=args.seed, count=args.count))
    if args.format == "csv":
        return _csv_table(
            [f"x{i}" for i in range(g.n)],
            [[repr(float(x)) for x in row] for row in samples],
        )
    return {
        "seed": args.seed,
        "count": args.count,
        "samples": [[float(x) for x in row] for row in samples],
    }


def _cmd_power_demo(args):
    g = _load_graph(args.graph)
    if args.steps < 0:
        raise DomainError(f"--steps must be >= 0, got {args.steps}")
    v0 = standard_normals(args.seed, g.n)
    trajectory, rayleigh = power_demo(g, args.alpha, args.steps, v0)
    rows = [
        {
            "step": step,
            "rayleigh_quotient": float(rayleigh[step]),
            "vector": [float(x) for x in trajectory[step]],
        }
        for step in range(trajectory.shape[0])
    ]
    if args.format == "csv":
        return _csv_table(
            ["step", "rayleigh_quotient"],
            [[str(r["step"]), repr(r["rayleigh_quotient"])] for r in rows],
        )
    return {"alpha": args.alpha, "steps": args.steps, "seed": args.seed, "trajectory": rows}


def _cmd_suite(args):
    g = _load_graph(args.graph)
    reports = full_suite(g)
    if args.format == "csv":
        return _csv_table(CSV_HEADER, [r.to_csv_row() for r in reports])
    return {
        "all_pass": all(r.passed for r in reports),
        "reports": [r.to_json_dict() for r in reports],
    }


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _csv_table(header: list[str], rows: list[list[str]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()


_HANDLERS = {
    "solve": _cmd_solve,
    "equiv-check": _cmd_equiv_check,
    "map-params": _cmd_map_params,
    "sample": _cmd_sample,
    "power-demo": _cmd_power_demo,
    "suite": _cmd_suite,
}


def _emit_error(exc: BaseException) -> None:
    line = json.dumps(
        {"error": type(exc).__name__, "message": str(exc)}, sort_keys=True
    )
    print(line, file=sys.stderr)


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        if exc.code == 0:
            return 0
        _emit_error(InputError("invalid command line"))
        return 1

    try:
        result = _HANDLERS[args.command](args)
    except InputError as exc:
        _emit_error(exc)
        return 1
    except (InternalCheckError, AssertionError, np.linalg.LinAlgError) as exc:
        _emit_error(exc)
        return 2
    except SpectralRegError as exc:
        _emit_error(exc)
        return 1
    except (ValueError, OSError) as exc:
        _emit_error(exc)
        return 1

    if isinstance(result, str):
        text = result
    else:
        text = json.dumps(result, sort_keys=True, indent=2) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
