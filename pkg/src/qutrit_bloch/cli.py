"""``qutrit-bloch`` command line.

Exit codes: 0 success (or a positive verdict), 1 negative verdict
(invalid state, not orthogonal, failed selftest), 2 usage or I/O error.
The default tolerance of ``check`` and ``ortho`` can be overridden with the
``QUTRIT_BLOCH_TOL`` environment variable.
"""

from __future__ import annotations

import argparse
import dataclasses
import io
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from .basis import GENERATORS, GeneratorId, commutator_table, format_table
from .bloch import QutritCoefficients, derived_geometry, gammas, purity, radii
from .io import (
    StateFileError,
    TRAJECTORY_HEADER,
    dumps,
    fmt,
    load_state,
    parse_state,
    state_dict,
    state_matrix,
    trajectory_rows,
    write_trajectory_csv,
)
from .qudit import MAX_DIM, MIN_DIM, QuditCoefficients, decompose_qudit, necessary_conditions
from .validity import (
    ORTHO_TOL,
    PURE_TOL,
    VALIDITY_TOL,
    DomainError,
    check_constraints,
    orthogonal_pure_mixed,
    orthogonal_pure_pure,
    orthogonality_terms,
    sample_valid,
)

TOL_ENV = "QUTRIT_BLOCH_TOL"

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_USAGE = 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _env_tol(default: float) -> float:
    raw = os.environ.get(TOL_ENV)
    if raw is None:
        return default
    try:
        tol = float(raw)
    except ValueError:
        raise UsageError(f"{TOL_ENV} must be a number, got {raw!r}") from None
    if not tol >= 0.0:
        raise UsageError(f"{TOL_ENV} must be nonnegative, got {raw!r}")
    return tol


def _emit(text: str, out: str | None = None) -> None:
    if out:
        Path(out).write_text(text if text.endswith("\n") else text + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _text_block(pairs) -> str:
    lines = []
    for key, value in pairs:
        if isinstance(value, (list, tuple)):
            value = " ".join("-" if v is None else fmt(v) for v in value)
        elif isinstance(value, float):
            value = fmt(value)
        lines.append(f"{key}: {value}")
    return "\n".join(lines)


# --- verbs -----------------------------------------------------------------

def cmd_check(args) -> int:
    c = load_state(args.state)
    tol = args.tol if args.tol is not None else _env_tol(VALIDITY_TOL)
    if isinstance(c, QutritCoefficients):
        rep = check_constraints(c, tol)
        data = {"d": 3, "scope": "full characterisation", **rep.to_dict()}
        rows = [(e.id, e.residual, e.passed) for e in rep.entries]
        ok = rep.overall
    else:
        rep = necessary_conditions(c, tol)
        data = rep.to_dict()
        data["scope"] = "full characterisation" if rep.sufficient else "necessary conditions only"
        rows = [(e.label, e.value, e.passed) for e in rep.entries]
        ok = rep.overall
    if args.format == "json":
        _emit(dumps(data))
    else:
        lines = [f"d: {data['d']}", f"scope: {data['scope']}", f"tol: {fmt(tol)}"]
        lines += [f"{name:<14} {fmt(r):>25}  {'pass' if p else 'FAIL'}" for name, r, p in rows]
        verdict = "valid" if ok else "invalid"
        if data["scope"] != "full characterisation" and ok:
            verdict = "passes (necessary conditions only)"
        lines.append(f"verdict: {verdict}")
        _emit("\n".join(lines))
    return EXIT_OK if ok else EXIT_NEGATIVE


def _decompose_report(c) -> dict:
    if isinstance(c, QuditCoefficients):
        return {"d": c.d, "coefficients": state_dict(c)["coefficients"],
                "purity": float(np.real(np.trace(state_matrix(c) @ state_matrix(c))))}
    geo = derived_geometry(c)
    return {
        "d": 3,
        "coefficients": state_dict(c)["coefficients"],
        "omega": list(c.omega),
        "gamma": list(gammas(c)),
        "radii": list(radii(c)),
        "relative_lengths": list(geo.d),
        "phi": list(geo.phi),
        "Phi": geo.Phi,
        "purity": purity(c),
    }


def cmd_decompose(args) -> int:
    if (args.state is None) == (args.rho is None):
        raise UsageError("decompose: give a state file or --rho FILE (exactly one)")
    if args.rho is not None:
        m = _load_rho_only(args.rho)
        c = decompose_qudit(m, m.shape[0])
        c = c.to_qutrit() if c.d == 3 else c
    else:
        c = load_state(args.state)
    report = _decompose_report(c)
    if args.format == "json":
        _emit(dumps(report), args.out)
    else:
        _emit(_text_block([(k, v) for k, v in report.items() if k != "coefficients"]), args.out)
    return EXIT_OK


def _load_rho_only(path) -> np.ndarray:
    try:
        obj = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise StateFileError(f"{path}: invalid JSON ({exc})") from exc
    if not isinstance(obj, dict) or "rho" not in obj:
        raise StateFileError(f'{path}: --rho expects a file with a "rho" key')
    return state_matrix(parse_state(obj))


def cmd_reconstruct(args) -> int:
    c = load_state(args.state)
    if args.format == "json":
        _emit(dumps(state_dict(c, "rho")), args.out)
    else:
        m = state_matrix(c)
        lines = [" ".join(f"{fmt(z.real)}{'+' if z.imag >= 0 else '-'}{fmt(abs(z.imag))}j" for z in row)
                 for row in m]
        _emit("\n".join(lines), args.out)
    return EXIT_OK


def _sample_one(task):
    seed, idx, d = task
    if d == 3:
        return sample_valid((seed, idx))
    from .ensembles import gram_states

    m = gram_states(np.random.default_rng((seed, idx)), 1, d)[0]
    return decompose_qudit(m, d)


def cmd_sample(args) -> int:
    if args.count < 0:
        raise UsageError("sample: --count must be nonnegative")
    if not MIN_DIM <= args.d <= MAX_DIM:
        raise UsageError(f"sample: --d must be between {MIN_DIM} and {MAX_DIM}")
    if args.seed < 0:
        raise UsageError("sample: --seed must be nonnegative")
    tasks = [(args.seed, idx, args.d) for idx in range(args.count)]
    if args.workers > 1 and args.count > 1:
        with ProcessPoolExecutor(max_workers=args.workers) as pool:
            states = list(pool.map(_sample_one, tasks, chunksize=max(1, args.count // (4 * args.workers))))
    else:
        states = [_sample_one(t) for t in tasks]
    if args.format == "json":
        doc = {"seed": args.seed, "d": args.d, "count": args.count,
               "states": [state_dict(c) for c in states]}
        _emit(dumps(doc), args.out)
    else:
        lines = []
        for idx, c in enumerate(states):
            vals = (*c.omega, *c.alpha, *c.beta)
            lines.append(f"{idx} " + " ".join(fmt(v) for v in vals))
        _emit("\n".join(lines) if lines else "", args.out)
    return EXIT_OK


def cmd_evolve(args) -> int:
    from .dynamics import trajectory

    try:
        g = GeneratorId.parse(args.generator)
    except ValueError as exc:
        raise UsageError(f"evolve: {exc}") from None
    if g not in GENERATORS:
        raise UsageError(f"evolve: {g} is not one of the nine qutrit generators")
    if args.steps < 2:
        raise UsageError("evolve: --steps must be at least 2")
    c = load_state(args.state)
    if not isinstance(c, QutritCoefficients):
        raise UsageError("evolve: only qutrit states (d = 3) can be evolved")
    try:
        points = trajectory(c, g, args.theta_max, args.steps)
    except DomainError as exc:
        print(f"evolve: {exc}", file=sys.stderr)
        return EXIT_NEGATIVE
    if args.out:
        with open(args.out, "w", newline="") as fh:
            write_trajectory_csv(fh, points)
    if args.format == "json":
        doc = {"generator": g.label, "steps": args.steps, "theta_max": args.theta_max,
               "header": list(TRAJECTORY_HEADER),
               "rows": [[float(x) for x in row] for row in trajectory_rows(points)]}
        if args.out:
            doc = {k: doc[k] for k in ("generator", "steps", "theta_max")} | {"csv": args.out}
        _emit(dumps(doc))
    elif args.out:
        _emit(f"wrote {len(points)} rows to {args.out}")
    else:
        buf = io.StringIO()
        write_trajectory_csv(buf, points)
        sys.stdout.write(buf.getvalue())
    return EXIT_OK


def cmd_ortho(args) -> int:
    p, q = load_state(args.a), load_state(args.b)
    if not (isinstance(p, QutritCoefficients) and isinstance(q, QutritCoefficients)):
        raise UsageError("ortho: both states must be qutrit states")
    tol = args.tol if args.tol is not None else _env_tol(ORTHO_TOL)
    pure_p, pure_q = abs(purity(p) - 1.0) <= PURE_TOL, abs(purity(q) - 1.0) <= PURE_TOL
    if not (pure_p or pure_q):
        raise DomainError("ortho: at least one of the states must be pure")
    if not pure_p:
        p, q = q, p
    terms = orthogonality_terms(p, q)
    verdicts = {"pure_mixed": orthogonal_pure_mixed(p, q, tol)}
    if pure_p and pure_q:
        verdicts["pure_pure"] = orthogonal_pure_pure(p, q, tol)
    ok = all(verdicts.values())
    data = {
        "orthogonal": ok,
        "tol": tol,
        "via_populations": terms.via_populations,
        "via_radii": terms.via_radii,
        "via_angles": terms.via_angles,
        "two_trace": 2.0 * terms.trace,
        "verdicts": verdicts,
    }
    if args.format == "json":
        _emit(dumps(data))
    else:
        pairs = [(k, v) for k, v in data.items() if k != "verdicts"]
        pairs += [(f"verdict {k}", "orthogonal" if v else "not orthogonal") for k, v in verdicts.items()]
        _emit(_text_block(pairs))
    return EXIT_OK if ok else EXIT_NEGATIVE


def cmd_table(args) -> int:
    if args.format == "json":
        table = commutator_table()
        rows = [{"row": g.label, "cells": [str(table[(g, h)]) for h in GENERATORS]} for g in GENERATORS]
        _emit(dumps({"columns": [g.label for g in GENERATORS], "rows": rows}))
    else:
        _emit(format_table())
    return EXIT_OK


def cmd_selftest(args) -> int:
    from .acceptance import AcceptanceConfig, run_all

    cfg = AcceptanceConfig.quick() if args.quick else AcceptanceConfig()
    if args.seed is not None:
        cfg = dataclasses.replace(cfg, seed=args.seed)

    def report(res):
        if args.format == "text":
            print(res.line(), flush=True)

    results = run_all(cfg, report=report)
    passed = sum(r.passed for r in results)
    if args.format == "json":
        _emit(dumps({
            "passed": passed,
            "failed": len(results) - passed,
            "criteria": [{"number": r.number, "name": r.name, "pass": r.passed, "detail": r.detail,
                          "seconds": r.seconds} for r in results],
        }))
    else:
        print(f"{passed}/{len(results)} criteria passed")
    return EXIT_OK if passed == len(results) else EXIT_NEGATIVE


# --- wiring ----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qutrit-bloch", description="Qutrit Bloch-vector toolkit.")
    sub = parser.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    def verb(name, fn, help_):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--format", choices=("text", "json"), default="text")
        p.set_defaults(func=fn)
        return p

    p = verb("check", cmd_check, "validate a state file")
    p.add_argument("state")
    p.add_argument("--tol", type=float, default=None)

    p = verb("decompose", cmd_decompose, "coefficients and geometry of a state")
    p.add_argument("state", nargs="?")
    p.add_argument("--rho", metavar="FILE", help="file holding a density matrix")
    p.add_argument("--out")

    p = verb("reconstruct", cmd_reconstruct, "density matrix of a state file")
    p.add_argument("state")
    p.add_argument("--out")

    p = verb("sample", cmd_sample, "draw valid states")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--d", type=int, default=3)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out")

    p = verb("evolve", cmd_evolve, "trajectory under one generator")
    p.add_argument("state")
    p.add_argument("--generator", required=True)
    p.add_argument("--theta-max", type=float, required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--out")

    p = verb("ortho", cmd_ortho, "orthogonality of two states")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--tol", type=float, default=None)

    verb("table", cmd_table, "print the commutator table")

    p = verb("selftest", cmd_selftest, "run the acceptance suite")
    p.add_argument("--quick", action="store_true")
    p.add_argument("--seed", type=int, default=None)
    return parser


def run(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
    except (StateFileError, DomainError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
    return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
