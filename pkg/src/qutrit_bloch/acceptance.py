"""The acceptance suite: eleven randomized and worked-example checks.

``run_all`` is shared by ``qutrit-bloch selftest`` and the pytest acceptance
module, so both report the same verdicts from the same code.
"""

from __future__ import annotations

import contextlib
import io
import json
import math
import tempfile
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np

from . import ensembles
from .basis import GENERATORS, PAIRS3, basis_algebra_checks
from .bloch import (
    complement,
    decompose,
    derived_geometry,
    det_formula,
    gammas,
    pair_slot,
    purity,
    radii,
    radius_from_gammas,
    reconstruct,
    wrap_angle,
)
from .dynamics import (
    c_rotation_prediction,
    evolve,
    oscillation_parameters,
    radius_closed_form,
    radius_oscillation_fit,
    radius_slots,
    trajectory,
)
from .io import dumps, rho_dict, state_dict
from .linalg import determinant, eigenvalues_hermitian, trace_inner
from .qudit import QuditCoefficients, converse_probe, decompose_qudit, necessary_conditions
from .validity import (
    is_valid_state,
    orthogonal_pure_mixed,
    orthogonal_pure_pure,
    orthogonality_terms,
    sample_many,
)

EXAMPLE_VECTOR = np.array([0.5, np.exp(2j * np.pi / 3) / np.sqrt(2), 0.5])


@dataclass(frozen=True)
class AcceptanceConfig:
    seed: int = 7
    ensemble: int = 100_000
    det_states: int = 10_000
    pure_states: int = 10_000
    samples: int = 100_000
    dyn_states: int = 100
    dyn_steps: int = 65
    fit_samples: int = 128
    ortho_pairs: int = 1_000
    interlace: int = 1_000
    qudit_gram: int = 10_000
    qutrit_agreement: int = 10_000
    probe: int = 100_000
    ensemble_seconds: float = 60.0

    @classmethod
    def quick(cls) -> "AcceptanceConfig":
        return cls(
            ensemble=6_000, det_states=1_000, pure_states=1_000, samples=2_000,
            dyn_states=6, ortho_pairs=200, interlace=200, qudit_gram=1_000,
            qutrit_agreement=1_000, probe=5_000,
        )

    def rng(self, stream: int) -> np.random.Generator:
        return np.random.default_rng([self.seed, stream])


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: str
    metrics: dict = field(default_factory=dict)
    seconds: float = 0.0

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return f"[{tag}] {self.number:2d} {self.name}: {self.detail} ({self.seconds:.1f}s)"


class _Context:
    """Lazily built data shared between criteria."""

    def __init__(self, cfg: AcceptanceConfig):
        self.cfg = cfg
        self._ensemble = None

    def ensemble(self):
        if self._ensemble is None:
            t0 = time.perf_counter()
            mats, kind = ensembles.mixed_qutrit_ensemble(self.cfg.rng(1), self.cfg.ensemble)
            coeffs = [decompose(m) for m in mats]
            self._ensemble = (mats, kind, coeffs, time.perf_counter() - t0)
        return self._ensemble


def _max(values) -> float:
    values = list(values)
    return float(max(values)) if values else 0.0


def criterion_oracle_equivalence(ctx: _Context) -> CriterionResult:
    t0 = time.perf_counter()
    mats, kind, coeffs, build = ctx.ensemble()
    verdict = np.array([is_valid_state(c, 1e-9) for c in coeffs])
    oracle = eigenvalues_hermitian(mats)[:, 0] >= -1e-9
    seconds = build + time.perf_counter() - t0
    bad = int(np.sum(verdict != oracle))
    per_kind = {int(k): int(np.sum((verdict != oracle)[kind == k])) for k in np.unique(kind)}
    passed = bad == 0 and seconds <= ctx.cfg.ensemble_seconds
    detail = f"{len(coeffs)} matrices, {int(oracle.sum())} PSD, {bad} disagreements in {seconds:.1f}s"
    return CriterionResult(1, "oracle equivalence", passed, detail,
                           {"disagreements": bad, "by_kind": per_kind, "seconds": seconds})


def criterion_determinant(ctx: _Context) -> CriterionResult:
    cfg = ctx.cfg
    errs = []
    batch = 0
    while len(errs) < cfg.det_states:
        for c in sample_many(cfg.seed * 1000 + batch, cfg.det_states):
            if min(c.omega) > 1e-3 and len(errs) < cfg.det_states:
                errs.append(abs(det_formula(c) - determinant(reconstruct(c)).real))
        batch += 1
    worst = _max(errs)
    return CriterionResult(2, "determinant formula", worst <= 1e-12,
                           f"{len(errs)} states, max error {worst:.2e}", {"max_error": worst})


def criterion_basis_algebra(ctx: _Context) -> CriterionResult:
    checks = basis_algebra_checks(1e-12)
    failed = [c.name for c in checks if not c.passed]
    return CriterionResult(3, "basis algebra", not failed,
                           f"{len(checks) - len(failed)}/{len(checks)} identities hold",
                           {"count": len(checks), "failed": failed})


def criterion_pure_geometry(ctx: _Context) -> CriterionResult:
    psi = ensembles.pure_vectors(ctx.cfg.rng(4), ctx.cfg.pure_states)
    worst = {"d": 0.0, "Phi": 0.0, "length": 0.0, "sum": 0.0, "purity": 0.0}
    for v in psi:
        c = decompose(np.outer(v, v.conj()))
        geo = derived_geometry(c)
        g = gammas(c)
        R = radii(c)
        lengths = [math.sqrt(c.alpha[s] ** 2 + c.beta[s] ** 2 + g[s] ** 2) for s in range(3)]
        worst["d"] = max(worst["d"], *(abs(x - 1.0) for x in geo.d))
        worst["Phi"] = max(worst["Phi"], abs(wrap_angle(geo.Phi)))
        worst["length"] = max(worst["length"], *(abs(lengths[s] - R[s]) for s in range(3)))
        worst["sum"] = max(worst["sum"], abs(math.fsum(lengths) - 2.0))
        worst["purity"] = max(worst["purity"], abs(purity(c) - 1.0))
    tols = {"d": 1e-9, "Phi": 1e-9, "length": 1e-10, "sum": 1e-9, "purity": 1e-10}
    passed = all(worst[k] <= tols[k] for k in tols)
    detail = f"{len(psi)} states, " + ", ".join(f"{k} {worst[k]:.1e}" for k in tols)
    return CriterionResult(4, "pure-state geometry", passed, detail, worst)


def criterion_identities(ctx: _Context) -> CriterionResult:
    _, _, coeffs, _ = ctx.ensemble()
    worst = 0.0
    for c in coeffs:
        g = gammas(c)
        R = radii(c)
        res = [abs(math.fsum(R) - 2.0), abs(g[0] - g[1] + g[2])]
        for s, (i, j) in enumerate(PAIRS3):
            k = complement(i, j)
            res.append(abs(g[s] - (R[pair_slot(i, k)] - R[pair_slot(j, k)])))
            res.append(abs(R[s] - radius_from_gammas(g, i, j)))
        worst = max(worst, *res)
    return CriterionResult(5, "identities (i)-(v)", worst <= 1e-14,
                           f"{len(coeffs)} states, max residual {worst:.1e}", {"max_residual": worst})


def criterion_sampler(ctx: _Context) -> CriterionResult:
    cfg = ctx.cfg
    first = sample_many(cfg.seed, cfg.samples)
    mats = np.array([reconstruct(c) for c in first])
    lowest = float(eigenvalues_hermitian(mats)[:, 0].min())
    text = dumps([state_dict(c) for c in first])
    again = dumps([state_dict(c) for c in sample_many(cfg.seed, cfg.samples)])
    same = text == again
    passed = lowest >= -1e-12 and same
    detail = f"{len(first)} samples, min eigenvalue {lowest:.2e}, byte-identical rerun: {same}"
    return CriterionResult(6, "sampler soundness", passed, detail, {"min_eigenvalue": lowest, "deterministic": same})


def _dynamics_states(cfg: AcceptanceConfig):
    rng = cfg.rng(7)
    out = []
    for n in range(cfg.dyn_states):
        rank = 1 + n % 3
        out.append(decompose(ensembles.gram_states(rng, 1, 3, rank)[0]))
    return out


def criterion_dynamics(ctx: _Context) -> CriterionResult:
    cfg = ctx.cfg
    worst = {"pointwise": 0.0, "fit_amplitude": 0.0, "fit_offset": 0.0, "c_rotation": 0.0, "purity_drift": 0.0}
    ab = [g for g in GENERATORS if g.kind in ("A", "B")]
    cs = [g for g in GENERATORS if g.kind == "C"]
    for c in _dynamics_states(cfg):
        p0 = purity(c)
        for g in ab:
            pts = trajectory(c, g, math.pi, cfg.dyn_steps)
            s_ik, s_jk = radius_slots(g)
            theta = np.array([p.theta for p in pts])
            r_ik, r_jk = radius_closed_form(c, g, theta)
            got = np.array([p.radii for p in pts])
            worst["pointwise"] = max(worst["pointwise"], float(np.max(np.abs(got[:, s_ik] - r_ik))),
                                     float(np.max(np.abs(got[:, s_jk] - r_jk))))
            worst["purity_drift"] = max(worst["purity_drift"], *(abs(p.purity - p0) for p in pts))
            amp, _, offset = oscillation_parameters(c, g)
            for fit in radius_oscillation_fit(c, g, cfg.fit_samples):
                worst["fit_amplitude"] = max(worst["fit_amplitude"], abs(fit.amplitude - amp))
                worst["fit_offset"] = max(worst["fit_offset"], abs(fit.offset - offset))
        for g in cs:
            for theta in np.linspace(0.0, 2.0 * math.pi, 33):
                got = evolve(c, g, float(theta), check=False)
                want = c_rotation_prediction(c, g, float(theta))
                diff = np.abs(got.as_vector() - want.as_vector())
                worst["c_rotation"] = max(worst["c_rotation"], float(diff.max()))
                worst["purity_drift"] = max(worst["purity_drift"], abs(purity(got) - p0))
    tols = {"pointwise": 1e-9, "fit_amplitude": 1e-9, "fit_offset": 1e-9, "c_rotation": 1e-10, "purity_drift": 1e-10}
    passed = all(worst[k] <= tols[k] for k in tols)
    detail = f"{cfg.dyn_states} states x 9 generators, " + ", ".join(f"{k} {worst[k]:.1e}" for k in tols)
    return CriterionResult(7, "dynamics laws", passed, detail, worst)


def _gram_schmidt(vectors: np.ndarray) -> np.ndarray:
    """Orthonormalise the columns of each matrix in a stack (classical Gram-Schmidt, twice)."""
    q = vectors.astype(np.complex128).copy()
    n = q.shape[-1]
    for _ in range(2):
        for k in range(n):
            for j in range(k):
                proj = np.sum(q[:, :, j].conj() * q[:, :, k], axis=1)
                q[:, :, k] -= proj[:, None] * q[:, :, j]
            q[:, :, k] /= np.linalg.norm(q[:, :, k], axis=1, keepdims=True)
    return q


def criterion_orthogonality(ctx: _Context) -> CriterionResult:
    cfg = ctx.cfg
    rng = cfg.rng(8)
    n = cfg.ortho_pairs
    frames = _gram_schmidt(rng.normal(size=(n, 3, 3)) + 1j * rng.normal(size=(n, 3, 3)))
    weights = rng.uniform(size=n)

    def proj(v):
        return np.outer(v, v.conj())

    cases = []  # (pure p, q, q is pure)
    for f, w in zip(frames, weights):
        cases.append((proj(f[:, 0]), proj(f[:, 1]), True))
        cases.append((proj(f[:, 0]), w * proj(f[:, 1]) + (1 - w) * proj(f[:, 2]), False))
    pv = ensembles.pure_vectors(rng, 2 * n)
    mixed = ensembles.gram_states(rng, n)
    for k in range(n):
        cases.append((proj(pv[k]), proj(pv[n + k]), True))
        cases.append((proj(pv[k]), mixed[k], False))

    wrong = 0
    worst_gap = 0.0
    for a, b, both_pure in cases:
        p, q = decompose(a), decompose(b)
        oracle = abs(trace_inner(a, b)) <= 1e-9
        verdicts = [orthogonal_pure_mixed(p, q)]
        if both_pure:
            verdicts.append(orthogonal_pure_pure(p, q))
        wrong += sum(v != oracle for v in verdicts)
        t = orthogonality_terms(p, q)
        forms = [t.via_populations, t.via_radii] + ([t.via_angles] if both_pure else [])
        worst_gap = max(worst_gap, *(abs(x - 2.0 * t.trace) for x in forms))
    passed = wrong == 0
    detail = f"{2 * n} orthogonal and {2 * n} generic pairs, {wrong} misclassified, formula gap {worst_gap:.1e}"
    return CriterionResult(8, "orthogonality", passed, detail, {"misclassified": wrong, "max_gap": worst_gap})


def criterion_interlacing(ctx: _Context) -> CriterionResult:
    h = ensembles.hermitian(ctx.cfg.rng(9), ctx.cfg.interlace)
    lam = eigenvalues_hermitian(h)
    worst = 0.0
    for sel in ((0, 1), (0, 2), (1, 2)):
        idx = np.asarray(sel)
        mu = eigenvalues_hermitian(h[:, idx[:, None], idx[None, :]])
        gaps = np.stack([lam[:, 0] - mu[:, 0], mu[:, 0] - lam[:, 1], lam[:, 1] - mu[:, 1], mu[:, 1] - lam[:, 2]])
        worst = max(worst, float(gaps.max()))
    return CriterionResult(9, "interlacing", worst <= 1e-9,
                           f"{len(h)} matrices, worst violation {worst:.1e}", {"max_violation": worst})


def criterion_qudit(ctx: _Context) -> CriterionResult:
    cfg = ctx.cfg
    rng = cfg.rng(10)
    gram = ensembles.gram_states(rng, cfg.qudit_gram, 4, None)
    failures = sum(not necessary_conditions(decompose_qudit(m, 4)).overall for m in gram)

    _, _, coeffs, _ = ctx.ensemble()
    subset = coeffs[: cfg.qutrit_agreement]
    mismatch = sum(
        necessary_conditions(QuditCoefficients.from_qutrit(c), 1e-9).overall != is_valid_state(c, 1e-9)
        for c in subset
    )
    probes = {d: converse_probe(ensembles.probe_ensemble(cfg.rng(100 + d), cfg.probe, d))
              for d in (4, 5)}
    counts = {d: p.minors_pass_not_psd for d, p in probes.items()}
    caught = {d: p.trials - p.oracle_psd for d, p in probes.items()}
    strict = {d: p.strict_pass_not_psd for d, p in probes.items()}
    passed = failures == 0 and mismatch == 0
    detail = (f"d=4 Gram failures {failures}/{len(gram)}, d=3 mismatches {mismatch}/{len(subset)}, "
              f"converse probe (minors pass at tol, not PSD): d=4 {counts[4]}/{caught[4]}, "
              f"d=5 {counts[5]}/{caught[5]} non-PSD; with exact minor signs d=4 {strict[4]}, d=5 {strict[5]}")
    return CriterionResult(10, "qudit necessary conditions", passed, detail,
                           {"gram_failures": failures, "qutrit_mismatch": mismatch, "converse": counts, "converse_strict": strict, "non_psd": caught})


def criterion_worked_example(ctx: _Context) -> CriterionResult:
    from .cli import run

    rho = np.outer(EXAMPLE_VECTOR, EXAMPLE_VECTOR.conj())
    with tempfile.TemporaryDirectory() as tmp:
        path = Path(tmp) / "example.json"
        path.write_text(dumps(rho_dict(rho)))
        out = io.StringIO()
        with contextlib.redirect_stdout(out):
            code = run(["decompose", "--rho", str(path), "--format", "json"])
    report = json.loads(out.getvalue())
    want = {
        "omega": (0.25, 0.5, 0.25),
        "radii": (0.75, 0.5, 0.75),
        "relative_lengths": (1.0, 1.0, 1.0),
    }
    err = max(abs(a - b) for k, v in want.items() for a, b in zip(report[k], v))
    err = max(err, abs(wrap_angle(report["Phi"])))
    omega = report["coefficients"]["omega"]
    err = max(err, *(abs(a - b) for a, b in zip(omega, want["omega"])))
    passed = code == 0 and err <= 1e-12
    return CriterionResult(11, "worked example", passed, f"decompose exit {code}, max error {err:.1e}",
                           {"max_error": err, "exit_code": code})


CRITERIA: tuple[Callable[[_Context], CriterionResult], ...] = (
    criterion_oracle_equivalence,
    criterion_determinant,
    criterion_basis_algebra,
    criterion_pure_geometry,
    criterion_identities,
    criterion_sampler,
    criterion_dynamics,
    criterion_orthogonality,
    criterion_interlacing,
    criterion_qudit,
    criterion_worked_example,
)


def run_all(cfg: AcceptanceConfig | None = None, *, only=None, report=None) -> list[CriterionResult]:
    """Run the criteria (all, or the numbers in ``only``); ``report`` gets each result as it finishes."""
    cfg = cfg or AcceptanceConfig()
    ctx = _Context(cfg)
    results = []
    for number, fn in enumerate(CRITERIA, start=1):
        if only is not None and number not in only:
            continue
        t0 = time.perf_counter()
        res = fn(ctx)
        res.seconds = time.perf_counter() - t0
        results.append(res)
        if report is not None:
            report(res)
    return results


__all__ = ["AcceptanceConfig", "CriterionResult", "run_all", "CRITERIA"]
