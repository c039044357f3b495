"""Count Hermitian trace-one matrices whose principal minors all pass while the
eigenvalue oracle reports a negative eigenvalue, for d = 3..6."""

import argparse
import json
from dataclasses import asdict, dataclass

import numpy as np

from qutrit_bloch.ensembles import hermitian_trace_one, near_boundary_states, probe_ensemble
from qutrit_bloch.qudit import MINOR_TOL, converse_probe


@dataclass
class ProbeConfig:
    seed: int = 0
    trials: int = 100_000
    dims: tuple = (3, 4, 5)
    tol: float = MINOR_TOL


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=ProbeConfig.seed)
    ap.add_argument("--trials", type=int, default=ProbeConfig.trials)
    ap.add_argument("--dims", type=int, nargs="+", default=list(ProbeConfig.dims))
    ap.add_argument("--tol", type=float, default=ProbeConfig.tol)
    args = ap.parse_args(argv)
    cfg = ProbeConfig(args.seed, args.trials, tuple(args.dims), args.tol)

    rows = []
    for d in cfg.dims:
        for name, maker in (("mixed", probe_ensemble), ("boundary", near_boundary_states),
                            ("gaussian", hermitian_trace_one)):
            mats = maker(np.random.default_rng([cfg.seed, d, len(name)]), cfg.trials, d)
            p = converse_probe(mats, cfg.tol)
            rows.append({"ensemble": name, **asdict(p)})
            print(f"d={d} {name:<10} trials={p.trials:>7} psd={p.oracle_psd:>7} "
                  f"minors_pass={p.minors_pass:>7} pass_but_not_psd={p.minors_pass_not_psd:>5} "
                  f"strict={p.strict_pass_not_psd}")
    print(json.dumps({"config": asdict(cfg), "rows": rows}))


if __name__ == "__main__":
    main()
