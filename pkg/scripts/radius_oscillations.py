"""Radius oscillations under A and B generators for sampled states: fitted
amplitude/offset against the closed forms, worst deviations per generator."""

import argparse
from dataclasses import dataclass

from qutrit_bloch.basis import GENERATORS
from qutrit_bloch.dynamics import oscillation_parameters, radius_oscillation_fit
from qutrit_bloch.validity import sample_many


@dataclass
class OscConfig:
    seed: int = 1
    states: int = 200
    samples: int = 128


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=OscConfig.seed)
    ap.add_argument("--states", type=int, default=OscConfig.states)
    ap.add_argument("--samples", type=int, default=OscConfig.samples)
    args = ap.parse_args(argv)
    cfg = OscConfig(args.seed, args.states, args.samples)

    states = sample_many(cfg.seed, cfg.states)
    print(f"{'gen':<4} {'max |amp err|':>14} {'max |offset err|':>17} {'max resid':>10} {'mean amp':>9}")
    for g in (g for g in GENERATORS if g.kind in ("A", "B")):
        amp_err = off_err = resid = amp_sum = 0.0
        for c in states:
            amp, _, off = oscillation_parameters(c, g)
            amp_sum += amp
            for fit in radius_oscillation_fit(c, g, cfg.samples):
                amp_err = max(amp_err, abs(fit.amplitude - amp))
                off_err = max(off_err, abs(fit.offset - off))
                resid = max(resid, fit.residual)
        print(f"{g.label:<4} {amp_err:>14.2e} {off_err:>17.2e} {resid:>10.2e} {amp_sum / len(states):>9.4f}")


if __name__ == "__main__":
    main()
