"""Data behind the three-sphere picture of the worked example state
(1/2, e^{2 pi i/3}/sqrt 2, 1/2): vectors, radii, geometry, and a trajectory."""

import argparse
import math
import sys

import numpy as np

from qutrit_bloch.basis import GeneratorId
from qutrit_bloch.bloch import bloch_triple, decompose, derived_geometry, purity
from qutrit_bloch.dynamics import trajectory
from qutrit_bloch.io import dumps, write_trajectory_csv

PSI = np.array([0.5, np.exp(2j * math.pi / 3) / math.sqrt(2), 0.5])


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--generator", default="A12")
    ap.add_argument("--steps", type=int, default=129)
    ap.add_argument("--csv", help="also write the trajectory over one period here")
    args = ap.parse_args(argv)

    c = decompose(np.outer(PSI, PSI.conj()))
    t = bloch_triple(c)
    geo = derived_geometry(c)
    print(dumps({
        "omega": c.omega, "u": t.u, "radii": t.radii, "lengths": t.lengths,
        "d": geo.d, "phi": geo.phi, "Phi": geo.Phi, "purity": purity(c),
    }))
    if args.csv:
        pts = trajectory(c, GeneratorId.parse(args.generator), math.pi, args.steps)
        with open(args.csv, "w", newline="") as fh:
            write_trajectory_csv(fh, pts)
        print(f"wrote {len(pts)} rows to {args.csv}", file=sys.stderr)


if __name__ == "__main__":
    main()
