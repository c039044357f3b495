"""State files (JSON) and trajectory tables (CSV).

A state file is a JSON object holding either ``"rho"`` (a d x d array of
``[re, im]`` pairs, row-major) or ``"coefficients"`` (``omega``, ``alpha``,
``beta`` with pairs in lexicographic order), plus an optional ``"d"``
(default 3). Floats are written with 17 significant digits.
"""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path
from typing import Iterable

import numpy as np

from .bloch import QutritCoefficients, gammas, purity, radii, reconstruct
from .qudit import QuditCoefficients, decompose_qudit, reconstruct_qudit

TRAJECTORY_HEADER = (
    "theta",
    "omega1", "omega2", "omega3",
    "alpha12", "alpha13", "alpha23",
    "beta12", "beta13", "beta23",
    "gamma12", "gamma13", "gamma23",
    "R12", "R13", "R23",
    "purity",
)


class StateFileError(ValueError):
    """Malformed state file; the message names the offending key or index."""


def fmt(x: float) -> str:
    return format(float(x), ".17g")


def _encode(obj) -> str:
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if not math.isfinite(x):
            return "null"
        return fmt(x)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {_encode(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        return "[" + ", ".join(_encode(v) for v in obj) + "]"
    raise TypeError(f"cannot encode {type(obj).__name__}")


def dumps(obj) -> str:
    """JSON text with every float at 17 significant digits."""
    return _encode(obj)


def _real(value, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise StateFileError(f"{where}: expected a number, got {value!r}")
    return float(value)


def _real_list(value, size: int, where: str) -> list[float]:
    if not isinstance(value, list):
        raise StateFileError(f"{where}: expected a list of {size} numbers")
    if len(value) != size:
        raise StateFileError(f"{where}: expected {size} entries, got {len(value)}")
    return [_real(v, f"{where}[{n}]") for n, v in enumerate(value)]


def parse_rho(value, d: int) -> np.ndarray:
    if not isinstance(value, list) or len(value) != d:
        raise StateFileError(f"rho: expected {d} rows")
    m = np.zeros((d, d), dtype=np.complex128)
    for r, row in enumerate(value):
        if not isinstance(row, list) or len(row) != d:
            raise StateFileError(f"rho[{r}]: expected {d} entries")
        for col, entry in enumerate(row):
            where = f"rho[{r}][{col}]"
            if not isinstance(entry, list) or len(entry) != 2:
                raise StateFileError(f"{where}: expected an [re, im] pair")
            m[r, col] = complex(_real(entry[0], where + "[0]"), _real(entry[1], where + "[1]"))
    return m


def parse_state(obj) -> QutritCoefficients | QuditCoefficients:
    """Coefficients from a decoded state-file object; qutrit records for d = 3."""
    if not isinstance(obj, dict):
        raise StateFileError("state file must hold a JSON object")
    d = obj.get("d", 3)
    if isinstance(d, bool) or not isinstance(d, int):
        raise StateFileError(f"d: expected an integer, got {d!r}")
    if ("rho" in obj) == ("coefficients" in obj):
        raise StateFileError('state file needs exactly one of "rho" or "coefficients"')
    try:
        if "rho" in obj:
            m = parse_rho(obj["rho"], d)
            q = decompose_qudit(m, d)
        else:
            co = obj["coefficients"]
            if not isinstance(co, dict):
                raise StateFileError("coefficients: expected an object")
            npairs = d * (d - 1) // 2
            for key in ("omega", "alpha", "beta"):
                if key not in co:
                    raise StateFileError(f"coefficients.{key}: missing")
            q = QuditCoefficients(
                d,
                _real_list(co["omega"], d, "coefficients.omega"),
                _real_list(co["alpha"], npairs, "coefficients.alpha"),
                _real_list(co["beta"], npairs, "coefficients.beta"),
            )
    except StateFileError:
        raise
    except ValueError as exc:
        raise StateFileError(str(exc)) from exc
    return q.to_qutrit() if d == 3 else q


def load_state(path) -> QutritCoefficients | QuditCoefficients:
    try:
        obj = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise StateFileError(f"{path}: invalid JSON ({exc})") from exc
    return parse_state(obj)


def load_rho(path) -> np.ndarray:
    """The density matrix of a state file, whichever form it was written in."""
    return state_matrix(load_state(path))


def state_matrix(c) -> np.ndarray:
    return reconstruct(c) if isinstance(c, QutritCoefficients) else reconstruct_qudit(c)


def state_dict(c, form: str = "coefficients") -> dict:
    d = 3 if isinstance(c, QutritCoefficients) else c.d
    out = {"d": d}
    if form == "rho":
        m = state_matrix(c)
        out["rho"] = [[[z.real, z.imag] for z in row] for row in m.tolist()]
    elif form == "coefficients":
        out["coefficients"] = {"omega": list(c.omega), "alpha": list(c.alpha), "beta": list(c.beta)}
    else:
        raise ValueError(f"unknown state form {form!r}")
    return out


def rho_dict(m: np.ndarray) -> dict:
    m = np.asarray(m)
    return {"d": int(m.shape[0]), "rho": [[[z.real, z.imag] for z in row] for row in m.tolist()]}


def write_state(path, c, form: str = "coefficients") -> None:
    Path(path).write_text(dumps(state_dict(c, form)) + "\n")


def trajectory_rows(points) -> Iterable[list[str]]:
    for p in points:
        c = p.coefficients
        values = (p.theta, *c.omega, *c.alpha, *c.beta, *gammas(c), *radii(c), purity(c))
        yield [fmt(v) for v in values]


def write_trajectory_csv(stream, points) -> None:
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(TRAJECTORY_HEADER)
    w.writerows(trajectory_rows(points))


def read_trajectory_csv(path) -> dict[str, np.ndarray]:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    header, body = rows[0], rows[1:]
    data = np.array([[float(x) for x in r] for r in body])
    return {name: data[:, n] for n, name in enumerate(header)}

