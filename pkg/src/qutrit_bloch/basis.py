"""Qutrit operator basis, its commutator algebra, and the spin-1 mapping.

Levels are 1-based everywhere in this module's API. A pair ``(i, j)`` with
``i > j`` is read as ``(j, i)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

import numpy as np

from .linalg import eigh

KINDS = ("A", "B", "C", "O")
PAIRS3 = ((1, 2), (1, 3), (2, 3))


def normalize_pair(i: int, j: int) -> tuple[int, int]:
    if i == j:
        raise ValueError(f"pair indices must differ, got ({i}, {j})")
    return (i, j) if i < j else (j, i)


@dataclass(frozen=True, order=True)
class GeneratorId:
    """One basis operator: ``A_ij``, ``B_ij``, ``C_ij`` or ``O_k``.

    For ``O`` the level is stored as ``index = (k,)``.
    """

    kind: str
    index: tuple[int, ...]

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown generator kind {self.kind!r}")
        idx = tuple(int(x) for x in self.index)
        if self.kind == "O":
            if len(idx) != 1 or idx[0] < 1:
                raise ValueError(f"O takes a single 1-based level, got {self.index}")
        else:
            if len(idx) != 2 or min(idx) < 1:
                raise ValueError(f"{self.kind} takes a 1-based pair, got {self.index}")
            idx = normalize_pair(*idx)
        object.__setattr__(self, "index", idx)

    @classmethod
    def parse(cls, text: str) -> "GeneratorId":
        """Parse labels such as ``"A12"``, ``"c23"``, ``"O1"`` or ``"B_1_3"``."""
        s = text.strip().replace("_", "").replace(",", "")
        if not s or s[0].upper() not in KINDS or not s[1:].isdigit():
            raise ValueError(f"cannot parse generator label {text!r}")
        kind = s[0].upper()
        digits = tuple(int(ch) for ch in s[1:])
        return cls(kind, digits)

    @property
    def label(self) -> str:
        return self.kind + "".join(str(x) for x in self.index)

    def __str__(self) -> str:
        return self.label


def A(i: int, j: int) -> GeneratorId:
    return GeneratorId("A", (i, j))


def B(i: int, j: int) -> GeneratorId:
    return GeneratorId("B", (i, j))


def C(i: int, j: int) -> GeneratorId:
    return GeneratorId("C", (i, j))


def O(k: int) -> GeneratorId:  # noqa: E743
    return GeneratorId("O", (k,))


# Row/column order of the commutator table.
GENERATORS = tuple(g(i, j) for (i, j) in PAIRS3 for g in (A, B, C))


def _ket_bra(d: int, i: int, j: int) -> np.ndarray:
    m = np.zeros((d, d), dtype=np.complex128)
    m[i - 1, j - 1] = 1.0
    return m


def basis_operator(g: GeneratorId, d: int = 3) -> np.ndarray:
    """Matrix of a basis operator on a ``d``-level system.

    ``C_ij`` is built from its definition ``-i/2 [A_ij, B_ij]``, which works
    out to ``O_i - O_j``.
    """
    return _basis_operator(g, d).copy()


@lru_cache(maxsize=None)
def _basis_operator(g: GeneratorId, d: int) -> np.ndarray:
    if any(x > d for x in g.index):
        raise IndexError(f"{g} is out of range for dimension {d}")
    if g.kind == "O":
        (k,) = g.index
        m = _ket_bra(d, k, k)
    else:
        i, j = g.index
        if g.kind == "A":
            m = _ket_bra(d, i, j) + _ket_bra(d, j, i)
        elif g.kind == "B":
            m = -1j * _ket_bra(d, i, j) + 1j * _ket_bra(d, j, i)
        else:
            a = _basis_operator(A(i, j), d)
            b = _basis_operator(B(i, j), d)
            m = -0.5j * commutator(a, b)
    m.setflags(write=False)
    return m


@lru_cache(maxsize=None)
def generator_decomposition(g: GeneratorId, d: int = 3) -> tuple[np.ndarray, np.ndarray]:
    """Cached spectral decomposition of a basis operator."""
    w, v = eigh(_basis_operator(g, d))
    w.setflags(write=False)
    v.setflags(write=False)
    return w, v


def commutator(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    return x @ y - y @ x


def anticommutator(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    return x @ y + y @ x


def qudit_basis(d: int) -> list[GeneratorId]:
    """Ordered basis for ``d`` levels: ``O_1..O_d``, then ``A_ij, B_ij`` per pair.

    Pairs run in lexicographic order.
    """
    out = [O(k) for k in range(1, d + 1)]
    for i, j in combinations(range(1, d + 1), 2):
        out += [A(i, j), B(i, j)]
    return out


@dataclass(frozen=True)
class TableEntry:
    """``coefficient * generator`` (``generator is None`` means zero)."""

    coefficient: complex
    generator: GeneratorId | None

    def __str__(self) -> str:
        if self.generator is None:
            return "0"
        return _format_coefficient(self.coefficient) + self.generator.label

    def matrix(self, d: int = 3) -> np.ndarray:
        if self.generator is None:
            return np.zeros((d, d), dtype=np.complex128)
        return self.coefficient * _basis_operator(self.generator, d)


def _format_coefficient(c: complex) -> str:
    re, im = c.real, c.imag
    if abs(re) < 1e-12:
        mag = abs(im)
        sign = "-" if im < 0 else ""
        body = "" if abs(mag - 1) < 1e-12 else f"{mag:g}"
        return f"{sign}{body}i"
    return f"({c.real:g}{c.imag:+g}i)"


def expand_single(m: np.ndarray, tol: float = 1e-12) -> TableEntry:
    """Write ``m`` as ``c * G`` for a single table generator ``G``, if possible."""
    if np.max(np.abs(m)) <= tol:
        return TableEntry(0j, None)
    for g in GENERATORS:
        p = _basis_operator(g, 3)
        coef = np.sum(np.conj(p) * m) / np.sum(np.abs(p) ** 2)
        if np.max(np.abs(m - coef * p)) <= tol:
            coef = complex(round(coef.real, 12), round(coef.imag, 12)) + 0j
            return TableEntry(coef, g)
    raise ValueError("matrix is not a multiple of a single basis operator")


def commutator_table() -> dict[tuple[GeneratorId, GeneratorId], TableEntry]:
    """Computed ``[G, H]`` for every ordered pair of the nine generators."""
    table = {}
    for g in GENERATORS:
        for h in GENERATORS:
            m = commutator(_basis_operator(g, 3), _basis_operator(h, 3))
            table[(g, h)] = expand_single(m)
    return table


# Hand transcription of the published table; rows and columns in GENERATORS order.
PUBLISHED_TABLE = (
    ("0", "2iC12", "-2iB12", "iB23", "-iA23", "-iB12", "iB13", "-iA13", "iB12"),
    ("-2iC12", "0", "2iA12", "iA23", "iB23", "iA12", "-iA13", "-iB13", "-iA12"),
    ("2iB12", "-2iA12", "0", "iB13", "-iA13", "0", "-iB23", "iA23", "0"),
    ("-iB23", "-iA23", "-iB13", "0", "2iC13", "-2iB13", "iB12", "iA12", "-iB13"),
    ("iA23", "-iB23", "iA13", "-2iC13", "0", "2iA13", "-iA12", "iB12", "iA13"),
    ("iB12", "-iA12", "0", "2iB13", "-2iA13", "0", "iB23", "-iA23", "0"),
    ("-iB13", "iA13", "iB23", "-iB12", "iA12", "-iB23", "0", "2iC23", "-2iB23"),
    ("iA13", "iB13", "-iA23", "-iA12", "-iB12", "iA23", "-2iC23", "0", "2iA23"),
    ("-iB12", "iA12", "0", "iB13", "-iA13", "0", "2iB23", "-2iA23", "0"),
)


def parse_entry(text: str) -> TableEntry:
    """Parse a table cell such as ``"-2iC12"`` or ``"0"``."""
    s = text.strip()
    if s == "0":
        return TableEntry(0j, None)
    sign = -1.0 if s.startswith("-") else 1.0
    s = s.lstrip("+-")
    mag_str, rest = s.split("i", 1)
    mag = float(mag_str) if mag_str else 1.0
    return TableEntry(complex(0.0, sign * mag), GeneratorId.parse(rest))


def published_table() -> dict[tuple[GeneratorId, GeneratorId], TableEntry]:
    out = {}
    for g, row in zip(GENERATORS, PUBLISHED_TABLE):
        for h, cell in zip(GENERATORS, row):
            out[(g, h)] = parse_entry(cell)
    return out


def format_table(table: dict[tuple[GeneratorId, GeneratorId], TableEntry] | None = None) -> str:
    """Text grid laid out like the published commutator table."""
    if table is None:
        table = commutator_table()
    labels = [g.label for g in GENERATORS]
    cells = [[str(table[(g, h)]) for h in GENERATORS] for g in GENERATORS]
    width = max(len(x) for x in labels + [c for row in cells for c in row]) + 1
    head = " " * width + "||" + "|".join(x.center(width) for x in labels)
    lines = [head, "=" * len(head)]
    for g, row in zip(labels, cells):
        lines.append(g.ljust(width) + "||" + "|".join(c.center(width) for c in row))
    return "\n".join(lines)


@dataclass(frozen=True)
class CyclicTriple:
    """Ordered ``(X, Y, Z)`` with ``[X, Y] = k i Z`` and its cyclic shifts."""

    members: tuple[GeneratorId, GeneratorId, GeneratorId]
    multiplier: int

    def residual(self) -> float:
        mats = [_basis_operator(g, 3) for g in self.members]
        worst = 0.0
        for a in range(3):
            x, y, z = mats[a], mats[(a + 1) % 3], mats[(a + 2) % 3]
            r = commutator(x, y) - self.multiplier * 1j * z
            worst = max(worst, float(np.max(np.abs(r))))
        return worst


def cyclic_triples() -> list[CyclicTriple]:
    """The three ``{A_ij, B_ij, C_ij}`` triples and the four extra ones."""
    standard = [CyclicTriple((A(i, j), B(i, j), C(i, j)), 2) for i, j in PAIRS3]
    extra = [
        CyclicTriple((A(1, 2), A(1, 3), B(2, 3)), 1),
        CyclicTriple((A(1, 2), A(2, 3), B(1, 3)), 1),
        CyclicTriple((A(1, 3), A(2, 3), B(1, 2)), 1),
        CyclicTriple((B(1, 2), B(1, 3), B(2, 3)), 1),
    ]
    return standard + extra


def spin1_matrices() -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Spin-1 ``(Sx, Sy, Sz)`` written in the basis of their zero eigenvectors."""
    return basis_operator(A(2, 3)), basis_operator(B(1, 2)), basis_operator(A(1, 3))


@dataclass
class IdentityCheck:
    name: str
    residual: float
    tol: float

    @property
    def passed(self) -> bool:
        return self.residual <= self.tol


def _maxabs(m: np.ndarray) -> float:
    return float(np.max(np.abs(m)))


def countertwisting_identities(tol: float = 1e-12) -> list[IdentityCheck]:
    """Squares, anticommutators and countertwisting forms of the spin-1 algebra."""
    op = lambda g: _basis_operator(g, 3)  # noqa: E731
    eye = np.eye(3)
    checks = []
    for (i, j), k in zip(PAIRS3, (3, 2, 1)):
        for g in (A(i, j), B(i, j), C(i, j)):
            checks.append(IdentityCheck(f"{g}^2 = I - O{k}", _maxabs(op(g) @ op(g) - (eye - op(O(k)))), tol))
    for x, y, sign, z in (
        (B(1, 2), A(1, 3), -1, B(2, 3)),
        (B(1, 2), A(2, 3), 1, B(1, 3)),
        (A(1, 3), A(2, 3), 1, A(1, 2)),
    ):
        r = anticommutator(op(x), op(y)) - sign * op(z)
        checks.append(IdentityCheck(f"{{{x}, {y}}} = {'-' if sign < 0 else ''}{z}", _maxabs(r), tol))

    sx, sy, sz = spin1_matrices()
    spins = {"x": sx, "y": sy, "z": sz}
    for a, b in (("x", "y"), ("x", "z"), ("y", "z")):
        plus = (spins[a] + spins[b]) / np.sqrt(2)
        minus = (spins[a] - spins[b]) / np.sqrt(2)
        r = anticommutator(spins[a], spins[b]) - (plus @ plus - minus @ minus)
        checks.append(IdentityCheck(f"{{S{a}, S{b}}} = S_(+)^2 - S_(-)^2", _maxabs(r), tol))
    # zero eigenvectors: Sx -> |1>, Sz -> |2>, Sy -> |3>, so O_k = I - S^2
    square = {1: sx @ sx, 2: sz @ sz, 3: sy @ sy}
    for i, j in PAIRS3:
        r = op(C(i, j)) - (square[j] - square[i])
        checks.append(IdentityCheck(f"C{i}{j} = S(level {j})^2 - S(level {i})^2", _maxabs(r), tol))
    return checks


def spin1_checks(tol: float = 1e-12) -> list[IdentityCheck]:
    """Commutation relations, spectra and the Casimir of the spin-1 triple."""
    sx, sy, sz = spin1_matrices()
    checks = [
        IdentityCheck("[Sx, Sy] = i Sz", _maxabs(commutator(sx, sy) - 1j * sz), tol),
        IdentityCheck("[Sy, Sz] = i Sx", _maxabs(commutator(sy, sz) - 1j * sx), tol),
        IdentityCheck("[Sz, Sx] = i Sy", _maxabs(commutator(sz, sx) - 1j * sy), tol),
        IdentityCheck("Sx^2 + Sy^2 + Sz^2 = 2 I", _maxabs(sx @ sx + sy @ sy + sz @ sz - 2 * np.eye(3)), tol),
    ]
    for name, s in (("Sx", sx), ("Sy", sy), ("Sz", sz)):
        w, _ = eigh(s)
        checks.append(IdentityCheck(f"spectrum({name}) = (-1, 0, 1)", float(np.max(np.abs(w - [-1, 0, 1]))), tol))
    return checks


def basis_algebra_checks(tol: float = 1e-12) -> list[IdentityCheck]:
    """Every algebraic identity of the basis as a flat list of checks.

    Covers the 81 commutators against the published table, the linear
    dependence of the C operators, the squares, the anticommutators, the
    cyclic triples and the spin-1 relations.
    """
    computed = commutator_table()
    published = published_table()
    checks = []
    for key in computed:
        g, h = key
        direct = commutator(_basis_operator(g, 3), _basis_operator(h, 3))
        r = max(_maxabs(direct - published[key].matrix()), _maxabs(computed[key].matrix() - published[key].matrix()))
        checks.append(IdentityCheck(f"[{g}, {h}] = {published[key]}", r, tol))
    dep = _basis_operator(C(1, 2), 3) - _basis_operator(C(1, 3), 3) + _basis_operator(C(2, 3), 3)
    checks.append(IdentityCheck("C12 - C13 + C23 = 0", _maxabs(dep), 0.0))
    checks += countertwisting_identities(tol)
    checks += [IdentityCheck(f"cyclic {'/'.join(map(str, t.members))}", t.residual(), tol) for t in cyclic_triples()]
    checks += spin1_checks(tol)
    return checks
