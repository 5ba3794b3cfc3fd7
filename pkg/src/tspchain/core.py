"""Cost arithmetic with an absorbing infinity, tours, affine forms and the
brute-force tour oracle.

Vertices are numbered 1..n throughout.  Arc ``(i, j)`` maps to position
``(i - 1) * n + (j - 1)`` of a characteristic vector.
"""
from __future__ import annotations

import functools
import hashlib
import itertools
import json
from dataclasses import dataclass
from typing import Iterator, Mapping, Sequence, Union

__all__ = [
    "Infinity", "INF", "CostValue", "is_inf", "cost_add", "cost_sub",
    "cost_gt", "cost_ge", "CostMatrix", "Tour", "AffineForm",
    "tour_length", "enumerate_tours", "unique_optimum", "eval_form",
    "parse_matrix", "format_matrix", "load_matrix", "iter_offdiagonal",
    "random_matrix", "MAX_ABS_COST", "MAX_N",
]

# Finite costs are kept inside the signed 64-bit range even after summing
# n <= 8 of them with intermediate reductions.
MAX_ABS_COST = 2 ** 40
MAX_N = 8


class Infinity:
    """The single infinite cost value.

    ``INF - b == INF`` and ``INF + b == INF`` for every integer ``b``; it is
    larger than every finite value and not larger than itself.
    """

    _instance: "Infinity | None" = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "INF"

    __str__ = __repr__

    def __reduce__(self):
        return (Infinity, ())

    def __hash__(self) -> int:
        return hash("tspchain.INF")

    def __eq__(self, other) -> bool:
        return other is self

    def __add__(self, other):
        if isinstance(other, (int, Infinity)) and not isinstance(other, bool):
            return self
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, (int, Infinity)) and not isinstance(other, bool):
            return self
        return NotImplemented

    def __rsub__(self, other):
        raise ArithmeticError("finite - INF is undefined")

    def __gt__(self, other) -> bool:
        if isinstance(other, Infinity):
            return False
        if isinstance(other, int):
            return True
        return NotImplemented

    def __ge__(self, other) -> bool:
        if isinstance(other, (int, Infinity)):
            return True
        return NotImplemented

    def __lt__(self, other) -> bool:
        if isinstance(other, (int, Infinity)):
            return False
        return NotImplemented

    def __le__(self, other) -> bool:
        if isinstance(other, Infinity):
            return True
        if isinstance(other, int):
            return False
        return NotImplemented


INF = Infinity()
CostValue = Union[int, Infinity]


def is_inf(v) -> bool:
    return v is INF


def _check_finite(v: int) -> int:
    if isinstance(v, bool) or not isinstance(v, int):
        raise TypeError(f"cost must be an integer or INF, got {v!r}")
    if abs(v) > MAX_ABS_COST:
        raise OverflowError(f"cost {v} exceeds the supported magnitude 2**40")
    return v


def cost_add(a: CostValue, b: CostValue) -> CostValue:
    if a is INF or b is INF:
        return INF
    return a + b


def cost_sub(a: CostValue, b: CostValue) -> CostValue:
    """``a - b`` with ``INF - anything == INF``."""
    if a is INF:
        return INF
    if b is INF:
        raise ArithmeticError("finite - INF is undefined")
    return a - b


def cost_gt(a: CostValue, b: CostValue) -> bool:
    if a is INF:
        return b is not INF
    if b is INF:
        return False
    return a > b


def cost_ge(a: CostValue, b: CostValue) -> bool:
    if a is INF:
        return True
    if b is INF:
        return False
    return a >= b


def _coerce_cell(v) -> CostValue:
    if v is None or v is INF:
        return INF
    if isinstance(v, float) and v == float("inf"):
        return INF
    return _check_finite(v)


@dataclass(frozen=True)
class CostMatrix:
    """An n x n arc-length matrix restricted to live rows and columns.

    ``cells`` maps ``(i, j)`` to a cost for every live ``i`` and ``j``.
    """

    n: int
    rows: tuple[int, ...]
    cols: tuple[int, ...]
    cells: Mapping[tuple[int, int], CostValue]

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be positive")
        for idx in (self.rows, self.cols):
            if list(idx) != sorted(set(idx)) or any(not 1 <= v <= self.n for v in idx):
                raise ValueError("live indices must be ascending and within 1..n")
        expected = {(i, j) for i in self.rows for j in self.cols}
        if set(self.cells) != expected:
            raise ValueError("cells must cover exactly the live positions")
        cells = {k: _coerce_cell(v) for k, v in self.cells.items()}
        object.__setattr__(self, "cells", cells)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], *, inf_diagonal: bool = True) -> "CostMatrix":
        """Full matrix from nested lists; ``None`` stands for INF."""
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise ValueError("matrix must be square")
        cells = {}
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                v = rows[i - 1][j - 1]
                cells[i, j] = INF if (i == j and inf_diagonal) else v
        full = tuple(range(1, n + 1))
        return cls(n, full, full, cells)

    def __getitem__(self, key: tuple[int, int]) -> CostValue:
        return self.cells[key]

    def __eq__(self, other) -> bool:
        if not isinstance(other, CostMatrix):
            return NotImplemented
        return (self.n, self.rows, self.cols) == (other.n, other.rows, other.cols) and \
            dict(self.cells) == dict(other.cells)

    def __hash__(self) -> int:
        return hash((self.n, self.rows, self.cols, tuple(sorted(self.cells.items(), key=lambda kv: kv[0]))))

    @property
    def is_full(self) -> bool:
        full = tuple(range(1, self.n + 1))
        return self.rows == full and self.cols == full

    def to_rows(self) -> list[list]:
        """Nested lists over live indices, ``None`` for INF."""
        return [[None if self.cells[i, j] is INF else self.cells[i, j] for j in self.cols]
                for i in self.rows]

    def replace(self, updates: Mapping[tuple[int, int], CostValue]) -> "CostMatrix":
        cells = dict(self.cells)
        for k, v in updates.items():
            if k not in cells:
                raise KeyError(k)
            cells[k] = v
        return CostMatrix(self.n, self.rows, self.cols, cells)

    def fingerprint(self) -> str:
        return hashlib.sha256(format_matrix(self).encode()).hexdigest()


@functools.total_ordering
@dataclass(frozen=True, eq=False)
class Tour:
    """A directed Hamiltonian cycle on vertices 1..n."""

    n: int
    arcs: frozenset

    def __post_init__(self):
        arcs = frozenset((int(i), int(j)) for i, j in self.arcs)
        object.__setattr__(self, "arcs", arcs)
        n = self.n
        if n < 2 or len(arcs) != n:
            raise ValueError(f"a tour on {n} vertices needs exactly {n} arcs")
        succ = {}
        preds = set()
        for i, j in arcs:
            if i == j or not (1 <= i <= n and 1 <= j <= n):
                raise ValueError(f"invalid arc {(i, j)}")
            if i in succ or j in preds:
                raise ValueError("every vertex needs in- and out-degree 1")
            succ[i] = j
            preds.add(j)
        seen, v = [], 1
        for _ in range(n):
            seen.append(v)
            v = succ[v]
        if v != 1 or len(set(seen)) != n:
            raise ValueError("arcs do not form a single cycle")
        object.__setattr__(self, "_order", tuple(seen))

    @classmethod
    def from_cycle(cls, vertices: Sequence[int]) -> "Tour":
        vs = [int(v) for v in vertices]
        n = len(vs)
        if sorted(vs) != list(range(1, n + 1)):
            raise ValueError("cycle must list each of 1..n exactly once")
        return cls(n, frozenset(zip(vs, vs[1:] + vs[:1])))

    @classmethod
    def from_chi(cls, chi: Sequence[Sequence[int]] | Sequence[int], n: int | None = None) -> "Tour":
        """From a 0/1 matrix (nested) or a flat vector of length n*n."""
        if chi and isinstance(chi[0], (list, tuple)):
            n = len(chi)
            flat = [v for row in chi for v in row]
        else:
            flat = list(chi)
            if n is None:
                n = int(round(len(flat) ** 0.5))
        if len(flat) != n * n or any(v not in (0, 1) for v in flat):
            raise ValueError("chi must be a 0/1 vector of length n*n")
        arcs = frozenset((k // n + 1, k % n + 1) for k, v in enumerate(flat) if v)
        return cls(n, arcs)

    @property
    def order(self) -> tuple[int, ...]:
        """Vertices in cycle order starting at vertex 1."""
        return self._order

    @property
    def chi(self) -> tuple[int, ...]:
        n = self.n
        out = [0] * (n * n)
        for i, j in self.arcs:
            out[(i - 1) * n + (j - 1)] = 1
        return tuple(out)

    def chi_matrix(self) -> list[list[int]]:
        c = self.chi
        return [list(c[r * self.n:(r + 1) * self.n]) for r in range(self.n)]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Tour):
            return NotImplemented
        return self.n == other.n and self.arcs == other.arcs

    def __lt__(self, other: "Tour") -> bool:
        return (self.n, self.order) < (other.n, other.order)

    def __hash__(self) -> int:
        return hash((self.n, self.arcs))

    def __repr__(self) -> str:
        return f"Tour({'-'.join(map(str, self.order))})"


def _arc_key(arc) -> tuple[int, int]:
    i, j = arc
    if i == j:
        raise ValueError(f"diagonal position {(i, j)} cannot carry a coefficient")
    return int(i), int(j)


@dataclass(frozen=True)
class AffineForm:
    """``sum coeffs[i, j] * c_ij + constant`` over off-diagonal arcs."""

    coeffs: tuple[tuple[tuple[int, int], int], ...] = ()
    constant: int = 0

    def __post_init__(self):
        items = self.coeffs.items() if isinstance(self.coeffs, Mapping) else self.coeffs
        acc: dict[tuple[int, int], int] = {}
        for arc, c in items:
            key = _arc_key(arc)
            acc[key] = acc.get(key, 0) + int(c)
        object.__setattr__(self, "coeffs", tuple(sorted((k, v) for k, v in acc.items() if v)))
        object.__setattr__(self, "constant", int(self.constant))

    @classmethod
    def var(cls, i: int, j: int) -> "AffineForm":
        return cls((((i, j), 1),))

    @classmethod
    def const(cls, k: int) -> "AffineForm":
        return cls((), k)

    @classmethod
    def from_tour(cls, t: Tour) -> "AffineForm":
        return cls(tuple((a, 1) for a in t.arcs))

    @classmethod
    def parse(cls, text: str) -> "AffineForm":
        """Parse expressions such as ``"c14 - c12 + 2*c42 - 1"``.

        Two-digit indices ``cij`` are read as ``(i, j)``; use ``c[i,j]`` for
        larger vertex numbers.
        """
        import re

        s = text.replace(" ", "").replace("−", "-")
        if not s:
            return cls()
        if s[0] not in "+-":
            s = "+" + s
        coeffs: dict = {}
        const = 0
        for sign, body in re.findall(r"([+-])([^+-]+)", s):
            k = 1 if sign == "+" else -1
            m = re.fullmatch(r"(?:(\d+)\*)?[cC](?:(\d)(\d)|\[(\d+),(\d+)\])", body)
            if m:
                mult = int(m.group(1) or 1)
                i, j = (m.group(2), m.group(3)) if m.group(2) else (m.group(4), m.group(5))
                key = (int(i), int(j))
                coeffs[key] = coeffs.get(key, 0) + k * mult
            elif body.isdigit():
                const += k * int(body)
            else:
                raise ValueError(f"cannot parse term {body!r}")
        return cls(tuple(coeffs.items()), const)

    @property
    def support(self) -> frozenset:
        return frozenset(k for k, _ in self.coeffs)

    def coeff(self, i: int, j: int) -> int:
        return dict(self.coeffs).get((i, j), 0)

    def as_dict(self) -> dict[tuple[int, int], int]:
        return dict(self.coeffs)

    def is_zero(self) -> bool:
        return not self.coeffs and self.constant == 0

    def __add__(self, other: "AffineForm") -> "AffineForm":
        if not isinstance(other, AffineForm):
            return NotImplemented
        return AffineForm(self.coeffs + other.coeffs, self.constant + other.constant)

    def __neg__(self) -> "AffineForm":
        return AffineForm(tuple((k, -v) for k, v in self.coeffs), -self.constant)

    def __sub__(self, other: "AffineForm") -> "AffineForm":
        if not isinstance(other, AffineForm):
            return NotImplemented
        return self + (-other)

    def __mul__(self, k: int) -> "AffineForm":
        if isinstance(k, bool) or not isinstance(k, int):
            return NotImplemented
        return AffineForm(tuple((a, v * k) for a, v in self.coeffs), self.constant * k)

    __rmul__ = __mul__

    def positive_part(self) -> "AffineForm":
        return AffineForm(tuple((k, v) for k, v in self.coeffs if v > 0))

    def negative_part(self) -> "AffineForm":
        """The negative coefficients, kept negative: ``f == pos + neg + constant``."""
        return AffineForm(tuple((k, v) for k, v in self.coeffs if v < 0))

    def homogeneous(self) -> "AffineForm":
        return AffineForm(self.coeffs)

    def evaluate(self, values: Mapping[tuple[int, int], object]):
        """Evaluate at a plain mapping (ints or Fractions); no INF handling."""
        return sum((v * values[k] for k, v in self.coeffs), self.constant)

    def __str__(self) -> str:
        parts = []
        for (i, j), v in self.coeffs:
            name = f"c{i}{j}" if i < 10 and j < 10 else f"c[{i},{j}]"
            mag = abs(v)
            term = name if mag == 1 else f"{mag}*{name}"
            parts.append(("- " if v < 0 else "+ ") + term)
        if self.constant or not parts:
            parts.append(("- " if self.constant < 0 else "+ ") + str(abs(self.constant)))
        s = " ".join(parts)
        return s[2:] if s.startswith("+ ") else "-" + s[2:]


def _require_full(C: CostMatrix) -> None:
    if not C.is_full:
        raise ValueError("operation needs a full n x n matrix")


def tour_length(t: Tour, C: CostMatrix) -> CostValue:
    _require_full(C)
    if t.n != C.n:
        raise ValueError(f"tour on {t.n} vertices vs matrix of size {C.n}")
    total: CostValue = 0
    for arc in t.arcs:
        total = cost_add(total, C.cells[arc])
    return total


@functools.lru_cache(maxsize=None)
def enumerate_tours(n: int) -> tuple[Tour, ...]:
    """All (n-1)! directed tours, ordered lexicographically from vertex 1."""
    if not 3 <= n <= MAX_N:
        raise ValueError(f"enumeration supports 3 <= n <= {MAX_N}, got {n}")
    return tuple(Tour.from_cycle((1,) + p) for p in itertools.permutations(range(2, n + 1)))


def unique_optimum(C: CostMatrix) -> Tour | None:
    _require_full(C)
    scored = [(tour_length(t, C), t) for t in enumerate_tours(C.n)]
    best = min((v for v, _ in scored), key=lambda v: (v is INF, 0 if v is INF else v))
    winners = [t for v, t in scored if v == best]
    return winners[0] if len(winners) == 1 else None


def eval_form(f: AffineForm, C: CostMatrix) -> int:
    total = f.constant
    for arc, v in f.coeffs:
        if arc not in C.cells:
            raise KeyError(f"form touches {arc}, which is not a live cell")
        c = C.cells[arc]
        if c is INF:
            raise ValueError(f"form touches the infinite cell {arc}")
        total += v * c
    return total


# -- matrix text formats -----------------------------------------------------

def parse_matrix(text: str) -> CostMatrix:
    """Read the plain format (``n`` then n rows, ``inf``/``-`` for INF) or
    the structured ``{"n": ..., "cells": [[...]]}`` format."""
    stripped = text.strip()
    if stripped.startswith("{"):
        data = json.loads(stripped)
        n = data["n"]
        rows = data["cells"]
        if len(rows) != n:
            raise ValueError(f"expected {n} rows, got {len(rows)}")
        for row in rows:
            for v in row:
                if v is not None and (isinstance(v, bool) or not isinstance(v, int)):
                    raise ValueError(f"non-integer entry {v!r}")
        return CostMatrix.from_rows(rows)
    lines = [ln.split("#", 1)[0].strip() for ln in stripped.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise ValueError("empty matrix text")
    try:
        n = int(lines[0])
    except ValueError:
        raise ValueError(f"first line must be n, got {lines[0]!r}") from None
    if len(lines) != n + 1:
        raise ValueError(f"expected {n} matrix rows, got {len(lines) - 1}")
    rows = []
    for ln in lines[1:]:
        toks = ln.split()
        if len(toks) != n:
            raise ValueError(f"row {ln!r} does not have {n} entries")
        row = []
        for tok in toks:
            if tok.lower() in ("inf", "-", "∞"):
                row.append(None)
            else:
                try:
                    row.append(int(tok))
                except ValueError:
                    raise ValueError(f"bad matrix entry {tok!r}") from None
        rows.append(row)
    return CostMatrix.from_rows(rows)


def format_matrix(C: CostMatrix, structured: bool = False) -> str:
    _require_full(C)
    rows = C.to_rows()
    if structured:
        return json.dumps({"n": C.n, "cells": rows})
    width = max([len(str(v)) for r in rows for v in r if v is not None] + [3])
    out = [str(C.n)]
    for r in rows:
        out.append(" ".join(("inf" if v is None else str(v)).rjust(width) for v in r))
    return "\n".join(out) + "\n"


def load_matrix(path) -> CostMatrix:
    with open(path, encoding="utf-8") as fh:
        return parse_matrix(fh.read())


def iter_offdiagonal(n: int) -> Iterator[tuple[int, int]]:
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i != j:
                yield i, j


def random_matrix(rng, n: int, low: int = 0, high: int = 99) -> CostMatrix:
    """Integer matrix with entries uniform in ``low..high`` and INF diagonal."""
    return CostMatrix.from_rows([[None if i == j else rng.randint(low, high)
                                  for j in range(n)] for i in range(n)])
