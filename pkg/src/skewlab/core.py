"""Ambient spaces, the immutable point-set model, and its symmetry operations.

Grids [n]^2 use 1-based coordinates in [1, n]; tori (Z/NZ)^2 use residues
in [0, N-1].  Points are stored column-wise (one sorted y-list per x) since
every algorithm in the package iterates over vertical slices.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Iterator, Mapping, Sequence, Union

import numpy as np

from .errors import CoordinateError, FormatError, ParameterError

GRID = "grid"
TORUS = "torus"


@dataclass(frozen=True)
class Ambient:
    """A square ambient space: the grid [n]^2 or the torus (Z/NZ)^2."""

    kind: str
    size: int

    def __post_init__(self) -> None:
        if self.kind not in (GRID, TORUS):
            raise ParameterError(f"unknown ambient kind {self.kind!r}")
        if self.size < 1:
            raise ParameterError(f"ambient size must be >= 1, got {self.size}")

    @property
    def lo(self) -> int:
        return 1 if self.kind == GRID else 0

    @property
    def hi(self) -> int:
        return self.size if self.kind == GRID else self.size - 1

    def in_range(self, v: int) -> bool:
        return self.lo <= v <= self.hi

    def __str__(self) -> str:
        return f"{self.kind} {self.size}"


def grid(n: int) -> Ambient:
    return Ambient(GRID, n)


def torus(N: int) -> Ambient:
    return Ambient(TORUS, N)


@dataclass(frozen=True)
class Witness:
    """A skew-corner witness: (x, y), (x, y+d), (x+d, y') with d != 0."""

    x: int
    y: int
    y_prime: int
    d: int


@dataclass(frozen=True)
class GridSet:
    """An immutable finite point set in a grid or torus ambient.

    `columns[i]` is the sorted, duplicate-free tuple of y-coordinates in
    column x = i + lo.  Safe to share between threads; all operations on it
    are pure.
    """

    ambient: Ambient
    columns: tuple[tuple[int, ...], ...]
    count: int = field(default=-1)

    def __post_init__(self) -> None:
        if len(self.columns) != self.ambient.size:
            raise CoordinateError(
                f"expected {self.ambient.size} columns, got {len(self.columns)}"
            )
        if self.count < 0:
            object.__setattr__(self, "count", sum(len(c) for c in self.columns))

    def __len__(self) -> int:
        return self.count

    def __contains__(self, point: tuple[int, int]) -> bool:
        x, y = point
        if not (self.ambient.in_range(x) and self.ambient.in_range(y)):
            return False
        col = self.columns[x - self.ambient.lo]
        i = np.searchsorted(col, y) if col else 0
        return bool(col and i < len(col) and col[i] == y)

    def column(self, x: int) -> tuple[int, ...]:
        """Vertical slice at x, in ambient coordinates."""
        return self.columns[x - self.ambient.lo]

    def points(self) -> Iterator[tuple[int, int]]:
        lo = self.ambient.lo
        for i, col in enumerate(self.columns):
            for y in col:
                yield (i + lo, y)

    def column_sizes(self) -> np.ndarray:
        return np.array([len(c) for c in self.columns], dtype=np.int64)

    @property
    def density(self) -> float:
        return self.count / self.ambient.size**2

    def indicator_matrix(self, dtype=np.float64) -> np.ndarray:
        """Size x size matrix M with M[x - lo, y - lo] = 1 on points."""
        lo = self.ambient.lo
        m = np.zeros((self.ambient.size, self.ambient.size), dtype=dtype)
        for i, col in enumerate(self.columns):
            if col:
                m[i, np.asarray(col) - lo] = 1
        return m

    @staticmethod
    def from_arrays(xs: np.ndarray, ys: np.ndarray, ambient: Ambient) -> "GridSet":
        """Fast constructor from coordinate arrays (validated, deduplicated)."""
        xs = np.asarray(xs, dtype=np.int64)
        ys = np.asarray(ys, dtype=np.int64)
        if xs.size:
            bad = (
                (xs < ambient.lo) | (xs > ambient.hi)
                | (ys < ambient.lo) | (ys > ambient.hi)
            )
            if bad.any():
                j = int(np.flatnonzero(bad)[0])
                raise CoordinateError(
                    f"point ({xs[j]}, {ys[j]}) outside {ambient}"
                )
        order = np.lexsort((ys, xs))
        xs, ys = xs[order], ys[order]
        if xs.size:
            keep = np.ones(xs.size, dtype=bool)
            keep[1:] = (np.diff(xs) != 0) | (np.diff(ys) != 0)
            xs, ys = xs[keep], ys[keep]
        cols: list[tuple[int, ...]] = []
        lo = ambient.lo
        starts = np.searchsorted(xs, np.arange(lo, lo + ambient.size + 1))
        for i in range(ambient.size):
            cols.append(tuple(int(v) for v in ys[starts[i]:starts[i + 1]]))
        return GridSet(ambient, tuple(cols))

    def __repr__(self) -> str:
        return f"GridSet({self.ambient}, {self.count} points)"


def make_grid_set(points: Iterable[tuple[int, int]], ambient: Ambient) -> GridSet:
    """Build a GridSet from coordinate pairs, deduplicating.

    Raises CoordinateError naming the first out-of-range point.
    """
    pts = list(points)
    if not pts:
        return GridSet(ambient, tuple(() for _ in range(ambient.size)))
    xs = np.array([p[0] for p in pts], dtype=np.int64)
    ys = np.array([p[1] for p in pts], dtype=np.int64)
    return GridSet.from_arrays(xs, ys, ambient)


def embed_torus(a: GridSet) -> GridSet:
    """Reinterpret a grid set in [n]^2 as a subset of the torus (Z/2nZ)^2.

    Coordinates are kept verbatim (values 1..n are valid residues mod 2n);
    any fixed shift would be a translation and hence irrelevant to
    skew-corner-freeness.
    """
    if a.ambient.kind != GRID:
        raise ParameterError("embed_torus expects a grid-ambient set")
    n = a.ambient.size
    amb = torus(2 * n)
    cols = [()] * (2 * n)
    for i, col in enumerate(a.columns):
        cols[i + 1] = col  # grid x = i+1 used directly as a residue
    return GridSet(amb, tuple(cols), a.count)


TranslationMap = Union[int, Mapping[int, int], Sequence[int], Callable[[int], int]]


def _shift_of(v: TranslationMap, x: int) -> int:
    if isinstance(v, int):
        return v
    if isinstance(v, Mapping):
        return v.get(x, 0)
    if callable(v):
        return v(x)
    return v[x]


def translate(a: GridSet, h: int, v: TranslationMap) -> GridSet:
    """Torus translation (x, y) -> (x + h, y + v(x)) mod N.

    `v` gives an independent vertical shift per column (int for a uniform
    shift, or a mapping/sequence/callable keyed by the column x).  These are
    exactly the symmetries under which skew-corner-freeness is invariant.
    """
    if a.ambient.kind != TORUS:
        raise ParameterError("translate expects a torus-ambient set")
    N = a.ambient.size
    cols: list[tuple[int, ...]] = [()] * N
    for i, col in enumerate(a.columns):
        if not col:
            continue
        s = _shift_of(v, i) % N
        cols[(i + h) % N] = tuple(sorted((y + s) % N for y in col))
    return GridSet(a.ambient, tuple(cols), a.count)


def transpose(a: GridSet) -> GridSet:
    """Reflect (x, y) -> (y, x).  An involution; preserves cardinality."""
    lo = a.ambient.lo
    cols: list[list[int]] = [[] for _ in range(a.ambient.size)]
    for i, col in enumerate(a.columns):
        for y in col:
            cols[y - lo].append(i + lo)
    return GridSet(a.ambient, tuple(tuple(c) for c in cols), a.count)


# ---------------------------------------------------------------------------
# `skewset v1` file format: line 1 "skewset 1", line 2 "ambient grid <n>" or
# "ambient torus <N>", then one "x y" pair per line.  Text, UTF-8, LF.
# ---------------------------------------------------------------------------

def dumps_skewset(a: GridSet) -> str:
    lines = ["skewset 1", f"ambient {a.ambient.kind} {a.ambient.size}"]
    lines.extend(f"{x} {y}" for x, y in a.points())
    return "\n".join(lines) + "\n"


def save_skewset(a: GridSet, path: str | Path) -> None:
    Path(path).write_text(dumps_skewset(a), encoding="utf-8", newline="\n")


def loads_skewset(text: str) -> GridSet:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0] != "skewset 1":
        raise FormatError("missing 'skewset 1' header")
    if len(lines) < 2:
        raise FormatError("missing ambient line")
    parts = lines[1].split()
    if len(parts) != 3 or parts[0] != "ambient" or parts[1] not in (GRID, TORUS):
        raise FormatError(f"bad ambient line {lines[1]!r}")
    try:
        amb = Ambient(parts[1], int(parts[2]))
    except ValueError as exc:
        raise FormatError(f"bad ambient size in {lines[1]!r}") from exc
    pts: list[tuple[int, int]] = []
    seen: set[tuple[int, int]] = set()
    for ln in lines[2:]:
        toks = ln.split()
        if len(toks) != 2:
            raise FormatError(f"bad point line {ln!r}")
        try:
            p = (int(toks[0]), int(toks[1]))
        except ValueError as exc:
            raise FormatError(f"bad point line {ln!r}") from exc
        if not (amb.in_range(p[0]) and amb.in_range(p[1])):
            raise CoordinateError(f"point {p} outside {amb}")
        if p in seen:
            raise FormatError(f"duplicate point {p}")
        seen.add(p)
        pts.append(p)
    return make_grid_set(pts, amb)


def load_skewset(path: str | Path) -> GridSet:
    return loads_skewset(Path(path).read_text(encoding="utf-8"))
