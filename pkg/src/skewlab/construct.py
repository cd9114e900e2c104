"""Constructions of large skew-corner-free sets.

Two families: digit-product sets over a small torus base set, and
Behrend-type sphere sets: pairs (x, y) in the box B = [m]^d x [m]^d with
||x||^2 pinned to r and <x, y> pinned to t, pushed into [n]^2 by the
base-(2m) digit embedding.  A Pythagoras argument shows each such pair set
is skew-corner-free, and a pigeonhole over (r, t) picks a large one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .core import GridSet, grid, torus
from .errors import FalsificationError, ParameterError
from .verify import find_skew_corner

# Row block size for the inner-product scans, in matrix entries.
_SCAN_CHUNK = 4_000_000


@dataclass(frozen=True)
class SphereParams:
    """Parameters of a sphere pair set: box [m]^d, squared radius r,
    inner-product value t."""

    m: int
    d: int
    r: int
    t: int


@dataclass(frozen=True)
class BaseSet:
    """A skew-corner-free subset of (Z/bZ)^2 used as a digit alphabet."""

    b: int
    points: GridSet

    def __post_init__(self) -> None:
        if self.points.ambient != torus(self.b):
            raise ParameterError(
                f"base set must live on the torus of side {self.b}"
            )
        w = find_skew_corner(self.points)
        if w is not None:
            raise ParameterError(f"base set is not skew-corner-free: {w}")

    def __len__(self) -> int:
        return len(self.points)


def integer_root(n: int, d: int) -> int:
    """Largest r >= 0 with r**d <= n (exact integer arithmetic)."""
    if n < 0 or d < 1:
        raise ParameterError("integer_root needs n >= 0, d >= 1")
    if d == 1 or n < 2:
        return n
    r = int(round(n ** (1.0 / d)))
    while r**d > n:
        r -= 1
    while (r + 1) ** d <= n:
        r += 1
    return r


def freiman_embed(x: Sequence[int], m: int, d: int) -> int:
    """Base-(2m) digit encoding of a point of [m]^d into [(2m)^d].

    phi(x) = 1 + sum_j (2m)^(j-1) (x_j - 1).  Restricted to [m]^d this is a
    Freiman isomorphism: digit sums never carry, so additive relations are
    preserved in both directions.
    """
    if len(x) != d:
        raise ParameterError(f"expected {d} coordinates, got {len(x)}")
    for v in x:
        if not 1 <= v <= m:
            raise ParameterError(f"coordinate {v} outside [1, {m}]")
    return 1 + sum((2 * m) ** j * (x[j] - 1) for j in range(d))


def _box_points(m: int, d: int) -> np.ndarray:
    """All points of [m]^d as an (m^d, d) int array, lexicographic order."""
    grids = np.meshgrid(*([np.arange(1, m + 1)] * d), indexing="ij")
    return np.stack([g.ravel() for g in grids], axis=1).astype(np.int64)


def _embed_many(pts: np.ndarray, m: int) -> np.ndarray:
    d = pts.shape[1]
    weights = (2 * m) ** np.arange(d, dtype=np.int64)
    return 1 + (pts - 1) @ weights


def _inner_product_counts(
    rows: np.ndarray, box: np.ndarray, cols: np.ndarray, tmax: int
) -> np.ndarray:
    """Histogram of <x, y> over x in box[rows], y in box[cols]."""
    counts = np.zeros(tmax + 1, dtype=np.int64)
    xf = box.astype(np.float64)
    block = max(1, _SCAN_CHUNK // max(1, len(cols)))
    for s in range(0, len(rows), block):
        sub = xf[rows[s : s + block]] @ xf[cols].T
        counts += np.bincount(
            np.rint(sub).astype(np.int64).ravel(), minlength=tmax + 1
        )
    return counts


def _pairs_with_product(
    rows: np.ndarray, box: np.ndarray, cols: np.ndarray, t: int
) -> tuple[np.ndarray, np.ndarray]:
    """Index pairs (i in rows, j in cols) with <box[i], box[j]> = t."""
    empty = np.array([], dtype=np.int64)
    if len(rows) == 0 or len(cols) == 0:
        return empty, empty
    xf = box.astype(np.float64)
    out_i, out_j = [empty], [empty]
    block = max(1, _SCAN_CHUNK // max(1, len(cols)))
    for s in range(0, len(rows), block):
        chunk = rows[s : s + block]
        sub = np.rint(xf[chunk] @ xf[cols].T).astype(np.int64)
        ii, jj = np.nonzero(sub == t)
        out_i.append(chunk[ii])
        out_j.append(cols[jj])
    return np.concatenate(out_i), np.concatenate(out_j)


def sphere_family(
    m: int, d: int, r: int, t: int, bi: bool = False
) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Enumerate the pair set at (r, t): x on the sphere ||x||^2 = r (and y
    too, if `bi`), with <x, y> = t.  Over all (r, t) in [d m^2]^2 the plain
    family partitions [m]^d x [m]^d.
    """
    if m < 1 or d < 1:
        raise ParameterError("need m >= 1 and d >= 1")
    if not (1 <= r <= d * m * m and 1 <= t <= d * m * m):
        raise ParameterError(f"(r, t) = ({r}, {t}) outside [1, {d * m * m}]^2")
    box = _box_points(m, d)
    norms = (box * box).sum(axis=1)
    rows = np.flatnonzero(norms == r)
    cols = rows if bi else np.arange(len(box))
    ii, jj = _pairs_with_product(rows, box, cols, t)
    return [
        (tuple(int(v) for v in box[i]), tuple(int(v) for v in box[j]))
        for i, j in zip(ii, jj)
    ]


def _choose_dimensions(n: int) -> tuple[int, int]:
    if n < 2:
        raise ParameterError("sphere construction needs n >= 2")
    d = math.isqrt(int(2 * math.log2(n)))
    if d < 1:
        raise ParameterError("sphere construction needs n >= 2")
    m = integer_root(n, d) // 2
    if m < 1:
        raise ParameterError(
            f"degenerate n={n}: box side would be 0 at dimension d={d}"
        )
    return m, d


def sphere_construction(n: int) -> tuple[GridSet, SphereParams]:
    """Largest sphere pair set at the balanced choice of (m, d), embedded
    into [n]^2.

    Scans all realized (r, t); the pigeonhole guarantees the winner has at
    least m^(2d-4)/d^2 pairs.  Ties broken by smallest (r, t).
    """
    m, d = _choose_dimensions(n)
    box = _box_points(m, d)
    norms = (box * box).sum(axis=1)
    tmax = d * m * m
    best = (0, -1, -1)  # (count, r, t)
    all_cols = np.arange(len(box))
    for r in np.unique(norms):
        rows = np.flatnonzero(norms == r)
        counts = _inner_product_counts(rows, box, all_cols, tmax)
        t = int(np.argmax(counts))
        c = int(counts[t])
        if c > best[0]:
            best = (c, int(r), t)
    count, r, t = best
    ii, jj = _pairs_with_product(
        np.flatnonzero(norms == r), box, all_cols, t
    )
    xs = _embed_many(box[ii], m)
    ys = _embed_many(box[jj], m)
    out = GridSet.from_arrays(xs, ys, grid(n))
    if len(out) != count:
        raise FalsificationError(
            "digit embedding collapsed sphere pairs; phi not injective"
        )
    return out, SphereParams(m=m, d=d, r=r, t=t)


def bi_sphere_construction(n: int) -> tuple[GridSet, SphereParams]:
    """Sphere construction with both points pinned to the same sphere.

    Two-stage pigeonhole: first the most popular squared radius r (at least
    m^(d-2)/d box points), then the most popular inner product among pairs
    on that sphere (at least m^(2d-6)/d^3 pairs).  The pair set is symmetric
    under transposition, so it is bi-skew-corner-free.
    """
    m, d = _choose_dimensions(n)
    box = _box_points(m, d)
    norms = (box * box).sum(axis=1)
    values, sizes = np.unique(norms, return_counts=True)
    r = int(values[np.argmax(sizes)])  # first max: smallest r wins ties
    rows = np.flatnonzero(norms == r)
    tmax = d * m * m
    counts = _inner_product_counts(rows, box, rows, tmax)
    t = int(np.argmax(counts))
    ii, jj = _pairs_with_product(rows, box, rows, t)
    xs = _embed_many(box[ii], m)
    ys = _embed_many(box[jj], m)
    out = GridSet.from_arrays(xs, ys, grid(n))
    if len(out) != int(counts[t]):
        raise FalsificationError(
            "digit embedding collapsed sphere pairs; phi not injective"
        )
    return out, SphereParams(m=m, d=d, r=r, t=t)


def product_construction(
    base: BaseSet, n: int, verify: Optional[bool] = None
) -> GridSet:
    """Digit-product set: all (x, y) in [b^k]^2 whose base-b digit pairs
    (of x-1 and y-1) all lie in the base set, with k = floor(log_b n).

    Output size is exactly len(base)^k.  Freeness of the output is checked
    when n <= 64 (or when `verify=True` forces it).
    """
    b = base.b
    if b < 2:
        raise ParameterError("product construction needs base modulus >= 2")
    k = 0
    while b ** (k + 1) <= n:
        k += 1
    if k == 0:
        raise ParameterError(f"n={n} is below the base modulus {b}")
    digits = np.array(sorted(base.points.points()), dtype=np.int64)
    s = len(digits)
    if s**k > 50_000_000:
        raise ParameterError(
            f"product set would have {s}^{k} points; refusing to materialize"
        )
    # choice[j] holds the j-th digit index of every tuple in S^k
    choice = np.indices((s,) * k).reshape(k, -1)
    weights = b ** np.arange(k, dtype=np.int64)
    xs = 1 + (digits[choice, 0] * weights[:, None]).sum(axis=0)
    ys = 1 + (digits[choice, 1] * weights[:, None]).sum(axis=0)
    out = GridSet.from_arrays(xs, ys, grid(n))
    if len(out) != len(base) ** k:
        raise FalsificationError("digit tuples collided; product size wrong")
    if verify or (verify is None and n <= 64):
        w = find_skew_corner(out)
        if w is not None:
            raise FalsificationError(f"product construction not free: {w}")
    return out


def verify_free(a: GridSet, probes: int = 10**6, seed: int = 0) -> bool:
    """Freeness check sized to the input: exhaustive when the column-pair
    work is small, otherwise `probes` random pair probes.

    Returns True when no witness was found; a found witness raises
    FalsificationError (constructions are proven free, so this is a bug
    or a falsification, never a routine outcome).
    """
    sizes = a.column_sizes()
    pair_work = int((sizes.astype(np.int64) ** 2).sum())
    if pair_work <= 20_000_000:
        w = find_skew_corner(a)
        if w is not None:
            raise FalsificationError(f"construction contains a skew corner: {w}")
        return True
    rng = np.random.default_rng(seed)
    lo = a.ambient.lo
    cols = [np.asarray(c, dtype=np.int64) for c in a.columns]
    rich = np.flatnonzero(sizes >= 2)
    if rich.size == 0:
        return True
    weights = sizes[rich] ** 2
    pick = rng.choice(rich, size=probes, p=weights / weights.sum())
    occ = sizes > 0
    size = a.ambient.size
    on_torus = a.ambient.kind == "torus"
    for i in np.unique(pick):
        reps = int((pick == i).sum())
        ys = cols[i]
        j1 = rng.integers(0, len(ys), size=reps)
        j2 = rng.integers(0, len(ys), size=reps)
        d = ys[j2] - ys[j1]
        d = d[d != 0]
        targets = (i + d) % size if on_torus else i + d
        if not on_torus:
            targets = targets[(targets >= 0) & (targets < size)]
        if targets.size and occ[targets].any():
            t = int(targets[occ[targets]][0])
            raise FalsificationError(
                f"construction contains a skew corner through columns "
                f"{i + lo} and {t + lo}"
            )
    return True


@dataclass(frozen=True)
class GrowthRow:
    n: int
    size: int
    density: float
    fitted_c: float
    params: SphereParams


def growth_table(n_list: Iterable[int], bi: bool = False) -> list[GrowthRow]:
    """Run the sphere construction over `n_list` and fit the exponent:
    fitted_c = (2 log2 n - log2 size) / sqrt(log2 n)."""
    rows = []
    build = bi_sphere_construction if bi else sphere_construction
    for n in n_list:
        a, params = build(n)
        size = len(a)
        lg = math.log2(n)
        fitted_c = (2 * lg - math.log2(size)) / math.sqrt(lg)
        rows.append(
            GrowthRow(
                n=n, size=size, density=size / n**2,
                fitted_c=fitted_c, params=params,
            )
        )
    return rows
