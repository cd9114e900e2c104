"""Shared fixtures and independent brute-force oracles.

The oracles here are deliberately naive (explicit tuple loops, no FFT, no
pruning) so library results are checked against a second, independent
route."""

from __future__ import annotations

import numpy as np
import pytest

import skewlab as sl

# The bi-skew-corner-free example set on the torus of side 6.
EIGHT_POINTS = [(0, 0), (0, 1), (2, 0), (2, 3), (3, 1), (3, 3), (3, 5), (4, 0)]


@pytest.fixture
def eight_point_set() -> sl.GridSet:
    return sl.make_grid_set(EIGHT_POINTS, sl.torus(6))


def rand_torus_set(rng: np.random.Generator, N: int, density: float) -> sl.GridSet:
    mask = rng.random((N, N)) < density
    xs, ys = np.nonzero(mask)
    return sl.GridSet.from_arrays(xs, ys, sl.torus(N))


def rand_grid_set(rng: np.random.Generator, n: int, density: float) -> sl.GridSet:
    mask = rng.random((n, n)) < density
    xs, ys = np.nonzero(mask)
    return sl.GridSet.from_arrays(xs + 1, ys + 1, sl.grid(n))


def brute_skew_tuples(a: sl.GridSet) -> tuple[int, int]:
    """(trivial, nontrivial) skew-corner tuple counts by quadruple loop."""
    size = a.ambient.size
    on_torus = a.ambient.kind == "torus"
    lo = a.ambient.lo
    pts = set(a.points())
    rng_vals = range(lo, lo + size)
    trivial = nontrivial = 0
    for x in rng_vals:
        for y in rng_vals:
            if (x, y) not in pts:
                continue
            for d in range(-size + 1, size) if not on_torus else range(size):
                if on_torus:
                    p2 = (x, (y + d) % size)
                    x3 = (x + d) % size
                else:
                    if not (lo <= y + d < lo + size and lo <= x + d < lo + size):
                        continue
                    p2 = (x, y + d)
                    x3 = x + d
                if p2 not in pts:
                    continue
                for yp in rng_vals:
                    if (x3, yp) in pts:
                        if (d % size if on_torus else d) == 0:
                            trivial += 1
                        else:
                            nontrivial += 1
    return trivial, nontrivial


def brute_has_skew_corner(a: sl.GridSet) -> bool:
    return brute_skew_tuples(a)[1] > 0


def brute_corner_tuples(a: sl.GridSet) -> tuple[int, int]:
    """(d=0, d!=0) corner tuple counts (x,y), (x+d,y), (x,y+d)."""
    N = a.ambient.size
    pts = set(a.points())
    trivial = nontrivial = 0
    for x, y in pts:
        for d in range(N):
            if ((x + d) % N, y) in pts and (x, (y + d) % N) in pts:
                if d == 0:
                    trivial += 1
                else:
                    nontrivial += 1
    return trivial, nontrivial


def brute_max_free(n: int, torus: bool, bi: bool = False) -> int:
    """Maximum size over all subsets, by full enumeration of the power set."""
    lo = 0 if torus else 1
    cells = [(x, y) for x in range(lo, lo + n) for y in range(lo, lo + n)]
    amb = sl.torus(n) if torus else sl.grid(n)
    best = 0
    for mask in range(1 << len(cells)):
        if mask.bit_count() <= best:
            continue
        pts = [cells[i] for i in range(len(cells)) if mask >> i & 1]
        a = sl.make_grid_set(pts, amb)
        if sl.find_skew_corner(a) is not None:
            continue
        if bi and sl.find_skew_corner(sl.transpose(a)) is not None:
            continue
        best = mask.bit_count()
    return best


def greedy_free_set(n: int, rng: np.random.Generator) -> sl.GridSet:
    """Randomized greedy skew-corner-free subset of [n]^2."""
    cells = [(x, y) for x in range(1, n + 1) for y in range(1, n + 1)]
    rng.shuffle(cells)
    cols: dict[int, set[int]] = {}
    occupied: set[int] = set()
    for x, y in cells:
        ok = True
        for y2 in cols.get(x, ()):  # new vertical pair (y, y2) in column x
            for d in (y - y2, y2 - y):
                t = x + d
                if 1 <= t <= n and t in occupied:
                    ok = False
                    break
            if not ok:
                break
        if ok:  # (x, y) as the lone point of some pair's target column
            for x2, ys in cols.items():
                d = x - x2
                if d != 0 and any((yy + d) in ys for yy in ys):
                    ok = False
                    break
        if ok:
            cols.setdefault(x, set()).add(y)
            occupied.add(x)
    pts = [(x, y) for x, ys in cols.items() for y in ys]
    return sl.make_grid_set(pts, sl.grid(n))
