"""Naive reference implementations and exhaustive sweeps over small grids.

The references here share no code with the production kernels: the
distance field is a literal fixed-point iteration of the recursive
definition and labels come from repeated min-propagation.  The sweep
enumerates every image of a ``width x height`` grid by its integer code
(bit ``j`` = cell ``j`` in row-major order) and runs every bound check plus
the differential checks on each one.
"""

from __future__ import annotations

import itertools
import json
import math
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from functools import lru_cache

import multiprocessing

import numpy as np

from . import kernels
from .bounds import theorem4_radius
from .geometry import DistanceField
from .grid import BinaryImage

MAX_CELLS = 25

CHECKS = (
    "lemma2",
    "lemma3",
    "lemma4",
    "lemma5",
    "theorem4",
    "theorem5",
    "ball-component",
    "strict-chain",
    "paths",
    "paths-topology",
    "oracle-distance",
    "oracle-labels",
)


class EnumerationCapExceeded(ValueError):
    pass


# ---------------------------------------------------------------------------
# reference implementations
# ---------------------------------------------------------------------------


def _naive_distance_loop(img):
    h, w = img.shape
    inf = h * w + 1
    d = np.full((h, w), -1, np.int64)
    for r in range(h):
        for c in range(w):
            if img[r, c] == 0:
                continue
            d[r, c] = inf
            if r == 0 or c == 0 or r == h - 1 or c == w - 1:
                d[r, c] = 0
            elif img[r - 1, c] == 0 or img[r + 1, c] == 0 or img[r, c - 1] == 0 or img[r, c + 1] == 0:
                d[r, c] = 0
    rounds = 0
    while True:
        rounds += 1
        nxt = d.copy()
        changed = False
        for r in range(h):
            for c in range(w):
                if d[r, c] <= 0:
                    continue
                # cells with d != 0 have four one-neighbours inside the grid
                best = min(d[r - 1, c], d[r + 1, c], d[r, c - 1], d[r, c + 1])
                v = min(best + 1, inf)
                if v != d[r, c]:
                    nxt[r, c] = v
                    changed = True
        d = nxt
        if not changed:
            break
    return d, rounds


def _propagate_labels_loop(img):
    h, w = img.shape
    lab = np.full((h, w), -1, np.int64)
    for r in range(h):
        for c in range(w):
            if img[r, c] != 0:
                lab[r, c] = r * w + c
    changed = True
    while changed:
        changed = False
        for r in range(h):
            for c in range(w):
                if lab[r, c] < 0:
                    continue
                best = lab[r, c]
                if r > 0 and lab[r - 1, c] >= 0 and lab[r - 1, c] < best:
                    best = lab[r - 1, c]
                if r < h - 1 and lab[r + 1, c] >= 0 and lab[r + 1, c] < best:
                    best = lab[r + 1, c]
                if c > 0 and lab[r, c - 1] >= 0 and lab[r, c - 1] < best:
                    best = lab[r, c - 1]
                if c < w - 1 and lab[r, c + 1] >= 0 and lab[r, c + 1] < best:
                    best = lab[r, c + 1]
                if best < lab[r, c]:
                    lab[r, c] = best
                    changed = True
    # every component now carries the index of its first row-major cell;
    # renumber densely in order of appearance
    remap = np.full(h * w, -1, np.int64)
    out = np.full((h, w), -1, np.int32)
    n = 0
    for r in range(h):
        for c in range(w):
            v = lab[r, c]
            if v < 0:
                continue
            if remap[v] < 0:
                remap[v] = n
                n += 1
            out[r, c] = remap[v]
    return out


_naive_distance = kernels.jit(_naive_distance_loop)
_propagate_labels = kernels.jit(_propagate_labels_loop)


def naive_distance_field(image: BinaryImage) -> DistanceField:
    d, rounds = _naive_distance(image.array)
    assert rounds <= image.width * image.height + 1
    values = d.astype(np.int32)
    values.setflags(write=False)
    return DistanceField(values)


def naive_distance_rounds(image: BinaryImage) -> int:
    return int(_naive_distance(image.array)[1])


def propagate_labels(image: BinaryImage) -> np.ndarray:
    return _propagate_labels(image.array)


# ---------------------------------------------------------------------------
# minimum of a sum of square roots
# ---------------------------------------------------------------------------


def _squarefree_split(k: int) -> tuple[int, int]:
    """k = s^2 * f with f squarefree; returns (s, f)."""
    s, f = 1, k
    p = 2
    while p * p <= f:
        while f % (p * p) == 0:
            f //= p * p
            s *= p
        p += 1
    return s, f


def sqrt_sum_key(values) -> tuple[tuple[int, int], ...]:
    """Canonical exact form of sum(sqrt(v)) as ((squarefree, coefficient), ...).

    Square roots of distinct squarefree integers are linearly independent
    over the rationals, so two sums are equal iff their keys are equal.
    """
    acc = Counter()
    for v in values:
        if v:
            s, f = _squarefree_split(v)
            acc[f] += s
    return tuple(sorted(acc.items()))


def _precise(key) -> Decimal:
    with localcontext() as ctx:
        ctx.prec = 60
        return sum((Decimal(coef) * Decimal(f).sqrt() for f, coef in key), Decimal(0))


@dataclass(frozen=True)
class SqrtMinimum:
    value: float
    witnesses: tuple[tuple[int, ...], ...]

    def has_boundary_witness(self, lo: int, hi: int) -> bool:
        """Some witness has at most one entry outside {lo, hi}."""
        return any(sum(1 for k in w if k not in (lo, hi)) <= 1 for w in self.witnesses)


@lru_cache(maxsize=None)
def _minima_by_sum(r: int, lo: int, hi: int) -> dict[int, SqrtMinimum]:
    roots = [math.sqrt(k) for k in range(hi + 1)]
    groups: dict[int, list[tuple[float, tuple[int, ...]]]] = {}
    for tup in itertools.combinations_with_replacement(range(lo, hi + 1), r):
        groups.setdefault(sum(tup), []).append((sum(roots[k] for k in tup), tup))
    out = {}
    for s, items in groups.items():
        best = min(v for v, _ in items)
        close = [t for v, t in items if v - best <= 1e-9]
        by_key: dict = {}
        for t in close:
            by_key.setdefault(sqrt_sum_key(t), []).append(t)
        if len(by_key) > 1:
            winner = min(by_key, key=_precise)
        else:
            (winner,) = by_key
        out[s] = SqrtMinimum(float(_precise(winner)), tuple(sorted(by_key[winner])))
    return out


def min_sum_sqrt(r: int, lo: int, hi: int, total: int) -> SqrtMinimum:
    """Minimum of sqrt(k_1)+...+sqrt(k_r) over integers lo <= k_i <= hi summing to total.

    Witnesses are all non-decreasing tuples attaining the minimum exactly.
    """
    if r < 2 or lo < 0 or lo >= hi:
        raise ValueError("need r >= 2 and 0 <= lo < hi")
    if not (r * lo <= total <= r * hi):
        raise ValueError(f"no {r}-tuple in [{lo}, {hi}] sums to {total}")
    return _minima_by_sum(r, lo, hi)[total]


def lemma1_sweep(max_r: int = 6, max_b: int = 12) -> list[tuple[int, int, int, int]]:
    """All (r, A, B, S) whose minimum has no witness with <= 1 interior entry."""
    bad = []
    for r in range(2, max_r + 1):
        for hi in range(1, max_b + 1):
            for lo in range(hi):
                table = _minima_by_sum(r, lo, hi)
                for s in range(r * lo, r * hi + 1):
                    if not table[s].has_boundary_witness(lo, hi):
                        bad.append((r, lo, hi, s))
    return bad


# ---------------------------------------------------------------------------
# exhaustive enumeration
# ---------------------------------------------------------------------------


@dataclass(frozen=True, order=True)
class Violation:
    image_code: int
    check: str
    detail: str


@dataclass(frozen=True)
class SweepReport:
    grid_width: int
    grid_height: int
    images_checked: int
    violations: tuple[Violation, ...]
    checks: tuple[str, ...] = ()
    counters: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {
            "grid_width": self.grid_width,
            "grid_height": self.grid_height,
            "images_checked": self.images_checked,
            "violation_count": len(self.violations),
            "checks": list(self.checks),
            "counters": {k: self.counters[k] for k in sorted(self.counters)},
            "violations": [
                {"image_code": v.image_code, "check": v.check, "detail": v.detail} for v in self.violations
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


def verify_code(code: int, arr: np.ndarray, counters: Counter) -> list[tuple[str, str]]:
    """Run every sweep check on one image; returns (check, detail) pairs."""
    out = []
    labels, sizes = kernels.label4(arr)
    dist = kernels.distance(arr)
    _, hole_sizes, _ = kernels.holes8(arr, labels)
    counts, lengths = kernels.level_stats(dist)
    a = counts.tolist()
    ls = lengths.tolist()  # l_0 .. l_{top+1}
    top = len(a) - 1
    n = sum(a)
    l0 = ls[0]
    hole_free = len(hole_sizes) == 0
    counters["hole_free_images"] += hole_free

    if l0 * l0 < 16 * n:
        out.append(("lemma2", f"l^2={l0 * l0} < 16N={16 * n}"))
    if top >= 0 and ls[1] > 3 * l0:
        out.append(("lemma3", f"l_1={ls[1]} > 3*l_0={3 * l0}"))
    for i in range(1, top + 1):
        if (2 * i + 1) * ls[i + 1] > (2 * i + 3) * ls[i]:
            out.append(("lemma4", f"i={i}: l_{i + 1}={ls[i + 1]}, l_{i}={ls[i]}"))
    for i in range(top + 1):
        if a[i] > (2 * i + 1) * l0:
            out.append(("lemma5", f"i={i}: A_i={a[i]} > {(2 * i + 1) * l0}"))
    if n >= 1:
        need = theorem4_radius(n, l0)
        if top < need:
            out.append(("theorem4", f"max ball {top} < {need}"))
        if hole_free and top < n // l0:
            out.append(("theorem5", f"max ball {top} < floor({n}/{l0})"))
    if top >= 1:
        sel = dist >= 1
        dd = dist[sel].astype(np.int64)
        have = sizes[labels[sel]]
        bad = have < 2 * dd * dd + 2 * dd + 1
        if bad.any():
            out.append(("ball-component", f"{int(bad.sum())} cell(s) in too-small components"))
    if hole_free and n:
        chain = [l0] + a
        for i in range(top + 1):
            if not chain[i + 1] < chain[i]:
                out.append(("strict-chain", f"A_{i}={chain[i + 1]} >= {chain[i]}"))
                break

    for level in range(top + 1):
        mask = arr if level == 0 else (dist >= level).view(np.uint8)
        offsets, _, ys, xs, stats = kernels.trace_paths(mask)
        keys = (ys.astype(np.int64) * (arr.shape[1] + 1) + xs).tolist()
        total = 0
        n_in = n_out = 0
        for p, (length, straight, t1, t2, inside) in enumerate(stats.tolist()):
            if len(set(keys[offsets[p] : offsets[p + 1]])) != length:
                out.append(("paths", f"level {level}: path {p} revisits a vertex"))
            total += length
            counters["paths"] += 1
            if inside:
                n_in += 1
                ok = t2 == t1 + 4 and length == straight + 2 * t1 + 4
            else:
                n_out += 1
                ok = t1 == t2 + 4 and length == straight + 2 * t1 - 4 and length >= 8 * level + 4
                if level and hole_free:
                    counters["hole_free_outside_ipaths"] += 1
            if not ok:
                side = "inside" if inside else "outside"
                out.append(("paths", f"level {level} {side}: L={length} a={straight} I={t1} II={t2}"))
        if total != ls[level]:
            out.append(("paths", f"level {level}: path lengths sum {total} != {ls[level]}"))
        # a hole region touching itself diagonally splits into several cycles
        if level == 0 and (n_in != len(sizes) or n_out < len(hole_sizes)):
            out.append(
                ("paths-topology", f"{n_in} outer/{n_out} inner cycles vs {len(sizes)} components/{len(hole_sizes)} holes")
            )

    nd, _ = _naive_distance(arr)
    if not np.array_equal(nd, dist):
        out.append(("oracle-distance", "wavefront field differs from fixed-point iteration"))
    if not np.array_equal(_propagate_labels(arr), labels):
        out.append(("oracle-labels", "labels differ from min-propagation"))
    return out


def _sweep_range(width, height, lo, hi, visitor):
    viols = []
    counters = Counter()
    for code in range(lo, hi):
        arr = kernels.decode(code, height, width)
        for check, detail in visitor(code, arr, counters):
            viols.append(Violation(code, check, detail))
    return viols, counters


def enumerate_images(width: int, height: int, visitor=verify_code, jobs: int = 1, checks=CHECKS) -> SweepReport:
    """Visit all 2**(width*height) images in increasing code order.

    ``visitor(code, array, counters)`` returns (check, detail) pairs and may
    bump integer ``counters``.  With ``jobs > 1`` contiguous code ranges run
    in worker processes; the report is identical for any ``jobs``.
    """
    if width < 1 or height < 1:
        raise ValueError("grid dimensions must be positive")
    if width * height > MAX_CELLS:
        raise EnumerationCapExceeded(f"{width}x{height} exceeds the {MAX_CELLS}-cell enumeration cap")
    total = 1 << (width * height)
    jobs = max(1, min(jobs, total))
    if jobs == 1:
        viols, counters = _sweep_range(width, height, 0, total, visitor)
    else:
        bounds = [total * j // jobs for j in range(jobs + 1)]
        ctx = multiprocessing.get_context("fork")
        viols, counters = [], Counter()
        with ProcessPoolExecutor(max_workers=jobs, mp_context=ctx) as pool:
            futures = [pool.submit(_sweep_range, width, height, bounds[j], bounds[j + 1], visitor) for j in range(jobs)]
            for fut in futures:
                v, c = fut.result()
                viols.extend(v)
                counters.update(c)
    return SweepReport(width, height, total, tuple(sorted(viols)), tuple(checks), dict(counters))


def exhaustive_verify(width: int, height: int, jobs: int = 1) -> SweepReport:
    return enumerate_images(width, height, verify_code, jobs)
