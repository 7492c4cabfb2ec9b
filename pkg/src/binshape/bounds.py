"""Evaluate the area/boundary bounds against an image's measured metrics.

All pass/fail decisions on integer quantities are exact: irrational bounds
are compared after squaring and ratios are cross-multiplied.  Floating
point appears only in human-readable bound values and in the
"sufficiently large" threshold diagnostics, which never decide a violation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational

import numpy as np

from . import kernels
from .grid import BinaryImage

GE, GT, LE, LT = ">=", ">", "<=", "<"


@dataclass(frozen=True)
class Metrics:
    width: int
    height: int
    area: int
    boundary_length: int
    component_sizes: tuple[int, ...]  # by component id
    component_max_distance: tuple[int, ...]
    hole_count: int
    holes_per_component: tuple[int, ...]
    max_ball_radius: int | None
    level_counts: tuple[int, ...]  # A_0 .. A_max
    iboundary_lengths: tuple[int, ...]  # l_1 .. l_max

    @property
    def largest_component(self) -> int:
        return max(self.component_sizes, default=0)

    @property
    def component_count(self) -> int:
        return len(self.component_sizes)

    @property
    def hole_free(self) -> bool:
        return self.hole_count == 0

    def lengths(self) -> tuple[int, ...]:
        """``(l_0, l_1, ..., l_max)``."""
        return (self.boundary_length,) + self.iboundary_lengths


def measure_array(arr: np.ndarray) -> Metrics:
    labels, sizes = kernels.label4(arr)
    dist = kernels.distance(arr)
    _, hole_sizes, owners = kernels.holes8(arr, labels)
    counts, lengths = kernels.level_stats(dist)
    n = len(sizes)
    comp_max = [-1] * n
    per = [0] * n
    if n:
        flat_l = labels.ravel()
        sel = flat_l >= 0
        best = np.full(n, -1, np.int64)
        np.maximum.at(best, flat_l[sel], dist.ravel()[sel])
        comp_max = best.tolist()
        for o in owners.tolist():
            per[o] += 1
    top = int(dist.max(initial=-1))
    return Metrics(
        width=arr.shape[1],
        height=arr.shape[0],
        area=int(np.count_nonzero(arr)),
        boundary_length=int(lengths[0]),
        component_sizes=tuple(int(s) for s in sizes),
        component_max_distance=tuple(int(v) for v in comp_max),
        hole_count=len(hole_sizes),
        holes_per_component=tuple(per),
        max_ball_radius=None if top < 0 else top,
        level_counts=tuple(int(v) for v in counts),
        iboundary_lengths=tuple(int(v) for v in lengths[1 : top + 1]),
    )


def measure(image: BinaryImage) -> Metrics:
    return measure_array(image.array)


def _metrics(obj) -> Metrics:
    return obj if isinstance(obj, Metrics) else measure(obj)


@dataclass(frozen=True)
class BoundEntry:
    """One bound evaluated on one image.

    ``satisfied`` is ``None`` when the bound is not applicable.  An
    ``informational`` entry is applicable but its theorem only holds for
    parameters beyond thresholds the image does not reach, so a failure is
    not a counterexample.
    """

    id: str
    applicable: bool
    bound: object
    actual: int | None
    satisfied: bool | None
    relation: str
    note: str = ""
    exact: str = ""
    informational: bool = False

    @property
    def violated(self) -> bool:
        return self.applicable and self.satisfied is False and not self.informational

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "applicable": self.applicable,
            "bound": json_number(self.bound),
            "actual": self.actual,
            "relation": self.relation,
            "satisfied": self.satisfied,
            "informational": self.informational,
            "exact": self.exact,
            "note": self.note,
        }


def json_number(x):
    if x is None or isinstance(x, bool):
        return x
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction) and x.denominator == 1:
        return int(x.numerator)
    if isinstance(x, Fraction):
        return f"{float(x):.12g}"
    return f"{float(x):.12g}"


def _cmp(actual, bound, relation) -> bool:
    if relation == GE:
        return actual >= bound
    if relation == GT:
        return actual > bound
    if relation == LE:
        return actual <= bound
    return actual < bound


def _inapplicable(id_, bound, actual, relation, note, exact="") -> BoundEntry:
    return BoundEntry(id_, False, bound, actual, None, relation, note, exact)


# ---------------------------------------------------------------------------
# individual checks
# ---------------------------------------------------------------------------


def lemma2_check(image) -> BoundEntry:
    """Boundary length at least 4*sqrt(N), decided as l^2 >= 16 N."""
    m = _metrics(image)
    n, l = m.area, m.boundary_length
    root = math.isqrt(n)
    bound = 4 * root if root * root == n else 4 * math.sqrt(n)
    ok = l * l >= 16 * n
    return BoundEntry("lemma2", True, bound, l, ok, GE, exact=f"l^2={l * l} >= 16N={16 * n}")


def theorem1_thresholds(m: int, c: int) -> tuple[bool, bool]:
    """The two "m large enough" conditions from the proof, exactly.

    1. m > (3c^2 + 2 - 2c sqrt(c^2+1)) / (2 sqrt(c^2+1) - 2c), rearranged to
       4 (c^2+1) (m+c)^2 > (3c^2 + 2 + 2mc)^2 (both sides positive);
    2. m^2 / c^2 > m + c.
    """
    first = 4 * (c * c + 1) * (m + c) ** 2 > (3 * c * c + 2 + 2 * m * c) ** 2
    second = m * m > c * c * (m + c)
    return first, second


def theorem1_threshold_value(c: int) -> float:
    s = math.sqrt(c * c + 1)
    return (3 * c * c + 2 - 2 * c * s) / (2 * s - 2 * c)


def theorem1_check(image, m: int, c: int) -> BoundEntry:
    if m <= 0 or c <= 0:
        raise ValueError("theorem 1 needs positive integers m and c")
    mt = _metrics(image)
    bound, actual = m * m - c * c, mt.largest_component
    exact = f"t={actual} >= m^2-c^2={bound}"
    misses = []
    if mt.area != m * m:
        misses.append(f"N={mt.area} != m^2={m * m}")
    if mt.boundary_length != 4 * m + 4 * c:
        misses.append(f"l={mt.boundary_length} != 4m+4c={4 * m + 4 * c}")
    if misses:
        return _inapplicable("theorem1", bound, actual, GE, "hypotheses not met: " + "; ".join(misses), exact)
    first, second = theorem1_thresholds(m, c)
    if not (first and second):
        parts = []
        if not first:
            parts.append(f"m={m} <= {theorem1_threshold_value(c):.4f}")
        if not second:
            parts.append(f"m^2/c^2={Fraction(m * m, c * c)} <= m+c={m + c}")
        note = "informational: proof thresholds not met (" + "; ".join(parts) + ")"
        if actual == bound:
            note += "; sharp (t equals the bound)"
        elif actual > bound:
            note += "; bound holds"
        return _inapplicable("theorem1", bound, actual, GE, note, exact)
    ok = actual >= bound
    note = "sharp" if actual == bound else ""
    return BoundEntry("theorem1", True, bound, actual, ok, GE, note, exact)


def theorem2_check(image, m: int, c: int) -> BoundEntry:
    mt = _metrics(image)
    actual = mt.largest_component
    bound = Fraction(m * m, c * c) if c > 0 else None
    exact = f"t*c^2={actual * c * c} >= m^2={m * m}"
    misses = []
    if m <= 0 or c <= 0:
        misses.append("m and c must be positive")
    else:
        if m % c:
            misses.append(f"c={c} does not divide m={m}")
        if m < c * (c + 1):
            misses.append(f"m={m} < c(c+1)={c * (c + 1)}")
        if mt.area != m * m:
            misses.append(f"N={mt.area} != m^2={m * m}")
        if mt.boundary_length != 4 * m * c:
            misses.append(f"l={mt.boundary_length} != 4mc={4 * m * c}")
    if misses:
        return _inapplicable("theorem2", bound, actual, GE, "hypotheses not met: " + "; ".join(misses), exact)
    ok = actual * c * c >= m * m
    return BoundEntry("theorem2", True, bound, actual, ok, GE, "sharp" if actual * c * c == m * m else "", exact)


def _as_fraction(x) -> Fraction:
    if isinstance(x, (Rational, Fraction)):
        return Fraction(x)
    return Fraction(str(x))


def theorem3_conditions(n: int, c_squared: Fraction) -> dict[str, bool]:
    """Proof-internal "N large compared to c" conditions, recorded separately.

    With q^2 = N / c^2 and c^2 + delta the least integer above c^2:
    ``q>=2``; ``delta``: delta q^2 > 2 (c^2 + delta); and, depending on
    whether c^2 is an integer, the last case of the proof:
    ``v=c^2``: q (2c^3 - 2c^2) >= 2c^4 + c^2 - 2c + 1, or
    ``c^2-1<v<c^2``: (sqrt(c^2-v) - (c^2-v)) q >= 2v with v = floor(c^2).
    The last two involve square roots and are evaluated in floating point.
    """
    q2 = Fraction(n) / c_squared
    delta = math.floor(c_squared) + 1 - c_squared
    conds = {
        "q>=2": q2 >= 4,
        "delta": delta * q2 > 2 * (c_squared + delta),
    }
    q = math.sqrt(q2)
    c = math.sqrt(c_squared)
    if c_squared.denominator == 1:
        conds["v=c^2"] = q * (2 * c**3 - 2 * c**2) >= 2 * c**4 + c**2 - 2 * c + 1
    else:
        v = math.floor(c_squared)
        gap = float(c_squared - v)
        conds["c^2-1<v<c^2"] = (math.sqrt(gap) - gap) * q >= 2 * v
    return conds


def theorem3_check(image, c=None, *, c_squared=None) -> BoundEntry:
    """Largest component exceeds N/c^2 - 1 when l <= 4 c sqrt(N), c > 1."""
    if (c is None) == (c_squared is None):
        raise ValueError("give exactly one of c or c_squared")
    c2 = _as_fraction(c) ** 2 if c is not None else _as_fraction(c_squared)
    if c is not None and _as_fraction(c) <= 1 or c2 <= 1:
        raise ValueError("theorem 3 needs c > 1")
    mt = _metrics(image)
    n, l, t = mt.area, mt.boundary_length, mt.largest_component
    bound = Fraction(n) / c2 - 1
    exact = f"t={t} > N/c^2-1={bound}"
    if n < 1:
        return _inapplicable("theorem3", bound, t, GT, "hypotheses not met: N=0", exact)
    if l * l > 16 * c2 * n:
        return _inapplicable("theorem3", bound, t, GT, f"hypotheses not met: l^2={l * l} > 16c^2N={16 * c2 * n}", exact)
    conds = theorem3_conditions(n, c2)
    ok = t > bound
    listed = ", ".join(f"{k}={'yes' if v else 'no'}" for k, v in conds.items())
    if all(conds.values()):
        return BoundEntry("theorem3", True, bound, t, ok, GT, f"proof thresholds met ({listed})", exact)
    return BoundEntry(
        "theorem3", True, bound, t, ok, GT, f"informational: N may be too small for c ({listed})", exact, informational=True
    )


def theorem4_radius(n: int, l: int) -> int:
    """ceil(sqrt(N/l) - 1) for N, l >= 1, computed in integers."""
    s = math.isqrt(n // l)
    while s * s * l < n:
        s += 1
    while s > 0 and (s - 1) * (s - 1) * l >= n:
        s -= 1
    return s - 1


def theorem4_check(image) -> BoundEntry:
    mt = _metrics(image)
    n, l, k = mt.area, mt.boundary_length, mt.max_ball_radius
    if n < 1:
        return _inapplicable("theorem4", None, k, GE, "no ones")
    bound = theorem4_radius(n, l)
    return BoundEntry("theorem4", True, bound, k, k >= bound, GE, exact=f"(k+1)^2*l >= N with k={bound}")


def theorem5_check(image) -> BoundEntry:
    mt = _metrics(image)
    n, l, k = mt.area, mt.boundary_length, mt.max_ball_radius
    if n < 1:
        return _inapplicable("theorem5", None, k, GE, "no ones")
    bound = n // l
    if not mt.hole_free:
        return _inapplicable("theorem5", bound, k, GE, f"image has {mt.hole_count} hole(s)")
    return BoundEntry("theorem5", True, bound, k, k >= bound, GE, exact=f"floor(N/l)=floor({n}/{l})")


def lemma_chain_check(image) -> list[BoundEntry]:
    """i-boundary growth, level counts and (hole-free) the strict count chain."""
    mt = _metrics(image)
    ls = mt.lengths() + (0,)
    a = mt.level_counts
    l0 = mt.boundary_length
    out = [BoundEntry("lemma3", True, 3 * l0, ls[1], ls[1] <= 3 * l0, LE, exact=f"l_1={ls[1]} <= 3*l_0={3 * l0}")]
    for i in range(1, len(ls) - 1):
        lhs, rhs = (2 * i + 1) * ls[i + 1], (2 * i + 3) * ls[i]
        out.append(
            BoundEntry(
                f"lemma4[i={i}]",
                True,
                Fraction(2 * i + 3, 2 * i + 1) * ls[i],
                ls[i + 1],
                lhs <= rhs,
                LE,
                exact=f"(2i+1)*l_{i + 1}={lhs} <= (2i+3)*l_{i}={rhs}",
            )
        )
    for i, ai in enumerate(a):
        out.append(BoundEntry(f"lemma5[i={i}]", True, (2 * i + 1) * l0, ai, ai <= (2 * i + 1) * l0, LE))
    if mt.hole_free and mt.area:
        chain = [l0] + list(a)
        for i, ai in enumerate(a):
            prev = chain[i]
            label = "l_0" if i == 0 else f"A_{i - 1}"
            out.append(BoundEntry(f"chain[i={i}]", True, prev, ai, ai < prev, LT, exact=f"A_{i}={ai} < {label}={prev}"))
    return out


@dataclass(frozen=True)
class BoundReport:
    metrics: Metrics
    entries: tuple[BoundEntry, ...] = field(default_factory=tuple)

    @property
    def violations(self) -> tuple[BoundEntry, ...]:
        return tuple(e for e in self.entries if e.violated)

    @property
    def all_satisfied(self) -> bool:
        return not self.violations

    def entry(self, id_: str) -> BoundEntry:
        for e in self.entries:
            if e.id == id_:
                return e
        raise KeyError(id_)


def infer_hints(mt: Metrics) -> dict:
    """Best-effort (m, c) guesses for theorems 1 and 2 from N and l."""
    n, l = mt.area, mt.boundary_length
    m = math.isqrt(n)
    out = {}
    if n and m * m == n and l % 4 == 0:
        c1 = l // 4 - m
        if c1 > 0:
            out["theorem1"] = (m, c1)
        if l % (4 * m) == 0 and l // (4 * m) > 0:
            out["theorem2"] = (m, l // (4 * m))
    return out


def full_report(image, hints: tuple[int, int] | None = None) -> BoundReport:
    mt = _metrics(image)
    entries = [lemma2_check(mt)]
    guessed = infer_hints(mt)
    for name, fn in (("theorem1", theorem1_check), ("theorem2", theorem2_check)):
        if hints is not None:
            e = fn(mt, *hints)
            entries.append(e)
        elif name in guessed:
            e = fn(mt, *guessed[name])
            m, c = guessed[name]
            entries.append(_with_note(e, f"inferred m={m}, c={c}"))
    if hints is not None and hints[1] > 1:
        entries.append(theorem3_check(mt, hints[1]))
    elif mt.area:
        c2 = Fraction(mt.boundary_length**2, 16 * mt.area)
        if c2 > 1:
            entries.append(_with_note(theorem3_check(mt, c_squared=c2), f"inferred c^2=l^2/16N={c2}"))
    entries.append(theorem4_check(mt))
    entries.append(theorem5_check(mt))
    entries.extend(lemma_chain_check(mt))
    return BoundReport(mt, tuple(entries))


def _with_note(e: BoundEntry, extra: str) -> BoundEntry:
    note = f"{e.note}; {extra}" if e.note else extra
    return BoundEntry(e.id, e.applicable, e.bound, e.actual, e.satisfied, e.relation, note, e.exact, e.informational)
