"""Extremal and reference images, each paired with closed-form metrics.

Expected values are computed from formulas, never by measuring the image;
the test suite measures and compares.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .grid import BinaryImage

KINDS = ("square", "theorem1", "theorem2", "hole-lattice", "rectangle", "ball")


@dataclass(frozen=True)
class ConstructionSpec:
    kind: str
    parameters: dict = field(default_factory=dict)
    expected: dict = field(default_factory=dict)


def _half(a: int) -> int:
    return (a - 1) // 2


def square_image(m: int) -> BinaryImage:
    if m < 1:
        raise ValueError("square side must be >= 1")
    return BinaryImage(np.ones((m, m), np.uint8))


def theorem1_extremal(m: int, c: int) -> BinaryImage:
    """An (m-c) x (m+c) rectangle and a c x c square, one zero column apart."""
    if not (m > c >= 1):
        raise ValueError("theorem1 construction needs m > c >= 1")
    rows = max(m - c, c)
    img = np.zeros((rows, (m + c) + 1 + c), np.uint8)
    img[: m - c, : m + c] = 1
    img[:c, m + c + 1 :] = 1
    return BinaryImage(img)


def theorem2_extremal(m: int, c: int) -> BinaryImage:
    """c x c grid of (m/c)-sided squares separated by single zero lines."""
    if c < 1 or m < c or m % c:
        raise ValueError("theorem2 construction needs c >= 1 dividing m >= c")
    n = m // c
    side = c * n + (c - 1)
    img = np.zeros((side, side), np.uint8)
    for i in range(c):
        for j in range(c):
            img[i * (n + 1) : i * (n + 1) + n, j * (n + 1) : j * (n + 1) + n] = 1
    return BinaryImage(img)


def hole_lattice(u: int, c: int) -> BinaryImage:
    """Square of side c*u^2 + u - 1 with a zero at every (i, j), u | i, u | j (1-based)."""
    if u < 2 or c < 1:
        raise ValueError("hole lattice needs u >= 2 and c >= 1")
    side = c * u * u + u - 1
    img = np.ones((side, side), np.uint8)
    img[u - 1 :: u, u - 1 :: u] = 0
    return BinaryImage(img)


def rectangle_image(a: int, t: int) -> BinaryImage:
    if a < 1 or t < 1:
        raise ValueError("rectangle needs a >= 1 and t >= 1")
    return BinaryImage(np.ones((a, t * a), np.uint8))


def ball_image(k: int) -> BinaryImage:
    if k < 0:
        raise ValueError("ball radius must be >= 0")
    r, c = np.indices((2 * k + 1, 2 * k + 1))
    return BinaryImage((np.abs(r - k) + np.abs(c - k) <= k).astype(np.uint8))


def _spec(kind, params, *, area, boundary_length, component_sizes, hole_count, max_ball_radius):
    sizes = tuple(sorted(component_sizes, reverse=True))
    return ConstructionSpec(
        kind,
        dict(params),
        {
            "area": area,
            "boundary_length": boundary_length,
            "component_count": len(sizes),
            "component_sizes": sizes,
            "largest_component": sizes[0] if sizes else 0,
            "hole_count": hole_count,
            "max_ball_radius": max_ball_radius,
        },
    )


def expected_metrics(kind: str, **p) -> ConstructionSpec:
    """Closed-form metrics for a construction (validates parameters too)."""
    if kind == "square":
        m = p["m"]
        if m < 1:
            raise ValueError("square side must be >= 1")
        return _spec(kind, p, area=m * m, boundary_length=4 * m, component_sizes=[m * m], hole_count=0, max_ball_radius=_half(m))
    if kind == "theorem1":
        m, c = p["m"], p["c"]
        if not (m > c >= 1):
            raise ValueError("theorem1 construction needs m > c >= 1")
        return _spec(
            kind,
            p,
            area=m * m,
            boundary_length=4 * m + 4 * c,
            component_sizes=[m * m - c * c, c * c],
            hole_count=0,
            max_ball_radius=max(_half(m - c), _half(c)),
        )
    if kind == "theorem2":
        m, c = p["m"], p["c"]
        if c < 1 or m < c or m % c:
            raise ValueError("theorem2 construction needs c >= 1 dividing m >= c")
        n = m // c
        return _spec(
            kind, p, area=m * m, boundary_length=4 * m * c, component_sizes=[n * n] * (c * c), hole_count=0, max_ball_radius=_half(n)
        )
    if kind == "hole-lattice":
        u, c = p["u"], p["c"]
        if u < 2 or c < 1:
            raise ValueError("hole lattice needs u >= 2 and c >= 1")
        n = (c * u * u + u - 1) ** 2 - (c * u) ** 2
        return _spec(
            kind,
            p,
            area=n,
            boundary_length=4 * (c * c + c) * u * u + 4 * u - 4,
            component_sizes=[n],
            hole_count=(c * u) ** 2,
            max_ball_radius=u - 2 if u % 2 else u - 1,
        )
    if kind == "rectangle":
        a, t = p["a"], p["t"]
        if a < 1 or t < 1:
            raise ValueError("rectangle needs a >= 1 and t >= 1")
        return _spec(
            kind, p, area=t * a * a, boundary_length=2 * (t + 1) * a, component_sizes=[t * a * a], hole_count=0, max_ball_radius=_half(a)
        )
    if kind == "ball":
        k = p["k"]
        if k < 0:
            raise ValueError("ball radius must be >= 0")
        # a diamond of radius k has 4(2k+1) boundary edges
        return _spec(
            kind,
            p,
            area=2 * k * k + 2 * k + 1,
            boundary_length=4 * (2 * k + 1),
            component_sizes=[2 * k * k + 2 * k + 1],
            hole_count=0,
            max_ball_radius=k,
        )
    raise ValueError(f"unknown construction {kind!r}; expected one of {', '.join(KINDS)}")


_BUILDERS = {
    "square": lambda p: square_image(p["m"]),
    "theorem1": lambda p: theorem1_extremal(p["m"], p["c"]),
    "theorem2": lambda p: theorem2_extremal(p["m"], p["c"]),
    "hole-lattice": lambda p: hole_lattice(p["u"], p["c"]),
    "rectangle": lambda p: rectangle_image(p["a"], p["t"]),
    "ball": lambda p: ball_image(p["k"]),
}


def build(kind: str, **params) -> tuple[BinaryImage, ConstructionSpec]:
    spec = expected_metrics(kind, **params)
    return _BUILDERS[kind](params), spec
