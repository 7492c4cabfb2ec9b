"""Hot per-image kernels.

Every kernel takes a 2-D ``uint8`` array (1 = one, 0 = zero) or a derived
``int32`` array and returns plain numpy arrays, so the same source runs
compiled under numba or interpreted by CPython.  Set
``BINSHAPE_DISABLE_NUMBA=1`` before import to force the pure numpy/Python
path; the distance transform and the level statistics then use vectorised
numpy formulations instead of the loop versions.

Directed boundary edges are encoded as ``(direction, y, x)`` where ``(y, x)``
is the start vertex on the ``(h+1) x (w+1)`` vertex lattice and direction is
0=E, 1=S, 2=W, 3=N (clockwise on screen, rows growing downward).  Edges are
oriented so the foreground cell lies on the right-hand side of travel.
"""

import os

import numpy as np

DISABLE_ENV = "BINSHAPE_DISABLE_NUMBA"

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

NUMBA_AVAILABLE = numba is not None
NUMBA_ENABLED = NUMBA_AVAILABLE and os.environ.get(DISABLE_ENV, "").strip().lower() not in (
    "1",
    "true",
    "yes",
    "on",
)

STRAIGHT, TYPE_I, TYPE_II = 0, 1, 2


def jit(fn):
    """Compile ``fn`` with numba when enabled, otherwise return it unchanged."""
    if NUMBA_ENABLED:
        return numba.njit(cache=True)(fn)
    return fn


def _compile(fn):
    return numba.njit(cache=True)(fn)


# ---------------------------------------------------------------------------
# loop implementations (numba-compatible)
# ---------------------------------------------------------------------------


def _label4_loop(img):
    h, w = img.shape
    labels = np.full((h, w), -1, np.int32)
    sizes = np.zeros(h * w + 1, np.int64)
    stack = np.empty(h * w, np.int64)
    dr = (-1, 1, 0, 0)
    dc = (0, 0, -1, 1)
    n = 0
    for r0 in range(h):
        for c0 in range(w):
            if img[r0, c0] == 0 or labels[r0, c0] >= 0:
                continue
            labels[r0, c0] = n
            stack[0] = r0 * w + c0
            top = 1
            count = 0
            while top > 0:
                top -= 1
                r = stack[top] // w
                c = stack[top] % w
                count += 1
                for k in range(4):
                    rr = r + dr[k]
                    cc = c + dc[k]
                    if 0 <= rr < h and 0 <= cc < w and img[rr, cc] != 0 and labels[rr, cc] < 0:
                        labels[rr, cc] = n
                        stack[top] = rr * w + cc
                        top += 1
            sizes[n] = count
            n += 1
    return labels, sizes[:n].copy()


def _distance_scan(img):
    # two raster passes give the exact city-block distance to the nearest
    # zero or exterior cell; subtracting one makes boundary ones 0
    h, w = img.shape
    big = h + w + 2
    t = np.empty((h, w), np.int32)
    for r in range(h):
        for c in range(w):
            if img[r, c] == 0:
                t[r, c] = 0
                continue
            up = t[r - 1, c] if r > 0 else 0
            left = t[r, c - 1] if c > 0 else 0
            t[r, c] = min(min(up, left) + 1, big)
    for r in range(h - 1, -1, -1):
        for c in range(w - 1, -1, -1):
            if img[r, c] == 0:
                continue
            down = t[r + 1, c] if r < h - 1 else 0
            right = t[r, c + 1] if c < w - 1 else 0
            v = min(down, right) + 1
            if v < t[r, c]:
                t[r, c] = v
    dist = np.empty((h, w), np.int32)
    for r in range(h):
        for c in range(w):
            dist[r, c] = t[r, c] - 1
    return dist


def _holes8_loop(img, labels):
    # background is 8-connected; zeros reachable from the border are exterior
    h, w = img.shape
    holes = np.full((h, w), -1, np.int32)
    exterior = np.zeros((h, w), np.uint8)
    queue = np.empty(h * w, np.int64)
    tail = 0
    for r in range(h):
        for c in range(w):
            if img[r, c] == 0 and (r == 0 or c == 0 or r == h - 1 or c == w - 1):
                exterior[r, c] = 1
                queue[tail] = r * w + c
                tail += 1
    head = 0
    while head < tail:
        r = queue[head] // w
        c = queue[head] % w
        head += 1
        for rr in range(r - 1, r + 2):
            for cc in range(c - 1, c + 2):
                if 0 <= rr < h and 0 <= cc < w and img[rr, cc] == 0 and exterior[rr, cc] == 0:
                    exterior[rr, cc] = 1
                    queue[tail] = rr * w + cc
                    tail += 1

    sizes = np.zeros(h * w + 1, np.int64)
    owners = np.zeros(h * w + 1, np.int32)
    n = 0
    for r0 in range(h):
        for c0 in range(w):
            if img[r0, c0] != 0 or exterior[r0, c0] == 1 or holes[r0, c0] >= 0:
                continue
            # first cell in row-major order: the cell above it is a one of the
            # enclosing component (it cannot be a zero of this region or the border)
            owners[n] = labels[r0 - 1, c0]
            holes[r0, c0] = n
            queue[0] = r0 * w + c0
            top = 1
            count = 0
            while top > 0:
                top -= 1
                r = queue[top] // w
                c = queue[top] % w
                count += 1
                for rr in range(r - 1, r + 2):
                    for cc in range(c - 1, c + 2):
                        if img[rr, cc] == 0 and holes[rr, cc] < 0:
                            holes[rr, cc] = n
                            queue[top] = rr * w + cc
                            top += 1
            sizes[n] = count
            n += 1
    return holes, sizes[:n].copy(), owners[:n].copy()


def _level_stats_loop(dist):
    """Level counts A_i and edge lengths (l_0, l_1, ..., l_max, 0) from a field."""
    h, w = dist.shape
    top = -1
    for r in range(h):
        for c in range(w):
            if dist[r, c] > top:
                top = dist[r, c]
    counts = np.zeros(top + 1, np.int64)
    lengths = np.zeros(top + 2, np.int64)
    for r in range(h):
        for c in range(w):
            d = dist[r, c]
            if d < 0:
                continue
            counts[d] += 1
            # exterior and zero cells both read as -1
            up = dist[r - 1, c] if r > 0 else -1
            down = dist[r + 1, c] if r < h - 1 else -1
            left = dist[r, c - 1] if c > 0 else -1
            right = dist[r, c + 1] if c < w - 1 else -1
            lengths[0] += int(up < 0) + int(down < 0) + int(left < 0) + int(right < 0)
            if right >= 0 and right != d:
                lengths[max(right, d)] += 1
            if down >= 0 and down != d:
                lengths[max(down, d)] += 1
    return counts, lengths


def _trace_paths_loop(mask):
    """Decompose the boundary of ``mask`` into simple closed cycles.

    At every vertex the incoming edge is paired with the first available
    outgoing edge in the order right turn, straight, left turn.  Right turns
    keep the same foreground cell on the right, so at a vertex touched by two
    diagonal foreground cells the cycle never passes between them.  When one
    cycle passes such a pinch vertex twice (a component touching itself
    diagonally) the pairing there is switched to left turns, which splits
    the cycle in two.  Pinch vertices are examined in row-major order;
    splitting never merges cycles, so one pass suffices.

    Returns ``(offsets, dirs, ys, xs, stats)``; path ``p`` owns edges
    ``offsets[p]:offsets[p+1]`` and ``stats[p] = (L, straight, type I,
    type II, ones inside)``.
    """
    h, w = mask.shape
    pad = np.zeros((h + 2, w + 2), np.uint8)
    for r in range(h):
        for c in range(w):
            if mask[r, c] != 0:
                pad[r + 1, c + 1] = 1
    # outs[k, y, x]: directed edge k leaves vertex (y, x); cells around the
    # vertex are nw=pad[y, x], ne=pad[y, x+1], sw=pad[y+1, x], se=pad[y+1, x+1]
    outs = np.zeros((4, h + 1, w + 1), np.uint8)
    pinch = np.zeros((h + 1, w + 1), np.uint8)
    for y in range(h + 1):
        for x in range(w + 1):
            nw = pad[y, x]
            ne = pad[y, x + 1]
            sw = pad[y + 1, x]
            se = pad[y + 1, x + 1]
            outs[0, y, x] = se & (1 - ne)
            outs[1, y, x] = sw & (1 - se)
            outs[2, y, x] = nw & (1 - sw)
            outs[3, y, x] = ne & (1 - nw)
            if nw == se and ne == sw and nw != ne:
                pinch[y, x] = 1
    dy = (0, 1, 0, -1)
    dx = (1, 0, -1, 0)
    flip = np.zeros((h + 1, w + 1), np.uint8)

    # label edges with cycle ids under the plain rule, then split
    cid = np.full((4, h + 1, w + 1), -1, np.int64)
    ncycles = 0
    n_pinch = 0
    for y in range(h + 1):
        for x in range(w + 1):
            if pinch[y, x] != 0:
                n_pinch += 1
    if n_pinch:
        for y0 in range(h + 1):
            for x0 in range(w + 1):
                for k0 in range(4):
                    if cid[k0, y0, x0] >= 0 or outs[k0, y0, x0] == 0:
                        continue
                    cy, cx, ck = y0, x0, k0
                    while True:
                        cid[ck, cy, cx] = ncycles
                        ny = cy + dy[ck]
                        nx = cx + dx[ck]
                        nk = (ck + 1) % 4
                        if outs[nk, ny, nx] == 0:
                            nk = ck
                            if outs[nk, ny, nx] == 0:
                                nk = (ck + 3) % 4
                        if ny == y0 and nx == x0 and nk == k0:
                            break
                        cy, cx, ck = ny, nx, nk
                    ncycles += 1
        for y in range(h + 1):
            for x in range(w + 1):
                if pinch[y, x] == 0:
                    continue
                # the two edges arriving at (y, x)
                seen = -1
                same = False
                for k in range(4):
                    py = y - dy[k]
                    px = x - dx[k]
                    if 0 <= py <= h and 0 <= px <= w and outs[k, py, px] != 0:
                        if seen < 0:
                            seen = cid[k, py, px]
                        else:
                            same = cid[k, py, px] == seen
                if not same:
                    continue
                flip[y, x] = 1
                # relabel the piece that leaves (y, x) along its first outgoing edge
                k0 = 0
                while outs[k0, y, x] == 0:
                    k0 += 1
                cy, cx, ck = y, x, k0
                while True:
                    cid[ck, cy, cx] = ncycles
                    ny = cy + dy[ck]
                    nx = cx + dx[ck]
                    if pinch[ny, nx] != 0 and flip[ny, nx] != 0:
                        nk = (ck + 3) % 4
                    else:
                        nk = (ck + 1) % 4
                        if outs[nk, ny, nx] == 0:
                            nk = ck
                            if outs[nk, ny, nx] == 0:
                                nk = (ck + 3) % 4
                    if ny == y and nx == x and nk == k0:
                        break
                    cy, cx, ck = ny, nx, nk
                ncycles += 1

    cap = 4 * h * w
    used = np.zeros((4, h + 1, w + 1), np.uint8)
    dirs = np.empty(cap, np.int8)
    ys = np.empty(cap, np.int32)
    xs = np.empty(cap, np.int32)
    offsets = np.zeros(cap // 4 + 2, np.int64)
    stats = np.zeros((cap // 4 + 1, 5), np.int64)
    ne = 0
    npaths = 0
    for y0 in range(h + 1):
        for x0 in range(w + 1):
            for k0 in range(4):
                if used[k0, y0, x0] != 0 or outs[k0, y0, x0] == 0:
                    continue
                first = ne
                cy, cx, ck = y0, x0, k0
                while True:
                    used[ck, cy, cx] = 1
                    dirs[ne] = ck
                    ys[ne] = cy
                    xs[ne] = cx
                    ne += 1
                    ny = cy + dy[ck]
                    nx = cx + dx[ck]
                    if pinch[ny, nx] != 0 and flip[ny, nx] != 0:
                        nk = (ck + 3) % 4
                    else:
                        nk = (ck + 1) % 4
                        if outs[nk, ny, nx] == 0:
                            nk = ck
                            if outs[nk, ny, nx] == 0:
                                nk = (ck + 3) % 4
                                if outs[nk, ny, nx] == 0:
                                    raise ValueError("open boundary path")
                    turn = (nk - ck) % 4
                    if turn == 0:
                        stats[npaths, 1] += 1
                    elif turn == 3:
                        stats[npaths, 2] += 1
                    else:
                        stats[npaths, 3] += 1
                    if ny == y0 and nx == x0 and nk == k0:
                        break
                    cy, cx, ck = ny, nx, nk
                stats[npaths, 0] = ne - first
                # ray cast leftwards from the foreground cell right of the first edge
                if k0 == 0:
                    fr, fc = y0, x0
                elif k0 == 1:
                    fr, fc = y0, x0 - 1
                elif k0 == 2:
                    fr, fc = y0 - 1, x0 - 1
                else:
                    fr, fc = y0 - 1, x0
                crossings = 0
                for e in range(first, ne):
                    if dirs[e] == 1:
                        row = ys[e]
                    elif dirs[e] == 3:
                        row = ys[e] - 1
                    else:
                        continue
                    if row == fr and xs[e] <= fc:
                        crossings += 1
                stats[npaths, 4] = crossings % 2
                npaths += 1
                offsets[npaths] = ne
    return offsets[: npaths + 1].copy(), dirs[:ne].copy(), ys[:ne].copy(), xs[:ne].copy(), stats[:npaths].copy()


def _decode_loop(code, h, w):
    img = np.zeros((h, w), np.uint8)
    for j in range(h * w):
        if (code >> j) & 1:
            img[j // w, j % w] = 1
    return img


# ---------------------------------------------------------------------------
# vectorised numpy formulations used by the fallback path
# ---------------------------------------------------------------------------


def _distance_numpy(img):
    # d(c) >= k  iff  c survives k plus-shaped erosions with a zero exterior
    alive = img.astype(bool)
    dist = np.where(alive, 0, -1).astype(np.int32)
    while True:
        p = np.pad(alive, 1)
        alive = alive & p[:-2, 1:-1] & p[2:, 1:-1] & p[1:-1, :-2] & p[1:-1, 2:]
        if not alive.any():
            return dist
        dist += alive


def _level_stats_numpy(dist):
    top = int(dist.max(initial=-1))
    ones = dist >= 0
    counts = np.bincount(dist[ones], minlength=top + 1).astype(np.int64)
    lengths = np.zeros(top + 2, np.int64)
    p = np.pad(dist, 1, constant_values=-1)
    for nb in (p[:-2, 1:-1], p[2:, 1:-1], p[1:-1, :-2], p[1:-1, 2:]):
        lengths[0] += int(np.count_nonzero(ones & (nb < 0)))
    for a, b in ((dist[:, :-1], dist[:, 1:]), (dist[:-1, :], dist[1:, :])):
        sel = (a >= 0) & (b >= 0) & (a != b)
        hi = np.maximum(a[sel], b[sel])
        lengths += np.bincount(hi, minlength=top + 2)[: top + 2]
    return counts, lengths


def _decode_numpy(code, h, w):
    bits = (np.uint64(code) >> np.arange(h * w, dtype=np.uint64)) & np.uint64(1)
    return bits.astype(np.uint8).reshape(h, w)


# ---------------------------------------------------------------------------
# backend selection
# ---------------------------------------------------------------------------

_LOOPS = {
    "label4": _label4_loop,
    "distance": _distance_scan,
    "holes8": _holes8_loop,
    "level_stats": _level_stats_loop,
    "trace_paths": _trace_paths_loop,
    "decode": _decode_loop,
}

_NUMPY = {
    "label4": _label4_loop,
    "distance": _distance_numpy,
    "holes8": _holes8_loop,
    "level_stats": _level_stats_numpy,
    "trace_paths": _trace_paths_loop,
    "decode": _decode_numpy,
}

_numba_cache = {}


def numba_backend():
    """Compiled kernels keyed by name; raises if numba is missing."""
    if not NUMBA_AVAILABLE:
        raise RuntimeError("numba is not installed")
    if not _numba_cache:
        for name, fn in _LOOPS.items():
            _numba_cache[name] = _compile(fn)
    return dict(_numba_cache)


def numpy_backend():
    """Uncompiled kernels: vectorised numpy where possible, loops elsewhere."""
    return dict(_NUMPY)


BACKEND = "numba" if NUMBA_ENABLED else "numpy"
_active = numba_backend() if NUMBA_ENABLED else numpy_backend()

label4 = _active["label4"]
distance = _active["distance"]
holes8 = _active["holes8"]
level_stats = _active["level_stats"]
trace_paths = _active["trace_paths"]
decode = _active["decode"]
