"""Binary image value type and PBM P1 / ascii-grid text I/O."""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from . import kernels

PBM = "pbm"
ASCII = "ascii"
_FORMAT_ALIASES = {
    "pbm": PBM,
    "pbm-p1": PBM,
    "p1": PBM,
    "ascii": ASCII,
    "ascii-grid": ASCII,
    "txt": ASCII,
}


class ParseError(ValueError):
    """Malformed image text; carries the 1-based line/column of the problem."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class CellIndex(NamedTuple):
    row: int
    col: int


class EdgeId(NamedTuple):
    """A unit grid edge.

    ``V(r, c)`` separates cell ``(r, c-1)`` from ``(r, c)``;
    ``H(r, c)`` separates cell ``(r-1, c)`` from ``(r, c)``.
    """

    orientation: str  # "H" or "V"
    row: int
    col: int

    def cells(self) -> tuple[CellIndex, CellIndex]:
        """The two cells sharing this edge (either may lie outside the image)."""
        if self.orientation == "H":
            return CellIndex(self.row - 1, self.col), CellIndex(self.row, self.col)
        return CellIndex(self.row, self.col - 1), CellIndex(self.row, self.col)

    def vertices(self) -> tuple[tuple[int, int], tuple[int, int]]:
        if self.orientation == "H":
            return (self.row, self.col), (self.row, self.col + 1)
        return (self.row, self.col), (self.row + 1, self.col)


def H(row: int, col: int) -> EdgeId:
    return EdgeId("H", row, col)


def V(row: int, col: int) -> EdgeId:
    return EdgeId("V", row, col)


class BinaryImage:
    """Immutable rectangle of 0/1 cells stored row-major.

    Lookups outside the rectangle return 0, so the exterior behaves as a
    sea of zeroes.
    """

    __slots__ = ("_cells", "_hash")

    def __init__(self, cells):
        arr = np.array(cells, dtype=np.uint8, copy=True)
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError(f"image must be a non-empty 2-D grid, got shape {arr.shape}")
        if arr.size and arr.max() > 1:
            raise ValueError("cell values must be 0 or 1")
        arr.setflags(write=False)
        self._cells = arr
        self._hash = None

    @classmethod
    def zeros(cls, height: int, width: int) -> "BinaryImage":
        return cls(np.zeros((height, width), np.uint8))

    @classmethod
    def from_code(cls, code: int, width: int, height: int) -> "BinaryImage":
        """Image whose cell ``j`` (row-major) is bit ``j`` of ``code``."""
        return cls(kernels.decode(code, height, width))

    @classmethod
    def from_cells(cls, width: int, height: int, values) -> "BinaryImage":
        values = list(values)
        if len(values) != width * height:
            raise ValueError(f"expected {width * height} cells, got {len(values)}")
        return cls(np.asarray(values, np.uint8).reshape(height, width))

    @property
    def width(self) -> int:
        return self._cells.shape[1]

    @property
    def height(self) -> int:
        return self._cells.shape[0]

    @property
    def shape(self) -> tuple[int, int]:
        return self._cells.shape

    @property
    def array(self) -> np.ndarray:
        """Read-only ``uint8`` view, shape ``(height, width)``."""
        return self._cells

    @property
    def cells(self) -> tuple[int, ...]:
        return tuple(int(v) for v in self._cells.ravel())

    @property
    def code(self) -> int:
        bits = self._cells.ravel()
        return sum(1 << j for j in np.flatnonzero(bits).tolist())

    def value(self, row: int, col: int) -> int:
        if 0 <= row < self.height and 0 <= col < self.width:
            return int(self._cells[row, col])
        return 0

    def __getitem__(self, idx) -> int:
        return self.value(*idx)

    def __eq__(self, other) -> bool:
        if not isinstance(other, BinaryImage):
            return NotImplemented
        return self.shape == other.shape and np.array_equal(self._cells, other._cells)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.shape, self._cells.tobytes()))
        return self._hash

    def __repr__(self) -> str:
        return f"BinaryImage({self.width}x{self.height}, area={area(self)})"

    def __str__(self) -> str:
        return emit_image(self, ASCII)


def area(image: BinaryImage) -> int:
    """Number of ones."""
    return int(np.count_nonzero(image.array))


def normalize_format(fmt: str) -> str:
    try:
        return _FORMAT_ALIASES[fmt.lower()]
    except KeyError:
        raise ValueError(f"unknown image format {fmt!r}") from None


def sniff_format(text: str) -> str:
    return PBM if text.lstrip().startswith("P1") else ASCII


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------


def _pbm_tokens(text: str):
    """Yield (token, line, col); raster digits are yielded one at a time."""
    line, col = 1, 1
    i, n = 0, len(text)
    header = 0  # tokens seen so far: magic, width, height
    while i < n:
        ch = text[i]
        if ch == "\n":
            line, col = line + 1, 1
            i += 1
            continue
        if ch.isspace():
            i += 1
            col += 1
            continue
        if ch == "#" and header >= 1:
            while i < n and text[i] != "\n":
                i += 1
            continue
        start_line, start_col = line, col
        if header < 3:
            j = i
            while j < n and not text[j].isspace() and text[j] != "#":
                j += 1
            tok = text[i:j]
            col += j - i
            i = j
            header += 1
            yield tok, start_line, start_col
        else:
            i += 1
            col += 1
            yield ch, start_line, start_col


def _parse_pbm(text: str) -> BinaryImage:
    tokens = _pbm_tokens(text)
    try:
        magic, line, col = next(tokens)
    except StopIteration:
        raise ParseError("empty input", 1, 1) from None
    if magic != "P1":
        raise ParseError(f"expected magic 'P1', found {magic!r}", line, col)
    dims = []
    for name in ("width", "height"):
        try:
            tok, line, col = next(tokens)
        except StopIteration:
            raise ParseError(f"missing {name}", line, col) from None
        if not tok.isdigit():
            raise ParseError(f"{name} must be a non-negative integer, found {tok!r}", line, col)
        dims.append(int(tok))
    width, height = dims
    if width == 0 or height == 0:
        raise ParseError(f"empty grid ({width}x{height})", line, col)
    values = []
    for tok, line, col in tokens:
        if tok not in "01":
            raise ParseError(f"illegal character {tok!r} in raster", line, col)
        if len(values) == width * height:
            raise ParseError(f"more than {width}*{height} raster values", line, col)
        values.append(1 if tok == "1" else 0)
    if len(values) != width * height:
        raise ParseError(
            f"dimension mismatch: expected {width * height} raster values, found {len(values)}",
            line,
            col,
        )
    return BinaryImage.from_cells(width, height, values)


_ASCII_ALPHABETS = ({".": 0, "#": 1}, {"0": 0, "1": 1})


def _parse_ascii(text: str) -> BinaryImage:
    lines = text.split("\n")
    lines = [ln[:-1] if ln.endswith("\r") else ln for ln in lines]
    while lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise ParseError("empty grid", 1, 1)
    alphabet = None
    width = len(lines[0])
    rows = []
    for ln, row in enumerate(lines, start=1):
        if not row:
            raise ParseError("empty row", ln, 1)
        if len(row) != width:
            raise ParseError(f"dimension mismatch: row has {len(row)} cells, expected {width}", ln, min(len(row), width) + 1)
        out = []
        for cn, ch in enumerate(row, start=1):
            if alphabet is None:
                alphabet = next((a for a in _ASCII_ALPHABETS if ch in a), None)
            if alphabet is None or ch not in alphabet:
                raise ParseError(f"illegal character {ch!r}", ln, cn)
            out.append(alphabet[ch])
        rows.append(out)
    return BinaryImage(rows)


def parse_image(text: str, fmt: str = "auto") -> BinaryImage:
    """Parse ``text`` as ``pbm``/``pbm-p1``, ``ascii``/``ascii-grid`` or ``auto``."""
    fmt = sniff_format(text) if fmt == "auto" else normalize_format(fmt)
    return _parse_pbm(text) if fmt == PBM else _parse_ascii(text)


def emit_image(image: BinaryImage, fmt: str = PBM) -> str:
    fmt = normalize_format(fmt)
    rows = image.array.tolist()
    if fmt == PBM:
        body = "".join(" ".join(str(v) for v in row) + "\n" for row in rows)
        return f"P1\n{image.width} {image.height}\n" + body
    return "".join("".join("#" if v else "." for v in row) + "\n" for row in rows)


def read_image(path, fmt: str = "auto") -> BinaryImage:
    with open(path, encoding="ascii") as fh:
        return parse_image(fh.read(), fmt)


def write_image(image: BinaryImage, path, fmt: str = PBM) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(emit_image(image, fmt))
