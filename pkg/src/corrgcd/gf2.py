"""GF(2) linear algebra and binary linear block code handling.

Matrices are plain numpy uint8 arrays with entries in {0, 1}. Row/column
indices are 0-based inside this package; the index sets exposed on
LinearCode (base_set / comp_set) and the matrix file format are 1-based.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


class CodeError(ValueError):
    """Raised for malformed codes, matrices, or code files."""


def as_bit_matrix(a) -> np.ndarray:
    m = np.asarray(a, dtype=np.uint8)
    if m.ndim != 2 or m.shape[0] < 1 or m.shape[1] < 1:
        raise CodeError("bit matrix must be 2-D and non-empty")
    if not np.all((m == 0) | (m == 1)):
        raise CodeError("bit matrix entries must be 0 or 1")
    return m


def gf2_matmul(a, b) -> np.ndarray:
    """Matrix product over GF(2)."""
    return (np.asarray(a, dtype=np.int64) @ np.asarray(b, dtype=np.int64) % 2).astype(np.uint8)


def gf2_row_reduce(a):
    """Gauss-Jordan elimination, scanning pivot columns left to right.

    Within a column, the pivot is the lowest-index unprocessed row holding
    a 1. No column is ever permuted. Returns (reduced matrix, pivot column
    list, 0-based).
    """
    r = as_bit_matrix(a).copy()
    rows, cols = r.shape
    pivots = []
    row = 0
    for col in range(cols):
        if row == rows:
            break
        hit = None
        for i in range(row, rows):
            if r[i, col]:
                hit = i
                break
        if hit is None:
            continue
        if hit != row:
            r[[hit, row]] = r[[row, hit]]
        for i in range(rows):
            if i != row and r[i, col]:
                r[i] ^= r[row]
        pivots.append(col)
        row += 1
    return r, pivots


def gf2_nullspace(a) -> np.ndarray:
    """Rows form a basis of the right nullspace of a over GF(2)."""
    r, pivots = gf2_row_reduce(a)
    cols = r.shape[1]
    free = [c for c in range(cols) if c not in pivots]
    basis = np.zeros((len(free), cols), dtype=np.uint8)
    for i, f in enumerate(free):
        basis[i, f] = 1
        for j, p in enumerate(pivots):
            basis[i, p] = r[j, f]
    return basis


@dataclass(frozen=True)
class LinearCode:
    """A binary [n, k] linear code in semi-systematic form.

    H restricted to comp_set columns is the identity, so any assignment of
    the base_set positions extends to a unique codeword. base_set and
    comp_set are sorted 1-based index tuples.
    """

    n: int
    k: int
    G: np.ndarray
    H: np.ndarray
    base_set: tuple
    comp_set: tuple
    B_sub: np.ndarray
    # 0-based position arrays, derived
    base_idx: np.ndarray = field(init=False, repr=False)
    comp_idx: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "base_idx", np.array(self.base_set, dtype=np.intp) - 1)
        object.__setattr__(self, "comp_idx", np.array(self.comp_set, dtype=np.intp) - 1)
        self._validate()

    def _validate(self):
        n, k = self.n, self.k
        if self.G.shape != (k, n):
            raise CodeError(f"G must be {k}x{n}, got {self.G.shape}")
        if self.H.shape != (n - k, n):
            raise CodeError(f"H must be {n - k}x{n}, got {self.H.shape}")
        if len(self.base_set) != k or len(self.comp_set) != n - k:
            raise CodeError("base/comp set sizes must be k and n-k")
        if sorted(self.base_set + self.comp_set) != list(range(1, n + 1)):
            raise CodeError("base_set and comp_set must partition 1..n")
        if not np.array_equal(self.H[:, self.comp_idx], np.eye(n - k, dtype=np.uint8)):
            raise CodeError("H restricted to comp_set is not the identity")
        if not np.array_equal(self.B_sub, self.H[:, self.base_idx]):
            raise CodeError("B_sub does not match H on base_set columns")
        if gf2_matmul(self.G, self.H.T).any():
            raise CodeError("G H^T != 0")

    @property
    def rate(self) -> float:
        return self.k / self.n

    def encode(self, msg) -> np.ndarray:
        msg = np.asarray(msg, dtype=np.uint8)
        if msg.shape[-1] != self.k:
            raise CodeError(f"message length {msg.shape[-1]} != k={self.k}")
        return gf2_matmul(msg, self.G)


def semi_systematize(H: np.ndarray):
    """Row-reduce H in place so that H[:, comp_set] is the identity.

    Pivot columns become the complement set, non-pivot columns the base
    set. Returns (base_set, comp_set, B_sub) with 1-based index tuples.
    """
    r, pivots = gf2_row_reduce(H)
    if len(pivots) != H.shape[0]:
        raise CodeError("parity check matrix not full rank")
    H[:] = r
    n = H.shape[1]
    comp = tuple(p + 1 for p in pivots)
    in_comp = set(comp)
    base = tuple(c for c in range(1, n + 1) if c not in in_comp)
    b_sub = H[:, [c - 1 for c in base]].copy()
    return base, comp, b_sub


def make_code_from_H(H) -> LinearCode:
    """Build a LinearCode from a full-rank parity check matrix."""
    H = as_bit_matrix(H).copy()
    base, comp, b_sub = semi_systematize(H)
    n = H.shape[1]
    k = n - H.shape[0]
    # Canonical generator: G[:, base] = I, G[:, comp] = B_sub^T.
    G = np.zeros((k, n), dtype=np.uint8)
    base_idx = [c - 1 for c in base]
    comp_idx = [c - 1 for c in comp]
    G[np.arange(k), base_idx] = 1
    G[:, comp_idx] = b_sub.T
    return LinearCode(n=n, k=k, G=G, H=H, base_set=base, comp_set=comp, B_sub=b_sub)


def extend_base(x_base, code: LinearCode) -> np.ndarray:
    """Extend base-position bits to the unique codeword agreeing with them."""
    x_base = np.asarray(x_base, dtype=np.uint8)
    if x_base.shape != (code.k,):
        raise CodeError(f"base bits length {x_base.shape} != k={code.k}")
    x = np.empty(code.n, dtype=np.uint8)
    x[code.base_idx] = x_base
    x[code.comp_idx] = gf2_matmul(x_base, code.B_sub.T)
    return x


def is_codeword(x, code: LinearCode) -> bool:
    x = np.asarray(x, dtype=np.uint8)
    if x.shape != (code.n,):
        raise CodeError(f"sequence length {x.shape} != n={code.n}")
    return not gf2_matmul(x, code.H.T).any()


def crc_remainder(msg_bits, poly: int, width: int = 16) -> np.ndarray:
    """CRC remainder of msg(x) * x^width modulo the generator polynomial.

    poly encodes the low `width` coefficients; the leading coefficient is
    implicit. MSB-first processing, zero initial register, no reflection.
    """
    gen = np.array([(poly >> (width - 1 - i)) & 1 for i in range(width)], dtype=np.uint8)
    reg = np.concatenate([np.asarray(msg_bits, dtype=np.uint8), np.zeros(width, dtype=np.uint8)])
    for i in range(len(reg) - width):
        if reg[i]:
            reg[i + 1:i + 1 + width] ^= gen
            reg[i] = 0
    return reg[-width:]


def build_crc_code(k: int, poly: int = 0x3D65, width: int = 16) -> LinearCode:
    """Systematic [k+width, k] CRC code: codeword = message || remainder."""
    if k < 1:
        raise CodeError("k must be >= 1")
    n = k + width
    P = np.zeros((k, width), dtype=np.uint8)
    eye = np.eye(k, dtype=np.uint8)
    for i in range(k):
        P[i] = crc_remainder(eye[i], poly, width)
    G = np.hstack([eye, P])
    H = np.hstack([P.T, np.eye(width, dtype=np.uint8)])
    base = tuple(range(1, k + 1))
    comp = tuple(range(k + 1, n + 1))
    return LinearCode(n=n, k=k, G=G, H=H, base_set=base, comp_set=comp, B_sub=H[:, :k].copy())


def _parse_matrix_blocks(text: str, path: str):
    """Parse one or more labelled dense 0/1 matrices from file text."""
    blocks = {}
    lines = [ln.strip() for ln in text.splitlines()]
    i = 0
    while i < len(lines):
        if not lines[i]:
            i += 1
            continue
        label = "H"
        if lines[i].startswith("#"):
            tag = lines[i].lstrip("#").strip().upper()
            if tag in ("G", "H"):
                label = tag
            i += 1
            while i < len(lines) and not lines[i]:
                i += 1
            if i == len(lines):
                raise CodeError(f"{path}: header without matrix body")
        try:
            rows, cols = (int(t) for t in lines[i].split())
        except ValueError:
            raise CodeError(f"{path}: expected 'rows cols' line, got {lines[i]!r}") from None
        i += 1
        mat = np.zeros((rows, cols), dtype=np.uint8)
        for r in range(rows):
            while i < len(lines) and not lines[i]:
                i += 1
            if i == len(lines):
                raise CodeError(f"{path}: matrix truncated at row {r + 1}")
            row = lines[i].split()
            if len(row) != cols:
                raise CodeError(f"{path}: row {r + 1} has {len(row)} entries, expected {cols}")
            try:
                mat[r] = [int(t) for t in row]
            except ValueError:
                raise CodeError(f"{path}: non-integer entry in row {r + 1}") from None
            i += 1
        if mat.max(initial=0) > 1:
            raise CodeError(f"{path}: entries must be 0 or 1")
        if label in blocks:
            raise CodeError(f"{path}: duplicate matrix '{label}'")
        blocks[label] = mat
    if not blocks:
        raise CodeError(f"{path}: no matrix found")
    return blocks


def load_code(path) -> LinearCode:
    """Load a LinearCode from a dense-text matrix file.

    The file holds one or two matrices, each optionally preceded by a
    '# G' or '# H' header (default H), then a 'rows cols' line and one
    line of space-separated bits per row. If only G is given, H is
    derived as a basis of the dual code.
    """
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as e:
        raise CodeError(f"cannot read code file {path}: {e}") from e
    blocks = _parse_matrix_blocks(text, str(path))
    if "H" in blocks:
        code = make_code_from_H(blocks["H"])
        if "G" in blocks:
            G = as_bit_matrix(blocks["G"])
            if G.shape != (code.k, code.n):
                raise CodeError(f"{path}: G dimensions {G.shape} inconsistent with H")
            if gf2_matmul(G, code.H.T).any():
                raise CodeError(f"{path}: G rows are not codewords of H")
        return code
    G = as_bit_matrix(blocks["G"])
    H = gf2_nullspace(G)
    if H.shape[0] != G.shape[1] - G.shape[0]:
        raise CodeError(f"{path}: G is not full rank")
    return make_code_from_H(H)
