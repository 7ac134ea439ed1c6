"""Exact dense linear algebra over Q and prime fields F_p.

Every morphism downstream (module maps, differentials, the block matrices of
cones and suspensions) is a Mat.  Arithmetic is exact: rational entries are
reduced Fractions, prime-field entries are least non-negative residues.
Matrices are immutable, operations are pure functions, and every answer with
a choice in it (echelon forms, kernels, particular solutions) is canonical,
so results are reproducible bit for bit.

Matrices act on column vectors from the left; composition of maps is `@`.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Optional, Sequence

import numpy as np

RATIONALS = "rationals"
PRIME_FIELD = "prime-field"


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


class FieldSpec:
    """An exact scalar field: the rationals, or F_p for a prime p."""

    __slots__ = ("kind", "p")

    def __init__(self, kind: str, p: Optional[int] = None):
        if kind not in (RATIONALS, PRIME_FIELD):
            raise ValueError(f"unknown field kind {kind!r}")
        if kind == PRIME_FIELD:
            if p is None or not _is_prime(p):
                raise ValueError(f"modulus {p!r} is not prime")
        elif p is not None:
            raise ValueError("rationals take no modulus")
        self.kind = kind
        self.p = p

    def coerce(self, v):
        if self.kind == RATIONALS:
            return v if isinstance(v, Fraction) else Fraction(v)
        return int(v) % self.p

    def zero(self):
        return Fraction(0) if self.kind == RATIONALS else 0

    def one(self):
        return Fraction(1) if self.kind == RATIONALS else 1

    def add(self, a, b):
        return a + b if self.kind == RATIONALS else (a + b) % self.p

    def sub(self, a, b):
        return a - b if self.kind == RATIONALS else (a - b) % self.p

    def mul(self, a, b):
        return a * b if self.kind == RATIONALS else (a * b) % self.p

    def neg(self, a):
        return -a if self.kind == RATIONALS else (-a) % self.p

    def inv(self, a):
        if self.kind == RATIONALS:
            if a == 0:
                raise ZeroDivisionError("inverse of zero")
            return Fraction(1) / a
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, self.p - 2, self.p)

    def __eq__(self, other):
        return (
            isinstance(other, FieldSpec)
            and self.kind == other.kind
            and self.p == other.p
        )

    def __hash__(self):
        return hash((self.kind, self.p))

    def __repr__(self):
        return "QQ" if self.kind == RATIONALS else f"GF({self.p})"


QQ = FieldSpec(RATIONALS)


def GF(p: int) -> FieldSpec:
    return FieldSpec(PRIME_FIELD, p)


class Mat:
    """Immutable dense matrix with row-major entries over a FieldSpec."""

    __slots__ = ("field", "rows", "cols", "entries")

    def __init__(self, field: FieldSpec, rows: int, cols: int, entries: Iterable):
        ent = tuple(field.coerce(v) for v in entries)
        if len(ent) != rows * cols:
            raise ValueError(
                f"expected {rows * cols} entries for {rows}x{cols}, got {len(ent)}"
            )
        self.field = field
        self.rows = rows
        self.cols = cols
        self.entries = ent

    @staticmethod
    def _trusted(field: FieldSpec, rows: int, cols: int, entries: tuple) -> "Mat":
        # internal: entries must already be canonical for the field
        m = object.__new__(Mat)
        m.field = field
        m.rows = rows
        m.cols = cols
        m.entries = entries
        return m

    @staticmethod
    def from_rows(field: FieldSpec, rows: Sequence[Sequence]) -> "Mat":
        r = len(rows)
        c = len(rows[0]) if r else 0
        flat = []
        for row in rows:
            if len(row) != c:
                raise ValueError("ragged rows")
            flat.extend(row)
        return Mat(field, r, c, flat)

    @staticmethod
    def zeros(field: FieldSpec, rows: int, cols: int) -> "Mat":
        z = field.zero()
        return Mat._trusted(field, rows, cols, (z,) * (rows * cols))

    @staticmethod
    def identity(field: FieldSpec, n: int) -> "Mat":
        z, o = field.zero(), field.one()
        ent = [z] * (n * n)
        for i in range(n):
            ent[i * n + i] = o
        return Mat._trusted(field, n, n, tuple(ent))

    def entry(self, i: int, j: int):
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def col(self, j: int) -> tuple:
        return self.entries[j :: self.cols] if self.cols else ()

    def to_rows(self) -> list:
        return [list(self.row(i)) for i in range(self.rows)]

    def is_zero(self) -> bool:
        z = self.field.zero()
        return all(v == z for v in self.entries)

    def transpose(self) -> "Mat":
        ent = []
        for j in range(self.cols):
            for i in range(self.rows):
                ent.append(self.entries[i * self.cols + j])
        return Mat._trusted(self.field, self.cols, self.rows, tuple(ent))

    def scale(self, c) -> "Mat":
        f = self.field
        c = f.coerce(c)
        if f.kind == PRIME_FIELD:
            ent = tuple(v * c % f.p for v in self.entries)
        else:
            ent = tuple(f.mul(c, v) for v in self.entries)
        return Mat._trusted(f, self.rows, self.cols, ent)

    def __add__(self, other: "Mat") -> "Mat":
        _check_same_shape(self, other)
        f = self.field
        if f.kind == PRIME_FIELD:
            p = f.p
            ent = tuple((a + b) % p for a, b in zip(self.entries, other.entries))
        else:
            ent = tuple(f.add(a, b) for a, b in zip(self.entries, other.entries))
        return Mat._trusted(f, self.rows, self.cols, ent)

    def __sub__(self, other: "Mat") -> "Mat":
        _check_same_shape(self, other)
        f = self.field
        if f.kind == PRIME_FIELD:
            p = f.p
            ent = tuple((a - b) % p for a, b in zip(self.entries, other.entries))
        else:
            ent = tuple(f.sub(a, b) for a, b in zip(self.entries, other.entries))
        return Mat._trusted(f, self.rows, self.cols, ent)

    def __neg__(self) -> "Mat":
        f = self.field
        return Mat._trusted(
            f, self.rows, self.cols, tuple(f.neg(v) for v in self.entries)
        )

    def __matmul__(self, other: "Mat") -> "Mat":
        if self.field != other.field:
            raise ValueError("field mismatch")
        if self.cols != other.rows:
            raise ValueError(
                f"cannot compose {self.rows}x{self.cols} with {other.rows}x{other.cols}"
            )
        f = self.field
        if f.kind == PRIME_FIELD:
            prod = (_np(self) @ _np(other)) % f.p
            return _mat_from_np(f, prod)
        # rationals: skip zero entries, which dominate in block matrices
        z = Fraction(0)
        out = [z] * (self.rows * other.cols)
        oc = other.cols
        for i in range(self.rows):
            arow = self.row(i)
            base = i * oc
            for k, a in enumerate(arow):
                if a == 0:
                    continue
                brow = other.entries[k * oc : (k + 1) * oc]
                for j, b in enumerate(brow):
                    if b != 0:
                        out[base + j] += a * b
        return Mat._trusted(f, self.rows, oc, tuple(out))

    def __eq__(self, other):
        return (
            isinstance(other, Mat)
            and self.field == other.field
            and self.rows == other.rows
            and self.cols == other.cols
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash((self.field, self.rows, self.cols, self.entries))

    def __repr__(self):
        return f"Mat({self.field!r}, {self.rows}x{self.cols}, {self.to_rows()})"


def _check_same_shape(a: Mat, b: Mat) -> None:
    if a.field != b.field or a.rows != b.rows or a.cols != b.cols:
        raise ValueError("shape or field mismatch")


def _np(m: Mat) -> np.ndarray:
    return np.array(m.entries, dtype=np.int64).reshape(m.rows, m.cols)


def _mat_from_np(field: FieldSpec, arr: np.ndarray) -> Mat:
    # callers hand over arrays already reduced mod p
    r, c = arr.shape
    return Mat._trusted(field, r, c, tuple(arr.ravel().tolist()))


def hstack(mats: Sequence[Mat]) -> Mat:
    if not mats:
        raise ValueError("hstack of nothing")
    f, r = mats[0].field, mats[0].rows
    if any(m.field != f or m.rows != r for m in mats):
        raise ValueError("hstack: row counts or fields differ")
    total = sum(m.cols for m in mats)
    if f.kind == PRIME_FIELD and r * total > 512:
        return _mat_from_np(f, np.hstack([_np(m) for m in mats]))
    ent = []
    for i in range(r):
        for m in mats:
            ent.extend(m.row(i))
    return Mat._trusted(f, r, total, tuple(ent))


def vstack(mats: Sequence[Mat]) -> Mat:
    if not mats:
        raise ValueError("vstack of nothing")
    f, c = mats[0].field, mats[0].cols
    if any(m.field != f or m.cols != c for m in mats):
        raise ValueError("vstack: column counts or fields differ")
    ent = []
    for m in mats:
        ent.extend(m.entries)
    return Mat._trusted(f, sum(m.rows for m in mats), c, tuple(ent))


def block(
    field: FieldSpec,
    grid: Sequence[Sequence[Optional[Mat]]],
    row_dims: Optional[Sequence[int]] = None,
    col_dims: Optional[Sequence[int]] = None,
) -> Mat:
    """Assemble a block matrix; None blocks are zero, sized from their row/column.

    Row and column dimensions are inferred from the non-None blocks unless
    given explicitly; a fully-None row or column needs the explicit dims.
    """
    nr = len(grid)
    nc = len(grid[0]) if nr else 0
    rdims = list(row_dims) if row_dims is not None else [None] * nr
    cdims = list(col_dims) if col_dims is not None else [None] * nc
    for i in range(nr):
        if len(grid[i]) != nc:
            raise ValueError("ragged block grid")
        for j in range(nc):
            b = grid[i][j]
            if b is None:
                continue
            if rdims[i] is None:
                rdims[i] = b.rows
            elif rdims[i] != b.rows:
                raise ValueError(f"block ({i},{j}) has {b.rows} rows, expected {rdims[i]}")
            if cdims[j] is None:
                cdims[j] = b.cols
            elif cdims[j] != b.cols:
                raise ValueError(f"block ({i},{j}) has {b.cols} cols, expected {cdims[j]}")
    if any(d is None for d in rdims) or any(d is None for d in cdims):
        raise ValueError("block dimensions underdetermined; pass row_dims/col_dims")
    rows = [
        hstack(
            [
                grid[i][j] if grid[i][j] is not None else Mat.zeros(field, rdims[i], cdims[j])
                for j in range(nc)
            ]
        )
        if nc
        else Mat.zeros(field, rdims[i], 0)
        for i in range(nr)
    ]
    if not rows:
        return Mat.zeros(field, 0, sum(d for d in cdims))
    return vstack(rows)


def kron(a: Mat, b: Mat) -> Mat:
    """Kronecker product; row-major vec identity vec(A·F·B) = (A kron B^T)·vec(F)."""
    if a.field != b.field:
        raise ValueError("kron: field mismatch")
    f = a.field
    if f.kind == PRIME_FIELD:
        return _mat_from_np(f, np.kron(_np(a), _np(b)) % f.p)
    ent = []
    for i in range(a.rows):
        for k in range(b.rows):
            for j in range(a.cols):
                av = a.entry(i, j)
                ent.extend(av * bv for bv in b.row(k))
    return Mat._trusted(f, a.rows * b.rows, a.cols * b.cols, tuple(ent))


def _rref_fp(m: Mat) -> tuple[Mat, tuple[int, ...], int]:
    p = m.field.p
    a = _np(m) % p
    rows, cols = a.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        pr = r + int(nz[0])
        if pr != r:
            a[[r, pr]] = a[[pr, r]]
        a[r] = (a[r] * pow(int(a[r, c]), p - 2, p)) % p
        col = a[:, c].copy()
        col[r] = 0
        a = (a - np.outer(col, a[r])) % p
        pivots.append(c)
        r += 1
    return _mat_from_np(m.field, a), tuple(pivots), len(pivots)


def _rref_qq(m: Mat) -> tuple[Mat, tuple[int, ...], int]:
    rows = [list(m.row(i)) for i in range(m.rows)]
    nr, nc = m.rows, m.cols
    pivots = []
    r = 0
    for c in range(nc):
        if r >= nr:
            break
        pr = next((i for i in range(r, nr) if rows[i][c] != 0), None)
        if pr is None:
            continue
        if pr != r:
            rows[r], rows[pr] = rows[pr], rows[r]
        inv = Fraction(1) / rows[r][c]
        rows[r] = [v * inv for v in rows[r]]
        prow = rows[r]
        for i in range(nr):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [v - f * w for v, w in zip(rows[i], prow)]
        pivots.append(c)
        r += 1
    flat = [v for row in rows for v in row]
    return Mat._trusted(m.field, nr, nc, tuple(flat)), tuple(pivots), len(pivots)


def rref(m: Mat) -> tuple[Mat, tuple[int, ...], int]:
    """Unique reduced row-echelon form with ascending pivot columns and rank."""
    if m.field.kind == PRIME_FIELD:
        return _rref_fp(m)
    return _rref_qq(m)


def rank(m: Mat) -> int:
    return rref(m)[2]


def kernel_basis(m: Mat) -> Mat:
    """Canonical kernel basis, one column per free variable of the RREF."""
    red, pivots, rk = rref(m)
    f = m.field
    free = [j for j in range(m.cols) if j not in set(pivots)]
    ent = [f.zero()] * (m.cols * len(free))
    width = len(free)
    for idx, j in enumerate(free):
        ent[j * width + idx] = f.one()
        for row_i, pv in enumerate(pivots):
            ent[pv * width + idx] = f.neg(red.entry(row_i, j))
    return Mat._trusted(f, m.cols, width, tuple(ent))


def solve(m: Mat, b: Mat) -> Optional[Mat]:
    """Canonical solution of m·x = b (free variables zero), or None."""
    if m.rows != b.rows:
        raise ValueError("row count mismatch between system and right-hand side")
    aug = hstack([m, b])
    red, pivots, _ = rref(aug)
    f = m.field
    # a pivot inside the b-columns certifies inconsistency
    if any(pv >= m.cols for pv in pivots):
        return None
    ent = [f.zero()] * (m.cols * b.cols)
    for row_i, pv in enumerate(pivots):
        for j in range(b.cols):
            ent[pv * b.cols + j] = red.entry(row_i, m.cols + j)
    return Mat._trusted(f, m.cols, b.cols, tuple(ent))


def image_basis(m: Mat) -> Mat:
    """Canonical basis of the column space, as columns (RREF of the row space of mᵀ)."""
    red, pivots, rk = rref(m.transpose())
    rows = [list(red.row(i)) for i in range(rk)]
    if not rows:
        return Mat.zeros(m.field, m.rows, 0)
    return Mat.from_rows(m.field, rows).transpose()


def cokernel_projection(m: Mat) -> Mat:
    """Canonical surjection q: F^rows ↠ coker(m) with ker q = im m.

    Coordinates of the cokernel are the non-pivot coordinates of the image's
    reduced basis, so the section "insert zeros at pivots" splits q on the nose.
    """
    red, pivots, rk = rref(m.transpose())
    f = m.field
    n = m.rows
    free = [i for i in range(n) if i not in set(pivots)]
    ent = [f.zero()] * (len(free) * n)
    for out_i, fc in enumerate(free):
        ent[out_i * n + fc] = f.one()
        for row_i, pv in enumerate(pivots):
            ent[out_i * n + pv] = f.neg(red.entry(row_i, fc))
    return Mat._trusted(f, len(free), n, tuple(ent))


def inverse(m: Mat) -> Optional[Mat]:
    if m.rows != m.cols:
        return None
    x = solve(m, Mat.identity(m.field, m.rows))
    if x is None:
        return None
    if m @ x != Mat.identity(m.field, m.rows):
        return None
    return x


class PullbackSquare:
    """Kernel presentation of a pullback: P ↣ A⊕B → C with P = ker(a, −b).

    `to_a` and `to_b` are the two projections P→A, P→B; `inclusion` stacks
    them into the admissible monic P ↣ A⊕B of the defining short exact
    sequence, so callers can read the sequence off directly.
    """

    __slots__ = ("dim", "to_a", "to_b", "inclusion")

    def __init__(self, dim: int, to_a: Mat, to_b: Mat, inclusion: Mat):
        self.dim = dim
        self.to_a = to_a
        self.to_b = to_b
        self.inclusion = inclusion


class PushoutSquare:
    """Cokernel presentation of a pushout: A → B⊕C ↠ Q with Q = coker(a; −c)."""

    __slots__ = ("dim", "from_b", "from_c", "projection")

    def __init__(self, dim: int, from_b: Mat, from_c: Mat, projection: Mat):
        self.dim = dim
        self.from_b = from_b
        self.from_c = from_c
        self.projection = projection


def pullback_square(a: Mat, b: Mat) -> PullbackSquare:
    """Pullback of a: A→C, b: B→C as the kernel of (a, −b): A⊕B → C."""
    if a.field != b.field or a.rows != b.rows:
        raise ValueError("pullback legs must share the target")
    k = kernel_basis(hstack([a, -b]))
    ca = a.cols
    to_a = Mat.from_rows(a.field, k.to_rows()[:ca]) if ca else Mat.zeros(a.field, 0, k.cols)
    to_b = (
        Mat.from_rows(a.field, k.to_rows()[ca:])
        if b.cols
        else Mat.zeros(a.field, 0, k.cols)
    )
    return PullbackSquare(k.cols, to_a, to_b, k)


def pushout_square(a: Mat, c: Mat) -> PushoutSquare:
    """Pushout of a: A→B, c: A→C as the cokernel of (a; −c): A → B⊕C."""
    if a.field != c.field or a.cols != c.cols:
        raise ValueError("pushout legs must share the source")
    q = cokernel_projection(vstack([a, -c]))
    rb = a.rows
    from_b = Mat.from_rows(a.field, [row[:rb] for row in q.to_rows()]) if rb else Mat.zeros(
        a.field, q.rows, 0
    )
    from_c = (
        Mat.from_rows(a.field, [row[rb:] for row in q.to_rows()])
        if c.rows
        else Mat.zeros(a.field, q.rows, 0)
    )
    return PushoutSquare(q.rows, from_b, from_c, q)


def split_idempotent(e: Mat) -> tuple[Mat, Mat, Mat]:
    """Split e = e² on V into (basis of eV, basis of (1−e)V, change of basis).

    The change of basis U = [eV-basis | complement-basis] conjugates e to
    diag(identity, 0): U⁻¹ e U has the image coordinates first.
    """
    if e.rows != e.cols:
        raise ValueError("idempotent must be square")
    if e @ e != e:
        raise ValueError("matrix is not idempotent")
    im = image_basis(e)
    comp = image_basis(Mat.identity(e.field, e.rows) - e)
    change = hstack([im, comp]) if im.cols + comp.cols else Mat.zeros(e.field, e.rows, 0)
    if change.cols != e.rows or inverse(change) is None:
        raise ValueError("idempotent split failed to produce a basis")
    return im, comp, change
