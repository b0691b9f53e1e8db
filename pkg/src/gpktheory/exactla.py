"""Exact linear algebra over GF(p) and QQ, plus integer Smith normal form.

Matrices over GF(p) are numpy int64 arrays holding canonical residues in
[0, p).  Matrices over QQ are numpy object arrays holding Fractions.  All
reductions produce fully reduced row echelon forms, so equal row spaces
give byte-identical bases and every caller sees deterministic output.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class FieldSpec:
    """Coefficient field: GF(char) for prime char, or QQ when char == 0."""

    char: int

    def __post_init__(self):
        if self.char != 0 and not _is_prime(self.char):
            raise ValueError(f"field characteristic must be 0 or prime, got {self.char}")

    @property
    def is_finite(self) -> bool:
        return self.char != 0

    @property
    def label(self) -> str:
        return f"GF({self.char})" if self.char else "QQ"

    # scalar helpers --------------------------------------------------

    def canon(self, x):
        if self.char:
            return int(x) % self.char
        return Fraction(x)

    def inv_scalar(self, x):
        if self.char:
            x = int(x) % self.char
            if x == 0:
                raise ZeroDivisionError("inverse of 0")
            return pow(x, self.char - 2, self.char)
        x = Fraction(x)
        return 1 / x

    def elements(self):
        """Iterate all field elements (finite fields only)."""
        if not self.char:
            raise ValueError("QQ is not enumerable")
        return range(self.char)

    def random_scalar(self, rng):
        if self.char:
            return rng.randrange(self.char)
        return Fraction(rng.randrange(-4, 5), rng.randrange(1, 4))

    # matrix constructors ---------------------------------------------

    def array(self, rows) -> np.ndarray:
        if self.char:
            a = np.array(rows, dtype=np.int64)
            if a.ndim == 1:
                a = a.reshape(1, -1) if a.size else a.reshape(1, 0)
            return a % self.char
        a = np.empty(np.shape(rows), dtype=object)
        src = np.array(rows, dtype=object)
        flat_src = src.reshape(-1)
        flat = a.reshape(-1)
        for i in range(flat_src.size):
            flat[i] = Fraction(flat_src[i])
        if a.ndim == 1:
            a = a.reshape(1, -1)
        return a

    def zeros(self, shape) -> np.ndarray:
        if self.char:
            return np.zeros(shape, dtype=np.int64)
        a = np.empty(shape, dtype=object)
        a[...] = Fraction(0)
        return a

    def eye(self, n: int) -> np.ndarray:
        a = self.zeros((n, n))
        for i in range(n):
            a[i, i] = 1 if self.char else Fraction(1)
        return a

    def random_matrix(self, rng, shape) -> np.ndarray:
        a = self.zeros(shape)
        for i in range(shape[0]):
            for j in range(shape[1]):
                a[i, j] = self.random_scalar(rng)
        return a

    # arithmetic -------------------------------------------------------

    def matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if self.char:
            return (a @ b) % self.char
        return np.dot(a, b)

    def add(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if self.char:
            return (a + b) % self.char
        return a + b

    def sub(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if self.char:
            return (a - b) % self.char
        return a - b

    def scale(self, c, a: np.ndarray) -> np.ndarray:
        if self.char:
            return (a * (int(c) % self.char)) % self.char
        return a * Fraction(c)


GF = FieldSpec
QQ = FieldSpec(0)


@dataclass
class MatF:
    """A matrix over a field, in canonical entry form."""

    field: FieldSpec
    a: np.ndarray

    @classmethod
    def make(cls, field: FieldSpec, rows) -> "MatF":
        return cls(field, field.array(rows))

    @property
    def shape(self):
        return self.a.shape


@dataclass(frozen=True)
class MatZ:
    """An integer matrix, stored as a tuple of row tuples."""

    rows: tuple

    @classmethod
    def make(cls, rows) -> "MatZ":
        return cls(tuple(tuple(int(x) for x in r) for r in rows))

    @property
    def shape(self):
        nr = len(self.rows)
        return (nr, len(self.rows[0]) if nr else 0)

    def to_lists(self):
        return [list(r) for r in self.rows]


# ---------------------------------------------------------------------------
# row reduction


def rref(field: FieldSpec, a: np.ndarray):
    """Fully reduced row echelon form.

    Returns (rows, pivots): the nonzero rows of the canonical RREF and the
    list of pivot column indices.  Pivot entries are 1 and are the only
    nonzero entries in their columns.
    """
    if a.size == 0:
        return a.reshape(0, a.shape[1] if a.ndim == 2 else 0), []
    if field.char:
        return _rref_fp(a, field.char)
    return _rref_qq(a)


def _rref_fp(a: np.ndarray, p: int):
    a = a.astype(np.int64) % p
    nrows, ncols = a.shape
    r = 0
    pivots = []
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        inv = pow(int(a[r, c]), p - 2, p)
        a[r] = (a[r] * inv) % p
        col = a[:, c].copy()
        col[r] = 0
        mask = col != 0
        if mask.any():
            a[mask] = (a[mask] - np.outer(col[mask], a[r])) % p
        pivots.append(c)
        r += 1
    return a[:r], pivots


def _rref_qq(a: np.ndarray):
    rows = [[Fraction(x) for x in row] for row in a]
    nrows = len(rows)
    ncols = len(rows[0]) if nrows else 0
    r = 0
    pivots = []
    for c in range(ncols):
        if r == nrows:
            break
        sel = None
        for i in range(r, nrows):
            if rows[i][c] != 0:
                sel = i
                break
        if sel is None:
            continue
        rows[r], rows[sel] = rows[sel], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(nrows):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    out = np.empty((r, ncols), dtype=object)
    for i in range(r):
        for j in range(ncols):
            out[i, j] = rows[i][j]
    return out, pivots


def rank_of(field: FieldSpec, a: np.ndarray) -> int:
    return len(rref(field, a)[1])


def kernel(field: FieldSpec, a: np.ndarray) -> np.ndarray:
    """Canonical basis of the right null space, one vector per row.

    The basis vector for free column f has entry 1 at f and -R[i, f] at
    each pivot column, so equal kernels give identical bases.
    """
    ncols = a.shape[1]
    red, pivots = rref(field, a)
    pivset = set(pivots)
    free = [c for c in range(ncols) if c not in pivset]
    out = field.zeros((len(free), ncols))
    one = 1 if field.char else Fraction(1)
    for k, f in enumerate(free):
        out[k, f] = one
        for i, pc in enumerate(pivots):
            v = red[i, f]
            if field.char:
                out[k, pc] = (-int(v)) % field.char
            else:
                out[k, pc] = -v
    return out


def rank_kernel(m: MatF):
    """Rank and canonical kernel basis of a matrix over a field."""
    red, pivots = rref(m.field, m.a)
    return len(pivots), kernel(m.field, m.a)


def solve_raw(field: FieldSpec, a: np.ndarray, b: np.ndarray):
    """One solution of a x = b (free variables set to 0), or None."""
    b = b.reshape(-1)
    aug = field.zeros((a.shape[0], a.shape[1] + 1))
    aug[:, : a.shape[1]] = a
    aug[:, a.shape[1]] = b
    red, pivots = rref(field, aug)
    if a.shape[1] in pivots:
        return None
    x = field.zeros((a.shape[1],))
    for i, pc in enumerate(pivots):
        x[pc] = red[i, a.shape[1]]
    return x

def solve(a: MatF, b) -> np.ndarray | None:
    """Solve a x = b over a's field; None when inconsistent."""
    bv = a.field.array(b).reshape(-1)
    return solve_raw(a.field, a.a, bv)


class LinearSolver:
    """Solve a x = b for many right-hand sides with one factorization.

    Reduces [a | I] once; each solve is then a single matrix-vector product
    plus consistency checks on the rows whose pivot lies in the identity
    block (those encode the conditions for b to be in the column space).
    """

    def __init__(self, field: FieldSpec, a: np.ndarray):
        n, k = a.shape
        aug = field.zeros((n, k + n))
        aug[:, :k] = a
        for j in range(n):
            aug[j, k + j] = field.canon(1)
        red, piv = rref(field, aug)
        self.field = field
        self.k = k
        self.transform = red[:, k:]
        self.pivots = piv

    def solve(self, b: np.ndarray):
        """One solution of a x = b (free variables 0), or None."""
        f = self.field
        tb = f.matmul(self.transform, b.reshape(-1, 1)).reshape(-1)
        x = f.zeros((self.k,))
        for i, pc in enumerate(self.pivots):
            if pc >= self.k:
                if tb[i] != 0:
                    return None
            else:
                x[pc] = tb[i]
        return x


def solve_matrix(field: FieldSpec, a: np.ndarray, b: np.ndarray):
    """Solve a X = b for a matrix right-hand side; None when inconsistent."""
    k = b.shape[1]
    aug = field.zeros((a.shape[0], a.shape[1] + k))
    aug[:, : a.shape[1]] = a
    aug[:, a.shape[1] :] = b
    red, pivots = rref(field, aug)
    if any(pc >= a.shape[1] for pc in pivots):
        return None
    x = field.zeros((a.shape[1], k))
    for i, pc in enumerate(pivots):
        x[pc, :] = red[i, a.shape[1] :]
    return x


def invert(field: FieldSpec, a: np.ndarray):
    """Inverse matrix, or None when singular."""
    n = a.shape[0]
    if a.shape[1] != n:
        return None
    x = solve_matrix(field, a, field.eye(n))
    return x


def row_space_bytes(field: FieldSpec, a: np.ndarray) -> bytes:
    """Canonical byte key of a row space (RREF serialized)."""
    red, pivots = rref(field, a)
    if field.char:
        return red.tobytes() + bytes(str(pivots), "ascii")
    return repr([[str(x) for x in row] for row in red]).encode()


# ---------------------------------------------------------------------------
# Smith normal form


def _det_sign_unimodular(rows) -> int:
    """Determinant of an integer matrix via Bareiss; used to verify +-1."""
    a = [list(r) for r in rows]
    n = len(a)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            sw = None
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    sw = i
                    break
            if sw is None:
                return 0
            a[k], a[sw] = a[sw], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1] if n else 1


def smith_normal_form(m: MatZ):
    """Smith normal form with transforms: returns (u, s, v) with u m v = s.

    The diagonal of s is nonnegative and each entry divides the next.
    Pivot selection takes the smallest nonzero absolute value, row-major
    on ties, so the reduction path is deterministic.  u and v are
    verified unimodular and the product identity is asserted.
    """
    a = m.to_lists()
    nr, nc = m.shape
    u = [[1 if i == j else 0 for j in range(nr)] for i in range(nr)]
    v = [[1 if i == j else 0 for j in range(nc)] for i in range(nc)]

    def row_sub(i, j, q):
        # row_i -= q * row_j
        a[i] = [x - q * y for x, y in zip(a[i], a[j])]
        u[i] = [x - q * y for x, y in zip(u[i], u[j])]

    def col_sub(i, j, q):
        # col_i -= q * col_j
        for row in a:
            row[i] -= q * row[j]
        for row in v:
            row[i] -= q * row[j]

    def row_swap(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def col_swap(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def row_neg(i):
        a[i] = [-x for x in a[i]]
        u[i] = [-x for x in u[i]]

    t = 0
    while t < min(nr, nc):
        # smallest |nonzero| pivot, row-major tie-break
        pivot = None
        best = None
        for i in range(t, nr):
            for j in range(t, nc):
                x = a[i][j]
                if x != 0 and (best is None or abs(x) < best):
                    best = abs(x)
                    pivot = (i, j)
        if pivot is None:
            break
        pi, pj = pivot
        if pi != t:
            row_swap(t, pi)
        if pj != t:
            col_swap(t, pj)
        while True:
            # clear column t below and above, then row t; a leftover
            # remainder is strictly smaller than the pivot, so this loop
            # terminates by descent on |a[t][t]|
            dirty = False
            for i in range(nr):
                if i != t and a[i][t] != 0:
                    q = a[i][t] // a[t][t]
                    row_sub(i, t, q)
                    if a[i][t] != 0:
                        row_swap(t, i)
                        dirty = True
            for j in range(nc):
                if j != t and a[t][j] != 0:
                    q = a[t][j] // a[t][t]
                    col_sub(j, t, q)
                    if a[t][j] != 0:
                        col_swap(t, j)
                        dirty = True
            if not dirty:
                break
        # divisibility: pivot must divide every remaining entry
        fixed = True
        for i in range(t + 1, nr):
            for j in range(t + 1, nc):
                if a[i][j] % a[t][t] != 0:
                    # fold that row in and redo the clearing at this t
                    row_sub(t, i, -1)
                    fixed = False
                    break
            if not fixed:
                break
        if not fixed:
            continue
        if a[t][t] < 0:
            row_neg(t)
        t += 1

    um = MatZ.make(u)
    sm = MatZ.make(a)
    vm = MatZ.make(v)
    # verify the factorization and unimodularity
    prod = _matz_mul(_matz_mul(u, m.to_lists()), v)
    assert prod == a, "smith factorization mismatch"
    assert abs(_det_sign_unimodular(u)) == 1, "u not unimodular"
    assert abs(_det_sign_unimodular(v)) == 1, "v not unimodular"
    for k in range(min(nr, nc) - 1):
        d0, d1 = a[k][k], a[k + 1][k + 1]
        assert d0 >= 0 and d1 >= 0
        if d1 != 0:
            assert d0 != 0 and d1 % d0 == 0, "divisibility chain broken"
    return um, sm, vm


def _matz_mul(a, b):
    nr = len(a)
    inner = len(b)
    nc = len(b[0]) if inner else 0
    out = [[0] * nc for _ in range(nr)]
    for i in range(nr):
        ai = a[i]
        oi = out[i]
        for k in range(inner):
            x = ai[k]
            if x:
                bk = b[k]
                for j in range(nc):
                    oi[j] += x * bk[j]
    return out


# ---------------------------------------------------------------------------
# finitely presented abelian groups


@dataclass(frozen=True)
class AbelianGroupDescription:
    """Invariant-factor form of a finitely generated abelian group.

    invariant_factors is a chain (d_1 | d_2 | ...) with every d_i >= 2;
    generators echoes the presentation's generator labels.
    """

    free_rank: int
    invariant_factors: tuple
    generators: tuple

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.invariant_factors

    def same_group(self, other: "AbelianGroupDescription") -> bool:
        return (
            self.free_rank == other.free_rank
            and self.invariant_factors == other.invariant_factors
        )

    def __str__(self) -> str:
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts.extend(f"Z/{d}" for d in self.invariant_factors)
        return " x ".join(parts) if parts else "0"


def group_from_presentation(generators, relations) -> AbelianGroupDescription:
    """Abelian group on the given generators modulo integer relation rows."""
    generators = tuple(str(g) for g in generators)
    n = len(generators)
    rows = [list(r) for r in relations]
    for r in rows:
        if len(r) != n:
            raise ValueError("relation length does not match generator count")
    if not rows or n == 0:
        return AbelianGroupDescription(n, (), generators)
    _, s, _ = smith_normal_form(MatZ.make(rows))
    diag = [s.rows[i][i] for i in range(min(s.shape))]
    nonzero = [d for d in diag if d != 0]
    factors = tuple(d for d in nonzero if d >= 2)
    free_rank = n - len(nonzero)
    return AbelianGroupDescription(free_rank, factors, generators)
