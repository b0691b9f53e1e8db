"""K-groups of the Gorenstein projective layer.

K0 is presented by the catalog's indecomposable non-projective classes with
one relation row [Y] - [X] - [Z] per harvested short exact sequence of GP
modules (projective classes are zero), reduced by Smith normal form.  K1 is
computed from the stable endomorphism algebra of the catalog sum: for a
commutative stable End, K1 equals its unit group, and Whitehead reduction of
invertible matrices over a commutative local ring certifies the GL/E
collapse to units.
"""

from dataclasses import dataclass
from math import gcd
from random import Random

import numpy as np

from . import exactla
from .exactla import AbelianGroupDescription, FieldSpec, MatZ, group_from_presentation
from .gorenstein import GPCatalog, certify_gp
from .presentation import FiniteDimAlgebra
from .rep import (
    Representation,
    decompose,
    direct_sum,
    ext1_class_reps,
    is_isomorphic,
    is_projective,
    middle_term,
    projective,
    zero_morphism,
)
from .stable import StableEndAlgebra, stable_end_algebra

CLASS_ENUM_CAP = 4096
RANDOM_CLASSES = 128
RING_ENUM_CAP = 65536


class CatalogUnknown(Exception):
    """The GP catalog's verdict is Unknown; K-groups are not computed."""


class NoncommutativeStableEnd(Exception):
    """K1 is implemented only for commutative stable endomorphism algebras."""


class NotInvertible(Exception):
    """Whitehead reduction requires an invertible matrix."""


class UnsupportedRing(Exception):
    """Whitehead reduction requires a field or a commutative local ring."""


# ---------------------------------------------------------------------------
# K0: relation harvesting


@dataclass
class K0Input:
    catalog: GPCatalog
    generators: tuple  # labels, one per catalog item
    matrix: MatZ  # rows = harvested relations [Y] - [X] - [Z]
    warnings: tuple


def _match_item(part: Representation, items) -> int:
    for i, item in enumerate(items):
        ok, _ = is_isomorphic(part, item)
        if ok:
            return i
    raise RuntimeError(
        f"middle-term summand of dims {part.dim_vector} is neither projective "
        f"nor a catalog item; catalog closure violated"
    )


def _class_vector_row(a, items, x, z, e_rep):
    """Relation row of [E] - [X] - [Z] in catalog coordinates."""
    row = [0] * len(items)
    for part, mult in decompose(e_rep):
        if part.is_zero or is_projective(part):
            continue
        assert certify_gp(part).is_gp, "middle-term summand not GP"
        row[_match_item(part, items)] += mult
    for end in (x, z):
        if not is_projective(end):
            row[_match_item(end, items)] -= 1
    return row


def build_k0_input(a: FiniteDimAlgebra, catalog: GPCatalog, seed: int = 0) -> K0Input:
    """Harvest split and extension relations among catalog items and projectives."""
    if catalog.verdict == "Unknown":
        raise CatalogUnknown("catalog verdict is Unknown")
    items = list(catalog.items)
    labels = tuple(f"G{i}" for i in range(len(items)))
    projs = [projective(a, v) for v in a.quiver.vertices]
    ends = items + projs
    rows = []
    warnings = []
    for z in ends:
        for x in ends:
            # split sequence: middle is the direct sum (a sanity row)
            split_mid = direct_sum([x, z])[0]
            rows.append(_class_vector_row(a, items, x, z, split_mid))
            assert all(c == 0 for c in rows[-1]), "split sequence gave a nonzero row"
            if is_projective(z):
                continue  # extensions out of a projective all split
            classes, enclosing = ext1_class_reps(z, x)
            d = len(classes)
            if d == 0:
                continue
            f = a.field
            if f.char and f.char**d <= CLASS_ENUM_CAP:
                combos = _all_nonzero_vectors(f.char, d)
            else:
                warnings.append(
                    f"ext classes sampled (dimension {d}) for a pair of "
                    f"dims {z.dim_vector} -> {x.dim_vector}"
                )
                combos = _sampled_vectors(f, d, seed)
            for coeffs in combos:
                cls = None
                for c, b in zip(coeffs, classes):
                    term = b.scale(f.canon(c))
                    cls = term if cls is None else cls.add(term)
                e_rep, _, _ = middle_term(z, x, cls, enclosing)
                rows.append(_class_vector_row(a, items, x, z, e_rep))
    matrix = MatZ.make(rows) if rows else MatZ.make([])
    return K0Input(catalog, labels, matrix, tuple(warnings))


def _all_nonzero_vectors(p: int, n: int):
    from .rep import _all_coeff_vectors

    for v in _all_coeff_vectors(p, n):
        if any(c != 0 for c in v):
            yield v


def _sampled_vectors(f: FieldSpec, n: int, seed: int):
    eye = np.eye(n, dtype=np.int64)
    for i in range(n):
        yield list(eye[i])
    rng = Random(seed)
    for _ in range(RANDOM_CLASSES):
        vec = [f.random_scalar(rng) for _ in range(n)]
        if any(c != 0 for c in vec):
            yield vec


def k0_gorenstein(
    a: FiniteDimAlgebra, catalog: GPCatalog, seed: int = 0
) -> AbelianGroupDescription:
    data = build_k0_input(a, catalog, seed)
    return group_from_presentation(data.generators, data.matrix.rows)


# ---------------------------------------------------------------------------
# finite commutative rings and their unit groups


def _vec(field: FieldSpec, data) -> np.ndarray:
    """A 1-d coefficient vector over the field (FieldSpec.array is 2-d only)."""
    arr = np.array(list(data))
    if field.char:
        return arr.astype(np.int64).reshape(-1) % field.char
    from fractions import Fraction

    return np.array([Fraction(x) for x in arr.reshape(-1)], dtype=object)


class FiniteCommutativeRing:
    """A finite-dimensional commutative algebra over a prime field, given by
    structure constants on a basis.  Elements are coordinate vectors."""

    def __init__(self, field: FieldSpec, structure, unit, name: str = ""):
        self.field = field
        self.structure = structure  # structure[i][j] = basis-coeff vector of b_i b_j
        self.dim = len(structure)
        self.unit = _vec(field, unit)
        self.name = name or f"ring of dimension {self.dim}"
        f = field
        for i in range(self.dim):
            for j in range(self.dim):
                assert (structure[i][j] == structure[j][i]).all(), "not commutative"
                for k in range(self.dim):
                    lhs = self.mult(structure[i][j], self._basis_vec(k))
                    rhs = self.mult(self._basis_vec(i), structure[j][k])
                    assert (lhs == rhs).all(), "not associative"
        for i in range(self.dim):
            e = self._basis_vec(i)
            assert (self.mult(self.unit, e) == e).all(), "unit law fails"

    @classmethod
    def from_field(cls, field: FieldSpec) -> "FiniteCommutativeRing":
        one = field.zeros((1, 1, 1))
        one[0][0][0] = field.canon(1)
        return cls(field, one, [1], name=f"GF({field.char})")

    @classmethod
    def dual_numbers(cls, field: FieldSpec) -> "FiniteCommutativeRing":
        """field[t] / (t^2), a commutative local non-field ring."""
        s = field.zeros((2, 2, 2))
        s[0][0] = _vec(field, [1, 0])
        s[0][1] = _vec(field, [0, 1])
        s[1][0] = _vec(field, [0, 1])
        s[1][1] = _vec(field, [0, 0])
        return cls(field, s, [1, 0], name=f"GF({field.char})[t]/(t^2)")

    @classmethod
    def from_stable_end(cls, lam: StableEndAlgebra) -> "FiniteCommutativeRing":
        if not lam.is_commutative():
            raise NoncommutativeStableEnd(
                "stable endomorphism algebra is not commutative"
            )
        return cls(lam.field, lam.structure, lam.unit, name="stable End")

    def _basis_vec(self, i):
        v = self.field.zeros((self.dim,))
        v[i] = self.field.canon(1)
        return v

    def canon_el(self, x):
        arr = _vec(self.field, x)
        assert arr.shape == (self.dim,)
        return arr

    def zero(self):
        return self.field.zeros((self.dim,))

    def mult(self, x, y):
        f = self.field
        out = f.zeros((self.dim,))
        for i in range(self.dim):
            if x[i] == 0:
                continue
            for j in range(self.dim):
                if y[j] == 0:
                    continue
                out = f.add(out, f.scale(f.canon(int(x[i]) * int(y[j])), self.structure[i][j]))
        return out

    def power(self, x, k: int):
        result = self.unit.copy()
        base = x
        while k:
            if k & 1:
                result = self.mult(result, base)
            base = self.mult(base, base)
            k >>= 1
        return result

    def mult_matrix(self, x):
        cols = [self.mult(x, self._basis_vec(j)) for j in range(self.dim)]
        return np.stack(cols).T

    def is_unit(self, x) -> bool:
        return exactla.invert(self.field, self.mult_matrix(x)) is not None

    def inverse(self, x):
        inv = exactla.invert(self.field, self.mult_matrix(x))
        if inv is None:
            raise NotInvertible("ring element is not a unit")
        return self.field.matmul(inv, self.unit.reshape(-1, 1)).reshape(-1)

    def elements(self):
        p = self.field.char
        if not p:
            raise UnsupportedRing("element enumeration needs a finite field")
        if p**self.dim > RING_ENUM_CAP:
            raise UnsupportedRing("ring too large to enumerate")
        from .rep import _all_coeff_vectors

        for v in _all_coeff_vectors(p, self.dim):
            yield _vec(self.field, v)

    def units(self):
        return [x for x in self.elements() if self.is_unit(x)]

    def is_local(self) -> bool:
        """Nonunits closed under addition (equivalent to locality here)."""
        nonunits = [x for x in self.elements() if not self.is_unit(x)]
        f = self.field
        for x in nonunits:
            for y in nonunits:
                if self.is_unit(f.add(x, y)):
                    return False
        return True


def _prime_factors(n: int):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def unit_group(ring: FiniteCommutativeRing) -> AbelianGroupDescription:
    """Structure of the unit group, from counts of solutions of x^d = 1."""
    units = [tuple(int(c) for c in u) for u in ring.units()]
    n = len(units)
    if n == 1:
        return AbelianGroupDescription(0, (), ("u",))
    primary = {}
    for ell in _prime_factors(n):
        logs = [0]
        j = 1
        while True:
            cnt = 0
            for u in units:
                p = ring.power(ring.canon_el(u), ell**j)
                if (p == ring.unit).all():
                    cnt += 1
            a_j = 0
            c = cnt
            while c > 1:
                assert c % ell == 0, "solution count is not a prime power"
                c //= ell
                a_j += 1
            logs.append(a_j)
            if ell**a_j == cnt and a_j == logs[-2]:
                break
            j += 1
        # number of cyclic ell-factors with exponent >= j is logs[j]-logs[j-1]
        exps = []
        for j in range(1, len(logs)):
            count_ge_j = logs[j] - logs[j - 1]
            while len(exps) < count_ge_j:
                exps.append(0)
            for i in range(count_ge_j):
                exps[i] = j
        if exps:
            primary[ell] = sorted(exps, reverse=True)
    k = max((len(v) for v in primary.values()), default=0)
    factors = []
    for i in range(k):
        d = 1
        for ell, exps in primary.items():
            if i < len(exps):
                d *= ell ** exps[i]
        factors.append(d)
    factors = tuple(sorted(d for d in factors if d > 1))
    total = 1
    for d in factors:
        total *= d
    assert total == n, "invariant factors do not multiply to the unit count"
    for i in range(len(factors) - 1):
        assert factors[i + 1] % factors[i] == 0
    return AbelianGroupDescription(0, factors, ("u",))


# ---------------------------------------------------------------------------
# K1


@dataclass(frozen=True)
class K1Class:
    ring: FiniteCommutativeRing
    value: tuple  # coordinates of the representing unit

    def mul(self, other: "K1Class") -> "K1Class":
        assert self.ring is other.ring
        prod = self.ring.mult(self.ring.canon_el(self.value), self.ring.canon_el(other.value))
        return K1Class(self.ring, tuple(int(c) for c in prod))

    def __eq__(self, other):
        if not isinstance(other, K1Class):
            return NotImplemented
        return self.ring is other.ring and self.value == other.value

    def __hash__(self):
        return hash(self.value)


def whitehead_reduce(mat, ring: FiniteCommutativeRing) -> K1Class:
    """Reduce an invertible matrix over a commutative local ring to a unit.

    Only elementary row/column operations are used; the result is the class
    of the product of the final unit diagonal.  Invertibility is certified
    by assembling an explicit two-sided inverse from the recorded steps.
    """
    if not ring.is_local():
        raise UnsupportedRing(f"{ring.name} is not local")
    n = len(mat)
    f = ring.field
    work = [[ring.canon_el(x) for x in row] for row in mat]
    for row in work:
        assert len(row) == n, "matrix is not square"
    left = [[ring.unit.copy() if i == j else ring.zero() for j in range(n)] for i in range(n)]
    right = [[ring.unit.copy() if i == j else ring.zero() for j in range(n)] for i in range(n)]

    def row_op(target, i, j, c):
        # r_i += c * r_j
        for col in range(n):
            target[i][col] = f.add(target[i][col], ring.mult(c, target[j][col]))

    def col_op(target, j, i, c):
        # c_j += c_i * c
        for row in range(n):
            target[row][j] = f.add(target[row][j], ring.mult(target[row][i], c))

    for k in range(n):
        if not ring.is_unit(work[k][k]):
            for i in range(k + 1, n):
                if ring.is_unit(work[i][k]):
                    row_op(work, k, i, ring.unit)
                    row_op(left, k, i, ring.unit)
                    break
            else:
                raise NotInvertible(
                    f"no unit available as pivot in column {k}; "
                    "matrix not invertible over a local ring"
                )
        pinv = ring.inverse(work[k][k])
        for i in range(n):
            if i == k or not np.any(work[i][k] != 0):
                continue
            c = f.scale(f.canon(-1), ring.mult(work[i][k], pinv))
            row_op(work, i, k, c)
            row_op(left, i, k, c)
        for j in range(n):
            if j == k or not np.any(work[k][j] != 0):
                continue
            c = f.scale(f.canon(-1), ring.mult(pinv, work[k][j]))
            col_op(work, j, k, c)
            col_op(right, j, k, c)
    diag = [work[i][i] for i in range(n)]
    u = ring.unit.copy()
    for d in diag:
        assert ring.is_unit(d)
        u = ring.mult(u, d)
    # certify: left * mat * right = diag, so inv = right * diag^{-1} * left
    def ring_matmul(a, b):
        out = [[ring.zero() for _ in range(n)] for _ in range(n)]
        for i in range(n):
            for j in range(n):
                acc = ring.zero()
                for t in range(n):
                    acc = f.add(acc, ring.mult(a[i][t], b[t][j]))
                out[i][j] = acc
        return out

    dinv = [
        [ring.inverse(diag[i]) if i == j else ring.zero() for j in range(n)]
        for i in range(n)
    ]
    original = [[ring.canon_el(x) for x in row] for row in mat]
    inv = ring_matmul(ring_matmul(right, dinv), left)
    for prod in (ring_matmul(original, inv), ring_matmul(inv, original)):
        for i in range(n):
            for j in range(n):
                expect = ring.unit if i == j else ring.zero()
                assert (prod[i][j] == expect).all(), "certified inverse failed"
    return K1Class(ring, tuple(int(c) for c in u))


@dataclass
class K1Result:
    group: AbelianGroupDescription
    description: str
    lambda_dim: int


def k1_gorenstein(a: FiniteDimAlgebra, catalog: GPCatalog) -> K1Result:
    """K1 of the stable endomorphism algebra of the catalog sum."""
    if catalog.verdict == "Unknown":
        raise CatalogUnknown("catalog verdict is Unknown")
    if catalog.verdict == "CMFree":
        return K1Result(
            AbelianGroupDescription(0, (), ()),
            "trivial: no non-projective Gorenstein projectives",
            0,
        )
    big = direct_sum(list(catalog.items))[0]
    lam = stable_end_algebra(big)
    ring = FiniteCommutativeRing.from_stable_end(lam)
    group = unit_group(ring)
    units = ring.units()
    nonunits = (ring.field.char**ring.dim) - len(units)
    description = (
        f"unit group of the stable endomorphism algebra "
        f"(dimension {lam.dim} over GF({ring.field.char})): "
        f"order {len(units)}, {group}"
    )
    if nonunits > 1:
        description += f"; 1 + radical contributes order {nonunits}"
    return K1Result(group, description, lam.dim)
