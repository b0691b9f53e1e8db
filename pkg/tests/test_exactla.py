"""Exact linear algebra: row reduction, kernels, Smith form, group presentations."""

from fractions import Fraction
from random import Random

import numpy as np

from gpktheory.exactla import (
    AbelianGroupDescription,
    FieldSpec,
    MatF,
    MatZ,
    group_from_presentation,
    invert,
    kernel,
    rank_kernel,
    rank_of,
    row_space_bytes,
    rref,
    smith_normal_form,
    solve,
    solve_matrix,
)

GF5 = FieldSpec(5)
GF7 = FieldSpec(7)
GF3 = FieldSpec(3)
QQ = FieldSpec(0)


def test_rank_kernel_golden():
    # [[1,2],[2,4]] over GF(5) has rank 1, kernel spanned by (3,1)
    m = MatF.make(GF5, [[1, 2], [2, 4]])
    rank, ker = rank_kernel(m)
    assert rank == 1
    assert ker.shape == (1, 2)
    assert list(ker[0]) == [3, 1]


def test_solve_golden():
    # 2x=1, 3y=1 over GF(7): x=4, y=5
    a = MatF.make(GF7, [[2, 0], [0, 3]])
    x = solve(a, [1, 1])
    assert x is not None
    assert list(x) == [4, 5]


def test_solve_inconsistent():
    a = MatF.make(GF5, [[1, 1], [2, 2]])
    assert solve(a, [1, 3]) is None
    # but b in the column space works
    x = solve(a, [1, 2])
    assert x is not None
    assert (np.dot(a.a, x) % 5 == np.array([1, 2])).all()


def test_rref_canonical_and_idempotent():
    rng = Random(0)
    for _ in range(40):
        nr = rng.randrange(1, 6)
        nc = rng.randrange(1, 6)
        a = GF5.random_matrix(rng, (nr, nc))
        red, piv = rref(GF5, a)
        red2, piv2 = rref(GF5, red)
        assert piv == piv2
        assert (red == red2).all()
        # pivot columns are standard basis vectors
        for i, c in enumerate(piv):
            col = red[:, c]
            assert col[i] == 1 and (np.delete(col, i) == 0).all()


def test_row_space_key_ignores_row_operations():
    rng = Random(1)
    for _ in range(25):
        a = GF3.random_matrix(rng, (3, 4))
        b = a[::-1].copy()
        b[0] = (b[0] + 2 * b[1]) % 3
        assert row_space_bytes(GF3, a) == row_space_bytes(GF3, b)


def test_kernel_annihilates_and_dimensions_add():
    rng = Random(2)
    for _ in range(40):
        nr = rng.randrange(1, 6)
        nc = rng.randrange(1, 6)
        a = GF7.random_matrix(rng, (nr, nc))
        r = rank_of(GF7, a)
        k = kernel(GF7, a)
        assert r + k.shape[0] == nc
        if k.shape[0]:
            assert (np.dot(a, k.T) % 7 == 0).all()


def test_qq_kernel_fractions():
    a = QQ.array([[Fraction(1, 2), Fraction(1, 3)], [Fraction(3, 2), 1]])
    # second row = 3 * first row, so rank 1
    assert rank_of(QQ, a) == 1
    k = kernel(QQ, a)
    assert k.shape == (1, 2)
    v = k[0]
    assert Fraction(1, 2) * v[0] + Fraction(1, 3) * v[1] == 0


def test_invert_and_solve_matrix():
    rng = Random(3)
    found = 0
    for _ in range(60):
        a = GF5.random_matrix(rng, (4, 4))
        inv = invert(GF5, a)
        if inv is None:
            assert rank_of(GF5, a) < 4
            continue
        found += 1
        assert (np.dot(a, inv) % 5 == np.eye(4, dtype=np.int64)).all()
        b = GF5.random_matrix(rng, (4, 2))
        x = solve_matrix(GF5, a, b)
        assert (np.dot(a, x) % 5 == b).all()
    assert found > 10


def test_smith_golden_diag_2_3():
    u, s, v = smith_normal_form(MatZ.make([[2, 0], [0, 3]]))
    assert [s.rows[0][0], s.rows[1][1]] == [1, 6]
    assert s.rows[0][1] == 0 and s.rows[1][0] == 0


def test_smith_transforms_multiply_back():
    rng = Random(4)
    for _ in range(50):
        nr = rng.randrange(1, 5)
        nc = rng.randrange(1, 5)
        m = MatZ.make([[rng.randrange(-9, 10) for _ in range(nc)] for _ in range(nr)])
        u, s, v = smith_normal_form(m)
        um = np.array(u.to_lists(), dtype=object)
        mm = np.array(m.to_lists(), dtype=object)
        vm = np.array(v.to_lists(), dtype=object)
        sm = np.array(s.to_lists(), dtype=object)
        assert (np.dot(np.dot(um, mm), vm) == sm).all()
        diag = [s.rows[i][i] for i in range(min(nr, nc))]
        for d0, d1 in zip(diag, diag[1:]):
            assert d0 >= 0 and d1 >= 0
            if d1:
                assert d0 and d1 % d0 == 0


def _det_fraction(rows):
    n = len(rows)
    a = [[Fraction(x) for x in r] for r in rows]
    det = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            det = -det
        det *= a[c][c]
        inv = 1 / a[c][c]
        a[c] = [x * inv for x in a[c]]
        for i in range(c + 1, n):
            if a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return det


def test_group_from_presentation_golden():
    g = group_from_presentation(["a", "b"], [[2, 0], [0, 3]])
    assert g.free_rank == 0
    assert g.invariant_factors == (6,)
    assert str(g) == "Z/6"

    free = group_from_presentation(["x", "y"], [])
    assert free.free_rank == 2 and not free.invariant_factors
    assert str(free) == "Z^2"

    trivial = group_from_presentation(["t"], [[1]])
    assert trivial.is_trivial
    assert str(trivial) == "0"

    zmod2 = group_from_presentation(["g"], [[2], [0], [-2]])
    assert zmod2.same_group(AbelianGroupDescription(0, (2,), ("g",)))


def test_group_order_matches_determinant():
    # for a full-rank square relation matrix the group is finite of order |det|
    rng = Random(5)
    done = 0
    while done < 20:
        n = rng.randrange(1, 4)
        rows = [[rng.randrange(-4, 5) for _ in range(n)] for _ in range(n)]
        det = _det_fraction(rows)
        if det == 0 or abs(det) > 512:
            continue
        g = group_from_presentation([f"g{i}" for i in range(n)], rows)
        assert g.free_rank == 0
        order = 1
        for d in g.invariant_factors:
            order *= d
        assert order == abs(det)
        done += 1


def test_group_order_matches_coset_count():
    # independent brute force: cosets of the row lattice inside (Z/det)^n
    rng = Random(6)
    done = 0
    while done < 12:
        n = rng.randrange(1, 3)
        rows = [[rng.randrange(-3, 4) for _ in range(n)] for _ in range(n)]
        det = abs(_det_fraction(rows))
        if det == 0 or det > 30:
            continue
        d = int(det)
        # subgroup of (Z/d)^n generated by the rows; quotient order = d^n / |subgroup|
        seen = {tuple([0] * n)}
        frontier = [tuple([0] * n)]
        gens = [tuple(x % d for x in r) for r in rows]
        while frontier:
            cur = frontier.pop()
            for gvec in gens:
                nxt = tuple((c + x) % d for c, x in zip(cur, gvec))
                if nxt not in seen:
                    seen.add(nxt)
                    frontier.append(nxt)
        quotient_order = d**n // len(seen)
        g = group_from_presentation([f"g{i}" for i in range(n)], rows)
        order = 1
        for f in g.invariant_factors:
            order *= f
        assert order == quotient_order
        done += 1


def test_free_rank_matches_rational_rank():
    rng = Random(7)
    for _ in range(20):
        nr = rng.randrange(1, 4)
        nc = rng.randrange(1, 5)
        rows = [[rng.randrange(-5, 6) for _ in range(nc)] for _ in range(nr)]
        g = group_from_presentation([f"g{i}" for i in range(nc)], rows)
        r = rank_of(QQ, QQ.array(rows))
        assert g.free_rank == nc - r
