"""Constructors for the worked example algebras used across the test suite."""

from gpktheory.exactla import FieldSpec
from gpktheory.presentation import Quiver, RelationElem, build_algebra

GF2 = FieldSpec(2)


def two_cycle(field=GF2, power=2, max_len=12):
    """Arrows a: 1 -> 2 and b: 2 -> 1 with (b*a)^power = 0."""
    q = Quiver.make(["1", "2"], [("a", "1", "2"), ("b", "2", "1")])
    rels = [RelationElem.from_written(q, [(1, ["b", "a"] * power)])]
    return build_algebra(q, rels, field, max_len=max_len)


def alg61a(field=GF2):
    return two_cycle(field, 2)


def alg61b(field=GF2):
    """1 <-> 2 with a loop z at 2; y*x = z*x = y*z = 0, z*z = x*y."""
    q = Quiver.make(
        ["1", "2"], [("x", "1", "2"), ("y", "2", "1"), ("z", "2", "2")]
    )
    rels = [
        RelationElem.from_written(q, [(1, ["y", "x"])]),
        RelationElem.from_written(q, [(1, ["z", "x"])]),
        RelationElem.from_written(q, [(1, ["y", "z"])]),
        RelationElem.from_written(q, [(1, ["z", "z"]), (-1, ["x", "y"])]),
    ]
    return build_algebra(q, rels, field)


def alg62a(field=GF2):
    """Oriented 3-cycle with c*b*a = 0 and b*a*c*b = 0."""
    q = Quiver.make(
        ["1", "2", "3"], [("a", "1", "2"), ("b", "2", "3"), ("c", "3", "1")]
    )
    rels = [
        RelationElem.from_written(q, [(1, ["c", "b", "a"])]),
        RelationElem.from_written(q, [(1, ["b", "a", "c", "b"])]),
    ]
    return build_algebra(q, rels, field)


def alg62b(field=GF2):
    """1 <-> 2 <-> 3; d*r = s*r = s*t = 0 and r*s = t*d."""
    q = Quiver.make(
        ["1", "2", "3"],
        [("r", "1", "2"), ("s", "2", "1"), ("d", "2", "3"), ("t", "3", "2")],
    )
    rels = [
        RelationElem.from_written(q, [(1, ["d", "r"])]),
        RelationElem.from_written(q, [(1, ["s", "r"])]),
        RelationElem.from_written(q, [(1, ["s", "t"])]),
        RelationElem.from_written(q, [(1, ["r", "s"]), (-1, ["t", "d"])]),
    ]
    return build_algebra(q, rels, field)


def loop_square_zero(field=GF2):
    """One vertex, loop x, x*x = 0."""
    q = Quiver.make(["1"], [("x", "1", "1")])
    rels = [RelationElem.from_written(q, [(1, ["x", "x"])])]
    return build_algebra(q, rels, field)


def semisimple_two(field=GF2):
    """Two vertices, no arrows."""
    q = Quiver.make(["1", "2"], [])
    return build_algebra(q, [], field)


# shared expensive builds, memoized for the whole pytest run ----------------

_WDATA_CACHE = {}


def cached_wdata(name):
    """Waldhausen data for the standard examples, built once per session."""
    if name not in _WDATA_CACHE:
        from gpktheory.gorenstein import gp_catalog
        from gpktheory.waldhausen import build_wdata

        makers = {
            "kx2_gf2": (lambda: loop_square_zero(FieldSpec(2)), 2),
            "semisimple2_gf2": (lambda: semisimple_two(FieldSpec(2)), 2),
            "61a_gf5": (lambda: alg61a(FieldSpec(5)), 2),
            "61b_gf3_d1": (lambda: alg61b(FieldSpec(3)), 1),
            "62a_gf3": (lambda: alg62a(FieldSpec(3)), 2),
        }
        make, depth = makers[name]
        _WDATA_CACHE[name] = build_wdata(gp_catalog(make()), depth=depth)
    return _WDATA_CACHE[name]
