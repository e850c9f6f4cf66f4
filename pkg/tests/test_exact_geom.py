import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from eightpart.exact_geom import (
    AffineMap,
    DegenerateInputError,
    OrientedPlane,
    Point3,
    canonicalize,
    coplanar_quadruple,
    cross,
    dot,
    dualize,
    fraction_str,
    frame_for_direction,
    general_position_check,
    jitter,
    pad_and_perturb,
    plane_of_dual_point,
    q,
    sign_parity,
    sign_vectors,
    vertical_triple,
    _coplanar_quadruple_exact,
    _coplanar_quadruple_int64,
    to_integer_coords,
    _rng,
)

from conftest import random_points

small = st.integers(-6, 6)
point = st.tuples(small, small, small).map(lambda t: Point3.of(*t))
rational = st.fractions(min_value=-10, max_value=10, max_denominator=12)
rpoint = st.tuples(rational, rational, rational).map(lambda t: Point3.of(*t))


def brute_coplanar(points):
    for quad in itertools.combinations(range(len(points)), 4):
        a, b, c, d = (points[i] for i in quad)
        if dot(cross(b - a, c - a), d - a) == 0:
            return True
    return False


def test_number_parsing():
    assert q("3/4") == Fraction(3, 4)
    assert q("0.125") == Fraction(1, 8)
    assert q(2) == 2
    assert fraction_str(Fraction(-6, 4)) == "-3/2"
    assert fraction_str(Fraction(5)) == "5"


def test_plane_sides_and_through():
    h = OrientedPlane((0, 0, 1), 0)
    assert h.side((0, 0, 1)) == 1 and h.side((5, 5, -1)) == -1 and h.side((1, 2, 0)) == 0
    pts = [(1, 0, 0), (0, 2, 0), (0, 0, 3)]
    through = OrientedPlane.through(pts)
    assert all(through.side(p) == 0 for p in pts)
    assert (-through).side((0, 0, 0)) == -through.side((0, 0, 0))


@given(st.lists(rpoint, min_size=1, max_size=3), rpoint)
def test_primitive_keeps_sides(pts, probe):
    plane = OrientedPlane.through(pts)
    prim = plane.primitive()
    assert all(c.denominator == 1 for c in (*prim.normal, prim.offset))
    assert prim.side(probe) == plane.side(probe)


@given(rpoint, rpoint)
def test_duality_reverses_order(p, r):
    # r* passes above the point p exactly when r lies below the plane p*
    assert dualize(r).above_sign(p) == -plane_of_dual_point(p).side(r)


@given(rpoint, rpoint)
def test_duality_preserves_incidence(p, r):
    assert (dualize(r).above_sign(p) == 0) == (plane_of_dual_point(p).side(r) == 0)


def test_sign_vectors_and_parity():
    labels = sign_vectors(3)
    assert labels[0] == "+++" and len(set(labels)) == 8
    assert sign_parity("+-+", "--+") == 1
    assert sign_parity("---", "---") == 3


@given(st.tuples(small, small, small).filter(any), rpoint, rpoint, rpoint)
def test_frame_and_pull_back(v, p, a, b):
    frame = frame_for_direction(v)
    assert frame.apply(p).z == dot(p, tuple(Fraction(c) for c in v))
    shifted = frame.then(AffineMap(((2, 0, 1), (0, 3, 0), (0, 0, 1)), (1, -2, 5)))
    plane = OrientedPlane.through([a, b, (0, 0, 0)])
    assert shifted.pull_back(plane).side(p) == plane.side(shifted.apply(p))
    assert shifted.inverse().apply(shifted.apply(p)) == p


def test_degenerate_examples():
    assert general_position_check([(0, 0, 0), (1, 0, 1), (0, 1, 2), (1, 1, 3)]).kind == "coplanar_quadruple"
    assert general_position_check([(0, 0, 1), (1, 0, 2), (2, 0, 3)]).kind == "vertical_triple"
    assert general_position_check([(0, 0, 1), (3, 1, 1)]).kind == "horizontal_pair"
    assert general_position_check([(0, 0, 0), (1, 0, 1), (0, 1, 2), (1, 1, 4)]) is None


def test_vertical_is_relative_to_direction():
    pts = [(0, 0, 1), (1, 0, 2), (2, 0, 5)]  # spans the plane y = 0
    assert general_position_check(pts, (0, 0, 1)).kind == "vertical_triple"
    assert general_position_check(pts, (1, 2, 3)) is None


@settings(max_examples=60, deadline=None)
@given(st.lists(point, min_size=4, max_size=9, unique=True))
def test_coplanar_fast_path_matches_brute_force(pts):
    ints = to_integer_coords(pts)
    import numpy as np

    found_fast = _coplanar_quadruple_int64(np.array(ints, dtype=np.int64))
    found_exact = _coplanar_quadruple_exact(ints)
    expected = brute_coplanar(pts)
    assert (found_fast is not None) == expected
    assert (found_exact is not None) == expected
    for found in (found_fast, found_exact):
        if found:
            a, b, c, d = (pts[i] for i in found)
            assert dot(cross(b - a, c - a), d - a) == 0


def test_canonical_instance_invariants():
    inst = canonicalize(random_points(23, 4))
    inst.check_invariants()
    assert inst.k == 2
    assert all(c.denominator == 1 for p in inst.red + inst.blue for c in p)
    # the transform carries input points to the stored canonical points
    pts = random_points(23, 4)
    assert inst.transform.apply(pts[inst.median_index]) == inst.median
    assert [inst.transform.apply(pts[i]) for i in inst.red_index] == list(inst.red)
    assert vertical_triple(list(inst.red + inst.blue) + [inst.median]) is None


def test_canonical_other_direction_and_small_k():
    inst = canonicalize(random_points(7, 2), direction=(1, -2, 5))
    inst.check_invariants()
    assert inst.k == 0
    with pytest.raises(ValueError):
        canonicalize(random_points(9, 2))


def test_canonicalize_rejects_degenerate():
    pts = list(random_points(15, 3))
    pts[1] = Point3(pts[1].x, pts[1].y, pts[0].z)
    with pytest.raises(DegenerateInputError):
        canonicalize(pts)


def test_padding_reaches_canonical_size():
    pts = list(random_points(20, 5))
    padded, record = pad_and_perturb(pts, seed=3)
    assert len(padded) == 23 and padded[:20] == pts
    assert record.dummy_indices == (20, 21, 22) and not record.jittered
    assert general_position_check(padded) is None
    assert pad_and_perturb(pts, seed=3) == (padded, record)


def test_perturbation_repairs_duplicates():
    pts = list(random_points(14, 6)) + [random_points(14, 6)[0]]
    with pytest.raises(DegenerateInputError):
        pad_and_perturb(pts, perturb=False)
    padded, record = pad_and_perturb(pts, seed=1)
    assert record.jittered and len(padded) == 15
    assert general_position_check(padded) is None


def test_jitter_is_small_and_seeded():
    pts = [Point3.of(0, 0, 0), Point3.of(1, 0, 0), Point3.of(0, 1, 0)]
    a = jitter(pts, _rng(5))
    assert a == jitter(pts, _rng(5))
    assert all(abs(c - d) <= Fraction(1, 4) for p, r in zip(pts, a) for c, d in zip(p, r))


def test_coplanar_quadruple_ignores_general_sets():
    assert coplanar_quadruple(list(random_points(31, 8))) is None
