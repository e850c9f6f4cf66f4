import json
import random

import pytest

from eightpart.exact_geom import BLUE, RED, canonicalize
from eightpart.tracer import Edge, Vertex, side_counts, trace, trace_log_lines

from conftest import canonical, random_points, traced


@pytest.mark.parametrize("n, seed", [(15, 1), (23, 2), (31, 3), (47, 4)])
def test_edges_lie_on_both_median_levels(n, seed):
    curve = traced(n, seed)
    k = curve.instance.k
    for i, el in enumerate(curve.elements):
        if isinstance(el, Edge):
            assert side_counts(curve, i) == (2 * k + 1, 2 * k + 1)
            sr, sb = curve.sign_vectors(i)
            assert sr[el.red] == 0 and sb[el.blue] == 0
            assert sr.count(0) == 1 and sb.count(0) == 1


@pytest.mark.parametrize("n, seed", [(15, 1), (23, 2), (31, 3)])
def test_curve_is_y_monotone_and_alternates(n, seed):
    curve = traced(n, seed)
    assert curve.m % 2 == 1
    assert all(isinstance(e, Edge) == (i % 2 == 0) for i, e in enumerate(curve.elements))
    ys = [v.position.y for v in curve.vertices]
    assert all(a < b for a, b in zip(ys, ys[1:]))


@pytest.mark.parametrize("n, seed", [(15, 1), (23, 5)])
def test_consecutive_elements_differ_in_one_sign(n, seed):
    curve = traced(n, seed)
    for i in range(curve.m - 1):
        a, b = curve.sign_vectors(i), curve.sign_vectors(i + 1)
        diffs = [(c, t) for c, va, vb in ((RED, *map(list, (a[0], b[0]))), (BLUE, *map(list, (a[1], b[1])))) for t in range(len(va)) if va[t] != vb[t]]
        st = curve.step(i)
        assert diffs == [(st.color, st.index)]
        old = (a[0] if st.color == RED else a[1])[st.index]
        new = (b[0] if st.color == RED else b[1])[st.index]
        assert (old, new) == (st.old, st.new) and 0 in (old, new)


def test_vertices_record_incident_planes():
    curve = traced(23, 2)
    for i, el in enumerate(curve.elements):
        if isinstance(el, Vertex):
            prev, nxt = curve.elements[i - 1], curve.elements[i + 1]
            assert set(prev.planes) | set(nxt.planes) == set(el.planes)
            assert el.new_plane in nxt.planes and el.new_plane not in prev.planes
            assert el.leaving in prev.planes and el.leaving not in nxt.planes
            assert el.new_plane[0] == el.leaving[0]
            for color, idx in el.planes:
                plane = (curve.instance.red_planes if color == RED else curve.instance.blue_planes)[idx]
                assert plane.above_sign(el.position) == 0


@pytest.mark.parametrize("n, seed", [(15, 1), (31, 3)])
def test_half_lines_have_opposite_signs(n, seed):
    curve = traced(n, seed)
    first, last = curve.sign_vectors(0), curve.sign_vectors(curve.m - 1)
    # every plane not on either half-line swaps sides between the ends
    for f, la in zip(first, last):
        for a, b in zip(f, la):
            assert a == 0 or b == 0 or a == -b


def test_smallest_instance():
    curve = trace(canonical(7, 3))
    assert curve.instance.k == 0 and curve.m >= 3
    assert all(side_counts(curve, i) == (1, 1) for i in range(0, curve.m, 2))


def test_input_order_does_not_change_the_curve():
    pts = list(random_points(23, 6))
    shuffled = pts[:]
    random.Random(1).shuffle(shuffled)
    a, b = trace(canonicalize(pts)), trace(canonicalize(shuffled))
    assert a.m == b.m
    assert [v.position for v in a.vertices] == [v.position for v in b.vertices]


def test_json_is_stable():
    curve = traced(15, 1)
    doc = curve.to_json()
    assert doc["m"] == curve.m and "timings" not in doc
    assert json.dumps(doc, sort_keys=True) == json.dumps(trace(canonical(15, 1)).to_json(), sort_keys=True)
    assert "timings" in curve.to_json(include_timings=True)
    log = list(trace_log_lines(curve))
    assert len(log) == len(curve.vertices) and log[0]["element"] == 1
