import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from eightpart.grid_search import (
    GridSearchError,
    SignWalker,
    TrapezoidalRegion,
    is_grid_curve,
    local_degree,
    pi_image,
    round_bound,
    search,
    triangular_curve,
    winding,
    xy,
)
from eightpart.partition import oracle_pairs, xy_matrices
from eightpart.tracer import Vertex

from conftest import traced


def shoelace(path):
    return abs(sum(a * d - b * c for (a, b), (c, d) in zip(path, path[1:]))) // 2


def is_simple_closed(path):
    return path[0] == path[-1] and len(set(path[:-1])) == len(path) - 1


def square_winding(X, Y, i, j):
    ring = [(i, j), (i + 1, j), (i + 1, j + 1), (i, j + 1), (i, j)]
    return winding([(int(X[a, b]), int(Y[a, b])) for a, b in ring])


# ---------------------------------------------------------------------------
# winding numbers

def test_winding_of_square_around_origin():
    sq = [(1, -1), (1, 0), (1, 1), (0, 1), (-1, 1), (-1, 0), (-1, -1), (0, -1), (1, -1)]
    assert winding(sq) == 1
    assert winding(sq[::-1]) == -1


def test_winding_in_left_half_plane_is_zero():
    assert winding([(-1, -1), (-1, 0), (-1, 1), (-2, 1), (-2, 0), (-2, -1), (-1, -1)]) == 0


def test_touching_the_ray_does_not_count():
    path = [(1, -2), (2, -2), (3, -2), (3, -1), (2, -1), (2, 0), (2, -1), (1, -1), (1, -2)]
    assert winding(path) == 0


def test_winding_through_origin_is_undefined():
    assert winding([(0, 0), (1, 0), (1, 1), (0, 0)]) is None
    assert winding([(-1, 0), (1, 0), (1, 1), (-1, 1), (-1, 0)]) is None


@given(st.integers(1, 5), st.integers(-3, 3), st.integers(1, 3))
def test_winding_of_repeated_loops(r, shift, times):
    ring = [(r, y) for y in range(-r, r)] + [(x, r) for x in range(r, -r, -1)]
    ring += [(-r, y) for y in range(r, -r, -1)] + [(x, -r) for x in range(-r, r)]
    assert winding(ring * times + ring[:1]) == times
    # a loop shifted off the origin winds zero times
    far = [(x + 2 * r + 1 + abs(shift), y) for x, y in ring]
    assert winding(far + far[:1]) == 0


# ---------------------------------------------------------------------------
# the triangular curve and regions

def test_triangular_curve_smallest():
    assert triangular_curve(2) == [(0, 0), (1, 0), (1, 1), (0, 1), (0, 0)]


def test_triangular_curve_three():
    assert triangular_curve(3) == [(0, 0), (1, 0), (2, 0), (2, 1), (2, 2), (1, 2), (1, 1), (0, 1), (0, 0)]


@given(st.integers(2, 60))
def test_triangular_curve_shape(m):
    path = triangular_curve(m)
    assert is_simple_closed(path) and is_grid_curve(path)
    assert shoelace(path) == m * (m - 1) // 2 == TrapezoidalRegion.triangle(m).area


@given(st.integers(0, 30), st.integers(1, 12), st.integers(0, 30), st.integers(1, 12))
def test_region_boundary_encloses_its_cells(i_lo, w, j_lo, h):
    r = TrapezoidalRegion(i_lo, i_lo + w, j_lo, j_lo + h)
    if r.empty:
        return
    path = r.boundary()
    assert is_simple_closed(path) and is_grid_curve(path)
    assert shoelace(path) == r.area == len(list(r.cells()))


def test_split_square_block():
    a, b, _ = TrapezoidalRegion(10, 14, 0, 4).split()
    assert (a.area, b.area) == (8, 8) and a.height == b.height == 2


def test_split_single_row():
    a, b, chord = TrapezoidalRegion(10, 13, 0, 1).split()
    assert (a.area, b.area) == (2, 1)
    assert chord == [(12, 0), (12, 1)]


def test_split_three_rows():
    a, b, _ = TrapezoidalRegion(10, 12, 0, 3).split()
    assert sorted((a.height, b.height)) == [1, 2]
    assert max(a.area, b.area) * 3 == 2 * 6


def test_single_cell_is_not_split():
    with pytest.raises(ValueError):
        TrapezoidalRegion(3, 4, 1, 2).split()


@given(st.integers(0, 25), st.integers(1, 25), st.integers(0, 25), st.integers(1, 25), st.sampled_from([1, 2]))
def test_split_partitions_and_shrinks(i_lo, w, j_lo, h, unit):
    r = TrapezoidalRegion(i_lo, i_lo + w, j_lo, j_lo + h)
    if r.empty or r.area <= 1 or r.is_block(unit):
        return
    a, b, chord = r.split(unit)
    assert set(a.cells()) | set(b.cells()) == set(r.cells())
    assert not set(a.cells()) & set(b.cells())
    assert is_grid_curve(chord) and set(chord) <= set(a.boundary()) & set(b.boundary())
    if unit == 1:
        assert 6 * max(a.area, b.area) <= 5 * r.area


def test_round_bound():
    assert round_bound(1) == 1
    assert round_bound(36) == 21


# ---------------------------------------------------------------------------
# pi on traced curves

@pytest.mark.parametrize("n, seed", [(15, 1), (23, 2)])
def test_values_on_the_diagonal(n, seed):
    curve = traced(n, seed)
    N = 4 * curve.instance.k + 2
    for i, el in enumerate(curve.elements):
        X, Y = xy(curve, i, i)
        if isinstance(el, Vertex):
            assert X in (N - 1, N) and Y in (N - 1, N)
        else:
            assert (X, Y) == (N, N)
    assert xy(curve, curve.m - 1, 0) == (-N, -N)


def test_image_of_triangle_matches_recomputation(curve15):
    path = triangular_curve(curve15.m)
    image = pi_image(curve15, path)
    assert image == [xy(curve15, i, j) for i, j in path]
    assert is_grid_curve(image)


@pytest.mark.parametrize("n, seed", [(15, 1), (31, 3)])
def test_image_of_triangle_is_point_symmetric(n, seed):
    curve = traced(n, seed)
    m = curve.m
    for i in range(m):
        X, Y = xy(curve, i, 0)
        assert (X, Y) == tuple(-v for v in xy(curve, m - 1, i))


@pytest.mark.parametrize("n, seed", [(15, 1), (31, 3)])
def test_diagonal_side_is_confined(n, seed):
    curve = traced(n, seed)
    N = 4 * curve.instance.k + 2
    path = triangular_curve(curve.m)
    for (i, j), (X, Y) in zip(path, pi_image(curve, path)):
        if i - j <= 1:
            assert N - 2 <= X <= N + 1 and N - 2 <= Y <= N + 1


@pytest.mark.parametrize("seed", range(4))
def test_random_walks_obey_step_rule(seed):
    curve = traced(23, seed)
    rng = random.Random(seed)
    walker = SignWalker(curve, (0, 0))
    pos = (0, 0)
    path = [pos]
    for _ in range(400):
        di, dj = rng.choice([(1, 0), (-1, 0), (0, 1), (0, -1)])
        nxt = (pos[0] + di, pos[1] + dj)
        if 0 <= nxt[0] < curve.m and 0 <= nxt[1] < curve.m:
            pos = nxt
            path.append(pos)
    image = pi_image(curve, path, walker)
    assert is_grid_curve(image)
    assert image == [xy(curve, i, j) for i, j in path[::1]]


def test_red_step_leaves_y_unchanged(curve15):
    walker = SignWalker(curve15, (4, 2))
    for t in range(4, 10):
        before = walker.value
        after = walker.move(1, 0)
        step = curve15.step(t)
        changed = 0 if step.color == "red" else 1
        assert after[1 - changed] == before[1 - changed]
        assert abs(after[changed] - before[changed]) <= 1


@pytest.mark.parametrize("n, seed", [(15, 1), (15, 15), (23, 2)])
def test_grid_squares_never_wind_oddly(n, seed):
    curve = traced(n, seed)
    X, Y = xy_matrices(curve)
    for i in range(curve.m - 1):
        for j in range(curve.m - 1):
            w = square_winding(X, Y, i, j)
            assert w is None or w % 2 == 0


# ---------------------------------------------------------------------------
# search

@pytest.mark.parametrize("n, seed", [(15, 1), (15, 15), (23, 2), (31, 3)])
def test_search_finds_an_oracle_zero_of_odd_degree(n, seed):
    curve = traced(n, seed)
    res = search(curve)
    i, j = res.zero
    assert xy(curve, i, j) == (0, 0)
    assert isinstance(curve.elements[i], Vertex) and isinstance(curve.elements[j], Vertex)
    assert (i, j) in oracle_pairs(curve)
    assert local_degree(curve, i, j) in (1, -1)
    assert res.rounds <= res.bound


def test_search_log_is_additive(curve15):
    res = search(curve15)
    rounds = [e for e in res.log if "windings" in e]
    assert rounds
    parent = res.log[0]["winding"]
    for e in rounds:
        assert sum(e["windings"]) == parent
        assert e["winding"] % 2 == 1
        parent = e["winding"]


def test_zeros_sit_at_vertex_pairs_and_odd_degree_ones_are_valid():
    # a zero whose degree is even is a genuine zero of pi that does not cut eight octants
    curve = traced(15, 15)
    degrees = {z: local_degree(curve, *z) for z in oracle_pairs(curve)}
    assert all(i % 2 == 1 and j % 2 == 1 for i, j in degrees)
    assert sorted(degrees.values()) == [-1, 0, 0]


def test_search_rejects_even_length_curves(curve15):
    curve15_bad = type(curve15)(curve15.instance, curve15.elements[:-1], curve15.start_point)
    with pytest.raises(GridSearchError):
        search(curve15_bad)


def test_winding_tolerates_stationary_steps():
    sq = [(1, -1), (1, -1), (1, 0), (1, 1), (1, 1), (0, 1), (-1, 1), (-1, 0), (-1, -1), (0, -1), (0, -1), (1, -1)]
    assert winding(sq) == 1
    assert is_grid_curve(sq)
