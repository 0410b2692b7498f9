import random
from fractions import Fraction

import pytest

from tmesh_spline.algebra import LinearSystem, X, Y, echelon_rank, normalize_integer, nullspace_basis, nullspace_dim, rank, solve
from tmesh_spline.algebra.polynomial import bidegree, coefficients, divisible_by_power, evaluate
from tmesh_spline.errors import DegenerateKnotsError, NotConformalError, NotInteriorError
from tmesh_spline.mesh import Segment, build_tmesh, tensor_mesh, tensor_segments
from tmesh_spline.spline import (
    ConformalityVector,
    SplineFn,
    assemble_W,
    bspline_conformality,
    cofactors_at,
    eval_spline,
    extract_cofactors,
    lay_tensor,
    ledge_system,
    outer_polynomials,
    piecewise_polynomials,
    smoothing_cofactor,
    spline_of,
    tensor_conformality,
    vanished_vertices,
    w_nullspace,
)

F = Fraction
HAT = (F(1), F(-2), F(1))


def hat(mesh, origin=(0, 0)):
    """Bilinear hat on the unit cells starting at ``origin``."""
    x0, y0 = origin
    return lay_tensor(mesh, 1, 1, [F(x0 + i) for i in range(3)], [F(y0 + j) for j in range(3)], HAT, HAT)


def line_mesh(count):
    """Vertical lines x = 0..count-1 crossing one interior horizontal line at y = 1."""
    xs = [F(i) for i in range(count)]
    return build_tmesh(tensor_segments(xs, [F(0), F(1), F(2)]))


@pytest.mark.parametrize("count, degree, expected", [(6, 3, 2), (4, 3, 0), (7, 3, 3), (3, 2, 0), (5, 1, 3)])
def test_ledge_system_nullity(count, degree, expected):
    mesh = line_mesh(count)
    ledge = mesh.covering("horizontal", F(1), F(0))
    assert ledge.size == count
    assert nullspace_dim(ledge_system(ledge, degree)) == expected


def test_ledge_system_nullity_random_knots(rng):
    checked = 0
    while checked < 100:
        count = rng.randint(2, 9)
        degree = rng.randint(1, 5)
        xs = sorted({F(rng.randint(-40, 40), rng.randint(1, 4)) for _ in range(count)})
        if len(xs) < 2:
            continue
        checked += 1
        mesh = build_tmesh(tensor_segments(xs, [F(0), F(1), F(2)]))
        ledge = mesh.covering("horizontal", F(1), xs[0])
        assert nullspace_dim(ledge_system(ledge, degree)) == max(0, len(xs) - degree - 1)
        assert nullspace_dim(ledge_system(ledge, degree, shifted=True)) == max(0, len(xs) - degree - 1)


def test_nullspace_basis_is_normalized():
    rows = ((("a", F(1)), ("b", F(1)), ("c", F(1))), (("a", F(0)), ("b", F(1)), ("c", F(2))))
    (vector,) = nullspace_basis(LinearSystem(("a", "b", "c"), rows))
    assert vector == {"a": 1, "b": -2, "c": 1}


def test_rank_and_solve():
    system = LinearSystem((0, 1), (((0, F(1, 2)), (1, F(1))), ((0, F(1)), (1, F(2)))))
    assert rank(system) == 1
    solution = solve(system, [F(1), F(2)])
    assert system.residuals(solution) == [1, 2]
    assert solve(system, [F(1), F(1)]) is None
    assert solve(LinearSystem((0,), ()), []) == {}


def test_echelon_rank_matches_rref(rng):
    assert echelon_rank(LinearSystem((0, 1), (((0, F(1, 2)), (1, F(1))), ((0, F(1)), (1, F(2)))))) == 1
    for _ in range(40):
        columns = tuple(range(rng.randint(1, 9)))
        rows = tuple(
            tuple((j, F(rng.randint(-3, 3), rng.randint(1, 4))) for j in columns if rng.random() < 0.4)
            for _ in range(rng.randint(0, 10))
        )
        # duplicates and pairwise sums (concatenated sparse rows add up)
        rows += rows[:2] + tuple(a + b for a, b in zip(rows[::2], rows[1::2]))
        system = LinearSystem(columns, rows)
        assert echelon_rank(system) == rank(system)


def test_normalize_integer():
    assert normalize_integer([F(-1, 2), F(1), F(0)]) == [1, -2, 0]
    assert normalize_integer([F(0), F(0)]) == [0, 0]


@pytest.mark.parametrize(
    "knots, degree, expected",
    [
        ((0, 1, 2), 1, (1, -2, 1)),
        ((0, 1, 2, 3), 2, (1, -3, 3, -1)),
        ((0, 1, 3, 4), 2, (1, -2, 2, -1)),
        ((0, 1, 2, 3, 4), 3, (1, -4, 6, -4, 1)),
    ],
)
def test_bspline_conformality(knots, degree, expected):
    assert bspline_conformality([F(t) for t in knots], degree) == expected


def test_bspline_signs_alternate(rng):
    for degree in range(1, 6):
        checked = 0
        while checked < 20:
            knots = sorted({F(rng.randint(-60, 60), rng.randint(1, 5)) for _ in range(degree + 2)})
            if len(knots) != degree + 2:
                continue
            checked += 1
            vector = bspline_conformality(knots, degree)
            assert all(a * b < 0 for a, b in zip(vector, vector[1:])), knots
            assert vector[0] > 0


@pytest.mark.parametrize("knots, degree", [((0, 1, 2), 2), ((0, 1, 1), 1), ((2, 1, 3), 1)])
def test_bspline_degenerate_knots(knots, degree):
    with pytest.raises(DegenerateKnotsError):
        bspline_conformality([F(t) for t in knots], degree)


def test_tensor_conformality_outer_product():
    grid = tensor_conformality(HAT, (F(1), F(-3), F(3), F(-1)))
    assert len(grid) == 3 and len(grid[0]) == 4
    assert grid[1] == [F(-2), F(6), F(-6), F(2)]


def test_hat_values():
    mesh = tensor_mesh([0, 1, 2], [0, 1, 2])
    f = spline_of(hat(mesh))
    assert eval_spline(f, F(1), F(1)) == 1
    assert eval_spline(f, F(1, 2), F(1, 2)) == F(1, 4)
    assert eval_spline(f, F(3, 2), F(1)) == F(1, 2)
    assert eval_spline(f, F(3), F(3)) == 0
    assert eval_spline(f, F(-1), F(1)) == 0


def test_hat_pieces():
    mesh = tensor_mesh([0, 1, 2], [0, 1, 2])
    f = spline_of(hat(mesh))
    pieces = piecewise_polynomials(f)
    assert coefficients(pieces[0]) == {(1, 1): 1}
    assert all(not poly for poly in outer_polynomials(f).values())


def test_hat_cofactors():
    mesh = tensor_mesh([0, 1, 2], [0, 1, 2])
    f = spline_of(hat(mesh))
    triple = cofactors_at(f, 4)
    assert triple.k == 4
    with pytest.raises(NotInteriorError):
        cofactors_at(f, 0)


def test_extract_cofactors_from_pieces():
    f2 = 0 * X
    f3 = (Y + 3) * (X - 1)
    f1 = (2 * X + 5) * (Y - 2)
    f4 = f1 + f3 + 7 * (X - 1) * (Y - 2)
    triple = extract_cofactors(f1, f2, f3, f4, F(1), F(2), 1, 1)
    assert triple.a == (3, 1)
    assert triple.b == (5, 2)
    assert triple.k == 7


def test_smoothing_cofactor_across_edge():
    mesh = tensor_mesh([0, 1, 2], [0, 1, 2])
    f = spline_of(hat(mesh))
    assert smoothing_cofactor(f, (1, 4)) == -2 * Y
    assert smoothing_cofactor(f, (3, 4)) == -2 * X


def test_nonconformal_vector_is_refused():
    mesh = tensor_mesh([0, 1, 2], [0, 1, 2])
    cv = ConformalityVector({4: F(1)}, mesh, 1, 1)
    assert not cv.is_conformal()
    with pytest.raises(NotConformalError):
        spline_of(cv)
    assert eval_spline(SplineFn(cv), F(2), F(2), check=False) == 1


def test_vector_outside_vertices_refused():
    mesh = tensor_mesh([0, 1, 2], [0, 1, 2])
    with pytest.raises(NotConformalError):
        ConformalityVector.from_points(mesh, 1, 1, {(F(1, 2), F(1)): F(1)})


def test_vanished_vertices():
    mesh = tensor_mesh(range(5), range(5))
    assert len(vanished_vertices(hat(mesh))) == 5


def test_transfer_keeps_points():
    small = tensor_mesh([0, 1, 2], [0, 1, 2])
    large = tensor_mesh(range(5), range(5))
    moved = hat(small).transfer(large)
    assert moved.by_point() == hat(small).by_point()
    assert moved.is_conformal()


def test_tensor_nullspace_dimension():
    # bilinear tensor splines vanishing outside a 4 x 4 line grid: (4 - 2) * (4 - 2)
    mesh = tensor_mesh(range(4), range(4))
    basis = w_nullspace(mesh, 1, 1)
    assert len(basis) == 4
    assert all(cv.is_conformal() for cv in basis)


def test_shifted_moments_same_nullity():
    mesh = tensor_mesh([0, "1/3", 1, 2, "7/2"], [0, 1, "3/2", 4])
    assert nullspace_dim(assemble_W(mesh, 2, 1, shifted=True)) == nullspace_dim(assemble_W(mesh, 2, 1, shifted=False))


def random_combination(rng, basis, mesh, m, n):
    combined = {}
    for cv in basis:
        c = F(rng.randint(-5, 5), rng.randint(1, 3))
        for vid, k in cv.entries.items():
            combined[vid] = combined.get(vid, F(0)) + c * k
    return ConformalityVector(combined, mesh, m, n)


def test_random_conformal_vectors(rng):
    mesh = tensor_mesh(range(6), range(5))
    basis = w_nullspace(mesh, 2, 2)
    for _ in range(5):
        f = spline_of(random_combination(rng, basis, mesh, 2, 2))
        assert all(not poly for poly in outer_polynomials(f).values())
        pieces = piecewise_polynomials(f)
        for cell in mesh.cells:
            i, j = bidegree(pieces[cell.id])
            assert i <= 2 and j <= 2
            assert evaluate(pieces[cell.id], *cell.center) == eval_spline(f, *cell.center)
        # pieces match across the vertical edge between the first two cells up to C^1
        left, right = piecewise_polynomials(f)[0], piecewise_polynomials(f)[1]
        assert divisible_by_power(right - left, X, F(1), 2)


def crossed_mesh():
    """5 x 5 unit grid with two half-grid segments crossing at its centre, leaving T-vertices at their ends."""
    xs = [F(i) for i in range(6)]
    extra = [Segment("vertical", F(5, 2), F(1), F(4)), Segment("horizontal", F(5, 2), F(1), F(4))]
    return build_tmesh(tensor_segments(xs, xs) + extra)


@pytest.mark.slow
def test_cofactor_round_trip_on_random_vectors(rng):
    mesh = crossed_mesh()
    basis = w_nullspace(mesh, 2, 1)
    interior = [v.id for v in mesh.vertices if v.interior]
    assert basis and interior
    for _ in range(50):
        cv = random_combination(rng, basis, mesh, 2, 1)
        f = spline_of(cv)
        for vid in interior:
            assert cofactors_at(f, vid).k == cv[vid]
