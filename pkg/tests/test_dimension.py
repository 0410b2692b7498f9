import random
from fractions import Fraction

import pytest

from tmesh_spline.algebra import nullspace_dim
from tmesh_spline.errors import NegativeResultError, NotInClassError
from tmesh_spline.mesh import HierSpec, extend, generate, random_hierspec, tensor_mesh
from tmesh_spline.spline import (
    Census,
    cellwise_system,
    census,
    dim_cellwise_oracle,
    dim_conformality_oracle,
    dim_formula,
    dim_spline_space,
    dim_unrestricted_formula,
)


def test_bicubic_census(bicubic_mesh, bicubic_extended):
    c = census(bicubic_extended, bicubic_mesh.forest)
    assert c == Census(166, 21, 19, 3, (0, 1, 2))
    assert dim_formula(c, 3, 3) == 93


def test_bicubic_conformality_oracle(bicubic_extended):
    assert dim_conformality_oracle(bicubic_extended, 3, 3) == 93


def test_tensor_census():
    hm = generate(HierSpec(m=3, n=3, p=5, q=6))
    c = census(extend(hm.mesh, 3, 3), hm.forest)
    assert c == Census(110, 11, 10, 0, (0,))
    assert dim_formula(c, 3, 3) == 72


@pytest.mark.parametrize("m, n, p, q", [(2, 2, 3, 2), (3, 3, 5, 6), (2, 3, 4, 1), (3, 2, 1, 1)])
def test_tensor_closed_form(m, n, p, q):
    hm = generate(HierSpec(m=m, n=n, p=p, q=q))
    report = dim_spline_space(hm, paths=("formula", "conformality"))
    assert report.formula == report.conformality == (p + m) * (q + n)


def test_isolated_cell_all_paths(isolated_cell):
    report = dim_spline_space(isolated_cell)
    assert report.census == Census(37, 7, 7, 1, (0, 1))
    assert report.values == {"formula": 25, "conformality": 25, "cellwise": 25}
    assert report.agreement
    assert dim_unrestricted_formula(report.census) == 25
    assert set(report.timings) == {"extend", "formula", "conformality", "cellwise"}


def test_cellwise_on_small_tensor_meshes():
    assert dim_cellwise_oracle(tensor_mesh([0, 1, 2], [0, 1]), 1, 1) == 6
    assert dim_cellwise_oracle(tensor_mesh([0, 1], [0, 1]), 3, 2) == 12
    assert dim_cellwise_oracle(tensor_mesh([0, 1, 2, 3], [0, 1, 2]), 2, 2) == 5 * 4


def test_cellwise_homogeneous_matches_interior_splines():
    # C^1 biquadratics vanishing to first order on the boundary of a 4 x 4 grid
    mesh = tensor_mesh(range(5), range(5))
    assert dim_cellwise_oracle(mesh, 2, 2, homogeneous=True) == 4


def test_formula_refused_on_plain_mesh():
    mesh = tensor_mesh([0, 1, 2], [0, 1, 2])
    with pytest.raises(NotInClassError):
        dim_spline_space(mesh, 2, 2, paths=("formula",))
    report = dim_spline_space(mesh, 2, 2)
    assert report.formula is None
    assert report.formula_error == "NotInClassError"
    assert report.conformality == report.cellwise == 16


def test_unknown_path():
    with pytest.raises(ValueError):
        dim_spline_space(tensor_mesh([0, 1], [0, 1]), 1, 1, paths=("guess",))


def test_negative_closed_form():
    with pytest.raises(NegativeResultError):
        dim_formula(Census(0, 5, 5, 0), 3, 3)


@pytest.mark.parametrize("counts", [(-1, 0, 0, 0), (1, 1, 1, 2, (0, 1))])
def test_census_validation(counts):
    with pytest.raises(ValueError):
        Census(*counts)


def test_ledger_attached(isolated_cell):
    report = dim_spline_space(isolated_cell, paths=("formula",), with_ledger=True)
    assert [row["level"] for row in report.ledger] == [1, 0]
    assert all(row["balanced"] for row in report.ledger)


def test_literal_pairing_for_equal_degrees(isolated_cell):
    report = dim_spline_space(isolated_cell, pairing="literal", paths=("formula", "conformality"))
    assert report.formula == report.conformality == 25


def test_bicubic_all_paths_within_budget(bicubic_mesh):
    report = dim_spline_space(bicubic_mesh)
    assert report.values == {"formula": 93, "conformality": 93, "cellwise": 93}
    for path in ("formula", "conformality", "cellwise"):
        assert report.timings[path] < 10, report.timings


def test_cellwise_system_is_shifted_per_cell():
    mesh = tensor_mesh([0, 1, "5/2"], [0, 2])
    system = cellwise_system(mesh, 2, 1)
    assert system.shape == (2 * 2, 2 * 6)
    # the right cell enters each row through one coefficient about its own corner
    right = max(mesh.cells, key=lambda c: c.x0).id
    for row in system.rows:
        assert [key for key, _ in row if key[0] == right] in ([(right, 0, 0)], [(right, 0, 1)], [(right, 1, 0)], [(right, 1, 1)])
    assert nullspace_dim(system) == dim_cellwise_oracle(mesh, 2, 1) == 4 * 2


@pytest.mark.slow
@pytest.mark.parametrize("m, n", [(2, 2), (2, 3), (3, 3), (4, 3)])
def test_random_meshes_all_paths_agree(m, n):
    rng = random.Random(1000 * m + n)
    for _ in range(50):
        hm = generate(random_hierspec(rng, m, n, max_p=5, max_q=5, max_levels=2))
        report = dim_spline_space(hm, spacing="random", rng=rng)
        assert report.formula is not None and report.agreement, (report.values, hm.spec.model_dump())


def test_random_tensor_meshes_extended_dimension(rng):
    for _ in range(50):
        m, n = rng.randint(1, 4), rng.randint(1, 4)
        xs = sorted({Fraction(rng.randint(-30, 30), rng.randint(1, 6)) for _ in range(rng.randint(2, 4))})
        ys = sorted({Fraction(rng.randint(-30, 30), rng.randint(1, 6)) for _ in range(rng.randint(2, 4))})
        if len(xs) < 2 or len(ys) < 2:
            continue
        extended = extend(tensor_mesh(xs, ys), m, n)
        assert len(extended.x_lines) == len(xs) + 2 * m and len(extended.y_lines) == len(ys) + 2 * n
        expected = (len(extended.x_lines) - m - 1) * (len(extended.y_lines) - n - 1)
        assert dim_conformality_oracle(extended, m, n) == expected == (len(xs) - 1 + m) * (len(ys) - 1 + n)


@pytest.mark.slow
def test_biquadratic_unrestricted_count_matches_oracles(rng):
    for _ in range(50):
        hm = generate(random_hierspec(rng, 2, 2, max_p=5, max_q=5, max_levels=3))
        report = dim_spline_space(hm)
        assert report.formula == dim_unrestricted_formula(report.census), hm.spec.model_dump()
        assert report.values == {"formula": report.formula, "conformality": report.formula, "cellwise": report.formula}


def test_plain_mesh_needs_degrees():
    with pytest.raises(ValueError, match="m and n"):
        dim_spline_space(tensor_mesh([0, 1], [0, 1]))
    with pytest.raises(ValueError, match="n"):
        dim_spline_space(tensor_mesh([0, 1], [0, 1]), 2)


@pytest.mark.slow
def test_random_spacing_does_not_change_dimension(bicubic_mesh):
    report = dim_spline_space(bicubic_mesh, spacing="random", rng=random.Random(3), paths=("formula", "conformality"))
    assert report.formula == report.conformality == 93
