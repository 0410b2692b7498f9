import logging
import random
from collections import Counter
from fractions import Fraction

import pytest

from tmesh_spline.mesh import (
    BOUNDARY_COPY,
    EXTENDED,
    ORIGINAL,
    HierSpec,
    copy_counts,
    extend,
    generate,
    tensor_mesh,
)

F = Fraction


def test_tensor_extension_line_counts():
    mesh = generate(HierSpec(m=3, n=3, p=5, q=6)).mesh
    extended = extend(mesh, 3, 3)
    assert len(extended.x_lines) == 12
    assert len(extended.y_lines) == 13
    assert len(extended.cells) == 11 * 12
    assert extended.is_tensor
    assert extended.inner_domain == mesh.domain
    assert extended.domain == (-3, 8, -3, 9)


def test_linear_extension_adds_one_line_per_side():
    mesh = tensor_mesh([0, 1, 2], [0, 1])
    extended = extend(mesh, 1, 1)
    assert extended.x_lines == (-1, 0, 1, 2, 3)
    assert extended.y_lines == (-1, 0, 1, 2)


def test_copy_spacing_uses_smallest_cell_side():
    mesh = tensor_mesh([0, "1/2", 2], [0, 3])
    extended = extend(mesh, 2, 1)
    assert extended.x_lines[:2] == (F(-1), F(-1, 2))
    assert extended.y_lines[-1] == F(7, 2)


@pytest.mark.parametrize(
    "pairing, expected",
    [("algebraic", (3, 2)), ("literal", (2, 3))],
)
def test_copy_counts(pairing, expected):
    assert copy_counts(3, 2, pairing) == expected


def test_unknown_pairing():
    with pytest.raises(ValueError):
        copy_counts(2, 2, "diagonal")


def test_literal_pairing_swaps_counts(caplog):
    mesh = tensor_mesh([0, 1, 2], [0, 1, 2])
    with caplog.at_level(logging.WARNING):
        extended = extend(mesh, 3, 1, pairing="literal")
    assert len(extended.x_lines) == 3 + 2
    assert len(extended.y_lines) == 3 + 6
    assert "Literal extension pairing" in caplog.text


def test_provenance_of_extended_ledges():
    mesh = tensor_mesh([0, 1, 2], [0, 1, 2])
    extended = extend(mesh, 2, 2)
    provenance = Counter(e.provenance for e in extended.ledges)
    assert provenance[BOUNDARY_COPY] == 8
    # every original line reaches the boundary and is prolonged
    assert provenance[EXTENDED] == 6
    assert provenance[ORIGINAL] == 0


def test_interior_segment_keeps_its_span(bicubic_mesh, bicubic_extended):
    inner = bicubic_mesh.mesh.domain
    kept = [e for e in bicubic_extended.ledges if e.provenance == ORIGINAL]
    assert kept
    for e in kept:
        lo, hi = (inner.xmin, inner.xmax) if e.orientation == "horizontal" else (inner.ymin, inner.ymax)
        assert lo < e.lo and e.hi < hi


def test_random_spacing_is_seeded():
    mesh = tensor_mesh([0, 1, 2], [0, 1, 2])
    a = extend(mesh, 2, 2, spacing="random", rng=random.Random(7))
    b = extend(mesh, 2, 2, spacing="random", rng=random.Random(7))
    assert a.x_lines == b.x_lines and a.y_lines == b.y_lines
    assert len(a.x_lines) == 7
    assert all(x < 0 for x in a.x_lines[:2])


def test_extending_twice_warns(caplog):
    extended = extend(tensor_mesh([0, 1], [0, 1]), 1, 1)
    with caplog.at_level(logging.WARNING):
        extend(extended, 1, 1)
    assert "already an extension" in caplog.text
