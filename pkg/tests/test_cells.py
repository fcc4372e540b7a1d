from fractions import Fraction as F

import pytest

from conftest import rank1_tate_data
from tropical_heights.cells import domains_of_linearity
from tropical_heights.degeneration import DegenerationData
from tropical_heights.errors import InputError
from tropical_heights.tropical import TropicalTheta, generate_theta_terms


def test_rank1_tate_cells():
    theta = generate_theta_terms(rank1_tate_data(5))
    cx = domains_of_linearity(theta)
    intervals = {tuple(v[0] for v in c.vertices) for c in cx.cells}
    assert (F(-5), F(0)) in intervals
    assert (F(0), F(5)) in intervals
    # breakpoints sit on lattice translates of 0 (Voronoi of 5Z shifted by -5/2)
    assert all(b % 5 == 0 for b in cx.breakpoints())
    assert len(cx.quotient_cells) == 1


def test_rank1_active_terms_follow_cocycle():
    theta = generate_theta_terms(rank1_tate_data(4))
    cx = domains_of_linearity(theta)
    by_interval = {
        tuple(v[0] for v in c.vertices): c.active_term for c in cx.cells
    }
    assert by_interval[(F(0), F(4))] == (0,)
    assert by_interval[(F(-4), F(0))] == (1,)
    assert by_interval[(F(4), F(8))] == (-1,)


def test_single_term_single_cell():
    theta = TropicalTheta(rank1_tate_data(3), {(0,): F(0)}, margin=1)
    cx = domains_of_linearity(theta)
    assert len(cx.cells) == 1
    assert cx.cells[0].active_term == (0,)


def test_rank2_identity_voronoi_squares():
    d = DegenerationData(
        rank=2, embedding=[[1, 0], [0, 1]], gram=[[1, 0], [0, 1]],
        linear_part=[-1, -1],
    )
    cx = domains_of_linearity(generate_theta_terms(d))
    assert len(cx.quotient_cells) == 1
    cell = cx.quotient_cells[0]
    assert len(cell.vertices) == 4
    # Voronoi cell of the origin shifted by -k with k = (-1/2, -1/2)
    assert set(cell.vertices) == {
        (F(0), F(0)), (F(1), F(0)), (F(1), F(1)), (F(0), F(1)),
    }
    # every window cell is a translate: four vertices each
    assert all(len(c.vertices) == 4 for c in cx.cells)


def test_rank2_cells_tile_measure():
    # areas of the quotient cells add up to the covolume
    d = DegenerationData(
        rank=2, embedding=[[2, 1], [1, 2]], gram=[[2, 1], [1, 2]],
        linear_part=[0, 2],
    )
    cx = domains_of_linearity(generate_theta_terms(d))
    from tropical_heights.cells import _polygon_area2

    total = sum(abs(_polygon_area2(list(c.vertices))) for c in cx.quotient_cells) / 2
    assert total == d.covolume


def test_rank3_rejected():
    d = DegenerationData(
        rank=3,
        embedding=[[1, 0, 0], [0, 1, 0], [0, 0, 1]],
        gram=[[2, 0, 0], [0, 2, 0], [0, 0, 2]],
        linear_part=[0, 0, 0],
    )
    with pytest.raises(InputError):
        domains_of_linearity(generate_theta_terms(d))


def test_cell_interiors_are_strict():
    # at a cell's midpoint the active term is the unique minimizer
    theta = generate_theta_terms(rank1_tate_data(6))
    cx = domains_of_linearity(theta)
    for cell in cx.cells:
        a, b = cell.vertices[0][0], cell.vertices[1][0]
        mid = [(a + b) / 2]
        values = {
            u: coeff + u[0] * mid[0] for u, coeff in theta.terms.items()
        }
        best = min(values.values())
        winners = [u for u, v in values.items() if v == best]
        assert winners == [cell.active_term]
