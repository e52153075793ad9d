import numpy as np
import pytest

from isolab.quadrature import (
    QuadratureError,
    QuadratureSpec,
    graded_breaks,
    integrate_refined,
    panel_nodes,
    refine_breaks,
)


def test_panel_nodes_integrate_polynomial_exactly():
    # Gauss-Legendre with 24 points is exact for degree <= 47 per panel
    nodes, weights = panel_nodes(np.array([0.0, 0.5, 1.0]), 24)
    val = float(np.dot(weights, nodes**6))
    assert abs(val - 1.0 / 7.0) < 1e-15


def test_refine_breaks_halves_every_panel():
    out = refine_breaks(np.array([0.0, 1.0, 3.0]))
    assert np.allclose(out, [0.0, 0.5, 1.0, 2.0, 3.0])


def test_graded_breaks_inserts_interior_points_exactly():
    b = graded_breaks(0.0, 4.0, interior=(np.log(2.0),), max_step=1.0)
    assert np.log(2.0) in b
    assert b[0] == 0.0 and b[-1] == 4.0
    assert np.max(np.diff(b)) <= 1.0 + 1e-12


def test_graded_breaks_rejects_empty_range():
    with pytest.raises(ValueError):
        graded_breaks(1.0, 1.0)


def test_integrate_refined_smooth():
    spec = QuadratureSpec(tol=1e-12)
    val = integrate_refined(np.exp, np.array([0.0, 1.0]), spec)
    assert abs(val - (np.e - 1.0)) < 1e-12


def test_integrate_refined_kink_with_split():
    # |x - 1| has a kink; splitting at the kink keeps panels analytic
    spec = QuadratureSpec(tol=1e-12)
    breaks = graded_breaks(0.0, 2.0, interior=(1.0,))
    val = integrate_refined(lambda x: np.abs(x - 1.0), breaks, spec)
    assert abs(val - 1.0) < 1e-12


def test_integrate_refined_is_deterministic():
    spec = QuadratureSpec(tol=1e-10)
    f = lambda x: np.sin(3.0 * x) ** 2
    a = integrate_refined(f, np.array([0.0, 2.0]), spec)
    b = integrate_refined(f, np.array([0.0, 2.0]), spec)
    assert a == b


def test_integrate_refined_raises_when_budget_unreachable():
    # square-root singularity converges too slowly for 1 doubling at 1e-14
    spec = QuadratureSpec(tol=1e-14, points=4, max_doublings=1)
    with pytest.raises(QuadratureError):
        integrate_refined(lambda x: np.sqrt(np.abs(x)), np.array([0.0, 1.0]), spec)


def test_spec_validation():
    with pytest.raises(ValueError):
        QuadratureSpec(tol=0.0)
    with pytest.raises(ValueError):
        QuadratureSpec(points=1)
    with pytest.raises(ValueError):
        QuadratureSpec(strip_margin=1.0)
