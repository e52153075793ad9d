import numpy as np
import pytest

from isolab.holodisc import (
    DiscExhaustion,
    HpFamily,
    MatrixOperator,
    NotCharacterizable,
    RotationOperator,
    SupFamily,
    TaylorFunction,
    TruncationOverflow,
    WeightedCompositionOperator,
    apply_operator,
    characterize_isometry,
    hp_seminorm,
    isometry_test,
    operator_matrix,
    random_taylor,
    standard_probes,
    strict_monotonicity_check,
    sup_seminorm,
    three_circle_check,
)


def test_taylor_trims_trailing_zeros():
    f = TaylorFunction((1.0, 2.0, 0.0, 0.0))
    assert f.degree == 1
    assert TaylorFunction((0.0,)).degree == 0


def test_taylor_evaluation_horner():
    f = TaylorFunction((1.0, 0.0, -2.0))
    z = 0.5 + 0.25j
    assert abs(f(z) - (1.0 - 2.0 * z**2)) < 1e-15


def test_taylor_algebra():
    f = TaylorFunction((1.0, 1.0))
    g = TaylorFunction((0.0, 0.0, 1.0))
    assert (f + g).coefficients == (1.0, 1.0, 1.0)
    assert (f - f).coefficients == (0.0,)
    # (1+z) * z^2 = z^2 + z^3
    assert (f * g).coefficients == (0.0, 0.0, 1.0, 1.0)
    # (1+z) o z^2 = 1 + z^2
    assert f.compose(g).coefficients == (1.0, 0.0, 1.0)


def test_taylor_truncation_tracks_residual():
    f = TaylorFunction((1.0, 0.0, 3.0, 4.0))
    t = f.truncated(1)
    assert t.degree <= 1
    assert abs(t.truncation_residual - 5.0) < 1e-15
    with pytest.raises(TruncationOverflow):
        f.truncated(1, tol=1.0)


def test_random_taylor_degree_and_significance():
    rng = np.random.default_rng(0)
    for _ in range(20):
        f = random_taylor(rng, 12, min_significant=2)
        assert f.degree == 12
        assert int(np.sum(np.abs(f.array) >= 0.1)) >= 2


def test_exhaustion_default_radii():
    exh = DiscExhaustion.default(3)
    assert np.allclose(exh.radii, (0.5, 2.0 / 3.0, 0.75))
    assert exh.indices == (2, 3, 4)


def test_exhaustion_restrict():
    exh = DiscExhaustion.default(4)
    sub = exh.restrict((3, 5))
    assert sub.radii == (exh.radii[1], exh.radii[3])
    with pytest.raises(ValueError):
        exh.restrict((99,))


def test_exhaustion_validation():
    with pytest.raises(ValueError):
        DiscExhaustion((0.5, 0.5))
    with pytest.raises(ValueError):
        DiscExhaustion((0.5,), circle_samples=100)  # not a power of two


# ---------------------------------------------------------------------------
# seminorms
# ---------------------------------------------------------------------------


def test_sup_seminorm_monomial_closed_form():
    # sup over a circle of |c z^k| is |c| r^k
    f = TaylorFunction.monomial(5, 2.0 - 1.0j)
    r = 0.7
    want = abs(2.0 - 1.0j) * r**5
    assert abs(sup_seminorm(f, r) - want) < 1e-14


def test_sup_seminorm_constant():
    assert sup_seminorm(TaylorFunction((3.0,)), 0.9) == 3.0


def test_sup_seminorm_refinement_beats_grid():
    rng = np.random.default_rng(3)
    f = random_taylor(rng, 24)
    grid_only = sup_seminorm(f, 0.8, refine=False)
    refined = sup_seminorm(f, 0.8, refine=True)
    assert refined >= grid_only - 1e-15
    # a dense grid estimate approaches the refined value from below
    theta = np.linspace(0, 2 * np.pi, 200001)
    dense = float(np.max(np.abs(f(0.8 * np.exp(1j * theta)))))
    assert refined >= dense - 1e-12
    assert refined - dense < 1e-7


def test_sup_seminorm_rotation_invariance():
    # the refined sup must not see coefficient rotations
    rng = np.random.default_rng(11)
    worst = 0.0
    for _ in range(30):
        f = random_taylor(rng, int(rng.integers(1, 33)))
        beta = np.exp(1j * rng.uniform(0, 2 * np.pi))
        g = TaylorFunction(tuple(f.array * beta ** np.arange(f.degree + 1)))
        for r in (0.5, 0.75):
            worst = max(worst, abs(sup_seminorm(f, r) - sup_seminorm(g, r)))
    assert worst < 1e-12


def test_sup_seminorm_sample_guard():
    f = TaylorFunction.monomial(40)
    with pytest.raises(ValueError):
        sup_seminorm(f, 0.5, samples=64)
    with pytest.raises(ValueError):
        sup_seminorm(f, 1.0)


def test_hp_seminorm_parseval_closed_form():
    # p=2 circle mean is sqrt(sum |c_k|^2 r^{2k}), exact for equispaced
    # sampling once the grid clears twice the degree
    rng = np.random.default_rng(5)
    for _ in range(30):
        f = random_taylor(rng, int(rng.integers(0, 33)))
        for r in (0.5, 2.0 / 3.0, 0.75):
            want = float(np.sqrt(np.sum(np.abs(f.array) ** 2 * r ** (2 * np.arange(f.degree + 1)))))
            assert abs(hp_seminorm(f, 2, r) - want) < 1e-12


def test_hp_seminorm_orderings():
    f = TaylorFunction((1.0, -0.5, 0.25j))
    r = 0.6
    h1 = hp_seminorm(f, 1, r)
    h2 = hp_seminorm(f, 2, r)
    h3 = hp_seminorm(f, 3, r)
    s = sup_seminorm(f, r)
    assert h1 <= h2 + 1e-15 <= h3 + 2e-15 <= s + 3e-15


def test_hp_seminorm_validation():
    f = TaylorFunction.one()
    with pytest.raises(ValueError):
        hp_seminorm(f, 0.5, 0.5)
    with pytest.raises(ValueError):
        hp_seminorm(f, 2, 1.5)


@pytest.mark.parametrize("p", [1, 2, 3])
def test_strict_monotonicity_nonconstant(p):
    rng = np.random.default_rng(p)
    grid = np.linspace(0.3, 0.9, 7)
    for _ in range(10):
        f = random_taylor(rng, int(rng.integers(1, 20)))
        rep = strict_monotonicity_check(f, p, grid)
        assert rep.strictly_increasing
        assert rep.min_gap > 0
        assert not rep.constant


def test_strict_monotonicity_constant_flat():
    rep = strict_monotonicity_check(TaylorFunction((2.5,)), 2, np.linspace(0.2, 0.8, 5))
    assert rep.constant
    assert not rep.strictly_increasing
    assert abs(rep.min_gap) < 1e-15


# ---------------------------------------------------------------------------
# operators and isometry tests
# ---------------------------------------------------------------------------


def _rotation_matrix(alpha, beta, size=24):
    return operator_matrix(RotationOperator(alpha, beta), size)


def test_rotation_operator_is_isometry_everywhere():
    # sup (refined) and the p=2 mean (Parseval) are exact; odd-p means
    # carry equispaced quadrature error when a zero sits near the circle,
    # so they get a tolerance matching their documented accuracy
    exh = DiscExhaustion.default(3)
    rng = np.random.default_rng(2)
    probes = standard_probes(rng, count=3, degree=10)
    op = RotationOperator(np.exp(0.4j), np.exp(-2.2j))
    for family, tol in (
        (SupFamily(), 1e-9),
        (HpFamily(1), 2e-5),
        (HpFamily(2), 1e-12),
        (HpFamily(3), 2e-5),
    ):
        rep = isometry_test(op, family, exh, probes, tol=tol)
        assert rep.passed, (family.label, rep.max_gap)


def test_doubling_fails_isometry():
    exh = DiscExhaustion.default(3)
    probes = standard_probes(np.random.default_rng(0))
    rep = isometry_test(lambda f: f.scaled(2.0), SupFamily(), exh, probes)
    assert not rep.passed
    assert rep.max_gap > 0.5


def test_rotation_operator_validates_unimodularity():
    with pytest.raises(ValueError):
        RotationOperator(2.0, 1.0)


def test_weighted_composition_rejects_expanding_warp():
    with pytest.raises(ValueError):
        WeightedCompositionOperator(
            TaylorFunction.one(), TaylorFunction((0.0, 1.1))
        )


def test_matrix_operator_degree_guard():
    m = _rotation_matrix(1.0, 1.0, size=4)
    with pytest.raises(ValueError):
        apply_operator(m, TaylorFunction.monomial(9))


def test_operator_matrix_matches_direct_action():
    op = RotationOperator(np.exp(1.1j), np.exp(0.3j))
    m = operator_matrix(op, 8)
    f = TaylorFunction((1.0, 2.0j, -0.5))
    a = apply_operator(op, f)
    b = apply_operator(m, f)
    assert np.allclose(a.array, b.array, rtol=0, atol=1e-15)


def test_characterize_recovers_opaque_rotation():
    rng = np.random.default_rng(7)
    exh = DiscExhaustion.default(3)
    worst = 0.0
    for _ in range(10):
        alpha = np.exp(1j * rng.uniform(0, 2 * np.pi))
        beta = np.exp(1j * rng.uniform(0, 2 * np.pi))
        m = _rotation_matrix(alpha, beta)  # opaque matrix, symbols hidden
        for family in (SupFamily(), HpFamily(1), HpFamily(3)):
            ch = characterize_isometry(m, exh, family, rng=np.random.default_rng(1))
            worst = max(worst, abs(ch.scalar_alpha - alpha) + abs(ch.scalar_beta - beta))
    assert worst < 1e-10


def test_characterize_restricted_subfamily_identical():
    exh = DiscExhaustion.default(4)
    alpha, beta = np.exp(0.9j), np.exp(-1.7j)
    m = _rotation_matrix(alpha, beta)
    full = characterize_isometry(m, exh, SupFamily(), rng=np.random.default_rng(1))
    sub = characterize_isometry(
        m, exh.restrict((2, 3)), SupFamily(), rng=np.random.default_rng(1)
    )
    assert sub.scalar_alpha == full.scalar_alpha
    assert sub.scalar_beta == full.scalar_beta


def test_characterize_doubling_names_unimodularity():
    exh = DiscExhaustion.default(3)
    with pytest.raises(NotCharacterizable) as exc_info:
        characterize_isometry(lambda f: f.scaled(2.0), exh, SupFamily())
    assert exc_info.value.check == "unimodularity"


def test_characterize_square_warp_names_circle_preservation():
    exh = DiscExhaustion.default(3)
    warp = WeightedCompositionOperator(TaylorFunction.one(), TaylorFunction.monomial(2))
    with pytest.raises(NotCharacterizable) as exc_info:
        characterize_isometry(warp, exh, SupFamily())
    assert exc_info.value.check == "circle-preservation"


def test_characterize_hp2_flags_missing_theorem():
    exh = DiscExhaustion.default(3)
    m = _rotation_matrix(np.exp(0.2j), np.exp(1.4j))
    ch = characterize_isometry(m, exh, HpFamily(2))
    assert ch.certificate.get("no_theorem_guarantee") is True
    ch_sup = characterize_isometry(m, exh, SupFamily())
    assert "no_theorem_guarantee" not in ch_sup.certificate


# ---------------------------------------------------------------------------
# three-circle inequality
# ---------------------------------------------------------------------------


def test_three_circle_random_polynomials_nonnegative_slack():
    rng = np.random.default_rng(13)
    for _ in range(60):
        f = random_taylor(rng, int(rng.integers(1, 25)), min_significant=2)
        rep = three_circle_check(f, 0.25, 0.5, 0.75)
        assert rep.slack >= -1e-12


def test_random_taylor_rejects_impossible_significance():
    with pytest.raises(ValueError):
        random_taylor(np.random.default_rng(0), 0, min_significant=2)


def test_three_circle_monomial_rigidity():
    for k in (0, 1, 4, 9):
        rep = three_circle_check(TaylorFunction.monomial(k, 1.5), 0.3, 0.5, 0.8)
        assert rep.rigidity_flag
        assert rep.monomial
        assert abs(rep.slack) <= 1e-10


def test_three_circle_binomial_strict():
    rep = three_circle_check(TaylorFunction((1.0, 1.0)), 0.25, 0.5, 0.75)
    assert rep.slack > 1e-3
    assert not rep.rigidity_flag
    assert not rep.monomial


def test_three_circle_scaling_covariance():
    # scaling f by a constant shifts both sides of the log-convexity
    # inequality identically, so the slack is scale invariant
    f = random_taylor(np.random.default_rng(4), 8, min_significant=2)
    a = three_circle_check(f, 0.2, 0.45, 0.7)
    b = three_circle_check(f.scaled(137.0), 0.2, 0.45, 0.7)
    assert abs(a.slack - b.slack) < 1e-10


def test_three_circle_radius_validation():
    f = TaylorFunction.one()
    with pytest.raises(ValueError):
        three_circle_check(f, 0.5, 0.25, 0.75)
    with pytest.raises(ValueError):
        three_circle_check(f, 0.25, 0.5, 1.0)
