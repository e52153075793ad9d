import numpy as np
import pytest

from isolab.contspace import (
    AnnulusHomeo,
    DiscGrid,
    Exhaustion1D,
    ExhaustionDisc,
    GridFunction,
    IntervalGrid,
    NotWeightedComposition,
    build_annulus_homeo,
    build_interval_homeo,
    build_zigzag_fold,
    decomposition_bound_check,
    interpolation_budget,
    isometry_test_grid,
    make_composition_operator,
    random_annulus_homeo,
    random_interval_homeo,
    random_probe,
    recover_h_phi,
    recover_weight_and_map,
    sup_seminorm_grid,
    unimodular_field,
    weighted_composition_grid,
)

EXH = Exhaustion1D.default(3)
GRID = IntervalGrid.build(EXH, 2048)
DEXH = ExhaustionDisc.default()
DGRID = DiscGrid.build(DEXH, 128, 256)


def test_exhaustion_1d_validation():
    Exhaustion1D(((0.5, 0.5), (0.2, 0.8)))  # degenerate core allowed
    with pytest.raises(ValueError):
        Exhaustion1D(((0.2, 0.8), (0.3, 0.9)))  # not nested
    with pytest.raises(ValueError):
        Exhaustion1D(((0.0, 0.5),))  # touches the boundary


def test_exhaustion_1d_breakpoints_dedup():
    exh = Exhaustion1D(((0.5, 0.5), (0.2, 0.8)))
    assert np.array_equal(exh.breakpoints(), [0.2, 0.5, 0.8])


def test_exhaustion_disc_validation():
    with pytest.raises(ValueError):
        ExhaustionDisc((0.8, 0.25))
    with pytest.raises(ValueError):
        ExhaustionDisc((0.5, 1.0))


def test_interval_grid_contains_breakpoints():
    for x in EXH.breakpoints():
        assert np.min(np.abs(GRID.array - x)) == 0.0
    assert GRID.array[0] == EXH.outer[0]
    assert GRID.array[-1] == EXH.outer[1]


def test_disc_grid_shape_and_center():
    nodes = DGRID.nodes
    assert nodes.shape == (len(DGRID.radii), DGRID.angle_count)
    assert np.all(nodes[0] == 0.0)
    pts = DGRID.point_list()
    # center collapsed to one point
    assert pts.size == 1 + (len(DGRID.radii) - 1) * DGRID.angle_count
    for r in DEXH.radii:
        assert np.min(np.abs(DGRID.radii_array - r)) == 0.0


def test_grid_function_interpolation_exact_on_nodes():
    f = GridFunction.sample(GRID, lambda x: np.sin(3 * x))
    assert np.max(np.abs(f.interpolate(GRID.array) - f.array)) == 0.0
    mid = 0.5 * (GRID.array[10] + GRID.array[11])
    want = 0.5 * (f.array[10] + f.array[11])
    assert abs(f.interpolate(np.array([mid]))[0] - want) < 1e-15


def test_grid_function_interpolation_domain_guard():
    f = GridFunction.constant(GRID, 1.0)
    with pytest.raises(ValueError, match="leaves the grid domain"):
        f.interpolate(np.array([EXH.outer[1] + 0.01]))


def test_disc_function_center_must_be_constant():
    vals = np.ones(DGRID.nodes.shape, dtype=complex)
    vals[0, 3] = 2.0
    with pytest.raises(ValueError):
        GridFunction(DGRID, vals)


def test_disc_interpolation_exact_on_grid_radii():
    f = GridFunction.sample(DGRID, lambda z: z**2)
    got = f.interpolate(DGRID.nodes)
    assert np.max(np.abs(got - f.array)) < 1e-14


def test_lipschitz_estimate_linear_function():
    f = GridFunction.sample(GRID, lambda x: 3.0 * x)
    assert abs(f.lipschitz_estimate() - 3.0) < 1e-9


def test_sup_seminorm_grid_trivials():
    one = GridFunction.constant(GRID, 1.0)
    for n in range(EXH.levels):
        assert sup_seminorm_grid(one, n, EXH) == 1.0
    coord = GridFunction.coordinate(GRID)
    a0, b0 = EXH.intervals[0]
    assert abs(sup_seminorm_grid(coord, 0, EXH) - b0) < 1e-15


def test_sup_seminorm_grid_nested_levels_monotone():
    f = GridFunction.sample(GRID, lambda x: np.sin(7 * x) + 0.3)
    vals = [sup_seminorm_grid(f, n, EXH) for n in range(EXH.levels)]
    assert all(a <= b + 1e-15 for a, b in zip(vals, vals[1:]))


def test_sup_seminorm_grid_unresolved_level():
    tiny = Exhaustion1D(((0.49, 0.51), (0.2, 0.8)))
    coarse = IntervalGrid.build(tiny, 8)
    f = GridFunction.constant(coarse, 1.0)
    sup_seminorm_grid(f, 0, tiny)  # breakpoints are grid nodes, resolves
    shifted = Exhaustion1D(((0.493, 0.507), (0.2, 0.8)))
    with pytest.raises(ValueError, match="does not resolve"):
        sup_seminorm_grid(f, 0, shifted)


# ---------------------------------------------------------------------------
# interval homeomorphisms
# ---------------------------------------------------------------------------


def test_build_interval_homeo_increasing_fixes_breakpoints():
    h = build_interval_homeo(EXH, "increasing")
    for a, b in EXH.intervals:
        assert h(a) == a and h(b) == b


def test_build_interval_homeo_decreasing_swaps_breakpoints():
    h = build_interval_homeo(EXH, "decreasing")
    for a, b in EXH.intervals:
        assert abs(h(a) - b) < 1e-15 and abs(h(b) - a) < 1e-15


def test_build_interval_homeo_control_collision():
    with pytest.raises(ValueError):
        build_interval_homeo(EXH, "increasing", [(EXH.intervals[0][0], 0.3)])


def test_random_interval_homeo_slopes_bounded():
    rng = np.random.default_rng(9)
    for orientation in ("increasing", "decreasing"):
        h = random_interval_homeo(EXH, rng, orientation)
        xs = np.asarray(h.xs)
        ys = np.asarray(h.ys)
        slopes = np.abs(np.diff(ys) / np.diff(xs))
        assert np.all(slopes >= 0.45 - 1e-12)
        assert np.all(slopes <= 1.9 + 1e-12)
        h.validate_against(EXH)


def test_zigzag_fold_needs_two_levels():
    with pytest.raises(ValueError):
        build_zigzag_fold(Exhaustion1D.default(1), GRID)


# ---------------------------------------------------------------------------
# isometry tests and recovery on the interval
# ---------------------------------------------------------------------------


def _probes(grid, rng, count=4):
    out = [GridFunction.constant(grid, 1.0), GridFunction.coordinate(grid)]
    out += [random_probe(grid, rng) for _ in range(count)]
    return out


@pytest.mark.parametrize("orientation", ["increasing", "decreasing"])
def test_interval_roundtrip(orientation):
    rng = np.random.default_rng(17)
    h = unimodular_field(GRID, rng)
    phi = random_interval_homeo(EXH, rng, orientation)
    T = make_composition_operator(h, phi)

    iso = isometry_test_grid(T, EXH, _probes(GRID, rng))
    assert iso.passed
    assert iso.max_gap <= iso.budget + 1e-9

    sym = recover_weight_and_map(T, EXH, GRID, rng=rng)
    assert np.max(np.abs(sym.weight.array - h.array)) < 1e-12
    assert np.max(np.abs(sym.point_map.array - phi(GRID.array))) <= GRID.cell


def test_recover_h_phi_is_the_same_function():
    assert recover_h_phi is recover_weight_and_map


def test_decreasing_recovery_swap_rule():
    rng = np.random.default_rng(23)
    phi = random_interval_homeo(EXH, rng, "decreasing")
    T = make_composition_operator(GridFunction.constant(GRID, 1.0), phi)
    sym = recover_weight_and_map(T, EXH, GRID, rng=rng)
    recovered = sym.point_map.array.real
    for a, b in EXH.intervals:
        ia = int(np.argmin(np.abs(GRID.array - a)))
        ib = int(np.argmin(np.abs(GRID.array - b)))
        assert abs(recovered[ia] - b) <= GRID.cell
        assert abs(recovered[ib] - a) <= GRID.cell


def test_identity_recovery_exact():
    sym = recover_weight_and_map(lambda f: f, EXH, GRID)
    assert np.max(np.abs(sym.weight.array - 1.0)) < 1e-14
    assert np.max(np.abs(sym.point_map.array - GRID.array)) < 1e-14
    assert sym.certificate["collapsed_pairs"] == 0


def test_nonunimodular_weight_rejected():
    rng = np.random.default_rng(5)
    bad = GridFunction.constant(GRID, 2.0)
    T = make_composition_operator(bad, lambda x: x)
    iso = isometry_test_grid(T, EXH, _probes(GRID, rng))
    assert not iso.passed
    with pytest.raises(NotWeightedComposition) as exc_info:
        recover_weight_and_map(T, EXH, GRID, rng=rng)
    assert exc_info.value.check == "unimodularity"


def test_zero_map_rejected():
    rng = np.random.default_rng(6)
    T = lambda f: GridFunction.constant(GRID, 0.0)
    with pytest.raises(NotWeightedComposition):
        recover_weight_and_map(T, EXH, GRID, rng=rng)


# ---------------------------------------------------------------------------
# the zigzag fold: isometric but not injective
# ---------------------------------------------------------------------------


def test_zigzag_passes_isometry_fails_injectivity_satisfies_bound():
    rng = np.random.default_rng(31)
    zig = build_zigzag_fold(EXH, GRID)
    T = make_composition_operator(GridFunction.constant(GRID, 1.0), zig)

    iso = isometry_test_grid(T, EXH, _probes(GRID, rng))
    assert iso.passed

    with pytest.raises(NotWeightedComposition) as exc_info:
        recover_h_phi(T, EXH, GRID, rng=rng)
    assert exc_info.value.check == "injectivity"
    assert exc_info.value.certificate["collapsed_pairs"] > 0

    probes = [random_probe(GRID, rng) for _ in range(20)]
    rep = decomposition_bound_check(T, EXH, probes)
    assert rep.passed
    assert rep.worst_slack >= 0.0


def test_decomposition_bound_identity_tight_dual():
    rng = np.random.default_rng(8)
    probes = [random_probe(GRID, rng) for _ in range(5)]
    rep = decomposition_bound_check(lambda f: f, EXH, probes)
    assert rep.passed
    assert abs(rep.dual_norm_max - 1.0) < 1e-9
    assert rep.linearity_gap < 1e-12


def test_interpolation_budget_formula():
    rng = np.random.default_rng(2)
    probes = _probes(GRID, rng, count=2)
    lip = max(p.lipschitz_estimate() for p in probes)
    assert interpolation_budget(probes, GRID.cell) == lip * GRID.cell


# ---------------------------------------------------------------------------
# disc twists
# ---------------------------------------------------------------------------


def test_annulus_homeo_preserves_circles_exactly():
    tw = build_annulus_homeo(DEXH, {1: [(0.25, 0.0), (0.8, np.pi)]})
    theta = np.linspace(0, 2 * np.pi, 97)
    for r in DEXH.radii:
        z = r * np.exp(1j * theta)
        assert np.max(np.abs(np.abs(tw(z)) - r)) < 1e-12


def test_annulus_homeo_untwisted_annulus_is_identity():
    tw = build_annulus_homeo(DEXH, {1: [(0.25, 0.0), (0.8, np.pi)]})
    z = 0.1 * np.exp(1j * np.linspace(0, 6, 11))
    assert np.max(np.abs(tw(z) - z)) < 1e-15


def test_annulus_homeo_discontinuous_profile_rejected():
    with pytest.raises(ValueError, match="discontinuous"):
        build_annulus_homeo(DEXH, {0: [(0.25, 0.5)], 1: [(0.25, 0.0), (0.8, 0.0)]})


def test_random_annulus_homeo_slope_cap():
    rng = np.random.default_rng(12)
    for _ in range(5):
        tw = random_annulus_homeo(DEXH, rng)
        r = np.asarray(tw.twist_breaks)
        v = np.asarray(tw.twist_values)
        assert np.max(np.abs(np.diff(v) / np.diff(r))) <= 4.0 + 1e-12


def test_annulus_homeo_validation():
    with pytest.raises(ValueError):
        AnnulusHomeo((0.5, 0.2), (0.0, 1.0))


def test_disc_roundtrip():
    rng = np.random.default_rng(19)
    h = unimodular_field(DGRID, rng)
    phi = random_annulus_homeo(DEXH, rng)
    T = make_composition_operator(h, phi)

    iso = isometry_test_grid(T, DEXH, _probes(DGRID, rng, count=2))
    assert iso.passed

    sym = recover_weight_and_map(T, DEXH, DGRID, rng=rng)
    assert np.max(np.abs(sym.weight.array - h.array)) < 1e-12
    assert np.max(np.abs(sym.point_map.array - phi(DGRID.nodes))) <= DGRID.cell


def test_weighted_composition_grid_direct():
    h = GridFunction.constant(GRID, 1.0j)
    out = weighted_composition_grid(h, lambda x: x, GridFunction.coordinate(GRID))
    assert np.max(np.abs(out.array - 1.0j * GRID.array)) < 1e-15
