"""End-to-end smoke tests for the python bindings.

Fast checks only: the heavy numerical verification lives in the C++ unit and
acceptance suites; here we confirm the bound API is callable and returns the
machine-precision identities on small lattice configurations.
"""

import math

import pytest

from warpedlab import _core


def test_version_string():
    assert isinstance(_core.__version__, str) and _core.__version__


def test_spaces_and_nets():
    circle = _core.ModelSpace.circle()
    assert circle.dim == 1

    net = _core.arithmetic_circle_net(10.0, 64)
    assert len(net) == 64
    assert net.kind == "arithmetic"
    assert net.weight_sum() == pytest.approx(10.0, rel=1e-12)

    diag = _core.net_diagnostics(net)
    assert diag.min_separation_scaled == pytest.approx(10.0 / 64, rel=1e-12)
    assert diag.weight_min > 0


def test_greedy_net_invariants():
    torus = _core.ModelSpace.flat_torus(2)
    net = _core.build_eps_net(torus, 4.0, 0.5, 20240915)
    assert len(net) > 10
    assert net.weight_sum() == pytest.approx(16.0, rel=1e-9)
    diag = _core.net_diagnostics(net)
    assert diag.min_separation_scaled >= 0.5 * (1 - 1e-12)
    # Covering holds exactly against the construction pool; fresh Haar probes
    # can exceed it by the pool's own resolution, hence the 20% slack.
    assert diag.max_covering_scaled <= 0.5 * 1.2


def test_action_isometry():
    circle = _core.ModelSpace.circle()
    action = _core.make_named_action("circle-rotation", circle)
    assert action.generator_count() == 3
    net = _core.arithmetic_circle_net(8.0, 32)
    a, b = net.points[3], net.points[17]
    d0 = circle.distance(a, b)
    for s in range(action.generator_count()):
        d1 = circle.distance(action.apply(s, a), action.apply(s, b))
        assert d1 == pytest.approx(d0, abs=1e-14)


def test_graph_bundle_and_spectrum():
    circle = _core.ModelSpace.circle()
    action = _core.make_named_action("circle-rotation", circle)
    net = _core.arithmetic_circle_net(10.0, 128)
    graph = _core.build_warped_graph(net, action)
    assert graph.connected
    # The irrational rotation lands between lattice points; the snap defect is
    # bounded by half a scaled lattice step, t / (2n).
    assert 0.0 < graph.max_snap_defect <= 10.0 / (2 * 128)

    bundle = _core.make_operator_bundle(graph, 0.8)
    assert bundle.decomposition_residual <= 1e-10

    spec = _core.bottom_spectrum(bundle.coarse, bundle.weights, 6)
    assert spec.eigenvalues[0] == pytest.approx(0.0, abs=1e-12)
    assert all(v >= -1e-9 for v in spec.eigenvalues)
    assert spec.eigenvalues == sorted(spec.eigenvalues)


def test_cycle_eigenvalues_closed_form():
    # Odometer at depth 5: with the radius pinned below the minimal scaled
    # distance (32 * 1/16 = 2) the coupling operator is the pure 32-cycle with
    # uniform point weight 1/32, so the pencil eigenvalue carries one weight
    # factor: lambda2 = (2 - 2 cos(2 pi / 32)) / 32.
    sweep = _core.gap_across_levels_odometer([32.0], 1.0)
    point = sweep.points[0]
    expected = (2.0 - 2.0 * math.cos(2.0 * math.pi / 32.0)) / 32.0
    assert point.lambda2 == pytest.approx(expected, rel=1e-9)
    assert point.normalized_gap > 0


def test_heat_and_counting():
    assert _core.heat_sigma(10.0, 0.0) == 0.0
    assert 0.0 < _core.heat_sigma(10.0, 4.0 * math.pi**2) < 1.0

    circle = _core.ModelSpace.circle()
    rep = _core.weyl_counting(circle, (200.0 * math.pi) ** 2, 16)
    assert rep.relative_error < 0.02

    acc = _core.accumulation_scan(circle, [10.0, 20.0, 40.0], 0.5, 2.0)
    assert list(acc.counts) == [0, 2, 4]


def test_invariant_residuals_on_lattice():
    circle = _core.ModelSpace.circle()
    net = _core.arithmetic_circle_net(10.0, 128)
    section = [math.sin(2.0 * math.pi * i / 128.0) + 0.25 for i in range(128)]
    rep = _core.w_unitary_residual(net, 0.8, section)
    assert rep.section_residual <= 1e-10
    assert rep.intertwining_residual <= 1e-10
    assert rep.isometry_defect <= 1e-10

    action = _core.make_named_action("circle-rotation", circle)
    joint = _core.joint_spectrum(action, net, 0.8, 24)
    assert joint.multiset_error <= 2e-3


def test_box_comparison_small():
    dA = _core.warped_all_pairs(
        _core.build_warped_graph(
            _core.build_eps_net(_core.ModelSpace.cantor_level(4), 16.0, 0.5, 7),
            _core.make_odometer(4),
            1.5,
        )
    )
    dB = _core.graph_all_pairs(_core.box_space_graph(4))
    res = _core.distortion(dA, dB)
    assert res.L <= 2.0 and res.C <= 2.0
