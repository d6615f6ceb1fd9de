"""Convenience re-exports of the compiled core.

``warpedlab`` is a namespace package: the compiled extension ``_core`` lives
in the build (or installed) tree while this module ships with the sources, so
neither directory carries an ``__init__.py``. Import the names either way:

    from warpedlab.api import build_eps_net
    from warpedlab import _core
"""

from warpedlab._core import (  # noqa: F401
    AccumulationReport,
    DistortionResult,
    EpsNet,
    GapPoint,
    GapSweep,
    IsometricAction,
    JointSample,
    JointSpectrumReport,
    ModelSpace,
    NetDiagnostics,
    OperatorBundle,
    Point,
    SandwichReport,
    SimpleGraph,
    SparseSymmetricOperator,
    SpectrumReport,
    WResidualReport,
    WarpedGraph,
    WeylReport,
    __version__,
    accumulation_scan,
    arithmetic_circle_net,
    bottom_spectrum,
    box_space_graph,
    build_eps_net,
    build_warped_graph,
    count_modes_below,
    distortion,
    gap_across_levels,
    gap_across_levels_odometer,
    graph_all_pairs,
    heat_sigma,
    joint_f_value,
    joint_spectrum,
    make_named_action,
    make_odometer,
    make_operator_bundle,
    max_free_radius,
    net_diagnostics,
    sandwich_check,
    warped_all_pairs,
    warped_distance,
    weyl_counting,
    w_unitary_residual,
)
