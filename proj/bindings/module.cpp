// Python bindings for the core operations: spaces, nets, actions, warped
// graphs, operator bundles, spectra, heat-multiplier comparisons, counting,
// and the invariant-sector residuals.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "warpedlab/actions.hpp"
#include "warpedlab/heat.hpp"
#include "warpedlab/invariant.hpp"
#include "warpedlab/net.hpp"
#include "warpedlab/operators.hpp"
#include "warpedlab/spaces.hpp"
#include "warpedlab/spectra.hpp"
#include "warpedlab/version.hpp"
#include "warpedlab/warped.hpp"

namespace py = pybind11;
using namespace warpedlab;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Spectral experiments on warped level sets of isometric actions";
  m.attr("__version__") = kVersion;

  py::class_<Point>(m, "Point")
      .def_readonly("c", &Point::c)
      .def_readonly("bits", &Point::bits);

  py::class_<ModelSpace>(m, "ModelSpace")
      .def_static("circle", &ModelSpace::circle)
      .def_static("flat_torus", &ModelSpace::flat_torus, py::arg("dim"))
      .def_static("so3", &ModelSpace::so3)
      .def_static("cantor_level", &ModelSpace::cantor_level, py::arg("depth"))
      .def_property_readonly("name", &ModelSpace::name)
      .def_property_readonly("dim", &ModelSpace::dim)
      .def_property_readonly("depth", &ModelSpace::depth)
      .def("distance", &ModelSpace::distance)
      .def("ball_volume", &ModelSpace::ball_volume)
      .def("coords", &ModelSpace::coords)
      .def("coord_names", &ModelSpace::coord_names)
      .def("point_count", &ModelSpace::point_count)
      .def("__repr__",
           [](const ModelSpace& s) { return "<ModelSpace " + s.name() + ">"; });

  py::class_<EpsNet>(m, "EpsNet")
      .def_readonly("t", &EpsNet::t)
      .def_readonly("epsilon", &EpsNet::epsilon)
      .def_readonly("kind", &EpsNet::kind)
      .def_readonly("seed", &EpsNet::seed)
      .def_readonly("points", &EpsNet::points)
      .def_readonly("weights", &EpsNet::weights)
      .def("size", &EpsNet::size)
      .def("weight_sum", &EpsNet::weight_sum)
      .def("__len__", &EpsNet::size)
      .def("__repr__", [](const EpsNet& n) {
        return "<EpsNet " + n.kind + " n=" + std::to_string(n.size()) + ">";
      });

  m.def("build_eps_net", &build_eps_net, py::arg("space"), py::arg("t"),
        py::arg("epsilon"), py::arg("seed") = 20240915, py::arg("pool_override") = 0,
        py::arg("probes_override") = 0);
  m.def("arithmetic_circle_net", &arithmetic_circle_net, py::arg("t"), py::arg("n"));

  py::class_<NetDiagnostics>(m, "NetDiagnostics")
      .def_readonly("min_separation_scaled", &NetDiagnostics::min_separation_scaled)
      .def_readonly("max_covering_scaled", &NetDiagnostics::max_covering_scaled)
      .def_readonly("weight_sum", &NetDiagnostics::weight_sum)
      .def_readonly("weight_min", &NetDiagnostics::weight_min)
      .def_readonly("weight_max", &NetDiagnostics::weight_max)
      .def_readonly("separation_exhaustive", &NetDiagnostics::separation_exhaustive);
  m.def("net_diagnostics", &net_diagnostics, py::arg("net"),
        py::arg("covering_probes") = 10000, py::arg("probe_seed") = 4242);

  py::class_<IsometricAction>(m, "IsometricAction")
      .def_property_readonly("name",
                             [](const IsometricAction& a) { return a.name(); })
      .def_property_readonly("generator_labels",
                             [](const IsometricAction& a) {
                               std::vector<std::string> labels;
                               for (int s = 0; s < a.generator_count(); ++s)
                                 labels.push_back(a.generator_label(s));
                               return labels;
                             })
      .def("generator_count", &IsometricAction::generator_count)
      .def("apply", &IsometricAction::apply, py::arg("generator"), py::arg("point"));
  m.def("make_named_action", &make_named_action, py::arg("name"), py::arg("space"));
  m.def("make_odometer", &make_odometer, py::arg("depth"));
  m.def("max_free_radius", &max_free_radius, py::arg("action"),
        py::arg("samples") = 10000, py::arg("seed") = 777);

  py::class_<WarpedGraph>(m, "WarpedGraph")
      .def_readonly("net", &WarpedGraph::net)
      .def_readonly("action_name", &WarpedGraph::action_name)
      .def_readonly("generator_count", &WarpedGraph::generator_count)
      .def_readonly("generator_labels", &WarpedGraph::generator_labels)
      .def_readonly("cutoff", &WarpedGraph::cutoff)
      .def_readonly("free_radius", &WarpedGraph::free_radius)
      .def_readonly("admissible_r", &WarpedGraph::admissible_r)
      .def_readonly("max_snap_defect", &WarpedGraph::max_snap_defect)
      .def_readonly("snap_collision_count", &WarpedGraph::snap_collision_count)
      .def_readonly("connected", &WarpedGraph::connected)
      .def_property_readonly(
          "metric_edge_count",
          [](const WarpedGraph& g) { return g.metric_edges.size(); })
      .def_property_readonly(
          "generator_edge_count",
          [](const WarpedGraph& g) { return g.generator_edges.size(); })
      .def("size", &WarpedGraph::size);
  m.def(
      "build_warped_graph",
      [](const EpsNet& net, const IsometricAction& action, double cutoff,
         const std::string& snap_mode) {
        return build_warped_graph(net, action, cutoff, parse_snap_mode(snap_mode));
      },
      py::arg("net"), py::arg("action"), py::arg("cutoff") = 0.0,
      py::arg("snap_mode") = "snap");
  m.def("warped_distance", &warped_distance, py::arg("graph"), py::arg("i"),
        py::arg("j"));
  m.def("warped_all_pairs", &warped_all_pairs, py::arg("graph"));

  py::class_<SimpleGraph>(m, "SimpleGraph")
      .def("size", [](const SimpleGraph& g) { return g.adjacency.size(); });
  m.def("box_space_graph", &box_space_graph, py::arg("depth"));
  m.def("graph_all_pairs", &graph_all_pairs, py::arg("graph"));

  py::class_<DistortionResult>(m, "DistortionResult")
      .def_readonly("L", &DistortionResult::L)
      .def_readonly("C", &DistortionResult::C);
  m.def("distortion", &distortion, py::arg("dA"), py::arg("dB"));

  py::class_<SparseSymmetricOperator>(m, "SparseSymmetricOperator")
      .def_readonly("dim", &SparseSymmetricOperator::dim)
      .def("nnz", &SparseSymmetricOperator::nnz)
      .def("entry", &SparseSymmetricOperator::entry)
      .def("matvec", &SparseSymmetricOperator::matvec)
      .def("quadratic_form", &SparseSymmetricOperator::quadratic_form)
      .def("inf_norm", &SparseSymmetricOperator::inf_norm)
      .def("to_dense", &SparseSymmetricOperator::to_dense);

  py::class_<OperatorBundle>(m, "OperatorBundle")
      .def_readonly("r", &OperatorBundle::r)
      .def_readonly("phi", &OperatorBundle::phi)
      .def_readonly("weights", &OperatorBundle::weights)
      .def_readonly("local", &OperatorBundle::local)
      .def_readonly("group", &OperatorBundle::group)
      .def_readonly("coarse", &OperatorBundle::coarse)
      .def_readonly("decomposition_residual", &OperatorBundle::decomposition_residual)
      .def_readonly("warnings", &OperatorBundle::warnings)
      .def("dim", &OperatorBundle::dim);
  m.def("make_operator_bundle", &make_operator_bundle, py::arg("graph"), py::arg("r"));

  py::class_<SpectrumReport>(m, "SpectrumReport")
      .def_readonly("eigenvalues", &SpectrumReport::eigenvalues)
      .def_readonly("residuals", &SpectrumReport::residuals)
      .def_readonly("gap", &SpectrumReport::gap)
      .def_readonly("method", &SpectrumReport::method);
  m.def("bottom_spectrum", &bottom_spectrum, py::arg("operator"), py::arg("weights"),
        py::arg("k"));

  py::class_<GapPoint>(m, "GapPoint")
      .def_readonly("t", &GapPoint::t)
      .def_readonly("net_size", &GapPoint::net_size)
      .def_readonly("lambda2", &GapPoint::lambda2)
      .def_readonly("phi_mean", &GapPoint::phi_mean)
      .def_readonly("normalized_gap", &GapPoint::normalized_gap);
  py::class_<GapSweep>(m, "GapSweep")
      .def_readonly("action_name", &GapSweep::action_name)
      .def_readonly("net_kind", &GapSweep::net_kind)
      .def_readonly("r", &GapSweep::r)
      .def_readonly("points", &GapSweep::points)
      .def_readonly("min_normalized_gap", &GapSweep::min_normalized_gap)
      .def_readonly("ratio_last_to_first", &GapSweep::ratio_last_to_first);
  m.def("gap_across_levels", &gap_across_levels, py::arg("action"), py::arg("levels"),
        py::arg("epsilon"), py::arg("r"), py::arg("net_kind") = "greedy",
        py::arg("seed") = 20240915);
  m.def("gap_across_levels_odometer", &gap_across_levels_odometer, py::arg("levels"),
        py::arg("r"), py::arg("seed") = 20240915);

  m.def("heat_sigma", &heat_sigma, py::arg("t"), py::arg("lambda_"));
  py::class_<SandwichReport>(m, "SandwichReport")
      .def_readonly("space_name", &SandwichReport::space_name)
      .def_readonly("m", &SandwichReport::m)
      .def_readonly("r", &SandwichReport::r)
      .def_readonly("C", &SandwichReport::C)
      .def_readonly("pass_upper", &SandwichReport::pass_upper)
      .def_readonly("t0", &SandwichReport::t0)
      .def_readonly("max_violation_upper", &SandwichReport::max_violation_upper)
      .def_readonly("pass_lower", &SandwichReport::pass_lower)
      .def_readonly("R", &SandwichReport::R)
      .def_readonly("D", &SandwichReport::D)
      .def_readonly("max_violation_lower", &SandwichReport::max_violation_lower)
      .def("passed", &SandwichReport::pass);
  m.def("sandwich_check", &sandwich_check, py::arg("space"), py::arg("t_list"),
        py::arg("r"), py::arg("eps_target"), py::arg("mode_cap") = 500);

  m.def("count_modes_below", &count_modes_below, py::arg("space"), py::arg("R"));
  py::class_<WeylReport>(m, "WeylReport")
      .def_readonly("space_name", &WeylReport::space_name)
      .def_readonly("m", &WeylReport::m)
      .def_readonly("R_grid", &WeylReport::R_grid)
      .def_readonly("counts", &WeylReport::counts)
      .def_readonly("fit_constant", &WeylReport::fit_constant)
      .def_readonly("oracle_constant", &WeylReport::oracle_constant)
      .def_readonly("relative_error", &WeylReport::relative_error);
  m.def("weyl_counting", &weyl_counting, py::arg("space"), py::arg("R_max"),
        py::arg("grid_points") = 32);

  py::class_<AccumulationReport>(m, "AccumulationReport")
      .def_readonly("space_name", &AccumulationReport::space_name)
      .def_readonly("eps", &AccumulationReport::eps)
      .def_readonly("window_top", &AccumulationReport::window_top)
      .def_readonly("t_list", &AccumulationReport::t_list)
      .def_readonly("counts", &AccumulationReport::counts)
      .def_readonly("has_threshold", &AccumulationReport::has_threshold)
      .def_readonly("threshold_t0", &AccumulationReport::threshold_t0);
  m.def("accumulation_scan", &accumulation_scan, py::arg("space"), py::arg("t_list"),
        py::arg("eps"), py::arg("window_top") = 2.0);

  py::class_<WResidualReport>(m, "WResidualReport")
      .def_readonly("n", &WResidualReport::n)
      .def_readonly("t", &WResidualReport::t)
      .def_readonly("r", &WResidualReport::r)
      .def_readonly("columns_used", &WResidualReport::columns_used)
      .def_readonly("intertwining_residual", &WResidualReport::intertwining_residual)
      .def_readonly("section_residual", &WResidualReport::section_residual)
      .def_readonly("isometry_defect", &WResidualReport::isometry_defect)
      .def_readonly("max_snap_defect", &WResidualReport::max_snap_defect)
      .def_readonly("warnings", &WResidualReport::warnings);
  m.def("w_unitary_residual", &w_unitary_residual, py::arg("net"), py::arg("r"),
        py::arg("section"), py::arg("column_budget") = 0);

  py::class_<JointSample>(m, "JointSample")
      .def_readonly("k", &JointSample::k)
      .def_readonly("lambda1", &JointSample::lambda1)
      .def_readonly("lambda2", &JointSample::lambda2)
      .def_readonly("f_value", &JointSample::f_value);
  py::class_<JointSpectrumReport>(m, "JointSpectrumReport")
      .def_readonly("n", &JointSpectrumReport::n)
      .def_readonly("rotation_steps", &JointSpectrumReport::rotation_steps)
      .def_readonly("phi", &JointSpectrumReport::phi)
      .def_readonly("group_size", &JointSpectrumReport::group_size)
      .def_readonly("samples", &JointSpectrumReport::samples)
      .def_readonly("compared", &JointSpectrumReport::compared)
      .def_readonly("multiset_error", &JointSpectrumReport::multiset_error);
  m.def("joint_spectrum", &joint_spectrum, py::arg("action"), py::arg("net"),
        py::arg("r"), py::arg("compare_modes") = 50);
  m.def("joint_f_value", &joint_f_value, py::arg("group_size"), py::arg("phi"),
        py::arg("lambda1"), py::arg("lambda2"));
}
