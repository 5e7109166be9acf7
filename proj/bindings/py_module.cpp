// Python bindings for the crtlab core: excursion samplers, tree geometry,
// closed-form laws, and the experiment runner. Thin wrappers only; every
// operation is implemented in the C++ library.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <sstream>

#include "crtlab/config.hpp"
#include "crtlab/excursion.hpp"
#include "crtlab/experiments.hpp"
#include "crtlab/feller.hpp"
#include "crtlab/laws.hpp"
#include "crtlab/measure.hpp"
#include "crtlab/report.hpp"
#include "crtlab/spinal.hpp"
#include "crtlab/stats.hpp"
#include "crtlab/tree.hpp"

namespace py = pybind11;
using namespace crtlab;

PYBIND11_MODULE(_crtlab, m) {
  m.doc() =
      "Lattice simulation lab for Brownian-tree level sets: excursion "
      "samplers, level-set ball decompositions, closed-form laws, and the "
      "statistical experiments.";

  py::class_<CounterRng>(m, "Rng",
                         "Counter-based RNG; (seed, stream) pairs give "
                         "independent reproducible streams.")
      .def(py::init<uint64_t, uint64_t>(), py::arg("seed"),
           py::arg("stream") = 0)
      .def("next_u64", &CounterRng::next_u64)
      .def("next_double", &CounterRng::next_double)
      .def("next_below", &CounterRng::next_below, py::arg("n"));

  py::class_<LatticeExcursion>(m, "LatticeExcursion")
      .def(py::init<>())
      .def_readwrite("heights", &LatticeExcursion::heights)
      .def_readwrite("h", &LatticeExcursion::h)
      .def_property_readonly("time_step", &LatticeExcursion::time_step)
      .def_property_readonly("duration", &LatticeExcursion::duration)
      .def_property_readonly("max_height", &LatticeExcursion::max_height)
      .def("validate", &LatticeExcursion::validate)
      .def("__len__",
           [](const LatticeExcursion& e) { return e.heights.size(); });

  m.def("level_index", &level_index, py::arg("value"), py::arg("h"));
  m.def("sample_conditioned_excursion", &sample_conditioned_excursion,
        py::arg("h"), py::arg("a"), py::arg("rng"),
        py::arg("ceiling") = std::nullopt);
  m.def("sample_level_band_excursion", &sample_level_band_excursion,
        py::arg("h"), py::arg("a"), py::arg("floor_level"),
        py::arg("ceiling_level"), py::arg("rng"));
  m.def("sample_uniform_tree_contour", &sample_uniform_tree_contour,
        py::arg("n_vertices"), py::arg("rng"));

  py::class_<LocalTimeProfile>(m, "LocalTimeProfile")
      .def_readonly("level_mass", &LocalTimeProfile::level_mass)
      .def_readonly("h", &LocalTimeProfile::h)
      .def("mass_at", &LocalTimeProfile::mass_at, py::arg("level"))
      .def("total", &LocalTimeProfile::total);
  m.def("local_time_profile", &local_time_profile, py::arg("excursion"));

  py::class_<TreeIndex>(m, "TreeIndex", py::keep_alive<1, 2>())
      .def(py::init<const LatticeExcursion&>(), py::arg("excursion"),
           py::keep_alive<1, 2>())
      .def("__len__", &TreeIndex::size)
      .def("min_on", &TreeIndex::min_on, py::arg("s"), py::arg("t"))
      .def("distance", &TreeIndex::distance, py::arg("s"), py::arg("t"));

  py::class_<LevelSetView>(m, "LevelSetView")
      .def_readonly("a", &LevelSetView::a)
      .def_readonly("level", &LevelSetView::level)
      .def_readonly("visits", &LevelSetView::visits)
      .def_property_readonly("visit_weight", &LevelSetView::visit_weight)
      .def_property_readonly("total_mass", &LevelSetView::total_mass);
  m.def("level_view", &level_view, py::arg("index"), py::arg("a"),
        py::keep_alive<0, 1>());

  py::class_<Ball>(m, "Ball")
      .def_readonly("begin_visit", &Ball::begin_visit)
      .def_readonly("end_visit", &Ball::end_visit)
      .def_readonly("first_time", &Ball::first_time)
      .def_readonly("last_time", &Ball::last_time)
      .def_readonly("mass", &Ball::mass)
      .def_readonly("diameter", &Ball::diameter)
      .def_property_readonly("visit_count", &Ball::visit_count);

  py::class_<BallDecomposition>(m, "BallDecomposition")
      .def_readonly("a", &BallDecomposition::a)
      .def_readonly("r", &BallDecomposition::r)
      .def_readonly("balls", &BallDecomposition::balls)
      .def_readonly("total_mass", &BallDecomposition::total_mass);
  m.def("ball_decomposition",
        py::overload_cast<const LevelSetView&, double>(&ball_decomposition),
        py::arg("view"), py::arg("r"));
  m.def("ball_mass_at", &ball_mass_at, py::arg("view"), py::arg("pos"),
        py::arg("r"));
  m.def("ring_mass",
        py::overload_cast<const LevelSetView&, size_t, double, double>(
            &ring_mass),
        py::arg("view"), py::arg("pos"), py::arg("r_inner"),
        py::arg("r_outer"));

  py::enum_<CoverMode>(m, "CoverMode")
      .value("DIAMETER", CoverMode::kDiameter)
      .value("RADIUS", CoverMode::kRadius);
  m.def("covering_sum", &covering_sum, py::arg("view"), py::arg("r"),
        py::arg("mode") = CoverMode::kDiameter);
  py::class_<RatioRow>(m, "RatioRow")
      .def_readonly("r", &RatioRow::r)
      .def_readonly("ball_count", &RatioRow::ball_count)
      .def_readonly("max_diameter", &RatioRow::max_diameter)
      .def_readonly("mass", &RatioRow::mass)
      .def_readonly("sum_diameter", &RatioRow::sum_diameter)
      .def_readonly("sum_radius", &RatioRow::sum_radius)
      .def_readonly("ratio_diameter", &RatioRow::ratio_diameter)
      .def_readonly("ratio_radius", &RatioRow::ratio_radius);
  m.def("hausdorff_ratio_scan", &hausdorff_ratio_scan, py::arg("view"),
        py::arg("radii"));

  m.def("feller_transition_sample", &feller_transition_sample, py::arg("rng"),
        py::arg("x"), py::arg("dt"));
  m.def("feller_extinction", &feller_extinction, py::arg("x"), py::arg("t"));
  m.def(
      "sample_spinal_band",
      [](CounterRng& rng, double r_inner, double r_outer) {
        std::vector<std::pair<double, double>> out;
        for (const auto& at : sample_spinal_band(rng, r_inner, r_outer)) {
          out.emplace_back(at.height, at.mass);
        }
        return out;
      },
      py::arg("rng"), py::arg("r_inner"), py::arg("r_outer"),
      "List of (height, mass) ring atoms");
  m.def("sample_lambda_star", &sample_lambda_star, py::arg("rng"),
        py::arg("r_inner"), py::arg("r_outer"));

  auto laws = m.def_submodule("laws", "Closed-form laws, bounds and grids");
  laws.def("sup_tail", &laws::sup_tail, py::arg("a"));
  laws.def("zeta_density", &laws::zeta_density, py::arg("r"));
  laws.def("level_mass_laplace", &laws::level_mass_laplace, py::arg("a"),
           py::arg("lambda_"));
  laws.def("ball_count_pmf", &laws::ball_count_pmf, py::arg("a"), py::arg("r"),
           py::arg("k"));
  laws.def("lambda_star_tail", &laws::lambda_star_tail, py::arg("r_inner"),
           py::arg("r_outer"), py::arg("y"));
  laws.def("lambda_star_atom", &laws::lambda_star_atom, py::arg("r_inner"),
           py::arg("r_outer"));
  laws.def("lambda_star_cdf", &laws::lambda_star_cdf, py::arg("r_inner"),
           py::arg("r_outer"), py::arg("y"));
  laws.def("lambda_star_mean", &laws::lambda_star_mean, py::arg("r_inner"),
           py::arg("r_outer"));
  laws.def("feller_laplace", &laws::feller_laplace, py::arg("x"), py::arg("a"),
           py::arg("lambda_"));
  laws.def("feller_hitting_bound", &laws::feller_hitting_bound, py::arg("x"),
           py::arg("y"), py::arg("a"));
  laws.def("sup_level_mass_bound", &laws::sup_level_mass_bound, py::arg("m"),
           py::arg("y"));
  laws.def("gauge", &laws::gauge, py::arg("r"));
  laws.def("heavy_ball_intensity", &laws::heavy_ball_intensity, py::arg("r"),
           py::arg("kappa"), py::arg("c"));
  laws.def("small_ball_mu_bound", &laws::small_ball_mu_bound, py::arg("radii"),
           py::arg("thresholds"));

  m.def(
      "run_experiment",
      [](const std::string& experiment, std::optional<double> h,
         uint64_t seed, std::optional<uint64_t> replicates, size_t threads,
         const std::string& out_dir,
         const std::map<std::string, double>& tolerance) {
        ExperimentConfig cfg;
        cfg.experiment = experiment;
        cfg.h = h;
        cfg.seed = seed;
        cfg.replicates = replicates;
        cfg.threads = threads;
        cfg.out_dir = out_dir;
        cfg.tolerance = tolerance;
        const auto report = run_experiment(cfg);
        return report.to_json();
      },
      py::arg("experiment"), py::arg("h") = std::nullopt, py::arg("seed") = 1,
      py::arg("replicates") = std::nullopt, py::arg("threads") = 0,
      py::arg("out_dir") = "out",
      py::arg("tolerance") = std::map<std::string, double>{},
      py::call_guard<py::gil_scoped_release>(),
      "Run one named experiment and return its report as a JSON string");
}
