#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <utility>

#include "turbeam/beam.hpp"
#include "turbeam/errors.hpp"
#include "turbeam/fluctuations.hpp"
#include "turbeam/mc.hpp"
#include "turbeam/meanfield.hpp"
#include "turbeam/spectrum.hpp"
#include "turbeam/vec2.hpp"
#include "turbeam/wandering.hpp"

namespace py = pybind11;
using namespace turbeam;

namespace {

using Pt = std::pair<double, double>;

Vec2 to_vec(Pt p) { return {p.first, p.second}; }

std::optional<DiffuserParams> to_diffuser(std::optional<double> g2) {
  if (!g2) return std::nullopt;
  DiffuserParams d{*g2};
  d.validate();
  return d;
}

}  // namespace

PYBIND11_MODULE(_turbeam, m) {
  m.doc() = "Photon kinetics of a laser beam in a turbulent atmosphere";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<RegimeError>(m, "RegimeError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
  py::register_exception<SimulationError>(m, "SimulationError", PyExc_RuntimeError);

  py::class_<BeamParams>(m, "BeamParams")
      .def(py::init([](double wavelength, double r0, double n_photons,
                       double time) {
             BeamParams b{wavelength, r0, n_photons, time};
             b.validate();
             return b;
           }),
           py::arg("wavelength") = 1.55e-6, py::arg("r0") = 0.01,
           py::arg("n_photons") = 1.0e6, py::arg("time") = 0.0)
      .def_readwrite("wavelength", &BeamParams::wavelength)
      .def_readwrite("r0", &BeamParams::r0)
      .def_readwrite("n_photons", &BeamParams::n_photons)
      .def_readwrite("time", &BeamParams::time)
      .def_property_readonly("q0", &BeamParams::q0)
      .def_property_readonly("omega0", &BeamParams::omega0)
      .def_property_readonly("distance", &BeamParams::distance)
      .def_static("from_distance", &BeamParams::from_distance,
                  py::arg("wavelength"), py::arg("r0"), py::arg("n_photons"),
                  py::arg("z"));

  py::class_<SpectrumModel>(m, "SpectrumModel")
      .def_static("gaussian", &SpectrumModel::gaussian, py::arg("amplitude"),
                  py::arg("corr_length"))
      .def_static("von_karman", &SpectrumModel::von_karman,
                  py::arg("amplitude"), py::arg("outer_scale"),
                  py::arg("inner_scale"), py::arg("exponent") = 11.0 / 3.0)
      .def_static("tabulated", &SpectrumModel::tabulated, py::arg("samples"))
      .def("psi", &SpectrumModel::psi, py::arg("k"))
      .def_property_readonly("k_cutoff", &SpectrumModel::k_cutoff)
      .def_property_readonly("amplitude", &SpectrumModel::amplitude);

  m.def("collision_nu", &collision_nu, py::arg("spectrum"), py::arg("omega0"));
  m.def("collision_alpha", &collision_alpha, py::arg("spectrum"),
        py::arg("omega0"));

  py::class_<Moments>(m, "Moments")
      .def_readonly("r2_mean", &Moments::r2_mean)
      .def_readonly("q2_mean", &Moments::q2_mean)
      .def_readonly("a2", &Moments::a2)
      .def_readonly("nu_t", &Moments::nu_t)
      .def_readonly("saturated", &Moments::saturated)
      .def_readonly("paraxial", &Moments::paraxial)
      .def_readonly("broadened", &Moments::broadened);

  m.def(
      "moments",
      [](const BeamParams& b, const SpectrumModel& s) { return moments(b, s); },
      py::arg("beam"), py::arg("spectrum"));

  m.def(
      "mean_pdf_asymptotic",
      [](const BeamParams& b, const SpectrumModel& s, Pt r, Pt q) {
        return mean_pdf_asymptotic(b, s, to_vec(r), to_vec(q));
      },
      py::arg("beam"), py::arg("spectrum"), py::arg("r"), py::arg("q"),
      "Saturated-regime closed form of the mean photon PDF in (r, q).");
  m.def(
      "mean_pdf_exact",
      [](const BeamParams& b, const SpectrumModel& s, Pt r, Pt q) {
        return mean_pdf_exact(b, s, to_vec(r), to_vec(q));
      },
      py::arg("beam"), py::arg("spectrum"), py::arg("r"), py::arg("q"),
      "Direct quadrature of the general kinetic solution (slow, exact).");
  m.def(
      "mean_intensity",
      [](const BeamParams& b, const SpectrumModel& s, Pt r) {
        return mean_intensity(b, s, to_vec(r));
      },
      py::arg("beam"), py::arg("spectrum"), py::arg("r"));

  m.def("r1_squared", &r1_squared, py::arg("r0"), py::arg("g2"));

  py::class_<CorrelationDecomposition>(m, "CorrelationDecomposition")
      .def_readonly("shot", &CorrelationDecomposition::shot)
      .def_readonly("classical", &CorrelationDecomposition::classical)
      .def_readonly("total", &CorrelationDecomposition::total)
      .def_readonly("kernel_width_sq",
                    &CorrelationDecomposition::kernel_width_sq);

  m.def(
      "correlation",
      [](const BeamParams& b, const SpectrumModel& s, Pt rA, Pt rB,
         double g2) {
        if (g2 > 0.0) {
          DiffuserParams d{g2};
          return correlation_with_diffuser(b, s, d, to_vec(rA), to_vec(rB));
        }
        return correlation_no_diffuser(b, s, to_vec(rA), to_vec(rB));
      },
      py::arg("beam"), py::arg("spectrum"), py::arg("rA"), py::arg("rB"),
      py::arg("g2") = 0.0,
      "Photon-density correlation at a point pair, shot + classical parts.");
  m.def(
      "shot_kernel",
      [](const BeamParams& b, double g2, Pt rA, Pt rB) {
        DiffuserParams d{g2};
        return shot_kernel(b, d, to_vec(rA), to_vec(rB));
      },
      py::arg("beam"), py::arg("g2"), py::arg("rA"), py::arg("rB"));
  m.def(
      "suppression_factor",
      [](const BeamParams& b, const SpectrumModel& s, double g2) {
        return suppression_factor(b, s, DiffuserParams{g2});
      },
      py::arg("beam"), py::arg("spectrum"), py::arg("g2"));
  m.def(
      "suppression_ratio_exact",
      [](const BeamParams& b, const SpectrumModel& s, double g2) {
        return suppression_ratio_exact(b, s, DiffuserParams{g2});
      },
      py::arg("beam"), py::arg("spectrum"), py::arg("g2"));
  m.def(
      "scintillation_index",
      [](const BeamParams& b, const SpectrumModel& s, std::optional<double> g2,
         Pt r, bool include_shot, double detector_area) {
        return scintillation_index(b, s, to_diffuser(g2), to_vec(r),
                                   include_shot, detector_area);
      },
      py::arg("beam"), py::arg("spectrum"), py::arg("g2") = py::none(),
      py::arg("r") = Pt{0.0, 0.0}, py::arg("include_shot") = false,
      py::arg("detector_area") = 0.0);
  m.def(
      "correlation_classical_quadrature",
      [](const BeamParams& b, const SpectrumModel& s, double g2, Pt rA, Pt rB,
         int order) {
        return correlation_classical_quadrature(b, s, g2, to_vec(rA),
                                                to_vec(rB), order);
      },
      py::arg("beam"), py::arg("spectrum"), py::arg("g2"), py::arg("rA"),
      py::arg("rB"), py::arg("order") = 48,
      "Quadrature oracle for the classical correlation term.");

  py::class_<WanderReport>(m, "WanderReport")
      .def_readonly("r2_classical", &WanderReport::r2_classical)
      .def_readonly("r2_shot", &WanderReport::r2_shot)
      .def_readonly("total", &WanderReport::total)
      .def_readonly("crossover_time", &WanderReport::crossover_time);

  py::enum_<WanderPart>(m, "WanderPart")
      .value("Classical", WanderPart::Classical)
      .value("Shot", WanderPart::Shot);

  m.def("wander_report", &wander_report, py::arg("beam"), py::arg("spectrum"));
  m.def("wander_crossover_time", &wander_crossover_time, py::arg("beam"),
        py::arg("spectrum"));
  m.def(
      "wander_quadrature",
      [](const BeamParams& b, const SpectrumModel& s, WanderPart part) {
        return wander_quadrature(b, s, part);
      },
      py::arg("beam"), py::arg("spectrum"), py::arg("part"));

  py::enum_<InitialWidthMode>(m, "InitialWidthMode")
      .value("PointSource", InitialWidthMode::PointSource)
      .value("GaussianWaist", InitialWidthMode::GaussianWaist)
      .value("DiffuserWaist", InitialWidthMode::DiffuserWaist);

  py::class_<McConfig>(m, "McConfig")
      .def(py::init<>())
      .def_readwrite("n_photons", &McConfig::n_photons)
      .def_readwrite("seed", &McConfig::seed)
      .def_readwrite("record_times", &McConfig::record_times)
      .def_readwrite("max_events_per_photon", &McConfig::max_events_per_photon)
      .def_readwrite("initial_width_mode", &McConfig::initial_width_mode)
      .def_readwrite("g2", &McConfig::g2)
      .def_readwrite("histogram_bins", &McConfig::histogram_bins)
      .def_readwrite("histogram_rmax", &McConfig::histogram_rmax)
      .def_readwrite("n_threads", &McConfig::n_threads);

  py::class_<McRecord>(m, "McRecord")
      .def_readonly("t", &McRecord::t)
      .def_readonly("mean_q2", &McRecord::mean_q2)
      .def_readonly("stderr_q2", &McRecord::stderr_q2)
      .def_readonly("mean_r2", &McRecord::mean_r2)
      .def_readonly("stderr_r2", &McRecord::stderr_r2)
      .def_readonly("mean_rq", &McRecord::mean_rq)
      .def_readonly("stderr_rq", &McRecord::stderr_rq);

  py::class_<RadialHistogram>(m, "RadialHistogram")
      .def_readonly("bin_edges", &RadialHistogram::bin_edges)
      .def_readonly("counts", &RadialHistogram::counts)
      .def_readonly("stderr_counts", &RadialHistogram::stderr_counts)
      .def_readonly("overflow", &RadialHistogram::overflow);

  py::class_<McEstimate>(m, "McEstimate")
      .def_readonly("n_photons", &McEstimate::n_photons)
      .def_readonly("records", &McEstimate::records)
      .def_readonly("histograms", &McEstimate::histograms)
      .def("to_csv", &McEstimate::to_csv)
      .def("to_json", &McEstimate::to_json);

  m.def("simulate_photons", &simulate_photons, py::arg("beam"),
        py::arg("spectrum"), py::arg("config"),
        py::call_guard<py::gil_scoped_release>(),
        "Event-driven kinetic Monte-Carlo; deterministic in (seed, config) "
        "for any thread count.");
}
