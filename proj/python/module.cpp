#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "stet/errors.hpp"
#include "stet/io.hpp"
#include "stet/metrics.hpp"
#include "stet/pipeline.hpp"
#include "stet/reconstruction.hpp"

namespace py = pybind11;
using namespace stet;

namespace {

// numpy bool matrix from an Eigen bool array
py::array_t<bool> bool_array(const BoolArray& a) {
  py::array_t<bool> out({a.rows(), a.cols()});
  auto r = out.mutable_unchecked<2>();
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) r(i, j) = a(i, j);
  return out;
}

py::array_t<signed char> branch_array(
    const Eigen::Array<signed char, Eigen::Dynamic, Eigen::Dynamic>& a) {
  py::array_t<signed char> out({a.rows(), a.cols()});
  auto r = out.mutable_unchecked<2>();
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) r(i, j) = a(i, j);
  return out;
}

}  // namespace

PYBIND11_MODULE(_stet, m) {
  m.doc() = "Sharp time-frequency representations by synchro/transient extraction";

  py::register_exception<ConfigError>(m, "StetConfigError", PyExc_ValueError);
  py::register_exception<InputError>(m, "StetInputError", PyExc_IOError);
  py::register_exception<NumericError>(m, "StetNumericError", PyExc_ArithmeticError);

  py::class_<Signal>(m, "Signal")
      .def(py::init([](const Eigen::VectorXcd& samples, double fs, double start_time) {
             Signal s;
             s.samples = samples;
             s.sample_rate_hz = fs;
             s.start_time_s = start_time;
             return s;
           }),
           py::arg("samples"), py::arg("sample_rate_hz"), py::arg("start_time_s") = 0.0)
      .def_readonly("samples", &Signal::samples)
      .def_readonly("sample_rate_hz", &Signal::sample_rate_hz)
      .def_readonly("start_time_s", &Signal::start_time_s)
      .def_property_readonly("duration_s", &Signal::duration_s)
      .def("__len__", [](const Signal& s) { return s.samples.size(); });

  m.def("synth_harmonic", &synth_harmonic, py::arg("amplitude"), py::arg("omega0_rad_s"),
        py::arg("duration_s"), py::arg("fs_hz"));
  m.def("synth_impulse", &synth_impulse, py::arg("amplitude"), py::arg("t0_s"),
        py::arg("duration_s"), py::arg("fs_hz"));
  m.def("synth_lfm", &synth_lfm, py::arg("amplitude"), py::arg("phase0_rad"),
        py::arg("omega_start_rad_s"), py::arg("chirp_rate_rad_s2"), py::arg("duration_s"),
        py::arg("fs_hz"));
  m.def("mix", &mix, py::arg("signals"));
  m.def("add_noise", &add_noise, py::arg("signal"), py::arg("snr_db"), py::arg("seed"));
  m.def("to_analytic", &to_analytic, py::arg("signal"));
  m.def("signal_power", &signal_power, py::arg("signal"));

  py::class_<GaussianWindowSpec>(m, "GaussianWindowSpec")
      .def_readonly("beta_s2", &GaussianWindowSpec::beta_s2)
      .def_readonly("half_len", &GaussianWindowSpec::half_len)
      .def_readonly("fs_hz", &GaussianWindowSpec::fs_hz)
      .def_property_readonly("length", &GaussianWindowSpec::length)
      .def_property_readonly("sigma_s", &GaussianWindowSpec::sigma_s);

  m.def("make_gaussian_window",
        py::overload_cast<double, double>(&make_gaussian_window), py::arg("beta_s2"),
        py::arg("fs_hz"));
  m.def("make_gaussian_window",
        py::overload_cast<double, double, int, bool>(&make_gaussian_window), py::arg("beta_s2"),
        py::arg("fs_hz"), py::arg("half_len"), py::arg("allow_wide_tail") = false);
  m.def("sample_window", &sample_window);
  m.def("sample_dwindow", &sample_dwindow);
  m.def("sample_twindow", &sample_twindow);
  m.def("frequency_response", &frequency_response, py::arg("spec"), py::arg("omega_rad_s"));

  py::enum_<GridKind>(m, "GridKind")
      .value("STFT", GridKind::Stft)
      .value("SET", GridKind::Set)
      .value("TET", GridKind::Tet)
      .value("STET", GridKind::Stet)
      .value("STET2", GridKind::Stet2)
      .value("DSTFT_T", GridKind::StftDt)
      .value("DSTFT_W", GridKind::StftDw);

  py::class_<TFGrid>(m, "TFGrid")
      .def_readonly("values", &TFGrid::values)
      .def_readonly("time_axis_s", &TFGrid::time_axis_s)
      .def_readonly("freq_axis_rad_s", &TFGrid::freq_axis_rad_s)
      .def_readonly("window", &TFGrid::window)
      .def_readonly("kind", &TFGrid::kind)
      .def_readonly("n_fft", &TFGrid::n_fft)
      .def_property_readonly("fs_hz", &TFGrid::fs_hz)
      .def_property_readonly("freq_step_rad_s", &TFGrid::freq_step_rad_s)
      .def_property_readonly("time_step_s", &TFGrid::time_step_s)
      .def_property_readonly("edge_margin", &TFGrid::edge_margin);

  m.def("stft", &stft, py::arg("signal"), py::arg("window"), py::arg("n_fft"));
  m.def("stft_dt", &stft_dt, py::arg("signal"), py::arg("window"), py::arg("n_fft"));
  m.def("stft_dw", &stft_dw, py::arg("signal"), py::arg("window"), py::arg("n_fft"));
  m.def("harmonic_stft_oracle", &harmonic_stft_oracle);
  m.def("impulse_stft_oracle", &impulse_stft_oracle);
  m.def("lfm_stft_oracle", &lfm_stft_oracle);

  py::class_<EstimatorFields>(m, "EstimatorFields")
      .def_readonly("omega_hat", &EstimatorFields::omega_hat)
      .def_readonly("t_hat", &EstimatorFields::t_hat)
      .def_readonly("d_omega_hat_dt", &EstimatorFields::d_omega_hat_dt)
      .def_readonly("d_omega_hat_dw", &EstimatorFields::d_omega_hat_dw)
      .def_readonly("d_t_hat_dt", &EstimatorFields::d_t_hat_dt)
      .def_readonly("d_t_hat_dw", &EstimatorFields::d_t_hat_dw)
      .def_readonly("chirp_rate", &EstimatorFields::chirp_rate)
      .def_readonly("omega_hat2", &EstimatorFields::omega_hat2)
      .def_readonly("t_hat2", &EstimatorFields::t_hat2)
      .def_property_readonly("mask", [](const EstimatorFields& f) { return bool_array(f.mask); })
      .def_property_readonly("mask_chirp",
                             [](const EstimatorFields& f) { return bool_array(f.mask_chirp); })
      .def_property_readonly("fallback_if2",
                             [](const EstimatorFields& f) { return bool_array(f.fallback_if2); })
      .def_property_readonly("fallback_gd2",
                             [](const EstimatorFields& f) { return bool_array(f.fallback_gd2); })
      .def_readonly("gamma", &EstimatorFields::gamma)
      .def_readonly("beta_s2", &EstimatorFields::beta_s2);

  m.def("compute_estimator_fields", &compute_estimator_fields, py::arg("V"), py::arg("dVt"),
        py::arg("dVw"), py::arg("gamma") = kDefaultGamma);
  m.def("rectify_for_set", &rectify_for_set, py::arg("V"), py::arg("fields"));
  m.def("rectify_for_tet", &rectify_for_tet, py::arg("V"), py::arg("fields"));

  py::class_<ExtractionConfig>(m, "ExtractionConfig")
      .def(py::init<>())
      .def_readwrite("boundary_rad_s2", &ExtractionConfig::boundary_rad_s2)
      .def_readwrite("freq_tolerance", &ExtractionConfig::freq_tolerance)
      .def_readwrite("time_tolerance", &ExtractionConfig::time_tolerance)
      .def_readwrite("gamma", &ExtractionConfig::gamma)
      .def_readwrite("median_filter_branch", &ExtractionConfig::median_filter_branch);

  m.def("default_extraction_config", &default_extraction_config, py::arg("V"),
        py::arg("gamma") = kDefaultGamma);
  m.def("set_transform", &set_transform, py::arg("V"), py::arg("fields"), py::arg("config"));
  m.def("tet_transform", &tet_transform, py::arg("V"), py::arg("fields"), py::arg("config"));

  py::class_<StetResult>(m, "StetResult")
      .def_readonly("grid", &StetResult::grid)
      .def_property_readonly("branch", [](const StetResult& r) { return branch_array(r.branch); })
      .def_readonly("fallback_pixel_count", &StetResult::fallback_pixel_count);

  m.def("stet_transform", &stet_transform, py::arg("V"), py::arg("fields"), py::arg("config"));
  m.def("improved_stet_transform", &improved_stet_transform, py::arg("V"), py::arg("fields"),
        py::arg("config"));

  py::class_<ReconstructionResult>(m, "ReconstructionResult")
      .def_readonly("s1", &ReconstructionResult::s1)
      .def_readonly("s2", &ReconstructionResult::s2)
      .def_readonly("total", &ReconstructionResult::total)
      .def_readonly("interior_mask", &ReconstructionResult::interior_mask);

  m.def("reconstruct_harmonic", &reconstruct_harmonic, py::arg("extracted"));
  m.def("reconstruct_impulsive", &reconstruct_impulsive, py::arg("extracted"));
  m.def("reconstruct", &reconstruct, py::arg("extracted"));

  py::enum_<Method>(m, "Method")
      .value("STFT", Method::Stft)
      .value("SET", Method::Set)
      .value("TET", Method::Tet)
      .value("STET", Method::Stet)
      .value("STET2", Method::Stet2);
  m.def("method_from_name", &method_from_name);

  py::class_<AnalysisConfig>(m, "AnalysisConfig")
      .def_readonly("window", &AnalysisConfig::window)
      .def_readonly("n_fft", &AnalysisConfig::n_fft)
      .def_readonly("extraction", &AnalysisConfig::extraction);

  m.def("make_analysis_config", &make_analysis_config, py::arg("fs_hz"), py::arg("n_samples"),
        py::arg("beta_s2") = 0.0, py::arg("n_fft") = 0, py::arg("gamma") = kDefaultGamma,
        py::arg("boundary_override") = 0.0);

  py::class_<Analysis>(m, "Analysis")
      .def_readonly("V", &Analysis::V)
      .def_readonly("dVt", &Analysis::dVt)
      .def_readonly("dVw", &Analysis::dVw)
      .def_readonly("fields", &Analysis::fields)
      .def_readonly("config", &Analysis::config);

  m.def("analyze", &analyze, py::arg("signal"), py::arg("config"));
  m.def("extract", &extract, py::arg("analysis"), py::arg("method"));
  m.def("extract_stet", &extract_stet, py::arg("analysis"), py::arg("improved"));

  m.def("renyi_entropy", &renyi_entropy, py::arg("grid"), py::arg("alpha") = 3.0);
  m.def(
      "normalized_energy_curve",
      [](const TFGrid& g, int points) {
        std::vector<std::pair<long, double>> out;
        for (const auto& p : normalized_energy_curve(g, points))
          out.emplace_back(p.coefficient_count, p.energy_fraction);
        return out;
      },
      py::arg("grid"), py::arg("points"));
  m.def("coefficient_count_for_energy", &coefficient_count_for_energy, py::arg("grid"),
        py::arg("fraction"));
  m.def(
      "snr_sweep",
      [](const Signal& clean, const std::vector<double>& snrs, Method method,
         const AnalysisConfig& cfg, std::uint64_t seed, double alpha) {
        std::vector<std::pair<double, double>> out;
        for (const auto& p : snr_sweep(clean, snrs, method, cfg, seed, alpha))
          out.emplace_back(p.snr_db, p.renyi_entropy_bits);
        return out;
      },
      py::arg("clean"), py::arg("snrs_db"), py::arg("method"), py::arg("config"), py::arg("seed"),
      py::arg("alpha") = 3.0);

  py::enum_<RidgeOrientation>(m, "RidgeOrientation")
      .value("TIME_INDEXED", RidgeOrientation::TimeIndexed)
      .value("FREQUENCY_INDEXED", RidgeOrientation::FrequencyIndexed);

  m.def(
      "extract_ridge",
      [](const TFGrid& g, RidgeOrientation orientation, double penalty) {
        const RidgeTrack t = extract_ridge(g, orientation, penalty);
        std::vector<std::tuple<double, double, double>> out;
        for (const auto& p : t.points) out.emplace_back(p.time_s, p.omega_rad_s, p.magnitude);
        return out;
      },
      py::arg("grid"), py::arg("orientation") = RidgeOrientation::TimeIndexed,
      py::arg("smoothness_penalty") = 1.0);

  m.def("read_signal", &read_signal, py::arg("path"));
  m.def("read_signal_csv", &read_signal_csv, py::arg("path"));
  m.def("read_wav", &read_wav, py::arg("path"));
  m.def("write_signal_csv", &write_signal_csv, py::arg("path"), py::arg("signal"),
        py::arg("include_imag") = true);
}
