#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "fivmon/error.hpp"
#include "fivmon/pipeline.hpp"

namespace py = pybind11;
using namespace fivmon;

namespace {

using DoubleArray = py::array_t<double, py::array::c_style | py::array::forcecast>;

std::vector<double> to_vector(const DoubleArray& a) {
  if (a.ndim() != 1) throw InputError("expected a one-dimensional array");
  return std::vector<double>(a.data(), a.data() + a.size());
}

DoubleArray to_array(const std::vector<double>& v) {
  DoubleArray out(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

TimeSeriesRecord make_record(const DoubleArray& samples, double fs,
                             std::optional<double> t_capture = std::nullopt) {
  return TimeSeriesRecord(to_vector(samples), fs, t_capture);
}

std::vector<TimeSeriesRecord> make_records(const std::vector<DoubleArray>& samples, double fs,
                                           const std::optional<std::vector<double>>& times) {
  if (times && times->size() != samples.size()) {
    throw InputError("t_capture length does not match the number of records");
  }
  std::vector<TimeSeriesRecord> out;
  out.reserve(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    out.push_back(make_record(samples[i], fs,
                              times ? std::optional<double>((*times)[i]) : std::nullopt));
  }
  return out;
}

// JSON objects cross the boundary as text; the Python wrapper decodes them.
std::string dumps(const nlohmann::json& j) { return j.dump(); }

py::dict fit_to_dict(const TrendFit& f) {
  py::dict d;
  d["mu0"] = f.mu0;
  d["mu_inf"] = f.mu_inf;
  d["tau"] = f.tau;
  d["rmse"] = f.rmse;
  d["t_origin"] = f.t_origin;
  d["no_decay"] = f.no_decay;
  return d;
}

py::dict segmentation_to_dict(const StageSegmentation& s) {
  py::list stages;
  for (const auto& st : s.stages) {
    py::dict d;
    d["label"] = to_string(st.stage);
    d["start_min"] = st.start_min;
    d["end_min"] = st.end_min;
    stages.append(d);
  }
  py::dict out;
  out["boundary_minutes"] = s.boundary_minutes;
  out["stages"] = stages;
  out["method_tag"] = s.method_tag;
  out["flags"] = s.flags;
  return out;
}

}  // namespace

PYBIND11_MODULE(_fivmon, m) {
  m.doc() = "Friction-induced vibration monitoring core";
  m.attr("__version__") = FIVMON_VERSION;

  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<AnalysisError>(m, "AnalysisError", PyExc_RuntimeError);

  m.def(
      "power_spectrum",
      [](const DoubleArray& x, double fs, std::size_t segment_length, double overlap) {
        auto s = compute_power_spectrum(make_record(x, fs), segment_length, overlap);
        return py::make_tuple(to_array(s.frequencies), to_array(s.power));
      },
      py::arg("samples"), py::arg("sample_rate"), py::arg("segment_length") = 2048,
      py::arg("overlap") = 0.5, "Welch PSD; returns (frequencies, power).");

  m.def(
      "rms", [](const DoubleArray& x) { return rms(to_vector(x)); }, py::arg("samples"));

  m.def(
      "dominant_frequency",
      [](const DoubleArray& x, double fs, double lo, double hi, std::size_t segment_length) {
        auto s = compute_power_spectrum(make_record(x, fs), segment_length, 0.5);
        return dominant_frequency(s, {lo, hi});
      },
      py::arg("samples"), py::arg("sample_rate"), py::arg("lo_hz") = kDefaultSquealSearchRange.lo_hz,
      py::arg("hi_hz") = kDefaultSquealSearchRange.hi_hz, py::arg("segment_length") = 2048);

  m.def(
      "band_range",
      [](std::size_t n, double fs, int level, int band) {
        auto r = band_frequency_range(make_hwpt_plan(n, fs, level), band);
        return py::make_tuple(r.lo_hz, r.hi_hz);
      },
      py::arg("n_samples"), py::arg("sample_rate"), py::arg("level"), py::arg("band"));

  m.def(
      "select_band",
      [](std::size_t n, double fs, int level, double hz) {
        return select_band_for_frequency(make_hwpt_plan(n, fs, level), hz);
      },
      py::arg("n_samples"), py::arg("sample_rate"), py::arg("level"), py::arg("frequency_hz"));

  m.def(
      "band_energies",
      [](const DoubleArray& x, double fs, int level) {
        return to_array(hwpt_decompose(make_record(x, fs), level).band_energies());
      },
      py::arg("samples"), py::arg("sample_rate"), py::arg("level") = 7);

  m.def(
      "extract_band",
      [](const DoubleArray& x, double fs, int level, int band) {
        return to_array(extract_fiv(make_record(x, fs), level, band).samples());
      },
      py::arg("samples"), py::arg("sample_rate"), py::arg("level"), py::arg("band"),
      "Samples of one HWPT band, same length as the input.");

  m.def(
      "identify_reference_frequency",
      [](const std::vector<DoubleArray>& records, double fs, double lo, double hi) {
        return dumps(reference_to_json(
            identify_reference_frequency(make_records(records, fs, std::nullopt), {lo, hi})));
      },
      py::arg("records"), py::arg("sample_rate"), py::arg("lo_hz") = kDefaultSquealSearchRange.lo_hz,
      py::arg("hi_hz") = kDefaultSquealSearchRange.hi_hz);

  m.def(
      "rms_series",
      [](const std::vector<DoubleArray>& records, const std::vector<double>& t_capture, double fs,
         int level, int band, double window_s) {
        auto s = rms_series(make_records(records, fs, t_capture), level, band, window_s);
        py::dict d;
        d["window_centers"] = to_array(s.window_centers);
        d["rms_values"] = to_array(s.rms_values);
        d["records_per_window"] = s.records_per_window;
        d["window_seconds"] = s.window_seconds;
        return d;
      },
      py::arg("records"), py::arg("t_capture"), py::arg("sample_rate"), py::arg("level"),
      py::arg("band"), py::arg("window_seconds") = 60.0);

  m.def(
      "fit_friction_trend",
      [](const std::vector<double>& t, const std::vector<double>& mu) {
        return fit_to_dict(fit_friction_trend(FrictionTrace(t, mu)));
      },
      py::arg("times_min"), py::arg("mu"));

  m.def(
      "segment_stages",
      [](const std::vector<double>& t, const std::vector<double>& mu, double threshold) {
        FrictionTrace trace(t, mu);
        return segmentation_to_dict(segment_stages(fit_friction_trend(trace), trace, threshold));
      },
      py::arg("times_min"), py::arg("mu"), py::arg("slope_threshold") = kDefaultSlopeThreshold);

  py::class_<ContactSpec>(m, "ContactSpec")
      .def(py::init<>())
      .def_readwrite("ra_m", &ContactSpec::ra_m)
      .def_readwrite("rb_m", &ContactSpec::rb_m)
      .def_readwrite("ea_pa", &ContactSpec::ea_pa)
      .def_readwrite("eb_pa", &ContactSpec::eb_pa)
      .def_readwrite("nu_a", &ContactSpec::nu_a)
      .def_readwrite("nu_b", &ContactSpec::nu_b)
      .def_readwrite("k_ellipticity", &ContactSpec::k_ellipticity)
      .def_readwrite("eta_pa_s", &ContactSpec::eta_pa_s)
      .def_readwrite("entrain_velocity_m_s", &ContactSpec::entrain_velocity_m_s)
      .def_readwrite("load_n", &ContactSpec::load_n);

  m.def(
      "composite_roughness",
      [](double s1, double s2) { return composite_roughness({s1, s2}); }, py::arg("sigma1_um"),
      py::arg("sigma2_um"));
  m.def("composite_modulus", &composite_modulus, py::arg("spec"));
  m.def("hamrock_dowson_hmin", &hamrock_dowson_hmin, py::arg("spec"));
  m.def("hertz_max_pressure", &hertz_max_pressure, py::arg("spec"));
  m.def("film_thickness_ratio", &film_thickness_ratio, py::arg("h_min_m"), py::arg("sigma_c_um"));
  m.def(
      "classify_regime", [](double l) { return to_string(classify_regime(l)); },
      py::arg("lambda_ratio"));
  m.def(
      "reciprocating_velocities",
      [](double stroke, double rpm) {
        auto v = reciprocating_velocities(stroke, rpm);
        return py::make_tuple(v.mean_sliding_m_s, v.entrainment_m_s);
      },
      py::arg("stroke_m"), py::arg("rpm"));
  m.def(
      "lubrication_report",
      [](const ContactSpec& spec, double s1, double s2, std::optional<double> h_override) {
        return dumps(lubrication_to_json(lubrication_report(spec, {s1, s2}, h_override)));
      },
      py::arg("spec"), py::arg("sigma1_um"), py::arg("sigma2_um"), py::arg("h_min_m") = py::none());

  m.def(
      "generate_squeal_records",
      [](const std::vector<double>& freqs, double fs, std::size_t n, double snr_db,
         std::uint64_t seed) {
        std::vector<DoubleArray> out;
        for (const auto& r : generate_squeal_records(freqs, fs, n, snr_db, seed)) {
          out.push_back(to_array(r.samples()));
        }
        return out;
      },
      py::arg("freqs_hz"), py::arg("sample_rate"), py::arg("record_samples"), py::arg("snr_db"),
      py::arg("seed") = 1);

  m.def(
      "generate_runin",
      [](const std::string& scenario_json) {
        const auto sc = scenario_from_json(nlohmann::json::parse(scenario_json));
        const auto ds = generate_runin_records(sc.runin);
        std::vector<DoubleArray> records;
        std::vector<double> times;
        std::vector<double> envelope;
        for (std::size_t i = 0; i < ds.records.size(); ++i) {
          records.push_back(to_array(ds.records[i].samples()));
          times.push_back(ds.envelope[i].t_capture_s);
          envelope.push_back(ds.envelope[i].fiv_amplitude);
        }
        const auto& r = sc.runin;
        const auto trace = generate_friction_trace(r.friction, r.duration_minutes,
                                                   r.friction_cadence_minutes, r.friction_noise_sd,
                                                   r.rng_seed);
        py::dict d;
        d["records"] = records;
        d["t_capture"] = to_array(times);
        d["envelope"] = to_array(envelope);
        d["sample_rate"] = r.sample_rate;
        d["friction_times"] = to_array(trace.times());
        d["friction_mu"] = to_array(trace.mu_values());
        return d;
      },
      py::arg("scenario_json") = "{}");

  m.def(
      "analyze",
      [](const std::vector<DoubleArray>& records, const std::vector<double>& t_capture, double fs,
         std::optional<std::vector<double>> friction_times,
         std::optional<std::vector<double>> friction_mu,
         std::optional<std::vector<DoubleArray>> squeal, std::optional<double> reference_hz,
         const std::string& config_json, const std::string& clock) {
        AnalysisInputs in;
        in.records = make_records(records, fs, t_capture);
        if (friction_times.has_value() != friction_mu.has_value()) {
          throw InputError("friction_times and friction_mu must be given together");
        }
        if (friction_times) in.friction = FrictionTrace(*friction_times, *friction_mu);
        if (squeal) in.squeal_records = make_records(*squeal, fs, std::nullopt);
        in.reference_hz = reference_hz;
        const auto config = config_from_json(nlohmann::json::parse(config_json));
        Provenance prov;
        prov.generated_at = clock;
        AnalysisReport report;
        {
          py::gil_scoped_release release;
          report = analyze(in, config);
        }
        return dumps(report_to_json(report, config, prov));
      },
      py::arg("records"), py::arg("t_capture"), py::arg("sample_rate"),
      py::arg("friction_times") = py::none(), py::arg("friction_mu") = py::none(),
      py::arg("squeal_records") = py::none(), py::arg("reference_hz") = py::none(),
      py::arg("config_json") = "{}", py::arg("clock") = "");
}
