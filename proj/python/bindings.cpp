#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "femtherm/csv.hpp"
#include "femtherm/fempipe.hpp"
#include "femtherm/rcnet.hpp"
#include "femtherm/synth.hpp"

namespace py = pybind11;
using namespace femtherm;

namespace {

// Coefficients cross the boundary as plain dicts keyed like the report files.
py::dict coeffs_to_dict(const ModelCoefficients& c) {
    py::dict d;
    d["model"] = std::string(to_string(c.kind()));
    std::visit(
        [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, RossCoeffs>) {
                d["k"] = v.k;
            } else if constexpr (std::is_same_v<T, SandiaCoeffs>) {
                d["a"] = v.a;
                d["b"] = v.b;
            } else if constexpr (std::is_same_v<T, FaimanCoeffs>) {
                d["u0"] = v.u0;
                d["u1"] = v.u1;
            } else if constexpr (std::is_same_v<T, Wm1Coeffs>) {
                d["k"] = v.k;
                d["d"] = v.d;
            } else {
                d["k"] = v.k;
                d["k_w"] = v.k_w;
                d["ws_cap"] = v.ws_cap;
            }
        },
        c.value);
    return d;
}

ModelCoefficients coeffs_from_dict(const py::dict& d) {
    ModelCoefficients c;
    const auto kind = model_from_string(d["model"].cast<std::string>());
    switch (kind) {
        case ModelKind::ross: c.value = RossCoeffs{d["k"].cast<double>()}; break;
        case ModelKind::sandia:
            c.value = SandiaCoeffs{d["a"].cast<double>(), d["b"].cast<double>()};
            break;
        case ModelKind::faiman:
            c.value = FaimanCoeffs{d["u0"].cast<double>(), d["u1"].cast<double>()};
            break;
        case ModelKind::wm1:
            c.value = Wm1Coeffs{d["k"].cast<double>(), d["d"].cast<double>()};
            break;
        case ModelKind::wm2:
            c.value = Wm2Coeffs{d["k"].cast<double>(), d["k_w"].cast<double>(),
                                d.contains("ws_cap") ? d["ws_cap"].cast<double>() : 8.0};
            break;
    }
    c.validate();
    return c;
}

}  // namespace

PYBIND11_MODULE(_femtherm, m) {
    m.doc() = "PV module thermal models: RC calculus, filtered fits, EWM dynamics, "
              "bias-corrected predictions";

    // ---- series -----------------------------------------------------------
    py::class_<WeatherSeries>(m, "WeatherSeries")
        .def(py::init<>())
        .def_readwrite("timestamps", &WeatherSeries::timestamps)
        .def_readwrite("g_poa", &WeatherSeries::g_poa)
        .def_readwrite("t_ambient", &WeatherSeries::t_ambient)
        .def_readwrite("t_module", &WeatherSeries::t_module)
        .def_readwrite("ws", &WeatherSeries::ws)
        .def_readwrite("dt_seconds", &WeatherSeries::dt_seconds)
        .def_readwrite("site_id", &WeatherSeries::site_id)
        .def("validate", &WeatherSeries::validate)
        .def("__len__", &WeatherSeries::size);

    py::class_<OverTempSeries>(m, "OverTempSeries")
        .def(py::init<>())
        .def_readwrite("timestamps", &OverTempSeries::timestamps)
        .def_readwrite("t_over", &OverTempSeries::t_over)
        .def_readwrite("g_poa", &OverTempSeries::g_poa)
        .def_readwrite("ws", &OverTempSeries::ws)
        .def_readwrite("dt_seconds", &OverTempSeries::dt_seconds)
        .def_readwrite("site_id", &OverTempSeries::site_id)
        .def("__len__", &OverTempSeries::size);

    py::class_<FilterSpec>(m, "FilterSpec")
        .def(py::init<>())
        .def_readwrite("g_min", &FilterSpec::g_min)
        .def_readwrite("ws_min", &FilterSpec::ws_min)
        .def_readwrite("ws_max", &FilterSpec::ws_max)
        .def_readwrite("max_ws_variation", &FilterSpec::max_ws_variation)
        .def_readwrite("resample_window_s", &FilterSpec::resample_window_s);

    py::class_<SplitSeries>(m, "SplitSeries")
        .def(py::init<>())
        .def_readwrite("train", &SplitSeries::train)
        .def_readwrite("test", &SplitSeries::test);

    py::class_<CsvSchema>(m, "CsvSchema")
        .def(py::init<>())
        .def_readwrite("timestamp", &CsvSchema::timestamp)
        .def_readwrite("g_poa", &CsvSchema::g_poa)
        .def_readwrite("t_ambient", &CsvSchema::t_ambient)
        .def_readwrite("t_module", &CsvSchema::t_module)
        .def_readwrite("ws", &CsvSchema::ws);

    py::class_<LoadResult>(m, "LoadResult")
        .def_readonly("series", &LoadResult::series)
        .def_readonly("rows_read", &LoadResult::rows_read)
        .def_readonly("rows_dropped", &LoadResult::rows_dropped);

    m.def("load_csv", &load_csv, py::arg("path"), py::arg("schema") = CsvSchema{},
          py::arg("dt_expected"), py::arg("site_id") = std::string{});
    m.def("write_csv", &write_csv, py::arg("path"), py::arg("series"));
    m.def("resample_mean",
          py::overload_cast<const WeatherSeries&, std::int64_t>(&resample_mean),
          py::arg("series"), py::arg("window_s"));
    m.def("resample_mean_over_temp",
          py::overload_cast<const OverTempSeries&, std::int64_t>(&resample_mean),
          py::arg("series"), py::arg("window_s"));
    m.def("over_temperature", &over_temperature);
    m.def("split_weekday_weekend", &split_weekday_weekend);
    m.def("filter_rows", &filter_rows, py::arg("series"), py::arg("spec"));
    m.def("ws_quantile", &ws_quantile, py::arg("series"), py::arg("q"));

    // ---- rc network --------------------------------------------------------
    py::class_<LayerSpec>(m, "LayerSpec")
        .def(py::init<>())
        .def_readwrite("name", &LayerSpec::name)
        .def_readwrite("thickness_m", &LayerSpec::thickness_m)
        .def_readwrite("conductivity", &LayerSpec::conductivity)
        .def_readwrite("density", &LayerSpec::density)
        .def_readwrite("specific_heat", &LayerSpec::specific_heat)
        .def_readwrite("area_m2", &LayerSpec::area_m2);

    py::class_<LayerRc>(m, "LayerRc")
        .def_readonly("r_eq", &LayerRc::r_eq)
        .def_readonly("c_eq", &LayerRc::c_eq)
        .def_readonly("tau0_s", &LayerRc::tau0_s)
        .def_readonly("mass_kg", &LayerRc::mass_kg);

    py::class_<LayerStack>(m, "LayerStack")
        .def(py::init<>())
        .def_readwrite("name", &LayerStack::name)
        .def_readwrite("front_layers", &LayerStack::front_layers)
        .def_readwrite("back_layers", &LayerStack::back_layers)
        .def_readwrite("front_air_film", &LayerStack::front_air_film)
        .def_readwrite("back_air_film", &LayerStack::back_air_film);

    py::class_<RcSummary::Row>(m, "RcRow")
        .def_readonly("name", &RcSummary::Row::name)
        .def_readonly("r_eq", &RcSummary::Row::r_eq)
        .def_readonly("c_eq", &RcSummary::Row::c_eq)
        .def_readonly("tau0_s", &RcSummary::Row::tau0_s)
        .def_readonly("mass_kg", &RcSummary::Row::mass_kg);

    py::class_<RcSummary>(m, "RcSummary")
        .def_readonly("total_front", &RcSummary::total_front)
        .def_readonly("total_back", &RcSummary::total_back)
        .def_readonly("total_front_air", &RcSummary::total_front_air)
        .def_readonly("total_back_air", &RcSummary::total_back_air)
        .def_readonly("total", &RcSummary::total)
        .def_readonly("total_air", &RcSummary::total_air)
        .def("overall_tau0_s", &RcSummary::overall_tau0_s);

    m.def("layer_rc", &layer_rc);
    m.def("stack_summary", &stack_summary, py::arg("stack"), py::arg("include_air"));
    m.def("air_film_for_target", &air_film_for_target, py::arg("r_target"),
          py::arg("lambda_air") = 0.023, py::arg("density") = 1.23,
          py::arg("specific_heat") = 1000.0, py::arg("area_m2") = 1.6);

    // ---- models ------------------------------------------------------------
    m.def("predict", [](const py::dict& coeffs, const std::vector<double>& g,
                        const std::vector<double>& ws) {
        return predict(coeffs_from_dict(coeffs), g, ws);
    });
    m.def("predict_point", [](const py::dict& coeffs, double g, double ws) {
        return predict_point(coeffs_from_dict(coeffs), g, ws);
    });
    m.def("sandia_to_wm1", [](double a, double b) {
        const auto w = sandia_to_wm1({a, b});
        return py::make_tuple(w.k, w.d);
    });
    m.def("wm1_to_sandia", [](double k, double d) {
        const auto s = wm1_to_sandia({k, d});
        return py::make_tuple(s.a, s.b);
    });

    // ---- ewm ----------------------------------------------------------------
    py::class_<EwmParams>(m, "EwmParams")
        .def(py::init<>())
        .def_readwrite("tau_s", &EwmParams::tau_s)
        .def_readwrite("dt_s", &EwmParams::dt_s)
        .def_readwrite("alpha", &EwmParams::alpha)
        .def_readwrite("span", &EwmParams::span);

    m.def("alpha_from", &alpha_from, py::arg("tau_s"), py::arg("dt_s"));
    m.def("span_from", &span_from, py::arg("alpha"));
    m.def("ewm_params", &ewm_params, py::arg("tau_s"), py::arg("dt_s"));
    m.def("ewm", [](const std::vector<double>& x, double alpha) { return ewm(x, alpha); },
          py::arg("x"), py::arg("alpha"));
    m.def("dynamicize",
          [](const py::dict& coeffs, const OverTempSeries& s, const EwmParams& p) {
              return dynamicize(coeffs_from_dict(coeffs), s, p).t_over;
          });

    // ---- fitting -------------------------------------------------------------
    py::class_<FitDefaults>(m, "FitDefaults")
        .def(py::init<>())
        .def_readwrite("g_min", &FitDefaults::g_min)
        .def_readwrite("g_high", &FitDefaults::g_high)
        .def_readwrite("ws_calm_max", &FitDefaults::ws_calm_max)
        .def_readwrite("ws_high_lo", &FitDefaults::ws_high_lo)
        .def_readwrite("ws_high_hi", &FitDefaults::ws_high_hi)
        .def_readwrite("ws_cap", &FitDefaults::ws_cap)
        .def_readwrite("resample_window_s", &FitDefaults::resample_window_s)
        .def_readwrite("step_horizon_s", &FitDefaults::step_horizon_s)
        .def_readwrite("min_rows", &FitDefaults::min_rows)
        .def_readwrite("min_step_events", &FitDefaults::min_step_events)
        .def_readwrite("daytime_g_min", &FitDefaults::daytime_g_min)
        .def_readwrite("tau_margin_s", &FitDefaults::tau_margin_s);

    py::class_<RegressionResult>(m, "RegressionResult")
        .def_readonly("slope", &RegressionResult::slope)
        .def_readonly("intercept", &RegressionResult::intercept)
        .def_readonly("n_samples", &RegressionResult::n_samples)
        .def_readonly("r2", &RegressionResult::r2);

    py::class_<TauBin>(m, "TauBin")
        .def_readonly("ws_center", &TauBin::ws_center)
        .def_readonly("tau_s", &TauBin::tau_s)
        .def_readonly("n_events", &TauBin::n_events);

    py::class_<TauEstimate>(m, "TauEstimate")
        .def_readonly("bins", &TauEstimate::bins)
        .def_readonly("excluded_bins", &TauEstimate::excluded_bins)
        .def_readonly("tau0_s", &TauEstimate::tau0_s)
        .def_readonly("f_s_per_m", &TauEstimate::f_s_per_m)
        .def_readonly("tau_selected_s", &TauEstimate::tau_selected_s)
        .def_readonly("warnings", &TauEstimate::warnings);

    py::class_<EmpiricalRc>(m, "EmpiricalRc")
        .def_readonly("r_eq_max", &EmpiricalRc::r_eq_max)
        .def_readonly("r_m", &EmpiricalRc::r_m)
        .def_readonly("r_film", &EmpiricalRc::r_film)
        .def_readonly("c_eq_min", &EmpiricalRc::c_eq_min)
        .def_readonly("c_eq_max", &EmpiricalRc::c_eq_max)
        .def_readonly("c_m", &EmpiricalRc::c_m)
        .def_readonly("c_film", &EmpiricalRc::c_film)
        .def_readonly("tau0_s", &EmpiricalRc::tau0_s)
        .def_readonly("f_s_per_m", &EmpiricalRc::f_s_per_m)
        .def_readonly("tau_selected_s", &EmpiricalRc::tau_selected_s);

    m.def("fit_r_eq_max", &fit_r_eq_max, py::arg("steady"),
          py::arg("defaults") = FitDefaults{});
    m.def("fit_r_eq_min",
          [](const OverTempSeries& steady, const FitDefaults& d) {
              std::vector<std::string> warnings;
              auto r = fit_r_eq_min(steady, d, &warnings);
              return py::make_tuple(r, warnings);
          },
          py::arg("steady"), py::arg("defaults") = FitDefaults{});
    m.def("fit_static",
          [](const std::string& model, const OverTempSeries& steady, const FitDefaults& d) {
              return coeffs_to_dict(fit_static(model_from_string(model), steady, d));
          },
          py::arg("model"), py::arg("steady"), py::arg("defaults") = FitDefaults{});
    py::class_<GBinSlope>(m, "GBinSlope")
        .def_readonly("g_center", &GBinSlope::g_center)
        .def_readonly("slope", &GBinSlope::slope)
        .def_readonly("n_samples", &GBinSlope::n_samples);

    py::class_<Wm2KwFit>(m, "Wm2KwFit")
        .def_readonly("k_w", &Wm2KwFit::k_w)
        .def_readonly("outer", &Wm2KwFit::outer)
        .def_readonly("bins", &Wm2KwFit::bins)
        .def_readonly("skipped_bins", &Wm2KwFit::skipped_bins)
        .def_readonly("h_fixed_mean", &Wm2KwFit::h_fixed_mean);

    m.def("fit_wm2_kw", &fit_wm2_kw, py::arg("steady"), py::arg("defaults") = FitDefaults{});
    m.def("estimate_tau", &estimate_tau, py::arg("native"), py::arg("r_eq_max"),
          py::arg("defaults") = FitDefaults{});
    m.def("select_tau",
          [](const TauEstimate& est, const FitDefaults& d) { return select_tau(est, d); },
          py::arg("estimate"), py::arg("defaults") = FitDefaults{});
    m.def("empirical_c", &empirical_c, py::arg("estimate"), py::arg("r_eq_max_fit"),
          py::arg("r_m_fit"), py::arg("defaults") = FitDefaults{});

    // ---- pipeline + metrics ---------------------------------------------------
    py::class_<KpiReport>(m, "KpiReport")
        .def_readonly("rmse", &KpiReport::rmse)
        .def_readonly("mae", &KpiReport::mae)
        .def_readonly("mbe", &KpiReport::mbe)
        .def_readonly("n_rows", &KpiReport::n_rows)
        .def_readonly("model", &KpiReport::model)
        .def_readonly("variant", &KpiReport::variant);

    py::class_<FemConfig>(m, "FemConfig")
        .def(py::init<>())
        .def_readwrite("fit", &FemConfig::fit)
        .def_readwrite("tau_override_s", &FemConfig::tau_override_s)
        .def_readwrite("night_bias_alternative", &FemConfig::night_bias_alternative);

    py::class_<FemRun>(m, "FemRun")
        .def_readonly("tau_selected_s", &FemRun::tau_selected_s)
        .def_readonly("alpha", &FemRun::alpha)
        .def_readonly("mbe_correction_k", &FemRun::mbe_correction_k)
        .def_readonly("warnings", &FemRun::warnings)
        .def_property_readonly("model",
                               [](const FemRun& r) { return std::string(to_string(r.model)); })
        .def_property_readonly("coefficients",
                               [](const FemRun& r) { return coeffs_to_dict(r.coefficients); })
        .def_property_readonly("static_test",
                               [](const FemRun& r) { return r.static_test.t_over; })
        .def_property_readonly("ewm_test", [](const FemRun& r) { return r.ewm_test.t_over; })
        .def_property_readonly("fem_test", [](const FemRun& r) { return r.fem_test.t_over; });

    py::class_<VariantKpis>(m, "VariantKpis")
        .def_readonly("static_", &VariantKpis::fixed)
        .def_readonly("ewm", &VariantKpis::ewm)
        .def_readonly("fem", &VariantKpis::fem)
        .def_readonly("delta_rmse_k", &VariantKpis::delta_rmse_k)
        .def_readonly("delta_rmse_pct", &VariantKpis::delta_rmse_pct)
        .def_readonly("delta_mae_k", &VariantKpis::delta_mae_k)
        .def_readonly("delta_mae_pct", &VariantKpis::delta_mae_pct);

    m.def("run_fem",
          [](const std::string& model, const SplitSeries& split, const FemConfig& cfg) {
              return run_fem(model_from_string(model), split, cfg);
          },
          py::arg("model"), py::arg("split"), py::arg("config") = FemConfig{});
    m.def("evaluate_variants", &evaluate_variants, py::arg("run"), py::arg("test"),
          py::arg("daytime_g_min") = 20.0);

    m.def("kpis", [](const std::vector<double>& p, const std::vector<double>& q) {
        return kpis(p, q);
    });
    m.def("kpis_daytime",
          [](const std::vector<double>& p, const std::vector<double>& q,
             const std::vector<double>& g, double g_min) {
              return kpis_daytime(p, q, g, g_min);
          },
          py::arg("pred"), py::arg("meas"), py::arg("g"), py::arg("daytime_g_min") = 20.0);
    m.def("energy_error",
          [](const std::vector<double>& p, const std::vector<double>& q,
             const std::vector<double>& g, const std::vector<std::int64_t>& t,
             double gamma, std::int64_t dt, std::optional<double> h_y) {
              const auto r = energy_error(p, q, g, t, gamma, dt, h_y);
              py::dict d;
              d["de_total"] = r.de_total;
              d["de_over"] = r.de_over;
              d["de_under"] = r.de_under;
              d["de_naive"] = r.de_naive;
              d["dpr_approx_pp"] = r.dpr_approx_pp;
              if (r.h_y_kwh_per_m2) d["h_y"] = *r.h_y_kwh_per_m2;
              if (r.dpr_full_pp) d["dpr_full_pp"] = *r.dpr_full_pp;
              return d;
          },
          py::arg("pred"), py::arg("meas"), py::arg("g"), py::arg("timestamps"),
          py::arg("gamma_pct_per_k"), py::arg("dt_s"),
          py::arg("h_y") = std::optional<double>{});
    m.def("delayed_sensor_baseline",
          [](const OverTempSeries& s, const std::vector<std::int64_t>& delays,
             double g_min) { return delayed_sensor_baseline(s, delays, g_min); },
          py::arg("series"), py::arg("delays_s"), py::arg("daytime_g_min") = 20.0);
    m.def("backsheet_to_cell",
          [](const std::vector<double>& tb, const std::vector<double>& g, double k,
             const EwmParams& p) { return backsheet_to_cell(tb, g, k, p); });

    // ---- synth -------------------------------------------------------------
    py::class_<SynthSpec>(m, "SynthSpec")
        .def(py::init<>())
        .def_readwrite("seed", &SynthSpec::seed)
        .def_readwrite("dt_seconds", &SynthSpec::dt_seconds)
        .def_readwrite("days", &SynthSpec::days)
        .def_readwrite("tau_s", &SynthSpec::tau_s)
        .def_readwrite("f_s_per_m", &SynthSpec::f_s_per_m)
        .def_readwrite("noise_sigma_k", &SynthSpec::noise_sigma_k)
        .def_readwrite("bias_k", &SynthSpec::bias_k)
        .def_readwrite("site_id", &SynthSpec::site_id)
        .def_property(
            "model",
            [](const SynthSpec& s) { return std::string(to_string(s.model)); },
            [](SynthSpec& s, const std::string& v) { s.model = model_from_string(v); });

    py::class_<SynthResult>(m, "SynthResult")
        .def_readonly("series", &SynthResult::series)
        .def_readonly("tau_s", &SynthResult::tau_s)
        .def_readonly("noise_sigma_k", &SynthResult::noise_sigma_k)
        .def_readonly("bias_k", &SynthResult::bias_k)
        .def_property_readonly(
            "truth", [](const SynthResult& r) { return coeffs_to_dict(r.truth); });

    m.def("synthesize", &synthesize, py::arg("spec"));
    m.def("default_truth", [](const std::string& model) {
        return coeffs_to_dict(default_truth(model_from_string(model)));
    });
}
