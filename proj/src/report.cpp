#include "femtherm/report.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace femtherm {

std::string config_hash(const json& config) {
    const std::string dump = config.dump();  // nlohmann objects iterate sorted by key
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : dump) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[24];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
    return buf;
}

namespace {

LayerSpec layer_from_json(const json& j) {
    LayerSpec layer;
    layer.name = j.value("name", "layer");
    if (j.contains("thickness_mm"))
        layer.thickness_m = j.at("thickness_mm").get<double>() / 1000.0;
    else
        layer.thickness_m = j.at("thickness_m").get<double>();
    layer.conductivity = j.at("conductivity").get<double>();
    layer.density = j.at("density").get<double>();
    layer.specific_heat = j.at("specific_heat").get<double>();
    layer.area_m2 = j.value("area_m2", 1.0);
    return layer;
}

json layer_to_json(const LayerSpec& layer) {
    return {{"name", layer.name},
            {"thickness_mm", layer.thickness_m * 1000.0},
            {"conductivity", layer.conductivity},
            {"density", layer.density},
            {"specific_heat", layer.specific_heat},
            {"area_m2", layer.area_m2}};
}

}  // namespace

LayerStack stack_from_json(const json& j) {
    LayerStack stack;
    stack.name = j.value("name", "module stack");
    if (!j.contains("front_layers") || !j.contains("back_layers"))
        throw std::runtime_error("stack config needs front_layers and back_layers");
    for (const auto& lj : j.at("front_layers")) stack.front_layers.push_back(layer_from_json(lj));
    for (const auto& lj : j.at("back_layers")) stack.back_layers.push_back(layer_from_json(lj));
    stack.front_air_film = layer_from_json(j.at("front_air_film"));
    stack.back_air_film = layer_from_json(j.at("back_air_film"));
    return stack;
}

json stack_to_json(const LayerStack& stack) {
    json j;
    j["name"] = stack.name;
    j["front_air_film"] = layer_to_json(stack.front_air_film);
    j["back_air_film"] = layer_to_json(stack.back_air_film);
    j["front_layers"] = json::array();
    for (const auto& l : stack.front_layers) j["front_layers"].push_back(layer_to_json(l));
    j["back_layers"] = json::array();
    for (const auto& l : stack.back_layers) j["back_layers"].push_back(layer_to_json(l));
    return j;
}

LayerStack load_stack(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open stack config: " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw std::runtime_error("malformed stack config " + path.string() + ": " + e.what());
    }
    return stack_from_json(j);
}

namespace {

void defaults_from_json(const json& j, FitDefaults& d) {
    d.g_min = j.value("g_min", d.g_min);
    d.g_high = j.value("g_high", d.g_high);
    d.ws_calm_max = j.value("ws_calm_max", d.ws_calm_max);
    d.ws_high_lo = j.value("ws_high_lo", d.ws_high_lo);
    d.ws_high_hi = j.value("ws_high_hi", d.ws_high_hi);
    d.ws_cap = j.value("ws_cap", d.ws_cap);
    d.g_bin_width = j.value("g_bin_width", d.g_bin_width);
    d.g_bin_lo = j.value("g_bin_lo", d.g_bin_lo);
    d.g_bin_hi = j.value("g_bin_hi", d.g_bin_hi);
    d.ws_bin_width = j.value("ws_bin_width", d.ws_bin_width);
    d.ws_bin_lo = j.value("ws_bin_lo", d.ws_bin_lo);
    d.ws_bin_hi = j.value("ws_bin_hi", d.ws_bin_hi);
    d.resample_window_s = j.value("resample_window_s", d.resample_window_s);
    d.step_horizon_s = j.value("step_horizon_s", d.step_horizon_s);
    d.min_rows = j.value("min_rows", d.min_rows);
    d.min_step_events = j.value("min_step_events", d.min_step_events);
    d.sandia_min_t_over = j.value("sandia_min_t_over", d.sandia_min_t_over);
    d.daytime_g_min = j.value("daytime_g_min", d.daytime_g_min);
    d.tau_margin_s = j.value("tau_margin_s", d.tau_margin_s);
}

json defaults_to_json(const FitDefaults& d) {
    return {{"g_min", d.g_min},
            {"g_high", d.g_high},
            {"ws_calm_max", d.ws_calm_max},
            {"ws_high_lo", d.ws_high_lo},
            {"ws_high_hi", d.ws_high_hi},
            {"ws_cap", d.ws_cap},
            {"g_bin_width", d.g_bin_width},
            {"g_bin_lo", d.g_bin_lo},
            {"g_bin_hi", d.g_bin_hi},
            {"ws_bin_width", d.ws_bin_width},
            {"ws_bin_lo", d.ws_bin_lo},
            {"ws_bin_hi", d.ws_bin_hi},
            {"resample_window_s", d.resample_window_s},
            {"step_horizon_s", d.step_horizon_s},
            {"min_rows", d.min_rows},
            {"min_step_events", d.min_step_events},
            {"sandia_min_t_over", d.sandia_min_t_over},
            {"daytime_g_min", d.daytime_g_min},
            {"tau_margin_s", d.tau_margin_s}};
}

}  // namespace

RunConfig config_from_json(const json& j) {
    RunConfig cfg;
    if (j.contains("dataset")) {
        const json& ds = j.at("dataset");
        cfg.dataset_path = ds.value("path", std::string{});
        cfg.dt_seconds = ds.value("dt_seconds", cfg.dt_seconds);
        cfg.site_id = ds.value("site_id", std::string{});
        if (ds.contains("schema")) {
            const json& sc = ds.at("schema");
            cfg.schema.timestamp = sc.value("timestamp", cfg.schema.timestamp);
            cfg.schema.g_poa = sc.value("g_poa", cfg.schema.g_poa);
            cfg.schema.t_ambient = sc.value("t_ambient", cfg.schema.t_ambient);
            cfg.schema.t_module = sc.value("t_module", cfg.schema.t_module);
            cfg.schema.ws = sc.value("ws", cfg.schema.ws);
            cfg.schema.wind_direction = sc.value("wind_direction", std::string{});
            cfg.schema.rel_humidity = sc.value("rel_humidity", std::string{});
        }
    }
    if (j.contains("models")) {
        cfg.models.clear();
        for (const auto& m : j.at("models"))
            cfg.models.push_back(model_from_string(m.get<std::string>()));
        if (cfg.models.empty()) throw std::runtime_error("config: model list is empty");
    }
    if (j.contains("defaults")) defaults_from_json(j.at("defaults"), cfg.defaults);
    if (j.contains("tau_override_s") && !j.at("tau_override_s").is_null())
        cfg.tau_override_s = j.at("tau_override_s").get<double>();
    cfg.gamma_pct_per_k = j.value("gamma_pct_per_k", cfg.gamma_pct_per_k);
    if (j.contains("h_y_kwh_per_m2") && !j.at("h_y_kwh_per_m2").is_null())
        cfg.h_y_kwh_per_m2 = j.at("h_y_kwh_per_m2").get<double>();
    cfg.night_bias_alternative = j.value("night_bias_alternative", cfg.night_bias_alternative);
    cfg.emit_plot_data = j.value("emit_plot_data", cfg.emit_plot_data);
    if (j.contains("output_dir")) cfg.output_dir = j.at("output_dir").get<std::string>();
    return cfg;
}

json RunConfig::to_json() const {
    json j;
    j["dataset"] = {{"path", dataset_path.string()},
                    {"dt_seconds", dt_seconds},
                    {"site_id", site_id},
                    {"schema",
                     {{"timestamp", schema.timestamp},
                      {"g_poa", schema.g_poa},
                      {"t_ambient", schema.t_ambient},
                      {"t_module", schema.t_module},
                      {"ws", schema.ws},
                      {"wind_direction", schema.wind_direction},
                      {"rel_humidity", schema.rel_humidity}}}};
    j["models"] = json::array();
    for (ModelKind m : models) j["models"].push_back(to_string(m));
    j["defaults"] = defaults_to_json(defaults);
    j["tau_override_s"] = tau_override_s ? json(*tau_override_s) : json(nullptr);
    j["gamma_pct_per_k"] = gamma_pct_per_k;
    j["h_y_kwh_per_m2"] = h_y_kwh_per_m2 ? json(*h_y_kwh_per_m2) : json(nullptr);
    j["night_bias_alternative"] = night_bias_alternative;
    j["emit_plot_data"] = emit_plot_data;
    j["output_dir"] = output_dir.string();
    return j;
}

RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config: " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw std::runtime_error("malformed config " + path.string() + ": " + e.what());
    }
    return config_from_json(j);
}

json to_json(const ModelCoefficients& c) {
    json j;
    j["model"] = to_string(c.kind());
    std::visit(
        [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, RossCoeffs>) {
                j["k"] = v.k;
                j["units"] = {{"k", "K/(W/m2)"}};
            } else if constexpr (std::is_same_v<T, SandiaCoeffs>) {
                j["a"] = v.a;
                j["b"] = v.b;
                j["units"] = {{"a", "-"}, {"b", "s/m"}};
            } else if constexpr (std::is_same_v<T, FaimanCoeffs>) {
                j["u0"] = v.u0;
                j["u1"] = v.u1;
                j["units"] = {{"u0", "W/(m2*K)"}, {"u1", "W*s/(m3*K)"}};
            } else if constexpr (std::is_same_v<T, Wm1Coeffs>) {
                j["k"] = v.k;
                j["d"] = v.d;
                j["units"] = {{"k", "K/(W/m2)"}, {"d", "m/s"}};
            } else {
                j["k"] = v.k;
                j["k_w"] = v.k_w;
                j["ws_cap"] = v.ws_cap;
                j["units"] = {{"k", "K/(W/m2)"}, {"k_w", "K*s/(W*m)"}, {"ws_cap", "m/s"}};
            }
        },
        c.value);
    j["provenance"] = {{"dataset_id", c.provenance.dataset_id},
                       {"method", c.provenance.method},
                       {"n_samples", c.provenance.n_samples},
                       {"fallback_applied", c.provenance.fallback_applied},
                       {"warnings", c.provenance.warnings}};
    return j;
}

ModelCoefficients coefficients_from_json(const json& j) {
    ModelCoefficients c;
    const ModelKind kind = model_from_string(j.at("model").get<std::string>());
    switch (kind) {
        case ModelKind::ross: c.value = RossCoeffs{j.at("k").get<double>()}; break;
        case ModelKind::sandia:
            c.value = SandiaCoeffs{j.at("a").get<double>(), j.at("b").get<double>()};
            break;
        case ModelKind::faiman:
            c.value = FaimanCoeffs{j.at("u0").get<double>(), j.at("u1").get<double>()};
            break;
        case ModelKind::wm1:
            c.value = Wm1Coeffs{j.at("k").get<double>(), j.at("d").get<double>()};
            break;
        case ModelKind::wm2:
            c.value = Wm2Coeffs{j.at("k").get<double>(), j.at("k_w").get<double>(),
                                j.value("ws_cap", 8.0)};
            break;
    }
    if (j.contains("provenance")) {
        const json& p = j.at("provenance");
        c.provenance.dataset_id = p.value("dataset_id", std::string{});
        c.provenance.method = p.value("method", std::string{});
        c.provenance.n_samples = p.value("n_samples", std::size_t{0});
        c.provenance.fallback_applied = p.value("fallback_applied", false);
        if (p.contains("warnings"))
            c.provenance.warnings = p.at("warnings").get<std::vector<std::string>>();
    }
    return c;
}

json to_json(const RegressionResult& r) {
    return {{"slope", r.slope},
            {"intercept", r.intercept},
            {"n_samples", r.n_samples},
            {"r2", r.r2}};
}

json to_json(const TauEstimate& t) {
    json bins = json::array();
    for (const auto& b : t.bins)
        bins.push_back(
            {{"ws_center", b.ws_center}, {"tau_s", b.tau_s}, {"n_events", b.n_events}});
    json excluded = json::array();
    for (const auto& [center, reason] : t.excluded_bins)
        excluded.push_back({{"ws_center", center}, {"reason", reason}});
    return {{"bins", bins},
            {"excluded_bins", excluded},
            {"tau0_s", t.tau0_s},
            {"f_s_per_m", std::isfinite(t.f_s_per_m) ? json(t.f_s_per_m) : json(nullptr)},
            {"tau_selected_s", t.tau_selected_s},
            {"sigma_ws", t.sigma_ws},
            {"warnings", t.warnings}};
}

json to_json(const EmpiricalRc& rc) {
    return {{"r_eq_max_mk", rc.r_eq_max * 1000.0},
            {"r_m_mk", rc.r_m * 1000.0},
            {"r_film_mk", rc.r_film * 1000.0},
            {"c_eq_min_kj", rc.c_eq_min / 1000.0},
            {"c_eq_max_kj", rc.c_eq_max / 1000.0},
            {"c_m_kj", rc.c_m / 1000.0},
            {"c_film_kj", rc.c_film / 1000.0},
            {"tau0_s", rc.tau0_s},
            {"f_s_per_m", std::isfinite(rc.f_s_per_m) ? json(rc.f_s_per_m) : json(nullptr)},
            {"tau_selected_s", rc.tau_selected_s}};
}

json to_json(const KpiReport& k) {
    return {{"rmse_k", k.rmse},   {"mae_k", k.mae},   {"mbe_k", k.mbe},
            {"n_rows", k.n_rows}, {"dataset_id", k.dataset_id},
            {"model", k.model},   {"variant", k.variant}};
}

json to_json(const EnergyErrorReport& e) {
    json j = {{"de_total_kwh_per_kwp", e.de_total},
              {"de_over_kwh_per_kwp", e.de_over},
              {"de_under_kwh_per_kwp", e.de_under},
              {"de_naive_kwh_per_kwp", e.de_naive},
              {"dpr_approx_pp", e.dpr_approx_pp},
              {"gamma_pct_per_k", e.gamma_pct_per_k}};
    j["h_y_kwh_per_m2"] = e.h_y_kwh_per_m2 ? json(*e.h_y_kwh_per_m2) : json(nullptr);
    j["dpr_full_pp"] = e.dpr_full_pp ? json(*e.dpr_full_pp) : json(nullptr);
    return j;
}

json to_json(const SynthSpec& s) {
    json j;
    j["seed"] = s.seed;
    j["dt_seconds"] = s.dt_seconds;
    j["days"] = s.days;
    j["start_epoch_s"] = s.start_epoch_s;
    j["model"] = to_string(s.model);
    j["truth"] = to_json(s.coefficients ? *s.coefficients : default_truth(s.model));
    j["tau_s"] = s.tau_s;
    j["f_s_per_m"] = s.f_s_per_m ? json(*s.f_s_per_m) : json(nullptr);
    j["noise_sigma_k"] = s.noise_sigma_k;
    j["bias_k"] = s.bias_k;
    j["day_regimes"] = {{"p_calm_clear", s.p_calm_clear},
                        {"p_breezy_broken", s.p_breezy_broken},
                        {"p_windy_mixed", s.p_windy_mixed},
                        {"p_overcast", s.p_overcast},
                        {"cloud_clear_sojourn_s", s.cloud_clear_sojourn_s},
                        {"cloud_cloudy_sojourn_s", s.cloud_cloudy_sojourn_s},
                        {"cloud_transmission_lo", s.cloud_transmission_lo},
                        {"cloud_transmission_hi", s.cloud_transmission_hi}};
    j["site_id"] = s.site_id;
    return j;
}

std::string fmt_full(double v) {
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt_fixed(double v, int dp) {
    if (std::isnan(v)) return "-";
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.*f", dp, v);
    return buf;
}

void write_tsv(const std::filesystem::path& path,
               const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file: " + path.string());
    for (std::size_t i = 0; i < header.size(); ++i)
        out << (i ? "\t" : "") << header[i];
    out << '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "\t" : "") << row[i];
        out << '\n';
    }
    if (!out) throw std::runtime_error("failed writing " + path.string());
}

void write_json(const std::filesystem::path& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file: " + path.string());
    out << j.dump(2) << '\n';
    if (!out) throw std::runtime_error("failed writing " + path.string());
}

namespace {

void rc_rows(const RcSummary& s, std::vector<std::vector<std::string>>& machine,
             std::string& human, bool air_section) {
    auto hrow = [&](const RcSummary::Row& r, bool mass) {
        char line[160];
        std::snprintf(line, sizeof line, "%-18s %8s %12s %12s %8s\n", r.name.c_str(),
                      mass ? fmt_fixed(r.mass_kg, 2).c_str() : "",
                      fmt_fixed(r.r_eq * 1000.0, 2).c_str(),
                      fmt_fixed(r.c_eq / 1000.0, 1).c_str(),
                      fmt_fixed(r.tau0_s, 1).c_str());
        human += line;
    };
    auto mrow = [&](const RcSummary::Row& r, const char* section) {
        machine.push_back({section, r.name, fmt_full(r.r_eq * 1000.0),
                           fmt_full(r.c_eq / 1000.0), fmt_full(r.tau0_s),
                           fmt_full(r.mass_kg)});
    };
    const char* tag = air_section ? "with_air" : "module_only";
    if (air_section) {
        hrow(s.front_air, false);
        mrow(s.front_air, tag);
    }
    for (const auto& r : s.front_layers) {
        hrow(r, true);
        mrow(r, tag);
    }
    for (const auto& r : s.back_layers) {
        hrow(r, true);
        mrow(r, tag);
    }
    if (air_section) {
        hrow(s.back_air, false);
        mrow(s.back_air, tag);
    }
    hrow(s.total_front, false);
    mrow(s.total_front, tag);
    hrow(s.total_back, false);
    mrow(s.total_back, tag);
    if (air_section) {
        hrow(s.total_front_air, false);
        mrow(s.total_front_air, tag);
        hrow(s.total_back_air, false);
        mrow(s.total_back_air, tag);
    }
    hrow(s.total, true);
    mrow(s.total, tag);
    if (air_section) {
        hrow(s.total_air, true);
        mrow(s.total_air, tag);
    }
}

}  // namespace

void write_rc_reports(const std::filesystem::path& out_dir, const RcSummary& with_air,
                      const RcSummary& without_air) {
    std::string human;
    human += "Layer              mass[kg] r[mK/(W/m2)] c[kJ/(K*m2)]  tau0[s]\n";
    std::vector<std::vector<std::string>> machine;
    rc_rows(with_air, machine, human, true);
    human += "\n(module only, air films removed)\n";
    rc_rows(without_air, machine, human, false);

    std::ofstream txt(out_dir / "rc_summary.txt");
    if (!txt) throw std::runtime_error("cannot write rc_summary.txt");
    txt << human;
    write_tsv(out_dir / "rc_summary.tsv",
              {"section", "row", "r_eq_mk", "c_eq_kj", "tau0_s", "mass_kg"}, machine);
}

}  // namespace femtherm
