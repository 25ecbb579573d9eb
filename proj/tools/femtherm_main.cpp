#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "femtherm/csv.hpp"
#include "femtherm/fempipe.hpp"
#include "femtherm/report.hpp"
#include "femtherm/synth.hpp"

namespace fs = std::filesystem;
using namespace femtherm;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDegraded = 1;   // computation finished with warnings, or failed mid-run
constexpr int kExitConfig = 2;     // input or configuration problem

struct StageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

[[noreturn]] void fail_stage(const std::string& stage, const std::exception& e) {
    throw StageError(stage + ": " + e.what());
}

struct LoadedDataset {
    RunConfig cfg;
    LoadResult loaded;
    SplitSeries split;
};

LoadedDataset load_and_split(const RunConfig& cfg) {
    LoadedDataset out;
    out.cfg = cfg;
    try {
        out.loaded = load_csv(cfg.dataset_path, cfg.schema, cfg.dt_seconds, cfg.site_id);
    } catch (const std::exception& e) {
        fail_stage("ingest", e);
    }
    try {
        out.split = split_weekday_weekend(out.loaded.series);
    } catch (const std::exception& e) {
        fail_stage("split", e);
    }
    return out;
}

std::string fmt_opt(double v) {
    return std::isfinite(v) ? fmt_full(v) : std::string("inf");
}

// ---------------------------------------------------------------------------
// rc subcommand

int cmd_rc(const fs::path& stack_path, const fs::path& out_dir) {
    LayerStack stack;
    try {
        stack = load_stack(stack_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    }
    fs::create_directories(out_dir);
    const RcSummary with_air = stack_summary(stack, true);
    const RcSummary without_air = stack_summary(stack, false);
    write_rc_reports(out_dir, with_air, without_air);

    json manifest;
    manifest["stack"] = stack_to_json(stack);
    manifest["config_hash"] = config_hash(manifest["stack"]);
    manifest["totals"] = {
        {"r_total_mk", without_air.total.r_eq * 1000.0},
        {"r_total_air_mk", with_air.total_air.r_eq * 1000.0},
        {"c_total_kj", without_air.total.c_eq / 1000.0},
        {"tau0_total_s", without_air.total.tau0_s},
        {"tau0_total_air_s", with_air.total_air.tau0_s},
    };
    write_json(out_dir / "rc_manifest.json", manifest);
    std::cout << "r_total " << fmt_fixed(without_air.total.r_eq * 1000.0, 2)
              << " mK/(W/m2), with air " << fmt_fixed(with_air.total_air.r_eq * 1000.0, 2)
              << "; tau0 " << fmt_fixed(without_air.total.tau0_s, 1) << " s, with air "
              << fmt_fixed(with_air.total_air.tau0_s, 1) << " s\n";
    return kExitOk;
}

// ---------------------------------------------------------------------------
// fit subcommand

struct FitOutcome {
    RegressionResult r_max, r_min;
    TauEstimate tau;
    EmpiricalRc rc;
    std::vector<std::pair<ModelKind, ModelCoefficients>> coefficients;
    std::vector<std::string> warnings;
};

FitOutcome fit_dataset(const LoadedDataset& data) {
    FitOutcome out;
    const FitDefaults& d = data.cfg.defaults;
    const OverTempSeries train = over_temperature(data.split.train);
    const OverTempSeries steady =
        resample_mean(train, effective_window_s(d, train.dt_seconds));

    try {
        out.r_max = fit_r_eq_max(steady, d);
        out.r_min = fit_r_eq_min(steady, d, &out.warnings);
    } catch (const std::exception& e) {
        fail_stage("fit[r-values]", e);
    }
    for (ModelKind kind : data.cfg.models) {
        try {
            out.coefficients.emplace_back(kind, fit_static(kind, steady, d));
        } catch (const std::exception& e) {
            fail_stage(std::string("fit[") + to_string(kind) + "]", e);
        }
    }
    try {
        out.tau = estimate_tau(train, out.r_max.slope, d);
        out.rc = empirical_c(out.tau, out.r_max, out.r_min, d);
        for (const auto& w : out.tau.warnings) out.warnings.push_back(w);
    } catch (const std::exception& e) {
        if (!data.cfg.tau_override_s) fail_stage("tau", e);
        out.warnings.push_back(std::string("tau estimation failed (") + e.what() +
                               "); override used");
        out.rc.r_eq_max = out.r_max.slope;
        out.rc.r_m = out.r_min.slope;
        out.rc.r_film = out.rc.r_eq_max - out.rc.r_m;
    }
    if (data.cfg.tau_override_s) {
        out.tau.tau_selected_s = *data.cfg.tau_override_s;
        out.rc.tau_selected_s = *data.cfg.tau_override_s;
    }
    return out;
}

void write_fit_reports(const LoadedDataset& data, const FitOutcome& fit) {
    const fs::path dir = data.cfg.output_dir;
    fs::create_directories(dir);
    const std::string site = data.loaded.series.site_id;

    json report;
    report["config"] = data.cfg.to_json();
    report["config_hash"] = config_hash(report["config"]);
    report["dataset"] = {{"site_id", site},
                         {"rows", data.loaded.series.size()},
                         {"rows_read", data.loaded.rows_read},
                         {"rows_dropped", data.loaded.rows_dropped},
                         {"dt_seconds", data.loaded.series.dt_seconds},
                         {"train_rows", data.split.train.size()},
                         {"test_rows", data.split.test.size()}};
    report["r_eq_max_fit"] = to_json(fit.r_max);
    report["r_eq_min_fit"] = to_json(fit.r_min);
    report["tau"] = to_json(fit.tau);
    report["empirical_rc"] = to_json(fit.rc);
    report["warnings"] = fit.warnings;
    json coeffs = json::array();
    for (const auto& [kind, c] : fit.coefficients) coeffs.push_back(to_json(c));
    report["coefficients"] = coeffs;
    write_json(dir / "fit_report.json", report);

    const EmpiricalRc& rc = fit.rc;
    write_tsv(dir / "table_rc_row.tsv",
              {"site", "r_eq_max_mk", "r_m_mk", "r_film_mk", "c_eq_max_kj", "c_m_kj",
               "c_film_kj", "tau0_s", "tau_s", "dt_s", "f_s_per_m"},
              {{site, fmt_full(rc.r_eq_max * 1000.0), fmt_full(rc.r_m * 1000.0),
                fmt_full(rc.r_film * 1000.0), fmt_full(rc.c_eq_max / 1000.0),
                fmt_full(rc.c_m / 1000.0), fmt_full(rc.c_film / 1000.0),
                fmt_full(rc.tau0_s), fmt_full(rc.tau_selected_s),
                std::to_string(data.loaded.series.dt_seconds), fmt_opt(rc.f_s_per_m)}});
}

int cmd_fit(const RunConfig& cfg) {
    const LoadedDataset data = load_and_split(cfg);
    const FitOutcome fit = fit_dataset(data);
    write_fit_reports(data, fit);
    for (const auto& w : fit.warnings) std::cerr << "warning: " << w << '\n';
    std::cout << "fit complete: " << fit.coefficients.size() << " models, tau "
              << fmt_fixed(fit.rc.tau_selected_s, 0) << " s -> "
              << (cfg.output_dir / "fit_report.json").string() << '\n';
    return fit.warnings.empty() ? kExitOk : kExitDegraded;
}

// ---------------------------------------------------------------------------
// run subcommand

int cmd_run(const RunConfig& cfg) {
    const LoadedDataset data = load_and_split(cfg);
    const fs::path dir = cfg.output_dir;
    fs::create_directories(dir);
    const std::string site = data.loaded.series.site_id;
    const OverTempSeries test = over_temperature(data.split.test);

    FemConfig fem_cfg;
    fem_cfg.fit = cfg.defaults;
    fem_cfg.tau_override_s = cfg.tau_override_s;
    fem_cfg.night_bias_alternative = cfg.night_bias_alternative;

    json manifest;
    manifest["config"] = cfg.to_json();
    manifest["config_hash"] = config_hash(manifest["config"]);
    manifest["dataset"] = {{"site_id", site},
                           {"rows", data.loaded.series.size()},
                           {"rows_read", data.loaded.rows_read},
                           {"rows_dropped", data.loaded.rows_dropped},
                           {"dt_seconds", data.loaded.series.dt_seconds}};
    json per_model = json::array();

    std::vector<std::vector<std::string>> kpi_rows;
    std::vector<std::vector<std::string>> energy_rows;
    std::map<std::string, std::map<std::string, std::string>> wide;  // kpi -> model -> value
    std::vector<std::string> warnings;
    bool degraded = false;
    if (cfg.gamma_pct_per_k == 0.0) {
        warnings.push_back("gamma is zero; the energy error report degenerates to zero");
        degraded = true;
    }

    for (ModelKind kind : cfg.models) {
        FemRun run;
        VariantKpis kpi;
        try {
            run = run_fem(kind, data.split, fem_cfg);
            kpi = evaluate_variants(run, test, cfg.defaults.daytime_g_min);
        } catch (const std::exception& e) {
            fail_stage(std::string("run[") + to_string(kind) + "]", e);
        }

        json m;
        m["model"] = to_string(kind);
        m["coefficients"] = to_json(run.coefficients);
        m["tau_selected_s"] = run.tau_selected_s;
        m["alpha"] = run.alpha;
        m["mbe_correction_k"] = run.mbe_correction_k;
        m["mbe_sign_convention"] =
            "mbe = mean(model - measured) on daytime train rows; the correction stored "
            "here is its negative and is added to the smoothed test prediction";
        m["empirical_rc"] = to_json(run.rc);
        m["kpis"] = {{"static", to_json(kpi.fixed)},
                     {"ewm", to_json(kpi.ewm)},
                     {"fem", to_json(kpi.fem)}};
        m["delta_rmse_k"] = kpi.delta_rmse_k;
        m["delta_rmse_pct"] = kpi.delta_rmse_pct;
        m["delta_mae_k"] = kpi.delta_mae_k;
        m["delta_mae_pct"] = kpi.delta_mae_pct;
        m["warnings"] = run.warnings;

        json energies = json::object();
        for (const auto* pred : {&run.static_test, &run.ewm_test, &run.fem_test}) {
            const EnergyErrorReport e =
                energy_error(pred->t_over, test.t_over, test.g_poa, test.timestamps,
                             cfg.gamma_pct_per_k, test.dt_seconds, cfg.h_y_kwh_per_m2);
            energies[to_string(pred->variant)] = to_json(e);
            energy_rows.push_back({site, to_string(kind), to_string(pred->variant),
                                   fmt_full(e.de_total), fmt_full(e.de_over),
                                   fmt_full(e.de_under), fmt_full(e.de_naive),
                                   fmt_full(e.dpr_approx_pp)});
        }
        m["energy_error"] = energies;
        per_model.push_back(m);

        for (const auto* r : {&kpi.fixed, &kpi.ewm, &kpi.fem}) {
            kpi_rows.push_back({site, r->model, r->variant, fmt_full(r->rmse),
                                fmt_full(r->mae), fmt_full(r->mbe),
                                std::to_string(r->n_rows)});
        }
        wide["rmse_fem_k"][to_string(kind)] = fmt_full(kpi.fem.rmse);
        wide["rmse_std_k"][to_string(kind)] = fmt_full(kpi.fixed.rmse);
        wide["mae_fem_k"][to_string(kind)] = fmt_full(kpi.fem.mae);
        wide["mae_std_k"][to_string(kind)] = fmt_full(kpi.fixed.mae);
        wide["mbe_fem_k"][to_string(kind)] = fmt_full(kpi.fem.mbe);
        wide["mbe_std_k"][to_string(kind)] = fmt_full(kpi.fixed.mbe);

        for (const auto& w : run.warnings) {
            warnings.push_back(std::string(to_string(kind)) + ": " + w);
            degraded = true;
        }

        if (cfg.emit_plot_data) {
            std::vector<std::vector<std::string>> rows;
            rows.reserve(test.size());
            for (std::size_t i = 0; i < test.size(); ++i) {
                rows.push_back({format_timestamp(test.timestamps[i]),
                                fmt_full(test.g_poa[i]), fmt_full(test.ws[i]),
                                fmt_full(test.t_over[i]),
                                fmt_full(run.static_test.t_over[i]),
                                fmt_full(run.ewm_test.t_over[i]),
                                fmt_full(run.fem_test.t_over[i])});
            }
            write_tsv(dir / (std::string("plotdata_") + to_string(kind) + ".tsv"),
                      {"timestamp", "g_poa", "ws", "t_over_meas", "t_over_static",
                       "t_over_ewm", "t_over_fem"},
                      rows);
        }
    }

    manifest["models"] = per_model;
    manifest["warnings"] = warnings;
    write_json(dir / "run_manifest.json", manifest);
    write_tsv(dir / "kpi_report.tsv",
              {"site", "model", "variant", "rmse_k", "mae_k", "mbe_k", "n_rows"}, kpi_rows);
    write_tsv(dir / "energy_report.tsv",
              {"site", "model", "variant", "de_total_kwh_per_kwp", "de_over_kwh_per_kwp",
               "de_under_kwh_per_kwp", "de_naive_kwh_per_kwp", "dpr_approx_pp"},
              energy_rows);

    std::vector<std::string> header{"site", "kpi"};
    for (ModelKind kind : cfg.models) header.push_back(to_string(kind));
    std::vector<std::vector<std::string>> wide_rows;
    for (const auto& [kpi_name, per] : wide) {
        std::vector<std::string> row{site, kpi_name};
        for (ModelKind kind : cfg.models) row.push_back(per.at(to_string(kind)));
        wide_rows.push_back(row);
    }
    write_tsv(dir / "kpi_wide.tsv", header, wide_rows);

    for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
    std::cout << "run complete: " << cfg.models.size() << " models -> "
              << (dir / "run_manifest.json").string() << '\n';
    return degraded ? kExitDegraded : kExitOk;
}

// ---------------------------------------------------------------------------
// synth subcommand

int cmd_synth(const SynthSpec& spec, const fs::path& out_csv, const fs::path& manifest_path) {
    SynthResult result;
    try {
        result = synthesize(spec);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    }
    if (!out_csv.parent_path().empty()) fs::create_directories(out_csv.parent_path());
    write_csv(out_csv, result.series);
    json manifest = to_json(spec);
    manifest["config_hash"] = config_hash(manifest);
    manifest["rows"] = result.series.size();
    manifest["output"] = out_csv.filename().string();
    fs::path mp = manifest_path;
    if (mp.empty()) {
        mp = out_csv;
        mp.replace_extension(".manifest.json");
    }
    if (!mp.parent_path().empty()) fs::create_directories(mp.parent_path());
    write_json(mp, manifest);
    std::cout << "synthesized " << result.series.size() << " rows -> " << out_csv.string()
              << '\n';
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"PV module thermal models: RC calculus, filtered fits, EWM dynamics, "
                 "bias-corrected predictions"};
    app.require_subcommand(1);

    // rc ---------------------------------------------------------------
    auto* rc = app.add_subcommand("rc", "Layer-stack R/C/tau summary");
    std::string rc_stack;
    std::string rc_out = "out";
    rc->add_option("--stack", rc_stack, "Layer stack config (JSON)")
        ->required()
        ->envname("FEMTHERM_STACK");
    rc->add_option("--out", rc_out, "Output directory")->envname("FEMTHERM_OUT");

    // shared fit/run options --------------------------------------------
    std::string cfg_path, data_path, out_dir, site_id, models_csv;
    std::int64_t dt_seconds = 0;
    double tau_override = 0.0, gamma = 0.0;
    bool emit_plot = false;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", cfg_path, "Run config (JSON)")->envname("FEMTHERM_CONFIG");
        cmd->add_option("--data", data_path, "Dataset file (overrides config)")
            ->envname("FEMTHERM_DATA");
        cmd->add_option("--dt", dt_seconds, "Time step in seconds (overrides config)");
        cmd->add_option("--site", site_id, "Site label");
        cmd->add_option("--models", models_csv, "Comma-separated model list")
            ->envname("FEMTHERM_MODELS");
        cmd->add_option("--tau", tau_override, "Fixed time constant override, seconds")
            ->envname("FEMTHERM_TAU");
        cmd->add_option("--gamma", gamma, "Power temperature coefficient, %/K");
        cmd->add_option("--out", out_dir, "Output directory")->envname("FEMTHERM_OUT");
    };
    auto* fit = app.add_subcommand("fit", "Fit model coefficients and tau on weekdays");
    add_common(fit);
    auto* run = app.add_subcommand("run", "Full pipeline: fit, smooth, bias-correct, score");
    add_common(run);
    run->add_flag("--emit-plot-data", emit_plot, "Write per-row prediction tables");

    // synth --------------------------------------------------------------
    auto* synth = app.add_subcommand("synth", "Deterministic synthetic dataset generator");
    SynthSpec sspec;
    std::string synth_out = "synthetic.csv", synth_manifest, synth_model = "wm1";
    double synth_f = 0.0;
    synth->add_option("--out", synth_out, "Output CSV path")->envname("FEMTHERM_OUT");
    synth->add_option("--manifest", synth_manifest, "Manifest path (default: <out>.manifest.json)");
    synth->add_option("--seed", sspec.seed, "RNG seed")->envname("FEMTHERM_SEED");
    synth->add_option("--days", sspec.days, "Number of days");
    synth->add_option("--dt", sspec.dt_seconds, "Time step, seconds");
    synth->add_option("--model", synth_model, "Generating model");
    synth->add_option("--tau", sspec.tau_s, "Thermal time constant, seconds");
    synth->add_option("--f", synth_f, "Wind decay of tau, s/m (0 = constant tau)");
    synth->add_option("--noise", sspec.noise_sigma_k, "Gaussian noise sigma on T_m, K");
    synth->add_option("--bias", sspec.bias_k, "Constant bias on T_m, K");
    synth->add_option("--site", sspec.site_id, "Site label");

    CLI11_PARSE(app, argc, argv);

    try {
        if (rc->parsed()) return cmd_rc(rc_stack, rc_out);

        if (synth->parsed()) {
            sspec.model = model_from_string(synth_model);
            if (synth_f > 0.0) sspec.f_s_per_m = synth_f;
            return cmd_synth(sspec, synth_out, synth_manifest);
        }

        // fit / run share config resolution.
        RunConfig cfg;
        if (!cfg_path.empty()) cfg = load_run_config(cfg_path);
        if (!data_path.empty()) cfg.dataset_path = data_path;
        if (dt_seconds > 0) cfg.dt_seconds = dt_seconds;
        if (!site_id.empty()) cfg.site_id = site_id;
        if (!out_dir.empty()) cfg.output_dir = out_dir;
        if (tau_override > 0.0) cfg.tau_override_s = tau_override;
        if (gamma != 0.0) cfg.gamma_pct_per_k = gamma;
        if (emit_plot) cfg.emit_plot_data = true;
        if (!models_csv.empty()) {
            cfg.models.clear();
            std::string item;
            for (char c : models_csv + ",") {
                if (c == ',') {
                    if (!item.empty()) cfg.models.push_back(model_from_string(item));
                    item.clear();
                } else {
                    item += c;
                }
            }
        }
        if (cfg.dataset_path.empty())
            throw std::runtime_error("no dataset: pass --data or a config with dataset.path");
        if (cfg.models.empty()) throw std::runtime_error("model list is empty");

        if (fit->parsed()) return cmd_fit(cfg);
        if (run->parsed()) return cmd_run(cfg);
    } catch (const StageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        // Ingest/config stages are input errors; later stages are degraded runs.
        const std::string what = e.what();
        return what.rfind("ingest", 0) == 0 || what.rfind("split", 0) == 0 ? kExitConfig
                                                                           : kExitDegraded;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    }
    return kExitOk;
}
