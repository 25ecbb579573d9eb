#include "femtherm/fempipe.hpp"

#include <cmath>
#include <stdexcept>

namespace femtherm {

namespace {

Prediction predict_static(const ModelCoefficients& coeffs, const OverTempSeries& s) {
    Prediction p;
    p.timestamps = s.timestamps;
    p.t_over = predict(coeffs, s.g_poa, s.ws);
    p.model = coeffs.kind();
    p.variant = Variant::fixed;
    return p;
}

double daytime_mean_bias(const Prediction& pred, const OverTempSeries& meas,
                         double daytime_g_min) {
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < meas.size(); ++i) {
        if (is_missing(meas.g_poa[i]) || meas.g_poa[i] <= daytime_g_min) continue;
        if (is_missing(pred.t_over[i]) || is_missing(meas.t_over[i])) continue;
        sum += pred.t_over[i] - meas.t_over[i];
        ++n;
    }
    if (n == 0) throw std::runtime_error("mean bias: no daytime rows to average");
    return sum / static_cast<double>(n);
}

double night_mean_t_over(const OverTempSeries& meas, double daytime_g_min) {
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < meas.size(); ++i) {
        if (is_missing(meas.g_poa[i]) || meas.g_poa[i] > daytime_g_min) continue;
        if (is_missing(meas.t_over[i])) continue;
        sum += meas.t_over[i];
        ++n;
    }
    if (n == 0) throw std::runtime_error("night bias: no night rows to average");
    return sum / static_cast<double>(n);
}

}  // namespace

FemRun run_fem(ModelKind kind, const SplitSeries& split, const FemConfig& cfg) {
    FemRun run;
    run.model = kind;
    const FitDefaults& d = cfg.fit;

    const OverTempSeries train = over_temperature(split.train);
    const OverTempSeries test = over_temperature(split.test);
    if (test.empty()) throw std::runtime_error("run_fem: empty test set");
    const OverTempSeries train_steady =
        resample_mean(train, effective_window_s(d, train.dt_seconds));

    try {
        run.coefficients = fit_static(kind, train_steady, d);
    } catch (const std::exception& e) {
        throw std::runtime_error(std::string("run_fem[fit]: ") + e.what());
    }

    RegressionResult r_max, r_min;
    try {
        r_max = fit_r_eq_max(train_steady, d);
        r_min = fit_r_eq_min(train_steady, d, &run.warnings);
    } catch (const std::exception& e) {
        throw std::runtime_error(std::string("run_fem[r-values]: ") + e.what());
    }

    try {
        run.tau = estimate_tau(train, r_max.slope, d);
        run.rc = empirical_c(run.tau, r_max, r_min, d);
        run.tau_selected_s = run.tau.tau_selected_s;
        for (const auto& w : run.tau.warnings) run.warnings.push_back(w);
    } catch (const std::exception& e) {
        if (!cfg.tau_override_s)
            throw std::runtime_error(std::string("run_fem[tau]: ") + e.what());
        run.warnings.push_back(std::string("tau estimation failed (") + e.what() +
                               "); using override");
    }
    if (cfg.tau_override_s) {
        run.tau_selected_s = *cfg.tau_override_s;
        run.rc.tau_selected_s = run.tau_selected_s;
    }
    if (!(run.tau_selected_s > 0.0))
        throw std::runtime_error("run_fem[tau]: no usable tau (estimate failed and no "
                                 "override supplied)");

    const EwmParams params = ewm_params(run.tau_selected_s,
                                        static_cast<double>(split.train.dt_seconds));
    run.alpha = params.alpha;

    run.static_train = predict_static(run.coefficients, train);
    run.ewm_train = dynamicize(run.coefficients, train, params);
    run.static_test = predict_static(run.coefficients, test);
    run.ewm_test = dynamicize(run.coefficients, test, params);

    if (cfg.night_bias_alternative) {
        run.mbe_correction_k = night_mean_t_over(train, d.daytime_g_min);
    } else {
        run.mbe_correction_k = -daytime_mean_bias(run.ewm_train, train, d.daytime_g_min);
    }

    run.fem_test = run.ewm_test;
    run.fem_test.variant = Variant::fem;
    for (double& v : run.fem_test.t_over)
        if (!is_missing(v)) v += run.mbe_correction_k;
    return run;
}

VariantKpis evaluate_variants(const FemRun& run, const OverTempSeries& test,
                              double daytime_g_min) {
    if (test.empty()) throw std::invalid_argument("evaluate_variants: empty test series");
    VariantKpis out;
    auto eval = [&](const Prediction& p, const char* variant) {
        KpiReport r = kpis_daytime(p.t_over, test.t_over, test.g_poa, daytime_g_min);
        r.dataset_id = test.site_id;
        r.model = to_string(run.model);
        r.variant = variant;
        return r;
    };
    out.fixed = eval(run.static_test, "static");
    out.ewm = eval(run.ewm_test, "ewm");
    out.fem = eval(run.fem_test, "fem");
    out.delta_rmse_k = out.fem.rmse - out.fixed.rmse;
    out.delta_mae_k = out.fem.mae - out.fixed.mae;
    out.delta_rmse_pct = out.fixed.rmse > 0.0 ? 100.0 * out.delta_rmse_k / out.fixed.rmse : 0.0;
    out.delta_mae_pct = out.fixed.mae > 0.0 ? 100.0 * out.delta_mae_k / out.fixed.mae : 0.0;
    return out;
}

}  // namespace femtherm
