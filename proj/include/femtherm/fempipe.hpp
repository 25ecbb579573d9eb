#pragma once

#include <optional>
#include <string>
#include <vector>

#include "femtherm/ewm.hpp"
#include "femtherm/fitting.hpp"
#include "femtherm/metrics.hpp"
#include "femtherm/models.hpp"
#include "femtherm/series.hpp"

namespace femtherm {

struct FemConfig {
    FitDefaults fit;
    std::optional<double> tau_override_s;  // skip tau estimation when set
    // Replace the train-MBE correction by the mean night-time measured T_o
    // (comparison baseline; usually slightly worse).
    bool night_bias_alternative = false;
};

/// One full filter / smooth / bias-correct pipeline run for a single model.
struct FemRun {
    ModelKind model = ModelKind::ross;
    ModelCoefficients coefficients;        // fit on train only
    TauEstimate tau;
    EmpiricalRc rc;
    double tau_selected_s = 0.0;
    double alpha = 1.0;
    /// Additive correction applied to the smoothed test prediction, equal to
    /// minus the train-set mean bias (model - measured, daytime rows). The
    /// fem prediction is exactly ewm prediction + mbe_correction_k.
    double mbe_correction_k = 0.0;

    Prediction static_train, ewm_train;
    Prediction static_test, ewm_test, fem_test;
    std::vector<std::string> warnings;
};

/// Fits coefficients and tau on train, smooths the inputs with the selected
/// tau, applies the train bias correction, and predicts all three variants
/// on the test set.
FemRun run_fem(ModelKind kind, const SplitSeries& split, const FemConfig& cfg = {});

struct VariantKpis {
    KpiReport fixed;  // static formulation
    KpiReport ewm;    // smoothing only
    KpiReport fem;    // smoothing + bias correction
    double delta_rmse_k = 0.0;    // fem - static
    double delta_rmse_pct = 0.0;
    double delta_mae_k = 0.0;
    double delta_mae_pct = 0.0;
};

/// Daytime-masked KPIs for all three variants on the test set.
VariantKpis evaluate_variants(const FemRun& run, const OverTempSeries& test,
                              double daytime_g_min = 20.0);

}  // namespace femtherm
