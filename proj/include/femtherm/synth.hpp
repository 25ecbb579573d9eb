#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "femtherm/models.hpp"
#include "femtherm/series.hpp"

namespace femtherm {

/// Deterministic weather + module-temperature generator. The module responds
/// to smoothed (first-order-lagged) irradiance and wind, so the generated
/// series carries a known thermal time constant that estimators must recover.
///
/// Weather comes in day regimes with wind coupled to cloudiness: calm days
/// are clear and steady, broken-cloud days are breezy to windy. Cloud fields
/// are two-state Markov chains with minute-scale persistence; that spectral
/// content is what excites the 20-min step-difference statistics.
struct SynthSpec {
    std::uint64_t seed = 1;
    std::int64_t dt_seconds = 60;
    int days = 365;
    std::int64_t start_epoch_s = 1420416000;  // 2015-01-05 00:00, a Monday

    ModelKind model = ModelKind::wm1;
    std::optional<ModelCoefficients> coefficients;  // defaults per model when unset

    double tau_s = 360.0;
    std::optional<double> f_s_per_m;  // when set, tau(WS) = tau * exp(-WS/f)
    double noise_sigma_k = 0.5;       // gaussian noise on measured T_m
    double bias_k = 0.0;              // constant offset on measured T_m

    // Day-regime mix (normalized internally).
    double p_calm_clear = 0.30;
    double p_breezy_broken = 0.35;
    double p_windy_mixed = 0.20;
    double p_overcast = 0.15;

    // Broken-cloud field: asymmetric two-state Markov chain.
    double cloud_clear_sojourn_s = 700.0;   // mean clear spell
    double cloud_cloudy_sojourn_s = 250.0;  // mean cloud passage
    double cloud_transmission_lo = 0.55;    // in-cloud transmission range
    double cloud_transmission_hi = 0.85;

    std::string site_id = "synthetic";
};

/// Reference coefficients used when SynthSpec::coefficients is unset.
ModelCoefficients default_truth(ModelKind kind);

struct SynthResult {
    WeatherSeries series;
    ModelCoefficients truth;     // coefficients the fits should recover
    double tau_s = 0.0;          // time constant the tau estimator should recover
    std::optional<double> f_s_per_m;
    double noise_sigma_k = 0.0;
    double bias_k = 0.0;
};

SynthResult synthesize(const SynthSpec& spec);

}  // namespace femtherm
