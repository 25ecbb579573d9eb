#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "femtherm/models.hpp"
#include "femtherm/series.hpp"

namespace femtherm {

/// Every tunable constant of the fitting recipes in one place so each magic
/// number is visible and overridable from the config file.
struct FitDefaults {
    double g_min = 200.0;          // W/m2, daylight floor for coefficient fits
    double g_high = 400.0;         // W/m2, high-irradiance floor for the WM1 d fit
    double ws_calm_max = 0.5;      // m/s, near-zero-wind cutoff for r_eq_max
    double ws_high_lo = 6.0;       // m/s, high-wind band for r_M
    double ws_high_hi = 8.0;
    double ws_cap = 8.0;           // m/s, WM2 wind clip
    double g_bin_width = 20.0;     // W/m2, irradiance bins for k_W
    double g_bin_lo = 200.0;
    double g_bin_hi = 1000.0;
    double ws_bin_width = 1.0;     // m/s, wind bins for tau
    double ws_bin_lo = 0.0;
    double ws_bin_hi = 8.0;
    std::int64_t resample_window_s = 300;  // steady-state averaging window
    std::int64_t step_horizon_s = 1200;    // tau step-change horizon (20 min)
    std::size_t min_rows = 30;             // minimum samples per regression
    std::size_t min_step_events = 20;      // minimum step events per tau bin
    double sandia_min_t_over = 0.5;        // K, floor before taking logs
    double daytime_g_min = 20.0;           // W/m2, daytime mask for KPIs/MBE
    double tau_margin_s = 20.0;            // tolerance in the tau selection walk
    // Faiman sanity window; fits outside are replaced by the standard values.
    double faiman_u0_lo = 5.0, faiman_u0_hi = 80.0;
    double faiman_u1_lo = 0.0, faiman_u1_hi = 50.0;
    double faiman_u0_std = 25.0, faiman_u1_std = 6.84;
};

struct RegressionResult {
    double slope = 0.0;
    double intercept = 0.0;
    std::size_t n_samples = 0;
    double r2 = 0.0;
};

/// Steady-state averaging window usable for a series of step dt: the
/// configured window, but never finer than the data and always a whole
/// multiple of dt. Coarse data (>= 5 min) is taken as already averaged.
std::int64_t effective_window_s(const FitDefaults& d, std::int64_t dt_seconds);

/// Ordinary least squares with intercept over pairs where both values are
/// finite. Throws when fewer than 2 pairs remain or x has no variance.
RegressionResult linear_fit(std::span<const double> x, std::span<const double> y);

/// Slope of T_o vs G on calm (WS < ws_calm_max), daylit, steady-state rows.
/// The slope is r_eq_max in K/(W/m2); the intercept is kept as a diagnostic.
/// Expects a series already averaged to >= 5 min.
RegressionResult fit_r_eq_max(const OverTempSeries& steady, const FitDefaults& d = {});

/// Slope of T_o vs G inside the high-wind band (default 6-8 m/s) = r_M.
/// When the band holds too few rows it is widened downward 1 m/s at a time,
/// with a warning per widening step.
RegressionResult fit_r_eq_min(const OverTempSeries& steady, const FitDefaults& d = {},
                              std::vector<std::string>* warnings = nullptr);

/// Per-model linearized fit on steady-state data; see each branch for the
/// exact linearization. Throws on degenerate inputs (e.g. no wind variance
/// for WM1's d).
ModelCoefficients fit_static(ModelKind kind, const OverTempSeries& steady,
                             const FitDefaults& d = {});

struct GBinSlope {
    double g_center = 0.0;
    double slope = 0.0;  // m_W(G), K/(m/s)
    std::size_t n_samples = 0;
};

struct Wm2KwFit {
    double k_w = 0.0;
    RegressionResult outer;            // m_W(G) vs G regression
    std::vector<GBinSlope> bins;
    std::vector<std::pair<double, std::string>> skipped_bins;  // center, reason
    double h_fixed_mean = 0.0;         // diagnostic mean of 1/(k_W*WS) over fitted rows
};

/// Regression-of-regressions: per 20 W/m2 irradiance bin the slope of T_o vs
/// WS, then the slope of those slopes vs G; k_W is its negative.
Wm2KwFit fit_wm2_kw(const OverTempSeries& steady, const FitDefaults& d = {});

struct TauBin {
    double ws_center = 0.0;
    double tau_s = 0.0;
    std::size_t n_events = 0;
};

struct TauEstimate {
    std::vector<TauBin> bins;                                    // retained bins
    std::vector<std::pair<double, std::string>> excluded_bins;   // center, reason
    double tau0_s = 0.0;         // exp(g) of the log-linear fit
    double f_s_per_m = 0.0;      // +inf when tau does not decrease with WS
    double tau_selected_s = 0.0;
    double sigma_ws = 0.0;       // daytime wind-speed spread used by the filter
    std::vector<std::string> warnings;
};

/// Identifies tau from sustained 20-min step changes per 1 m/s wind bin,
/// then fits ln(tau) = g - WS/f over the retained bins. Takes data at native
/// resolution; the 5-min averaging happens internally.
TauEstimate estimate_tau(const OverTempSeries& native, double r_eq_max,
                         const FitDefaults& d = {});

/// Walks bins upward in WS from the 0-2 m/s maximum while tau keeps
/// decreasing within the margin; returns the last bin's tau before the walk
/// breaks. An immediate break returns the starting maximum with a warning.
double select_tau(const TauEstimate& est, const FitDefaults& d = {},
                  std::vector<std::string>* warnings = nullptr);

struct EmpiricalRc {
    double r_eq_max = 0.0;   // K/(W/m2)
    double r_m = 0.0;
    double r_film = 0.0;     // r_eq_max - r_M
    double c_eq_min = 0.0;   // J/(K*m2), tau0 / r_eq_max
    double c_eq_max = 0.0;   // tau0 / r_M
    double c_m = 0.0;        // tau_selected / r_M
    double c_film = 0.0;     // c_eq_max - c_M
    double tau0_s = 0.0;
    double f_s_per_m = 0.0;
    double tau_selected_s = 0.0;
};

/// Combines the fitted R-values and the tau estimate into the empirical
/// RC summary row. Throws when the tau fit is unusable.
EmpiricalRc empirical_c(const TauEstimate& est, const RegressionResult& r_eq_max_fit,
                        const RegressionResult& r_m_fit, const FitDefaults& d = {});

}  // namespace femtherm
