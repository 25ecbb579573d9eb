#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "femtherm/ewm.hpp"
#include "femtherm/series.hpp"

namespace femtherm {

struct KpiReport {
    double rmse = 0.0;  // K
    double mae = 0.0;   // K
    double mbe = 0.0;   // K
    std::size_t n_rows = 0;
    std::string dataset_id;
    std::string model;
    std::string variant;
};

/// RMSE/MAE/MBE of e = pred - meas over rows where both are valid.
/// Throws when no rows overlap.
KpiReport kpis(std::span<const double> pred, std::span<const double> meas);

/// Same, restricted to rows with g > daytime_g_min.
KpiReport kpis_daytime(std::span<const double> pred, std::span<const double> meas,
                       std::span<const double> g, double daytime_g_min);

struct EnergyErrorReport {
    double de_total = 0.0;   // kWh/kWp, sum of |error| energy
    double de_over = 0.0;    // kWh/kWp, energy over-estimate (temperature under-predicted)
    double de_under = 0.0;   // kWh/kWp, energy under-estimate (<= 0)
    double de_naive = 0.0;   // de_over + de_under (signed net)
    double dpr_approx_pp = 0.0;  // MAE*|gamma|, percentage points
    double gamma_pct_per_k = 0.0;
    std::optional<double> h_y_kwh_per_m2;  // yearly irradiation, when known
    std::optional<double> dpr_full_pp;     // de_total referred to H_y, when known
};

/// Energy impact of the temperature error: per-sample G * |e| * |gamma|
/// integrated over dt and normalized to 1 kWp at G_STC = 1000 W/m2.
/// `h_y` overrides the yearly irradiation; otherwise it is integrated from G
/// when the series spans at least ~a year.
EnergyErrorReport energy_error(std::span<const double> pred, std::span<const double> meas,
                               std::span<const double> g,
                               std::span<const std::int64_t> timestamps,
                               double gamma_pct_per_k, std::int64_t dt_s,
                               std::optional<double> h_y = std::nullopt);

/// KPIs of the measurement against itself shifted by each delay (daytime
/// rows), quantifying how a perfect-but-late sensor would score.
std::vector<KpiReport> delayed_sensor_baseline(const OverTempSeries& meas,
                                               std::span<const std::int64_t> delays_s,
                                               double daytime_g_min = 20.0);

/// Backsheet-to-cell correction: T_bs + EWM(G) * k_bsc.
std::vector<double> backsheet_to_cell(std::span<const double> t_backsheet,
                                      std::span<const double> g, double k_bsc,
                                      const EwmParams& params);

}  // namespace femtherm
