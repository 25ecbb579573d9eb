#include "femtherm/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace femtherm {

namespace {

constexpr double kGStc = 1000.0;  // W/m2

KpiReport kpis_masked(std::span<const double> pred, std::span<const double> meas,
                      const std::vector<bool>* mask) {
    if (pred.size() != meas.size()) throw std::invalid_argument("kpis: length mismatch");
    double se = 0.0, ae = 0.0, be = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        if (mask && !(*mask)[i]) continue;
        if (is_missing(pred[i]) || is_missing(meas[i])) continue;
        const double e = pred[i] - meas[i];
        se += e * e;
        ae += std::abs(e);
        be += e;
        ++n;
    }
    if (n == 0) throw std::runtime_error("kpis: no overlapping valid rows");
    KpiReport r;
    r.n_rows = n;
    r.rmse = std::sqrt(se / static_cast<double>(n));
    r.mae = ae / static_cast<double>(n);
    r.mbe = be / static_cast<double>(n);
    return r;
}

}  // namespace

KpiReport kpis(std::span<const double> pred, std::span<const double> meas) {
    return kpis_masked(pred, meas, nullptr);
}

KpiReport kpis_daytime(std::span<const double> pred, std::span<const double> meas,
                       std::span<const double> g, double daytime_g_min) {
    if (g.size() != pred.size()) throw std::invalid_argument("kpis_daytime: length mismatch");
    std::vector<bool> mask(g.size());
    for (std::size_t i = 0; i < g.size(); ++i)
        mask[i] = !is_missing(g[i]) && g[i] > daytime_g_min;
    return kpis_masked(pred, meas, &mask);
}

EnergyErrorReport energy_error(std::span<const double> pred, std::span<const double> meas,
                               std::span<const double> g,
                               std::span<const std::int64_t> timestamps,
                               double gamma_pct_per_k, std::int64_t dt_s,
                               std::optional<double> h_y) {
    if (pred.size() != meas.size() || pred.size() != g.size())
        throw std::invalid_argument("energy_error: length mismatch");
    if (dt_s <= 0) throw std::invalid_argument("energy_error: dt must be positive");
    EnergyErrorReport rep;
    rep.gamma_pct_per_k = gamma_pct_per_k;
    const double gamma_abs = std::abs(gamma_pct_per_k) / 100.0;  // 1/K
    const double hours = static_cast<double>(dt_s) / 3600.0;

    double ae = 0.0, n_day = 0.0;
    double g_sum = 0.0, g_n = 0.0;  // mean irradiance over covered rows
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (!is_missing(g[i])) {
            g_sum += g[i];
            g_n += 1.0;
        }
        if (is_missing(pred[i]) || is_missing(meas[i]) || is_missing(g[i])) continue;
        const double e = pred[i] - meas[i];
        const double kwh = g[i] / kGStc * hours * gamma_abs;  // per 1 K of error
        rep.de_total += kwh * std::abs(e);
        if (e < 0.0)
            rep.de_over += kwh * (-e);  // cooler model -> energy over-estimated
        else
            rep.de_under -= kwh * e;
        ae += std::abs(e);
        n_day += 1.0;
    }
    rep.de_naive = rep.de_over + rep.de_under;
    if (n_day > 0.0) rep.dpr_approx_pp = (ae / n_day) * std::abs(gamma_pct_per_k);
    if (gamma_pct_per_k == 0.0) rep.dpr_approx_pp = 0.0;

    if (h_y) {
        rep.h_y_kwh_per_m2 = h_y;
    } else if (!timestamps.empty() && g_n > 0.0 &&
               timestamps.back() - timestamps.front() >= 360LL * 86400LL) {
        // Rows may cover only part of the span (e.g. a weekend-only test
        // set); scale the mean irradiance of the covered rows to the span.
        const double span_h =
            static_cast<double>(timestamps.back() - timestamps.front() + dt_s) / 3600.0;
        rep.h_y_kwh_per_m2 = g_sum / g_n / 1000.0 * span_h;
    }
    if (rep.h_y_kwh_per_m2 && *rep.h_y_kwh_per_m2 > 0.0)
        rep.dpr_full_pp = rep.de_total / *rep.h_y_kwh_per_m2 * 100.0;
    return rep;
}

std::vector<KpiReport> delayed_sensor_baseline(const OverTempSeries& meas,
                                               std::span<const std::int64_t> delays_s,
                                               double daytime_g_min) {
    std::vector<KpiReport> out;
    const std::size_t n = meas.size();
    if (n == 0) throw std::invalid_argument("delayed_sensor_baseline: empty series");
    const std::int64_t span_s = meas.timestamps.back() - meas.timestamps.front();
    for (std::int64_t delay : delays_s) {
        if (delay < 0 || delay % meas.dt_seconds != 0)
            throw std::invalid_argument(
                "delayed_sensor_baseline: delay must be a non-negative multiple of dt");
        if (delay >= span_s && delay != 0)
            throw std::invalid_argument("delayed_sensor_baseline: delay exceeds series span");
        std::vector<double> shifted(n, missing());
        std::size_t j = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const std::int64_t want = meas.timestamps[i] - delay;
            while (j < n && meas.timestamps[j] < want) ++j;
            if (j < n && meas.timestamps[j] == want) shifted[i] = meas.t_over[j];
        }
        KpiReport r = kpis_daytime(shifted, meas.t_over, meas.g_poa, daytime_g_min);
        r.dataset_id = meas.site_id;
        r.model = "delayed_sensor";
        r.variant = std::to_string(delay) + "s";
        out.push_back(r);
    }
    return out;
}

std::vector<double> backsheet_to_cell(std::span<const double> t_backsheet,
                                      std::span<const double> g, double k_bsc,
                                      const EwmParams& params) {
    if (t_backsheet.size() != g.size())
        throw std::invalid_argument("backsheet_to_cell: length mismatch");
    if (k_bsc < 0.0) throw std::invalid_argument("backsheet_to_cell: k_bsc must be >= 0");
    if (k_bsc == 0.0) return {t_backsheet.begin(), t_backsheet.end()};
    const auto g_ewm = ewm(g, params.alpha);
    std::vector<double> out(t_backsheet.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (is_missing(t_backsheet[i]) || is_missing(g_ewm[i]))
            out[i] = missing();
        else
            out[i] = t_backsheet[i] + g_ewm[i] * k_bsc;
    }
    return out;
}

}  // namespace femtherm
