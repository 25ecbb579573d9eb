#include "femtherm/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace femtherm {

RegressionResult linear_fit(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("linear_fit: length mismatch");
    double sx = 0.0, sy = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (is_missing(x[i]) || is_missing(y[i])) continue;
        sx += x[i];
        sy += y[i];
        ++n;
    }
    if (n < 2) throw std::runtime_error("linear_fit: fewer than 2 valid samples");
    const double mx = sx / static_cast<double>(n);
    const double my = sy / static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (is_missing(x[i]) || is_missing(y[i])) continue;
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx <= 0.0) throw std::runtime_error("linear_fit: degenerate regressor (no variance)");
    RegressionResult r;
    r.slope = sxy / sxx;
    r.intercept = my - r.slope * mx;
    r.n_samples = n;
    r.r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    return r;
}

std::int64_t effective_window_s(const FitDefaults& d, std::int64_t dt_seconds) {
    if (dt_seconds <= 0) throw std::invalid_argument("effective_window_s: bad dt");
    const std::int64_t w = std::max(d.resample_window_s, dt_seconds);
    return (w + dt_seconds - 1) / dt_seconds * dt_seconds;
}

namespace {

FilterSpec calm_filter(const FitDefaults& d) {
    FilterSpec f;
    f.g_min = d.g_min;
    f.ws_min = 0.0;
    // near-zero wind, cutoff exclusive: strictly below the calm bound
    f.ws_max = std::nextafter(d.ws_calm_max, 0.0);
    f.resample_window_s = d.resample_window_s;
    return f;
}

RegressionResult to_vs_g(const OverTempSeries& rows, std::size_t min_rows, const char* what) {
    if (rows.size() < min_rows)
        throw std::runtime_error(std::string(what) + ": only " + std::to_string(rows.size()) +
                                 " rows after filtering (need " + std::to_string(min_rows) +
                                 ")");
    return linear_fit(rows.g_poa, rows.t_over);
}

}  // namespace

RegressionResult fit_r_eq_max(const OverTempSeries& steady, const FitDefaults& d) {
    const OverTempSeries rows = filter_rows(steady, calm_filter(d));
    return to_vs_g(rows, d.min_rows, "fit_r_eq_max");
}

RegressionResult fit_r_eq_min(const OverTempSeries& steady, const FitDefaults& d,
                              std::vector<std::string>* warnings) {
    double lo = d.ws_high_lo;
    for (;;) {
        FilterSpec f;
        f.g_min = d.g_min;
        f.ws_min = lo;
        f.ws_max = d.ws_high_hi;
        f.resample_window_s = d.resample_window_s;
        const OverTempSeries rows = filter_rows(steady, f);
        if (rows.size() >= d.min_rows) return to_vs_g(rows, d.min_rows, "fit_r_eq_min");
        if (lo <= d.ws_calm_max + 1e-9)
            throw std::runtime_error("fit_r_eq_min: too few high-wind rows even after "
                                     "widening the band down to the calm cutoff");
        lo = std::max(d.ws_calm_max, lo - 1.0);
        if (warnings)
            warnings->push_back("fit_r_eq_min: high-wind band widened down to " +
                                std::to_string(lo) + " m/s");
    }
}

namespace {

ModelCoefficients with_provenance(std::variant<RossCoeffs, SandiaCoeffs, FaimanCoeffs,
                                               Wm1Coeffs, Wm2Coeffs> value,
                                  const OverTempSeries& s, std::string method,
                                  std::size_t n) {
    ModelCoefficients c;
    c.value = std::move(value);
    c.provenance.dataset_id = s.site_id;
    c.provenance.method = std::move(method);
    c.provenance.n_samples = n;
    return c;
}

}  // namespace

ModelCoefficients fit_static(ModelKind kind, const OverTempSeries& steady,
                             const FitDefaults& d) {
    FilterSpec day = calm_filter(d);
    day.ws_min = 0.0;
    day.ws_max = std::numeric_limits<double>::infinity();
    const OverTempSeries rows = filter_rows(steady, day);
    if (rows.size() < d.min_rows)
        throw std::runtime_error("fit_static: too few daylight rows");

    switch (kind) {
        case ModelKind::ross: {
            const auto fit = linear_fit(rows.g_poa, rows.t_over);
            auto c = with_provenance(RossCoeffs{fit.slope}, steady,
                                     "ols T_o~G, G>" + std::to_string(d.g_min),
                                     fit.n_samples);
            c.validate();
            return c;
        }
        case ModelKind::sandia: {
            std::vector<double> wsv, lny;
            for (std::size_t i = 0; i < rows.size(); ++i) {
                if (rows.t_over[i] > d.sandia_min_t_over && rows.g_poa[i] > 0.0) {
                    wsv.push_back(rows.ws[i]);
                    lny.push_back(std::log(rows.t_over[i] / rows.g_poa[i]));
                }
            }
            if (wsv.size() < d.min_rows)
                throw std::runtime_error("fit_static(sandia): too few rows with T_o > " +
                                         std::to_string(d.sandia_min_t_over) + " K");
            const auto fit = linear_fit(wsv, lny);
            auto c = with_provenance(SandiaCoeffs{fit.intercept, fit.slope}, steady,
                                     "ols ln(T_o/G)~WS", fit.n_samples);
            c.validate();
            return c;
        }
        case ModelKind::faiman: {
            std::vector<double> wsv, ratio;
            for (std::size_t i = 0; i < rows.size(); ++i) {
                if (rows.t_over[i] > d.sandia_min_t_over) {
                    wsv.push_back(rows.ws[i]);
                    ratio.push_back(rows.g_poa[i] / rows.t_over[i]);
                }
            }
            if (wsv.size() < d.min_rows)
                throw std::runtime_error("fit_static(faiman): too few rows with positive T_o");
            const auto fit = linear_fit(wsv, ratio);
            FaimanCoeffs fc{fit.intercept, fit.slope};
            auto c = with_provenance(fc, steady, "ols G/T_o~WS", fit.n_samples);
            const bool outlier = !(fc.u0 > d.faiman_u0_lo && fc.u0 < d.faiman_u0_hi &&
                                   fc.u1 >= d.faiman_u1_lo && fc.u1 < d.faiman_u1_hi);
            if (outlier) {
                c.value = FaimanCoeffs{d.faiman_u0_std, d.faiman_u1_std};
                c.provenance.fallback_applied = true;
                c.provenance.warnings.push_back(
                    "faiman fit outlier (U0=" + std::to_string(fc.u0) +
                    ", U1=" + std::to_string(fc.u1) + "); standard values substituted");
            }
            c.validate();
            return c;
        }
        case ModelKind::wm1: {
            const double k = fit_r_eq_max(steady, d).slope;
            std::vector<double> wsv, lny;
            double ws_min_seen = std::numeric_limits<double>::infinity();
            double ws_max_seen = -ws_min_seen;
            for (std::size_t i = 0; i < rows.size(); ++i) {
                if (rows.g_poa[i] > d.g_high && rows.t_over[i] > d.sandia_min_t_over) {
                    wsv.push_back(rows.ws[i]);
                    lny.push_back(std::log(rows.t_over[i] / (k * rows.g_poa[i])));
                    ws_min_seen = std::min(ws_min_seen, rows.ws[i]);
                    ws_max_seen = std::max(ws_max_seen, rows.ws[i]);
                }
            }
            if (wsv.size() < d.min_rows)
                throw std::runtime_error("fit_static(wm1): too few high-irradiance rows");
            if (!(ws_max_seen - ws_min_seen > 0.1))
                throw std::runtime_error("fit_static(wm1): no wind variance, d unidentifiable");
            const auto fit = linear_fit(wsv, lny);
            if (fit.slope >= 0.0)
                throw std::runtime_error(
                    "fit_static(wm1): non-negative wind slope, d unidentifiable");
            auto c = with_provenance(Wm1Coeffs{k, -1.0 / fit.slope}, steady,
                                     "two-step: k=r_eq_max, ols ln(T_o/kG)~WS",
                                     fit.n_samples);
            c.validate();
            return c;
        }
        case ModelKind::wm2: {
            const double k = fit_r_eq_max(steady, d).slope;
            const Wm2KwFit kw = fit_wm2_kw(steady, d);
            Wm2Coeffs wc{k, kw.k_w, d.ws_cap};
            auto c = with_provenance(wc, steady, "two-step: k=r_eq_max, binned k_W",
                                     kw.outer.n_samples);
            if (wc.k - wc.k_w * wc.ws_cap < 0.0) {
                c.provenance.warnings.push_back(
                    "wm2 fit allows negative T_o at the wind cap; fit rejected");
                throw std::runtime_error("fit_static(wm2): k - k_W*ws_cap < 0");
            }
            c.validate();
            return c;
        }
    }
    throw std::logic_error("fit_static: unreachable");
}

Wm2KwFit fit_wm2_kw(const OverTempSeries& steady, const FitDefaults& d) {
    Wm2KwFit out;
    const int n_bins =
        static_cast<int>(std::round((d.g_bin_hi - d.g_bin_lo) / d.g_bin_width));
    std::vector<std::vector<double>> ws_by_bin(n_bins), to_by_bin(n_bins);
    std::vector<double> ws_fit_rows;
    for (std::size_t i = 0; i < steady.size(); ++i) {
        const double g = steady.g_poa[i];
        const double w = steady.ws[i];
        const double to = steady.t_over[i];
        if (is_missing(g) || is_missing(w) || is_missing(to)) continue;
        if (g < d.g_bin_lo || g >= d.g_bin_hi) continue;
        if (w < d.ws_calm_max || w > d.ws_cap) continue;
        const int b = static_cast<int>((g - d.g_bin_lo) / d.g_bin_width);
        ws_by_bin[b].push_back(w);
        to_by_bin[b].push_back(to);
        ws_fit_rows.push_back(w);
    }
    std::vector<double> centers, slopes;
    for (int b = 0; b < n_bins; ++b) {
        const double center = d.g_bin_lo + (b + 0.5) * d.g_bin_width;
        if (ws_by_bin[b].size() < d.min_rows) {
            out.skipped_bins.emplace_back(center, "only " +
                                                      std::to_string(ws_by_bin[b].size()) +
                                                      " rows");
            continue;
        }
        RegressionResult fit;
        try {
            fit = linear_fit(ws_by_bin[b], to_by_bin[b]);
        } catch (const std::exception& e) {
            out.skipped_bins.emplace_back(center, e.what());
            continue;
        }
        out.bins.push_back({center, fit.slope, fit.n_samples});
        centers.push_back(center);
        slopes.push_back(fit.slope);
    }
    if (out.bins.size() < 3)
        throw std::runtime_error("fit_wm2_kw: fewer than 3 usable irradiance bins");
    out.outer = linear_fit(centers, slopes);
    out.k_w = -out.outer.slope;
    if (out.k_w != 0.0 && !ws_fit_rows.empty()) {
        double s = 0.0;
        for (double w : ws_fit_rows)
            if (w > 0.0) s += 1.0 / (out.k_w * w);
        out.h_fixed_mean = s / static_cast<double>(ws_fit_rows.size());
    }
    return out;
}

TauEstimate estimate_tau(const OverTempSeries& native, double r_eq_max,
                         const FitDefaults& d) {
    if (r_eq_max <= 0.0) throw std::invalid_argument("estimate_tau: r_eq_max must be > 0");
    TauEstimate est;
    const std::int64_t window = effective_window_s(d, native.dt_seconds);
    if (window != d.resample_window_s)
        est.warnings.push_back("averaging window widened to " + std::to_string(window) +
                               " s to fit the data resolution");
    const OverTempSeries steady = resample_mean(native, window);

    // Wind variability yardstick over the daytime rows of the averaged series.
    {
        std::vector<double> day_ws;
        for (std::size_t i = 0; i < steady.size(); ++i)
            if (!is_missing(steady.ws[i]) && !is_missing(steady.g_poa[i]) &&
                steady.g_poa[i] > d.daytime_g_min)
                day_ws.push_back(steady.ws[i]);
        if (day_ws.size() < 2) throw std::runtime_error("estimate_tau: no daytime rows");
        double m = 0.0;
        for (double w : day_ws) m += w;
        m /= static_cast<double>(day_ws.size());
        double var = 0.0;
        for (double w : day_ws) var += (w - m) * (w - m);
        est.sigma_ws = std::sqrt(var / static_cast<double>(day_ws.size()));
    }

    std::int64_t horizon = std::max(d.step_horizon_s, window);
    if (horizon % window != 0) horizon = (horizon + window - 1) / window * window;
    if (horizon != d.step_horizon_s)
        est.warnings.push_back("step horizon widened to " + std::to_string(horizon) +
                               " s to fit the averaging window");
    const double dt = static_cast<double>(horizon);

    const int n_bins =
        static_cast<int>(std::round((d.ws_bin_hi - d.ws_bin_lo) / d.ws_bin_width));
    for (int b = 0; b < n_bins; ++b) {
        const double lo = d.ws_bin_lo + b * d.ws_bin_width;
        const double hi = lo + d.ws_bin_width;
        const double center = 0.5 * (lo + hi);

        FilterSpec f;
        f.g_min = d.g_min;
        f.ws_min = lo;
        f.ws_max = hi;
        f.max_ws_variation = est.sigma_ws;
        f.resample_window_s = window;
        const OverTempSeries rows = filter_rows(steady, f);

        // Step events: retained rows exactly one horizon apart.
        std::vector<double> dg_rate, dto_rate;
        std::size_t j = 0;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const std::int64_t target = rows.timestamps[i] + horizon;
            while (j < rows.size() && rows.timestamps[j] < target) ++j;
            if (j < rows.size() && rows.timestamps[j] == target) {
                if (!is_missing(rows.t_over[i]) && !is_missing(rows.t_over[j])) {
                    dg_rate.push_back((rows.g_poa[j] - rows.g_poa[i]) / dt);
                    dto_rate.push_back((rows.t_over[j] - rows.t_over[i]) / dt);
                }
            }
        }
        if (dg_rate.size() < d.min_step_events) {
            est.excluded_bins.emplace_back(
                center, "only " + std::to_string(dg_rate.size()) + " step events");
            continue;
        }
        RegressionResult fit;
        try {
            fit = linear_fit(dg_rate, dto_rate);
        } catch (const std::exception& e) {
            est.excluded_bins.emplace_back(center, e.what());
            continue;
        }
        const double tau = fit.slope / r_eq_max * dt;
        if (!(tau > 0.0)) {
            est.excluded_bins.emplace_back(center, "non-positive tau");
            continue;
        }
        est.bins.push_back({center, tau, fit.n_samples});
    }

    if (est.bins.empty())
        throw std::runtime_error("estimate_tau: no wind bin produced enough step events");

    // Log-linear fit ln(tau) = g - WS/f over the retained bins only.
    if (est.bins.size() >= 2) {
        std::vector<double> wsb, lnt;
        for (const auto& bin : est.bins) {
            wsb.push_back(bin.ws_center);
            lnt.push_back(std::log(bin.tau_s));
        }
        const auto fit = linear_fit(wsb, lnt);
        est.tau0_s = std::exp(fit.intercept);
        if (fit.slope < 0.0) {
            est.f_s_per_m = -1.0 / fit.slope;
        } else {
            est.f_s_per_m = std::numeric_limits<double>::infinity();
            est.warnings.push_back(
                "tau does not decrease with wind speed; f reported as +inf");
        }
    } else {
        est.tau0_s = est.bins.front().tau_s;
        est.f_s_per_m = std::numeric_limits<double>::infinity();
        est.warnings.push_back("single retained bin; tau0 taken from it, f undefined");
    }

    est.tau_selected_s = select_tau(est, d, &est.warnings);
    return est;
}

double select_tau(const TauEstimate& est, const FitDefaults& d,
                  std::vector<std::string>* warnings) {
    if (est.bins.empty()) throw std::runtime_error("select_tau: no retained bins");

    // Maximum tau among the 0-2 m/s bins (or the first bin when none fall there).
    std::size_t start = 0;
    bool found = false;
    for (std::size_t i = 0; i < est.bins.size(); ++i) {
        if (est.bins[i].ws_center < 2.0) {
            if (!found || est.bins[i].tau_s > est.bins[start].tau_s) start = i;
            found = true;
        }
    }
    if (!found && warnings)
        warnings->push_back("select_tau: no bins below 2 m/s; starting from the first bin");

    double selected = est.bins[start].tau_s;
    for (std::size_t i = start + 1; i < est.bins.size(); ++i) {
        if (est.bins[i].tau_s > selected + d.tau_margin_s) {
            if (i == start + 1 && warnings)
                warnings->push_back(
                    "select_tau: monotonic decrease fails immediately; returning the 0-2 m/s "
                    "maximum");
            return selected;
        }
        selected = est.bins[i].tau_s;
    }
    return selected;
}

EmpiricalRc empirical_c(const TauEstimate& est, const RegressionResult& r_eq_max_fit,
                        const RegressionResult& r_m_fit, const FitDefaults& d) {
    if (!(est.tau0_s > 0.0)) throw std::runtime_error("empirical_c: missing tau fit");
    EmpiricalRc rc;
    rc.r_eq_max = r_eq_max_fit.slope;
    rc.r_m = r_m_fit.slope;
    rc.r_film = rc.r_eq_max - rc.r_m;
    rc.tau0_s = est.tau0_s;
    rc.f_s_per_m = est.f_s_per_m;
    rc.tau_selected_s = est.tau_selected_s;
    if (!(rc.r_eq_max > 0.0) || !(rc.r_m > 0.0))
        throw std::runtime_error("empirical_c: non-positive fitted R-value");
    rc.c_eq_min = rc.tau0_s / rc.r_eq_max;
    rc.c_eq_max = rc.tau0_s / rc.r_m;
    // tau at the working high-wind point; equals tau0*exp(-WS/f) evaluated at
    // the selected bin, which is how the empirical column set stays coherent.
    double tau_high = rc.tau_selected_s;
    if (!(tau_high > 0.0)) {
        const double ws_mid = 0.5 * (d.ws_high_lo + d.ws_high_hi);
        tau_high = rc.tau0_s * std::exp(-ws_mid / rc.f_s_per_m);
    }
    rc.c_m = tau_high / rc.r_m;
    rc.c_film = rc.c_eq_max - rc.c_m;
    return rc;
}

}  // namespace femtherm
