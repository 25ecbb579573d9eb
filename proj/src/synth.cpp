#include "femtherm/synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace femtherm {

// Open-rack-like reference coefficients, mid-range of published fits.
ModelCoefficients default_truth(ModelKind kind) {
    ModelCoefficients c;
    c.provenance.method = "generator truth";
    switch (kind) {
        case ModelKind::ross: c.value = RossCoeffs{0.0348}; break;
        case ModelKind::sandia: c.value = SandiaCoeffs{std::log(0.0348), -1.0 / 15.0}; break;
        case ModelKind::faiman: c.value = FaimanCoeffs{1.0 / 0.0348, 2.4}; break;
        case ModelKind::wm1: c.value = Wm1Coeffs{0.0348, 15.0}; break;
        case ModelKind::wm2: c.value = Wm2Coeffs{0.0348, 0.0024, 8.0}; break;
    }
    return c;
}

namespace {

// Hand-rolled uniforms/normals so output is identical on every platform.
struct Rng {
    std::mt19937_64 gen;
    bool have_spare = false;
    double spare = 0.0;

    explicit Rng(std::uint64_t seed) : gen(seed) {}

    double uniform() {  // [0, 1)
        return static_cast<double>(gen() >> 11) * 0x1.0p-53;
    }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    double normal() {
        if (have_spare) {
            have_spare = false;
            return spare;
        }
        double u1 = uniform();
        while (u1 <= 1e-300) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        spare = r * std::sin(2.0 * M_PI * u2);
        have_spare = true;
        return r * std::cos(2.0 * M_PI * u2);
    }
};

enum class DayRegime { calm_clear, breezy_broken, windy_mixed, overcast };

struct RegimeParams {
    double ws_mean, ws_sigma;
    bool broken_clouds;
};

// Mean-reverting step with stationary variance sigma^2.
double ou_step(double x, double mean, double sigma, double corr_s, double dt_s, Rng& rng) {
    const double a = std::exp(-dt_s / corr_s);
    return mean + a * (x - mean) + sigma * std::sqrt(1.0 - a * a) * rng.normal();
}

}  // namespace

SynthResult synthesize(const SynthSpec& spec) {
    if (spec.dt_seconds <= 0) throw std::invalid_argument("synth: dt must be positive");
    if (spec.days <= 0) throw std::invalid_argument("synth: day count must be positive");
    if (spec.noise_sigma_k < 0) throw std::invalid_argument("synth: noise sigma must be >= 0");
    const double p_sum = spec.p_calm_clear + spec.p_breezy_broken + spec.p_windy_mixed +
                         spec.p_overcast;
    if (!(p_sum > 0.0)) throw std::invalid_argument("synth: day-regime mix is empty");

    SynthResult out;
    out.truth = spec.coefficients ? *spec.coefficients : default_truth(spec.model);
    out.truth.validate();
    out.tau_s = spec.tau_s;
    out.f_s_per_m = spec.f_s_per_m;
    out.noise_sigma_k = spec.noise_sigma_k;
    out.bias_k = spec.bias_k;

    Rng rng(spec.seed);
    const double dt = static_cast<double>(spec.dt_seconds);
    const std::size_t steps_per_day = static_cast<std::size_t>(86400 / spec.dt_seconds);
    const std::size_t n = steps_per_day * static_cast<std::size_t>(spec.days);

    WeatherSeries& s = out.series;
    s.dt_seconds = spec.dt_seconds;
    s.site_id = spec.site_id;
    s.timestamps.resize(n);
    s.g_poa.resize(n);
    s.t_ambient.resize(n);
    s.t_module.resize(n);
    s.ws.resize(n);

    // Persistent weather state.
    double ws = 1.0;
    double ta_anom = 0.0;
    bool in_cloud = false;
    double cloud_depth = 0.45;

    // Module state: normalized weighted mean of G and WS (adjust-style EWM).
    double g_num = 0.0, g_den = 0.0, ws_num = 0.0, ws_den = 0.0;

    for (int day = 0; day < spec.days; ++day) {
        // Regime of the day.
        const double pick = rng.uniform() * p_sum;
        DayRegime regime;
        if (pick < spec.p_calm_clear)
            regime = DayRegime::calm_clear;
        else if (pick < spec.p_calm_clear + spec.p_breezy_broken)
            regime = DayRegime::breezy_broken;
        else if (pick < spec.p_calm_clear + spec.p_breezy_broken + spec.p_windy_mixed)
            regime = DayRegime::windy_mixed;
        else
            regime = DayRegime::overcast;

        RegimeParams rp{};
        switch (regime) {
            case DayRegime::calm_clear:
                rp = {0.10, 0.12, false};
                break;
            case DayRegime::breezy_broken:
                rp = {1.8, 1.3, true};
                break;
            case DayRegime::windy_mixed:
                rp = {5.2, 1.8, true};
                break;
            case DayRegime::overcast:
                rp = {1.4, 0.9, false};
                break;
        }
        const double depth_today =
            rng.uniform(spec.cloud_transmission_lo, spec.cloud_transmission_hi);
        const double overcast_level = rng.uniform(0.20, 0.42);
        const double clear_amp = 950.0 * rng.uniform(0.92, 1.05);

        // Seasonal envelope (northern mid-latitude flavour).
        const int doy = day % 365;
        const double season = std::sin(2.0 * M_PI * (doy - 81) / 365.0);
        const double daylen_h = 12.0 + 4.0 * season;
        const double sunrise_h = 12.0 - daylen_h / 2.0;
        const double amp = clear_amp * (0.72 + 0.28 * season);
        const double ta_day_mean = 10.0 + 9.0 * season;

        for (std::size_t k = 0; k < steps_per_day; ++k) {
            const std::size_t i = static_cast<std::size_t>(day) * steps_per_day + k;
            const std::int64_t t = spec.start_epoch_s +
                                   static_cast<std::int64_t>(i) * spec.dt_seconds;
            s.timestamps[i] = t;

            const double hour = static_cast<double>(k) * dt / 3600.0;

            // Clear-sky envelope.
            double g_cs = 0.0;
            if (hour > sunrise_h && hour < sunrise_h + daylen_h)
                g_cs = amp * std::sin(M_PI * (hour - sunrise_h) / daylen_h);

            // Cloud factor.
            double cloud = 1.0;
            if (rp.broken_clouds) {
                const double sojourn = in_cloud ? spec.cloud_cloudy_sojourn_s
                                                : spec.cloud_clear_sojourn_s;
                if (rng.uniform() < dt / sojourn) {
                    in_cloud = !in_cloud;
                    if (in_cloud)
                        cloud_depth =
                            std::clamp(depth_today * rng.uniform(0.85, 1.15), 0.05, 1.0);
                }
                cloud = in_cloud ? cloud_depth : 1.0;
            } else if (regime == DayRegime::overcast) {
                cloud = overcast_level;
                in_cloud = true;
            } else {
                in_cloud = false;
            }
            const double g = g_cs * cloud;

            // Wind, mean-reverting with ~1.5 h memory, floored at zero.
            ws = ou_step(ws, rp.ws_mean, rp.ws_sigma, 5400.0, dt, rng);
            if (ws < 0.0) ws = 0.0;

            // Ambient temperature: season + diurnal + slow anomaly.
            ta_anom = ou_step(ta_anom, 0.0, 1.2, 21600.0, dt, rng);
            const double ta = ta_day_mean + 4.5 * std::sin(2.0 * M_PI * (hour - 9.0) / 24.0) +
                              ta_anom;

            // First-order response of the module to G and WS.
            double alpha;
            if (spec.f_s_per_m) {
                const double tau_ws = spec.tau_s * std::exp(-ws / *spec.f_s_per_m);
                alpha = 1.0 - std::exp(-dt / std::max(tau_ws, dt * 1e-3));
            } else {
                alpha = 1.0 - std::exp(-dt / spec.tau_s);
            }
            const double beta = 1.0 - alpha;
            g_num = g + beta * g_num;
            g_den = 1.0 + beta * g_den;
            ws_num = ws + beta * ws_num;
            ws_den = 1.0 + beta * ws_den;
            const double g_ewm = g_num / g_den;
            const double ws_ewm = ws_num / ws_den;

            const double t_over = predict_point(out.truth, g_ewm, ws_ewm);
            const double tm = ta + t_over + spec.bias_k +
                              spec.noise_sigma_k * rng.normal();

            s.g_poa[i] = g;
            s.t_ambient[i] = ta;
            s.t_module[i] = tm;
            s.ws[i] = ws;
        }
    }
    s.validate();
    return out;
}

}  // namespace femtherm
