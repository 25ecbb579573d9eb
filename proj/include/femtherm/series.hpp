#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace femtherm {

/// Sentinel for a missing channel value.
inline double missing() { return std::numeric_limits<double>::quiet_NaN(); }
bool is_missing(double v);

/// Day of week for an epoch-seconds instant, 0 = Monday .. 6 = Sunday.
/// Timestamps are taken as-is (naive local time).
int weekday(std::int64_t epoch_s);

/// Uniformly sampled weather record. Rows that failed validation are absent
/// rather than NaN-padded, so consecutive timestamps differ by an integer
/// multiple of dt_seconds (a multiple > 1 is a gap).
struct WeatherSeries {
    std::vector<std::int64_t> timestamps;  // epoch seconds, strictly increasing
    std::vector<double> g_poa;             // plane-of-array irradiance, W/m2
    std::vector<double> t_ambient;         // degC
    std::vector<double> t_module;          // degC
    std::vector<double> ws;                // wind speed, m/s
    std::vector<double> wind_direction;    // deg, empty when channel absent
    std::vector<double> rel_humidity;      // %, empty when channel absent
    std::int64_t dt_seconds = 0;
    std::string site_id;

    std::size_t size() const { return timestamps.size(); }
    bool empty() const { return timestamps.empty(); }

    /// Throws std::invalid_argument on any broken invariant (alignment,
    /// timestamp order/step, negative G or WS).
    void validate() const;
};

/// Over-temperature view of a WeatherSeries: t_over = t_module - t_ambient (K).
/// Carries G and WS along since every fit consumes them together.
struct OverTempSeries {
    std::vector<std::int64_t> timestamps;
    std::vector<double> t_over;  // K
    std::vector<double> g_poa;   // W/m2
    std::vector<double> ws;      // m/s
    std::int64_t dt_seconds = 0;
    std::string site_id;

    std::size_t size() const { return timestamps.size(); }
    bool empty() const { return timestamps.empty(); }
};

/// Row filter used ahead of coefficient fits.
struct FilterSpec {
    double g_min = 200.0;   // W/m2, strict lower bound on G
    double ws_min = 0.0;    // m/s, inclusive
    double ws_max = std::numeric_limits<double>::infinity();  // m/s, inclusive
    std::optional<double> max_ws_variation;  // m/s between consecutive retained rows
    std::int64_t resample_window_s = 300;

    void validate(std::int64_t dt_seconds) const;
};

struct SplitSeries {
    WeatherSeries train;  // Mon-Fri
    WeatherSeries test;   // Sat-Sun
};

/// Mean-resample to a coarser step. `window_s` must be a positive integer
/// multiple of the input step. Windows are aligned to epoch multiples of
/// `window_s`; a window with no valid samples yields no output row.
WeatherSeries resample_mean(const WeatherSeries& s, std::int64_t window_s);
OverTempSeries resample_mean(const OverTempSeries& s, std::int64_t window_s);

OverTempSeries over_temperature(const WeatherSeries& s);

/// Calendar split: weekday rows -> train, weekend rows -> test.
/// Throws if either side ends up empty.
SplitSeries split_weekday_weekend(const WeatherSeries& s);

/// Keeps rows with g_poa > g_min, ws in [ws_min, ws_max] and, when
/// max_ws_variation is set, |WS - WS_prev_retained| < max_ws_variation.
/// May return an empty series.
OverTempSeries filter_rows(const OverTempSeries& s, const FilterSpec& spec);

/// q-quantile of the wind-speed distribution, linear interpolation between
/// order statistics. Throws on an empty series or q outside [0, 1].
double ws_quantile(const WeatherSeries& s, double q);
double quantile(std::span<const double> values, double q);

}  // namespace femtherm
