#include "femtherm/series.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace femtherm {

bool is_missing(double v) { return std::isnan(v); }

int weekday(std::int64_t epoch_s) {
    // 1970-01-01 was a Thursday (index 3 with Monday = 0).
    std::int64_t day = epoch_s / 86400;
    if (epoch_s < 0 && epoch_s % 86400 != 0) --day;
    return static_cast<int>(((day + 3) % 7 + 7) % 7);
}

namespace {

void check_channel(const std::vector<double>& ch, std::size_t n, const char* name) {
    if (!ch.empty() && ch.size() != n)
        throw std::invalid_argument(std::string("channel length mismatch: ") + name);
}

void check_steps(const std::vector<std::int64_t>& t, std::int64_t dt) {
    if (dt <= 0) throw std::invalid_argument("dt_seconds must be positive");
    for (std::size_t i = 1; i < t.size(); ++i) {
        const std::int64_t step = t[i] - t[i - 1];
        if (step <= 0) throw std::invalid_argument("timestamps must be strictly increasing");
        if (step % dt != 0)
            throw std::invalid_argument("timestamp step is not a multiple of dt_seconds");
    }
}

}  // namespace

void WeatherSeries::validate() const {
    const std::size_t n = timestamps.size();
    if (g_poa.size() != n || t_ambient.size() != n || t_module.size() != n || ws.size() != n)
        throw std::invalid_argument("required channels must all match timestamp length");
    check_channel(wind_direction, n, "wind_direction");
    check_channel(rel_humidity, n, "rel_humidity");
    check_steps(timestamps, dt_seconds);
    for (std::size_t i = 0; i < n; ++i) {
        if (!is_missing(g_poa[i]) && g_poa[i] < 0.0)
            throw std::invalid_argument("g_poa must be >= 0 on retained rows");
        if (!is_missing(ws[i]) && ws[i] < 0.0)
            throw std::invalid_argument("ws must be >= 0 on retained rows");
    }
}

void FilterSpec::validate(std::int64_t dt_seconds) const {
    if (g_min < 0.0) throw std::invalid_argument("g_min must be >= 0");
    if (!(ws_min < ws_max)) throw std::invalid_argument("ws_min must be < ws_max");
    if (dt_seconds > 0 &&
        (resample_window_s <= 0 || resample_window_s % dt_seconds != 0))
        throw std::invalid_argument("resample_window must be a positive multiple of dt");
}

namespace {

struct Accumulator {
    double sum = 0.0;
    std::size_t n = 0;
    void add(double v) {
        if (!is_missing(v)) {
            sum += v;
            ++n;
        }
    }
    double mean() const { return n ? sum / static_cast<double>(n) : missing(); }
};

// Shared windowed-mean loop over an arbitrary set of columns.
template <std::size_t K>
void resample_columns(const std::vector<std::int64_t>& t_in,
                      std::int64_t dt_in,
                      std::int64_t window_s,
                      const std::array<const std::vector<double>*, K>& cols_in,
                      std::vector<std::int64_t>& t_out,
                      std::array<std::vector<double>*, K>& cols_out) {
    if (window_s <= 0 || window_s % dt_in != 0)
        throw std::invalid_argument("resample window must be a positive multiple of dt");
    std::int64_t bucket = std::numeric_limits<std::int64_t>::min();
    std::array<Accumulator, K> acc{};
    auto flush = [&]() {
        if (bucket == std::numeric_limits<std::int64_t>::min()) return;
        bool any = false;
        for (auto& a : acc) any = any || a.n > 0;
        if (any) {
            t_out.push_back(bucket);
            for (std::size_t k = 0; k < K; ++k) cols_out[k]->push_back(acc[k].mean());
        }
        acc = {};
    };
    for (std::size_t i = 0; i < t_in.size(); ++i) {
        std::int64_t b = (t_in[i] / window_s) * window_s;
        if (t_in[i] < 0 && t_in[i] % window_s != 0) b -= window_s;
        if (b != bucket) {
            flush();
            bucket = b;
        }
        for (std::size_t k = 0; k < K; ++k)
            if (cols_in[k]) acc[k].add((*cols_in[k])[i]);
    }
    flush();
}

}  // namespace

WeatherSeries resample_mean(const WeatherSeries& s, std::int64_t window_s) {
    WeatherSeries out;
    out.dt_seconds = window_s;
    out.site_id = s.site_id;
    const bool has_wd = !s.wind_direction.empty();
    const bool has_rh = !s.rel_humidity.empty();
    std::array<const std::vector<double>*, 6> in{
        &s.g_poa, &s.t_ambient, &s.t_module, &s.ws,
        has_wd ? &s.wind_direction : nullptr, has_rh ? &s.rel_humidity : nullptr};
    std::array<std::vector<double>*, 6> dst{&out.g_poa,          &out.t_ambient,
                                            &out.t_module,       &out.ws,
                                            &out.wind_direction, &out.rel_humidity};
    resample_columns(s.timestamps, s.dt_seconds, window_s, in, out.timestamps, dst);
    if (!has_wd) out.wind_direction.clear();
    if (!has_rh) out.rel_humidity.clear();
    return out;
}

OverTempSeries resample_mean(const OverTempSeries& s, std::int64_t window_s) {
    OverTempSeries out;
    out.dt_seconds = window_s;
    out.site_id = s.site_id;
    std::array<const std::vector<double>*, 3> in{&s.t_over, &s.g_poa, &s.ws};
    std::array<std::vector<double>*, 3> dst{&out.t_over, &out.g_poa, &out.ws};
    resample_columns(s.timestamps, s.dt_seconds, window_s, in, out.timestamps, dst);
    return out;
}

OverTempSeries over_temperature(const WeatherSeries& s) {
    OverTempSeries out;
    out.timestamps = s.timestamps;
    out.g_poa = s.g_poa;
    out.ws = s.ws;
    out.dt_seconds = s.dt_seconds;
    out.site_id = s.site_id;
    out.t_over.resize(s.size(), missing());
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (!is_missing(s.t_module[i]) && !is_missing(s.t_ambient[i]))
            out.t_over[i] = s.t_module[i] - s.t_ambient[i];
    }
    return out;
}

namespace {

void append_row(WeatherSeries& dst, const WeatherSeries& src, std::size_t i) {
    dst.timestamps.push_back(src.timestamps[i]);
    dst.g_poa.push_back(src.g_poa[i]);
    dst.t_ambient.push_back(src.t_ambient[i]);
    dst.t_module.push_back(src.t_module[i]);
    dst.ws.push_back(src.ws[i]);
    if (!src.wind_direction.empty()) dst.wind_direction.push_back(src.wind_direction[i]);
    if (!src.rel_humidity.empty()) dst.rel_humidity.push_back(src.rel_humidity[i]);
}

}  // namespace

SplitSeries split_weekday_weekend(const WeatherSeries& s) {
    SplitSeries out;
    out.train.dt_seconds = out.test.dt_seconds = s.dt_seconds;
    out.train.site_id = out.test.site_id = s.site_id;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const bool weekend = weekday(s.timestamps[i]) >= 5;
        append_row(weekend ? out.test : out.train, s, i);
    }
    if (out.train.empty()) throw std::runtime_error("weekday/weekend split: empty train set");
    if (out.test.empty()) throw std::runtime_error("weekday/weekend split: empty test set");
    return out;
}

OverTempSeries filter_rows(const OverTempSeries& s, const FilterSpec& spec) {
    spec.validate(0);
    OverTempSeries out;
    out.dt_seconds = s.dt_seconds;
    out.site_id = s.site_id;
    double prev_ws = missing();
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double g = s.g_poa[i];
        const double w = s.ws[i];
        if (is_missing(g) || is_missing(w)) continue;
        if (!(g > spec.g_min)) continue;
        if (w < spec.ws_min || w > spec.ws_max) continue;
        if (spec.max_ws_variation && !is_missing(prev_ws) &&
            std::abs(w - prev_ws) >= *spec.max_ws_variation)
            continue;
        out.timestamps.push_back(s.timestamps[i]);
        out.t_over.push_back(s.t_over[i]);
        out.g_poa.push_back(g);
        out.ws.push_back(w);
        prev_ws = w;
    }
    return out;
}

double quantile(std::span<const double> values, double q) {
    if (q < 0.0 || q > 1.0) throw std::invalid_argument("quantile fraction must be in [0, 1]");
    std::vector<double> v;
    v.reserve(values.size());
    for (double x : values)
        if (!is_missing(x)) v.push_back(x);
    if (v.empty()) throw std::invalid_argument("quantile of empty data");
    std::sort(v.begin(), v.end());
    const double pos = q * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(pos);
    if (lo + 1 >= v.size()) return v.back();
    const double frac = pos - static_cast<double>(lo);
    return v[lo] + frac * (v[lo + 1] - v[lo]);
}

double ws_quantile(const WeatherSeries& s, double q) { return quantile(s.ws, q); }

}  // namespace femtherm
