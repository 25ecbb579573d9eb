#include "femtherm/csv.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace femtherm {

namespace {

// Days from civil date (Howard Hinnant's algorithm), valid far beyond any
// plausible measurement range.
std::int64_t days_from_civil(int y, unsigned m, unsigned d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, int& y, unsigned& m, unsigned& d) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    y = static_cast<int>(yoe) + static_cast<int>(era) * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = doy - (153 * mp + 2) / 5 + 1;
    m = mp + (mp < 10 ? 3 : -9);
    y += m <= 2;
}

bool parse_int(std::string_view sv, int& out) {
    auto [p, ec] = std::from_chars(sv.data(), sv.data() + sv.size(), out);
    return ec == std::errc() && p == sv.data() + sv.size();
}

std::vector<std::string> split_line(const std::string& line, char delim) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == delim) {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

}  // namespace

std::int64_t parse_timestamp(const std::string& text) {
    const std::string t = trim(text);
    if (t.empty()) throw std::invalid_argument("empty timestamp");
    // Epoch seconds when there is no date separator.
    if (t.find('-', 1) == std::string::npos && t.find(':') == std::string::npos) {
        // allow integral or decimal epoch values
        std::size_t pos = 0;
        const double v = std::stod(t, &pos);
        if (pos != t.size()) throw std::invalid_argument("bad epoch timestamp: " + text);
        return static_cast<std::int64_t>(std::llround(v));
    }
    if (t.size() < 16) throw std::invalid_argument("bad timestamp: " + text);
    int y = 0, mo = 0, da = 0, hh = 0, mi = 0, ss = 0;
    if (!parse_int(std::string_view(t).substr(0, 4), y) || t[4] != '-' ||
        !parse_int(std::string_view(t).substr(5, 2), mo) || t[7] != '-' ||
        !parse_int(std::string_view(t).substr(8, 2), da) ||
        (t[10] != ' ' && t[10] != 'T') ||
        !parse_int(std::string_view(t).substr(11, 2), hh) || t[13] != ':' ||
        !parse_int(std::string_view(t).substr(14, 2), mi))
        throw std::invalid_argument("bad timestamp: " + text);
    if (t.size() >= 19 && t[16] == ':') {
        if (!parse_int(std::string_view(t).substr(17, 2), ss))
            throw std::invalid_argument("bad timestamp: " + text);
    }
    // Fractional seconds and timezone designators are ignored (local time).
    return days_from_civil(y, static_cast<unsigned>(mo), static_cast<unsigned>(da)) * 86400 +
           hh * 3600 + mi * 60 + ss;
}

std::string format_timestamp(std::int64_t epoch_s) {
    std::int64_t day = epoch_s / 86400;
    std::int64_t sod = epoch_s % 86400;
    if (sod < 0) {
        sod += 86400;
        --day;
    }
    int y;
    unsigned m, d;
    civil_from_days(day, y, m, d);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u %02lld:%02lld:%02lld", y, m, d,
                  static_cast<long long>(sod / 3600), static_cast<long long>((sod % 3600) / 60),
                  static_cast<long long>(sod % 60));
    return buf;
}

LoadResult load_csv(const std::filesystem::path& path, const CsvSchema& schema,
                    std::int64_t dt_expected, const std::string& site_id) {
    if (dt_expected <= 0) throw std::invalid_argument("dt_expected must be positive");
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open input file: " + path.string());

    std::string header;
    if (!std::getline(in, header)) throw std::runtime_error("empty file: " + path.string());
    const char delim = header.find('\t') != std::string::npos ? '\t' : ',';
    const auto names = split_line(header, delim);

    auto column = [&](const std::string& name, bool required) -> int {
        if (name.empty()) {
            if (required) throw std::runtime_error("schema maps a required column to ''");
            return -1;
        }
        for (std::size_t i = 0; i < names.size(); ++i)
            if (trim(names[i]) == name) return static_cast<int>(i);
        if (required)
            throw std::runtime_error("required column not found in header: " + name);
        return -1;
    };

    const int c_ts = column(schema.timestamp, true);
    const int c_g = column(schema.g_poa, true);
    const int c_ta = column(schema.t_ambient, true);
    const int c_tm = column(schema.t_module, true);
    const int c_ws = column(schema.ws, true);
    const int c_wd = column(schema.wind_direction, false);
    const int c_rh = column(schema.rel_humidity, false);

    LoadResult result;
    WeatherSeries& s = result.series;
    s.dt_seconds = dt_expected;
    s.site_id = site_id.empty() ? path.stem().string() : site_id;

    auto parse_field = [](const std::vector<std::string>& f, int idx, bool& ok) -> double {
        if (idx < 0 || static_cast<std::size_t>(idx) >= f.size()) return missing();
        const std::string v = trim(f[idx]);
        if (v.empty() || v == "nan" || v == "NaN" || v == "NA") return missing();
        try {
            std::size_t pos = 0;
            const double x = std::stod(v, &pos);
            if (pos != v.size()) ok = false;
            return x;
        } catch (const std::exception&) {
            ok = false;
            return missing();
        }
    };

    std::string line;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        ++result.rows_read;
        const auto fields = split_line(line, delim);
        bool ok = true;
        std::int64_t ts = 0;
        try {
            if (c_ts < 0 || static_cast<std::size_t>(c_ts) >= fields.size())
                throw std::invalid_argument("row too short");
            ts = parse_timestamp(fields[c_ts]);
        } catch (const std::exception&) {
            ok = false;
        }
        const double g = parse_field(fields, c_g, ok);
        const double ta = parse_field(fields, c_ta, ok);
        const double tm = parse_field(fields, c_tm, ok);
        const double w = parse_field(fields, c_ws, ok);
        bool opt_ok = true;  // optional channels never drop a row
        const double wd = parse_field(fields, c_wd, opt_ok);
        const double rh = parse_field(fields, c_rh, opt_ok);

        if (!ok || is_missing(g) || is_missing(ta) || is_missing(tm) || is_missing(w) ||
            g < 0.0 || w < 0.0) {
            ++result.rows_dropped;
            continue;
        }
        if (!s.timestamps.empty() && ts <= s.timestamps.back()) {
            ++result.rows_dropped;  // out-of-order or duplicate instant
            continue;
        }
        s.timestamps.push_back(ts);
        s.g_poa.push_back(g);
        s.t_ambient.push_back(ta);
        s.t_module.push_back(tm);
        s.ws.push_back(w);
        if (c_wd >= 0) s.wind_direction.push_back(wd);
        if (c_rh >= 0) s.rel_humidity.push_back(rh);
    }

    if (s.empty()) throw std::runtime_error("no valid rows in " + path.string());

    // Every stride must be a whole multiple of the declared step (holes are
    // whole missing rows, never odd strides). When no rows were dropped the
    // strides' common divisor must equal the declared step, so a coarser file
    // cannot masquerade as finer data; dropped rows legitimately widen strides.
    std::int64_t detected = 0;
    for (std::size_t i = 1; i < s.size(); ++i) {
        const std::int64_t step = s.timestamps[i] - s.timestamps[i - 1];
        if (step % dt_expected != 0)
            throw std::runtime_error("detected time step " + std::to_string(step) +
                                     " s is not a multiple of expected " +
                                     std::to_string(dt_expected) + " s");
        detected = std::gcd(detected, step);
    }
    if (detected != 0 && detected != dt_expected && result.rows_dropped == 0)
        throw std::runtime_error("detected time step " + std::to_string(detected) +
                                 " s != expected " + std::to_string(dt_expected) + " s");
    s.validate();
    return result;
}

void write_csv(const std::filesystem::path& path, const WeatherSeries& s) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file: " + path.string());
    out << "timestamp,g_poa,t_ambient,t_module,ws";
    if (!s.wind_direction.empty()) out << ",wind_direction";
    if (!s.rel_humidity.empty()) out << ",rel_humidity";
    out << '\n';
    char buf[64];
    auto put = [&](double v) {
        if (is_missing(v)) {
            out << ",nan";
        } else {
            std::snprintf(buf, sizeof buf, ",%.4f", v);
            out << buf;
        }
    };
    for (std::size_t i = 0; i < s.size(); ++i) {
        out << format_timestamp(s.timestamps[i]);
        put(s.g_poa[i]);
        put(s.t_ambient[i]);
        put(s.t_module[i]);
        put(s.ws[i]);
        if (!s.wind_direction.empty()) put(s.wind_direction[i]);
        if (!s.rel_humidity.empty()) put(s.rel_humidity[i]);
        out << '\n';
    }
    if (!out) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace femtherm
