#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "femtherm/series.hpp"

namespace femtherm {

/// Column-name mapping for delimited input. Required columns must be present
/// in the header; optional columns may be left empty.
struct CsvSchema {
    std::string timestamp = "timestamp";
    std::string g_poa = "g_poa";
    std::string t_ambient = "t_ambient";
    std::string t_module = "t_module";
    std::string ws = "ws";
    std::string wind_direction;  // optional
    std::string rel_humidity;    // optional
};

struct LoadResult {
    WeatherSeries series;
    std::size_t rows_read = 0;     // data rows seen in the file
    std::size_t rows_dropped = 0;  // unparseable or out-of-range rows removed
};

/// Parses "YYYY-MM-DD[ T]HH:MM[:SS][.fff][Z|+hh:mm]" or plain epoch seconds.
/// Any timezone suffix is ignored: timestamps are treated as local file time.
std::int64_t parse_timestamp(const std::string& text);

std::string format_timestamp(std::int64_t epoch_s);

/// Loads a comma- or tab-delimited file with a header row. Rows with an
/// unparseable required field, G < 0 or WS < 0 are dropped and counted.
/// Throws when a required column is missing, no rows survive, or the
/// detected time step differs from dt_expected.
LoadResult load_csv(const std::filesystem::path& path, const CsvSchema& schema,
                    std::int64_t dt_expected, const std::string& site_id = {});

/// Writes a series in the same delimited format load_csv reads.
void write_csv(const std::filesystem::path& path, const WeatherSeries& s);

}  // namespace femtherm
