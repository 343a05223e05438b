#pragma once

#include <span>
#include <string>
#include <vector>

#include "entropyts/regress.hpp"
#include "entropyts/table.hpp"

namespace entropyts {

enum class SeriesKind { Price, Return, Volatility, Other };

struct TimeSeries {
    std::string name;
    SeriesKind kind = SeriesKind::Other;
    std::vector<std::string> timestamps;
    std::vector<double> values;

    std::size_t size() const { return values.size(); }
};

enum class Transform { None, LogReturn, Square };

Transform transform_from_string(const std::string& s);
const char* to_string(Transform t);

/// Empty time_column means the first column; empty value_column the second.
struct ColumnSpec {
    std::string time_column;
    std::string value_column;
};

/// "YYYY-MM-DD", optionally followed by " HH:MM" or " HH:MM:SS" ('T' also accepted).
bool valid_timestamp(const std::string& s);

/// Reads a CSV (lines starting with '#' are skipped), sorts by timestamp,
/// rejects duplicate timestamps and applies the transforms in order.
TimeSeries ingest_series(const std::string& path, const ColumnSpec& spec, std::span<const Transform> transforms = {});

TimeSeries apply_transform(TimeSeries s, Transform t);

/// Inner join on timestamps.
std::pair<TimeSeries, TimeSeries> align(const TimeSeries& a, const TimeSeries& b);

/// Panel CSV: entity,date,return. Factor CSV: date,mkt,smb,hml (smb and hml
/// optional). Conditioning CSV: date plus one column per named series.
Panel ingest_panel(const std::string& panel_path, const std::string& factors_path, const std::string& conditioning_path);

/// Splits one CSV record; double quotes delimit fields containing commas.
std::vector<std::string> split_csv_line(const std::string& line);

}  // namespace entropyts
