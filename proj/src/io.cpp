#include "entropyts/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "entropyts/error.hpp"

namespace entropyts {

// ---------------------------------------------------------------------------
// Table

void Table::add_row(std::vector<Cell> row)
{
    if (row.size() != columns.size()) throw DomainError("Table: row width differs from column count");
    rows.push_back(std::move(row));
}

std::size_t Table::column_index(const std::string& name) const
{
    auto it = std::find(columns.begin(), columns.end(), name);
    if (it == columns.end()) throw DomainError("Table: no column named " + name);
    return static_cast<std::size_t>(it - columns.begin());
}

double Table::number(std::size_t row, const std::string& column) const
{
    const Cell& c = rows.at(row).at(column_index(column));
    if (const auto* d = std::get_if<double>(&c)) return *d;
    if (const auto* i = std::get_if<std::int64_t>(&c)) return static_cast<double>(*i);
    throw DomainError("Table: cell in column " + column + " is not numeric");
}

std::string format_double(double v)
{
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

std::string quote_if_needed(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string cell_text(const Cell& c)
{
    if (const auto* d = std::get_if<double>(&c)) return format_double(*d);
    if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
    return quote_if_needed(std::get<std::string>(c));
}

bool parse_int(const std::string& s, std::int64_t& out)
{
    if (s.empty()) return false;
    const char* b = s.data();
    const char* e = b + s.size();
    auto r = std::from_chars(b, e, out);
    return r.ec == std::errc() && r.ptr == e;
}

bool parse_double(const std::string& s, double& out)
{
    if (s.empty()) return false;
    const char* b = s.data();
    const char* e = b + s.size();
    if (*b == '+') ++b;
    auto r = std::from_chars(b, e, out);
    return r.ec == std::errc() && r.ptr == e;
}

Cell parse_cell(const std::string& s)
{
    std::int64_t i;
    if (parse_int(s, i)) return i;
    double d;
    if (parse_double(s, d)) return d;
    return s;
}

std::string trim(std::string s)
{
    auto ws = [](unsigned char c) { return std::isspace(c) != 0; };
    s.erase(s.begin(), std::find_if_not(s.begin(), s.end(), ws));
    s.erase(std::find_if_not(s.rbegin(), s.rend(), ws).base(), s.end());
    return s;
}

}  // namespace

std::vector<std::string> split_csv_line(const std::string& line)
{
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

void write_csv(const Table& t, std::ostream& os)
{
    for (const auto& [k, v] : t.meta) os << "# " << k << '=' << v << '\n';
    for (std::size_t j = 0; j < t.columns.size(); ++j) os << (j ? "," : "") << quote_if_needed(t.columns[j]);
    os << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t j = 0; j < row.size(); ++j) os << (j ? "," : "") << cell_text(row[j]);
        os << '\n';
    }
}

void write_json(const Table& t, std::ostream& os)
{
    nlohmann::ordered_json j;
    nlohmann::ordered_json meta = nlohmann::ordered_json::object();
    for (const auto& [k, v] : t.meta) meta[k] = v;
    j["meta"] = meta;
    j["columns"] = t.columns;
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& row : t.rows) {
        nlohmann::ordered_json r = nlohmann::ordered_json::object();
        for (std::size_t c = 0; c < row.size(); ++c) {
            std::visit(
                [&](const auto& v) {
                    using V = std::decay_t<decltype(v)>;
                    if constexpr (std::is_same_v<V, double>) {
                        if (std::isfinite(v)) r[t.columns[c]] = v;
                        else r[t.columns[c]] = format_double(v);
                    } else {
                        r[t.columns[c]] = v;
                    }
                },
                row[c]);
        }
        rows.push_back(std::move(r));
    }
    j["rows"] = std::move(rows);
    os << j.dump(2) << '\n';
}

Table read_csv(std::istream& is)
{
    Table t;
    std::string line;
    bool header = false;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (!header && line[0] == '#') {
            std::string body = trim(line.substr(1));
            const auto eq = body.find('=');
            if (eq != std::string::npos) t.meta.emplace_back(body.substr(0, eq), body.substr(eq + 1));
            continue;
        }
        auto fields = split_csv_line(line);
        if (!header) {
            t.columns = std::move(fields);
            header = true;
            continue;
        }
        std::vector<Cell> row;
        row.reserve(fields.size());
        for (const auto& f : fields) row.push_back(parse_cell(f));
        t.add_row(std::move(row));
    }
    return t;
}

// ---------------------------------------------------------------------------
// Series ingestion

Transform transform_from_string(const std::string& s)
{
    if (s == "none") return Transform::None;
    if (s == "log-return" || s == "log-returns") return Transform::LogReturn;
    if (s == "square") return Transform::Square;
    throw DomainError("unknown transform '" + s + "' (expected none, log-return or square)");
}

const char* to_string(Transform t)
{
    switch (t) {
    case Transform::None: return "none";
    case Transform::LogReturn: return "log-return";
    case Transform::Square: return "square";
    }
    return "?";
}

bool valid_timestamp(const std::string& s)
{
    auto digits = [&](std::size_t from, std::size_t n) {
        if (from + n > s.size()) return false;
        for (std::size_t i = from; i < from + n; ++i)
            if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
        return true;
    };
    if (s.size() < 10 || !digits(0, 4) || s[4] != '-' || !digits(5, 2) || s[7] != '-' || !digits(8, 2)) return false;
    const int month = std::stoi(s.substr(5, 2)), day = std::stoi(s.substr(8, 2));
    if (month < 1 || month > 12 || day < 1 || day > 31) return false;
    if (s.size() == 10) return true;
    if ((s[10] != ' ' && s[10] != 'T') || !digits(11, 2) || s.size() < 16 || s[13] != ':' || !digits(14, 2)) return false;
    if (std::stoi(s.substr(11, 2)) > 23 || std::stoi(s.substr(14, 2)) > 59) return false;
    if (s.size() == 16) return true;
    return s.size() == 19 && s[16] == ':' && digits(17, 2) && std::stoi(s.substr(17, 2)) <= 60;
}

namespace {

struct CsvFile {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::size_t> line_numbers;
};

CsvFile read_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw InputError("cannot open input file: " + path);
    CsvFile f;
    std::string line;
    std::size_t ln = 0;
    bool header = false;
    while (std::getline(in, line)) {
        ++ln;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty() || line[0] == '#') continue;
        auto fields = split_csv_line(line);
        for (auto& x : fields) x = trim(x);
        if (!header) {
            f.header = std::move(fields);
            header = true;
            continue;
        }
        if (fields.size() != f.header.size())
            throw InputError(path + ":" + std::to_string(ln) + ": expected " + std::to_string(f.header.size()) +
                             " fields, found " + std::to_string(fields.size()));
        f.rows.push_back(std::move(fields));
        f.line_numbers.push_back(ln);
    }
    if (!header) throw InputError(path + ": no header row");
    return f;
}

std::size_t find_column(const CsvFile& f, const std::string& name, std::size_t fallback, const std::string& path)
{
    if (name.empty()) {
        if (fallback >= f.header.size()) throw InputError(path + ": too few columns");
        return fallback;
    }
    auto it = std::find(f.header.begin(), f.header.end(), name);
    if (it != f.header.end()) return static_cast<std::size_t>(it - f.header.begin());
    std::string cols;
    for (const auto& h : f.header) cols += (cols.empty() ? "" : ", ") + h;
    throw InputError(path + ": no column '" + name + "' (columns: " + cols + ")");
}

double number_at(const CsvFile& f, std::size_t row, std::size_t col, const std::string& path)
{
    double v;
    if (!parse_double(f.rows[row][col], v) || !std::isfinite(v))
        throw InputError(path + ":" + std::to_string(f.line_numbers[row]) + ": cannot parse number '" + f.rows[row][col] + "'");
    return v;
}

const std::string& checked_time(const CsvFile& f, std::size_t row, std::size_t col, const std::string& path)
{
    const std::string& s = f.rows[row][col];
    if (!valid_timestamp(s))
        throw InputError(path + ":" + std::to_string(f.line_numbers[row]) + ": malformed timestamp '" + s + "'");
    return s;
}

}  // namespace

TimeSeries apply_transform(TimeSeries s, Transform t)
{
    switch (t) {
    case Transform::None: return s;
    case Transform::Square:
        for (double& v : s.values) v *= v;
        s.kind = SeriesKind::Volatility;
        return s;
    case Transform::LogReturn: {
        if (s.size() < 2) throw DomainError("log-return transform needs at least 2 observations");
        TimeSeries out;
        out.name = s.name;
        out.kind = SeriesKind::Return;
        for (std::size_t i = 1; i < s.size(); ++i) {
            if (!(s.values[i] > 0.0 && s.values[i - 1] > 0.0))
                throw DomainError("log-return transform needs positive prices (at " + s.timestamps[i] + ")");
            out.timestamps.push_back(s.timestamps[i]);
            out.values.push_back(std::log(s.values[i] / s.values[i - 1]));
        }
        return out;
    }
    }
    return s;
}

TimeSeries ingest_series(const std::string& path, const ColumnSpec& spec, std::span<const Transform> transforms)
{
    const CsvFile f = read_file(path);
    const std::size_t tc = find_column(f, spec.time_column, 0, path);
    const std::size_t vc = find_column(f, spec.value_column, 1, path);
    std::vector<std::pair<std::string, double>> obs;
    obs.reserve(f.rows.size());
    for (std::size_t i = 0; i < f.rows.size(); ++i) obs.emplace_back(checked_time(f, i, tc, path), number_at(f, i, vc, path));
    std::stable_sort(obs.begin(), obs.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t i = 1; i < obs.size(); ++i)
        if (obs[i].first == obs[i - 1].first) throw InputError(path + ": duplicate timestamp " + obs[i].first);
    TimeSeries s;
    s.name = f.header[vc];
    for (auto& [t, v] : obs) {
        s.timestamps.push_back(std::move(t));
        s.values.push_back(v);
    }
    if (s.size() == 0) throw InputError(path + ": no observations");
    for (Transform t : transforms) s = apply_transform(std::move(s), t);
    return s;
}

std::pair<TimeSeries, TimeSeries> align(const TimeSeries& a, const TimeSeries& b)
{
    TimeSeries oa, ob;
    oa.name = a.name;
    oa.kind = a.kind;
    ob.name = b.name;
    ob.kind = b.kind;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a.timestamps[i] < b.timestamps[j]) ++i;
        else if (b.timestamps[j] < a.timestamps[i]) ++j;
        else {
            oa.timestamps.push_back(a.timestamps[i]);
            oa.values.push_back(a.values[i]);
            ob.timestamps.push_back(b.timestamps[j]);
            ob.values.push_back(b.values[j]);
            ++i;
            ++j;
        }
    }
    return {oa, ob};
}

Panel ingest_panel(const std::string& panel_path, const std::string& factors_path, const std::string& conditioning_path)
{
    Panel p;
    {
        const CsvFile f = read_file(panel_path);
        if (f.header.size() < 3) throw InputError(panel_path + ": expected entity,date,return columns");
        for (std::size_t i = 0; i < f.rows.size(); ++i)
            p.rows.push_back({f.rows[i][0], checked_time(f, i, 1, panel_path), number_at(f, i, 2, panel_path)});
    }
    {
        const CsvFile f = read_file(factors_path);
        const std::size_t dc = 0, mc = find_column(f, "mkt", 1, factors_path);
        auto opt = [&](const char* name) -> long {
            auto it = std::find(f.header.begin(), f.header.end(), name);
            return it == f.header.end() ? -1 : static_cast<long>(it - f.header.begin());
        };
        const long sc = opt("smb"), hc = opt("hml");
        for (std::size_t i = 0; i < f.rows.size(); ++i) {
            FactorRow r;
            r.mkt = number_at(f, i, mc, factors_path);
            if (sc >= 0) r.smb = number_at(f, i, static_cast<std::size_t>(sc), factors_path);
            if (hc >= 0) r.hml = number_at(f, i, static_cast<std::size_t>(hc), factors_path);
            if (!p.factors.emplace(checked_time(f, i, dc, factors_path), r).second)
                throw InputError(factors_path + ": duplicate date " + f.rows[i][dc]);
        }
    }
    if (!conditioning_path.empty()) {
        const CsvFile f = read_file(conditioning_path);
        for (std::size_t c = 1; c < f.header.size(); ++c) {
            DatedSeries z;
            for (std::size_t i = 0; i < f.rows.size(); ++i) {
                if (f.rows[i][c].empty()) continue;
                if (!z.emplace(checked_time(f, i, 0, conditioning_path), number_at(f, i, c, conditioning_path)).second)
                    throw InputError(conditioning_path + ": duplicate date " + f.rows[i][0]);
            }
            p.conditioning[f.header[c]] = std::move(z);
        }
    }
    p.validate();
    return p;
}

}  // namespace entropyts
