#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace entropyts {

using Cell = std::variant<double, std::int64_t, std::string>;

/// Column-named rows plus (key, value) metadata echoed into every output.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    std::vector<std::pair<std::string, std::string>> meta;

    void add_row(std::vector<Cell> row);
    std::size_t column_index(const std::string& name) const;
    double number(std::size_t row, const std::string& column) const;
};

/// %.17g; non-finite values print as nan, inf, -inf.
std::string format_double(double v);

/// Metadata as leading "# key=value" lines, then a header row and the body.
void write_csv(const Table& t, std::ostream& os);
void write_json(const Table& t, std::ostream& os);

/// Inverse of write_csv. Cells that parse fully as numbers come back as
/// double (or int64 when integral in the text); everything else as string.
Table read_csv(std::istream& is);

}  // namespace entropyts
