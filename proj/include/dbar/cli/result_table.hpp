#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "dbar/cli/config.hpp"

namespace dbar::cli {

using Cell = std::variant<std::int64_t, double, std::string>;

class ResultTable {
public:
    explicit ResultTable(std::vector<std::string> columns = {});

    const std::vector<std::string>& columns() const { return columns_; }
    const std::vector<std::vector<Cell>>& rows() const { return rows_; }
    void add_row(std::vector<Cell> row);
    // values of one column as doubles (integers converted, strings rejected)
    std::vector<double> column(const std::string& name) const;

    nlohmann::ordered_json meta;    // config echo and versions; no timings
    nlohmann::ordered_json report;  // optional structured record

private:
    std::vector<std::string> columns_;
    std::vector<std::vector<Cell>> rows_;
};

// shortest round-trip decimal
std::string format_double(double x);
std::string csv_field(const Cell& c);

void emit_csv(const ResultTable& t, std::ostream& os);
void emit_json(const ResultTable& t, std::ostream& os);
// path empty: stdout
void emit(const ResultTable& t, Format format, const std::string& path);

}  // namespace dbar::cli
