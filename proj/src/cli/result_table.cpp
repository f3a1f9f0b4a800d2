#include "dbar/cli/result_table.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>

#include "dbar/error.hpp"

namespace dbar::cli {

ResultTable::ResultTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

void ResultTable::add_row(std::vector<Cell> row) {
    if (row.size() != columns_.size())
        throw PreconditionError("ResultTable: row has " + std::to_string(row.size()) + " cells, expected " +
                                std::to_string(columns_.size()));
    rows_.push_back(std::move(row));
}

std::vector<double> ResultTable::column(const std::string& name) const {
    std::size_t c = 0;
    while (c < columns_.size() && columns_[c] != name) ++c;
    if (c == columns_.size()) throw PreconditionError("ResultTable: no column '" + name + "'");
    std::vector<double> out;
    for (const auto& r : rows_) {
        if (auto d = std::get_if<double>(&r[c])) out.push_back(*d);
        else if (auto i = std::get_if<std::int64_t>(&r[c])) out.push_back(static_cast<double>(*i));
        else throw PreconditionError("ResultTable: column '" + name + "' is not numeric");
    }
    return out;
}

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, r.ptr);
}

namespace {

std::string quote(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + "\"";
}

nlohmann::ordered_json cell_json(const Cell& c) {
    if (auto d = std::get_if<double>(&c)) {
        if (std::isfinite(*d)) return *d;
        return format_double(*d);
    }
    if (auto i = std::get_if<std::int64_t>(&c)) return *i;
    return std::get<std::string>(c);
}

}  // namespace

std::string csv_field(const Cell& c) {
    if (auto d = std::get_if<double>(&c)) return format_double(*d);
    if (auto i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
    return quote(std::get<std::string>(c));
}

void emit_csv(const ResultTable& t, std::ostream& os) {
    const auto& cols = t.columns();
    for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << quote(cols[i]);
    os << "\n";
    for (const auto& r : t.rows()) {
        for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << csv_field(r[i]);
        os << "\n";
    }
}

void emit_json(const ResultTable& t, std::ostream& os) {
    nlohmann::ordered_json j;
    j["meta"] = t.meta.is_null() ? nlohmann::ordered_json::object() : t.meta;
    j["columns"] = t.columns();
    auto rows = nlohmann::ordered_json::array();
    for (const auto& r : t.rows()) {
        auto row = nlohmann::ordered_json::array();
        for (const auto& c : r) row.push_back(cell_json(c));
        rows.push_back(row);
    }
    j["rows"] = rows;
    if (!t.report.is_null()) j["report"] = t.report;
    os << j.dump(2) << "\n";
}

void emit(const ResultTable& t, Format format, const std::string& path) {
    auto write = [&](std::ostream& os) {
        if (format == Format::csv) emit_csv(t, os);
        else emit_json(t, os);
    };
    if (path.empty()) {
        write(std::cout);
        std::cout.flush();
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
    write(f);
    if (!f) throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace dbar::cli
