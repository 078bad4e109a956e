#include "report.hpp"

#include "dlfr/error.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>

namespace dlfr::cli {
namespace {

std::string quote_csv(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + '"';
}

std::vector<std::string> split_csv_line(const std::string& line, const std::string& origin) {
    std::vector<std::string> out(1);
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                out.back() += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                out.back() += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.emplace_back();
        } else if (c != '\r') {
            out.back() += c;
        }
    }
    require(!quoted, ErrorKind::format, origin + ": unterminated quote");
    return out;
}

}  // namespace

ReportFormat parse_report_format(std::string_view name) {
    if (name == "csv") return ReportFormat::csv;
    if (name == "jsonl") return ReportFormat::jsonl;
    fail(ErrorKind::config, "unknown report format '" + std::string(name) + "' (csv, jsonl)");
}

Cell cell(std::optional<double> v) {
    if (v) return *v;
    return std::monostate{};
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, p);
}

void Table::add(std::vector<Cell> row) {
    require(row.size() == columns_.size(), ErrorKind::dimension, "report row width mismatch");
    rows_.push_back(std::move(row));
}

void Table::write(std::ostream& out, ReportFormat format) const {
    if (format == ReportFormat::csv) {
        for (std::size_t i = 0; i < columns_.size(); ++i)
            out << (i ? "," : "") << quote_csv(columns_[i]);
        out << '\n';
        for (const auto& row : rows_) {
            for (std::size_t i = 0; i < row.size(); ++i) {
                if (i) out << ',';
                std::visit(
                    [&](const auto& v) {
                        using T = std::decay_t<decltype(v)>;
                        if constexpr (std::is_same_v<T, std::string>) out << quote_csv(v);
                        else if constexpr (std::is_same_v<T, long long>) out << v;
                        else if constexpr (std::is_same_v<T, double>) out << format_double(v);
                    },
                    row[i]);
            }
            out << '\n';
        }
        return;
    }
    for (const auto& row : rows_) {
        nlohmann::ordered_json j = nlohmann::ordered_json::object();
        for (std::size_t i = 0; i < row.size(); ++i) {
            std::visit(
                [&](const auto& v) {
                    using T = std::decay_t<decltype(v)>;
                    if constexpr (std::is_same_v<T, std::monostate>) j[columns_[i]] = nullptr;
                    else if constexpr (std::is_same_v<T, double>) {
                        if (std::isfinite(v)) j[columns_[i]] = v;
                        else j[columns_[i]] = nullptr;
                    } else j[columns_[i]] = v;
                },
                row[i]);
        }
        out << j.dump() << '\n';
    }
}

std::size_t CsvTable::column(std::string_view name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return i;
    fail(ErrorKind::format, "table has no '" + std::string(name) + "' column");
}

CsvTable read_csv(std::istream& in, const std::string& origin) {
    CsvTable t;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        auto fields = split_csv_line(line, origin);
        if (t.header.empty()) {
            t.header = std::move(fields);
            continue;
        }
        require(fields.size() == t.header.size(), ErrorKind::format,
                origin + ":" + std::to_string(lineno) + ": expected " +
                    std::to_string(t.header.size()) + " fields");
        t.rows.push_back(std::move(fields));
    }
    require(!t.header.empty(), ErrorKind::format, origin + ": empty table");
    return t;
}

}  // namespace dlfr::cli
