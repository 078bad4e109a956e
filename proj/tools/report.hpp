#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace dlfr::cli {

enum class ReportFormat { csv, jsonl };

ReportFormat parse_report_format(std::string_view name);

/// Missing values print as an empty CSV field and as JSON null.
using Cell = std::variant<std::monostate, std::string, long long, double>;

Cell cell(std::optional<double> v);

/// Header plus rows, written all at once so row order is fixed by the caller.
class Table {
public:
    explicit Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

    void add(std::vector<Cell> row);
    void write(std::ostream& out, ReportFormat format) const;

    const std::vector<std::string>& columns() const noexcept { return columns_; }
    const std::vector<std::vector<Cell>>& rows() const noexcept { return rows_; }

private:
    std::vector<std::string> columns_;
    std::vector<std::vector<Cell>> rows_;
};

/// Shortest round-trip decimal form; "inf", "-inf" and "nan" for non-finite values.
std::string format_double(double v);

/// Comma-separated table with a header row; double quotes escape commas.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Index of a header column, or ErrorKind::format.
    std::size_t column(std::string_view name) const;
};

CsvTable read_csv(std::istream& in, const std::string& origin);

}  // namespace dlfr::cli
