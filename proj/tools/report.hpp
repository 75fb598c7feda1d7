#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace sievelab::cli {

using Cell = std::variant<std::monostate, std::int64_t, std::uint64_t, double, std::string, std::vector<std::uint64_t>>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void add(std::vector<Cell> row);
};

enum class Format { csv, json };

struct Report {
    std::string command;
    nlohmann::ordered_json config = nlohmann::ordered_json::object();
    Table table;
};

/// 12 significant digits, "nan"/"inf" spelled out.
[[nodiscard]] std::string format_double(double v);

/// CSV: a "# sievelab <command> seed=<seed>" line, a header row and one line per row, LF endings.
/// JSON: {"config": ..., "results": [ {column: value, ...}, ... ]}.
void write_report(std::ostream& out, const Report& report, Format format);

}  // namespace sievelab::cli
