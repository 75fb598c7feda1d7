#include "report.hpp"

#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace sievelab::cli {

void Table::add(std::vector<Cell> row) {
    if (row.size() != columns.size()) throw std::logic_error("table row width does not match header");
    rows.push_back(std::move(row));
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return fmt::format("{:.12g}", v);
}

namespace {

std::string csv_cell(const Cell& cell) {
    struct Visitor {
        std::string operator()(std::monostate) const { return {}; }
        std::string operator()(std::int64_t v) const { return fmt::format("{}", v); }
        std::string operator()(std::uint64_t v) const { return fmt::format("{}", v); }
        std::string operator()(double v) const { return format_double(v); }
        std::string operator()(const std::string& v) const { return v; }
        std::string operator()(const std::vector<std::uint64_t>& v) const { return fmt::format("{}", fmt::join(v, ";")); }
    };
    return std::visit(Visitor{}, cell);
}

nlohmann::ordered_json json_cell(const Cell& cell) {
    struct Visitor {
        nlohmann::ordered_json operator()(std::monostate) const { return nullptr; }
        nlohmann::ordered_json operator()(std::int64_t v) const { return v; }
        nlohmann::ordered_json operator()(std::uint64_t v) const { return v; }
        nlohmann::ordered_json operator()(double v) const {
            // JSON has no NaN or infinity; keep them as strings so nothing is lost.
            if (!std::isfinite(v)) return format_double(v);
            return v;
        }
        nlohmann::ordered_json operator()(const std::string& v) const { return v; }
        nlohmann::ordered_json operator()(const std::vector<std::uint64_t>& v) const { return v; }
    };
    return std::visit(Visitor{}, cell);
}

}  // namespace

void write_report(std::ostream& out, const Report& report, Format format) {
    if (format == Format::csv) {
        std::string seed = report.config.contains("seed") ? report.config["seed"].dump() : "none";
        out << "# sievelab " << report.command << " seed=" << seed << '\n';
        out << fmt::format("{}", fmt::join(report.table.columns, ",")) << '\n';
        for (const auto& row : report.table.rows) {
            std::vector<std::string> cells;
            cells.reserve(row.size());
            for (const auto& c : row) cells.push_back(csv_cell(c));
            out << fmt::format("{}", fmt::join(cells, ",")) << '\n';
        }
        return;
    }
    nlohmann::ordered_json doc;
    doc["config"] = report.config;
    doc["config"]["command"] = report.command;
    doc["results"] = nlohmann::ordered_json::array();
    for (const auto& row : report.table.rows) {
        nlohmann::ordered_json obj = nlohmann::ordered_json::object();
        for (std::size_t k = 0; k < row.size(); ++k) obj[report.table.columns[k]] = json_cell(row[k]);
        doc["results"].push_back(std::move(obj));
    }
    out << doc.dump(2) << '\n';
}

}  // namespace sievelab::cli
