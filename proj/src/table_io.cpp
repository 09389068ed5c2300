#include "owabms/table_io.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include "json.hpp"
#include <sstream>

#include "owabms/error.hpp"

namespace owabms {
namespace {

std::string fixed(double value, int precision) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(precision) << value;
    return os.str();
}

}  // namespace

TableFormat parse_table_format(std::string_view token) {
    if (token == "csv") return TableFormat::Csv;
    if (token == "structured-text" || token == "json") return TableFormat::StructuredText;
    throw Error(ErrorKind::InvalidInput, "unknown output format '" + std::string(token) + "'");
}

void write_table_csv(std::ostream& out, const BonusMalusTable& table, int precision) {
    out << "t\\k";
    for (int k = 0; k <= table.max_claims; ++k) out << ',' << k;
    out << '\n';
    for (int t = 0; t <= table.max_periods; ++t) {
        out << t;
        for (int k = 0; k <= table.max_claims; ++k) {
            out << ',';
            if (const auto value = table.cell(t, k)) out << fixed(*value, precision);
        }
        out << '\n';
    }
}

void write_table_structured(std::ostream& out, const BonusMalusTable& table, int precision) {
    nlohmann::ordered_json doc;
    doc["family"] = std::string(to_string(table.family));
    if (table.weights.preset_name()) doc["preset"] = *table.weights.preset_name();
    doc["weights"] = std::vector<double>(table.weights.weights().begin(), table.weights.weights().end());
    doc["max_periods"] = table.max_periods;
    doc["max_claims"] = table.max_claims;
    auto rows = nlohmann::ordered_json::array();
    for (int t = 0; t <= table.max_periods; ++t) {
        nlohmann::ordered_json row;
        row["t"] = t;
        auto cells = nlohmann::ordered_json::array();
        for (int k = 0; k <= table.max_claims; ++k) {
            if (const auto value = table.cell(t, k)) {
                cells.push_back(fixed(*value, precision));
            } else {
                cells.push_back(nullptr);
            }
        }
        row["cells"] = std::move(cells);
        rows.push_back(std::move(row));
    }
    doc["rows"] = std::move(rows);
    out << doc.dump(2) << '\n';
}

void write_table(std::ostream& out, const BonusMalusTable& table, TableFormat format, int precision) {
    if (format == TableFormat::Csv) {
        write_table_csv(out, table, precision);
    } else {
        write_table_structured(out, table, precision);
    }
}

std::vector<std::vector<double>> read_table_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line.rfind("t\\k", 0) != 0) {
        throw Error(ErrorKind::InvalidInput, "table CSV must start with a 't\\k' header");
    }
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream fields(line);
        std::string field;
        std::getline(fields, field, ',');  // row label
        while (std::getline(fields, field, ',')) {
            row.push_back(field.empty() ? std::numeric_limits<double>::quiet_NaN() : std::stod(field));
        }
        if (!line.empty() && line.back() == ',') row.push_back(std::numeric_limits<double>::quiet_NaN());
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace owabms
