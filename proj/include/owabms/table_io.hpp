#ifndef OWABMS_TABLE_IO_HPP
#define OWABMS_TABLE_IO_HPP

#include <istream>
#include <ostream>
#include <string>

#include "owabms/premiums.hpp"

namespace owabms {

enum class TableFormat { Csv, StructuredText };

TableFormat parse_table_format(std::string_view token);

// Header `t\k,0,1,...,K`, one row per t, fixed-point cells, empty fields for undefined cells.
void write_table_csv(std::ostream& out, const BonusMalusTable& table, int precision = 4);

// JSON document with the same grid (cells as strings formatted like the CSV, null when undefined).
void write_table_structured(std::ostream& out, const BonusMalusTable& table, int precision = 4);

void write_table(std::ostream& out, const BonusMalusTable& table, TableFormat format, int precision = 4);

// Reads a CSV grid written by write_table_csv (or a hand-made one with the same layout).
// Returns cells[t][k], NaN where empty.
std::vector<std::vector<double>> read_table_csv(std::istream& in);

}  // namespace owabms

#endif  // OWABMS_TABLE_IO_HPP
