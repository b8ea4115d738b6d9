#pragma once

// CSV / JSON output of sweep tables.

#include <string>

#include "pseudoherm/dynamics.hpp"

namespace pseudoherm {

enum class TableFormat { Csv, Json };

inline constexpr int kTableSchemaVersion = 1;

/// From the file extension (.csv or .json); anything else is a usage error.
TableFormat table_format_for(const std::string& path);

/// '#'-prefixed metadata lines, then "axis_value,probability,flag" rows.
std::string table_to_csv(const SweepTable& t);
std::string table_to_json(const SweepTable& t);
SweepTable table_from_json(const std::string& text);

void write_table(const SweepTable& t, TableFormat format, const std::string& path);
SweepTable read_table_json(const std::string& path);

/// Shortest round-trip decimal form, '.' separator regardless of locale.
std::string format_real(double v);

/// Metadata timestamp: SOURCE_DATE_EPOCH when set, otherwise the current UTC time.
std::string metadata_timestamp();

}  // namespace pseudoherm
