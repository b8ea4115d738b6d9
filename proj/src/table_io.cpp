#include "pseudoherm/table_io.hpp"

#include <charconv>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "pseudoherm/errors.hpp"

namespace pseudoherm {

using nlohmann::ordered_json;

TableFormat table_format_for(const std::string& path) {
  auto ends_with = [&](const std::string& s) {
    return path.size() >= s.size() && path.compare(path.size() - s.size(), s.size(), s) == 0;
  };
  if (ends_with(".csv")) return TableFormat::Csv;
  if (ends_with(".json")) return TableFormat::Json;
  throw Error(ErrorKind::UsageError, "output path must end in .csv or .json: " + path);
}

std::string format_real(double v) {
  if (v == 0) v = 0;  // drop the sign of -0
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::string metadata_timestamp() {
  std::time_t t;
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH")) {
    t = static_cast<std::time_t>(std::strtoll(epoch, nullptr, 10));
  } else {
    t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  }
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string table_to_csv(const SweepTable& t) {
  std::string out;
  out += "# axis=" + t.axis + "\n";
  for (const auto& [k, v] : t.metadata) out += "# " + k + "=" + v + "\n";
  const bool ref = !t.reference.empty();
  out += ref ? "axis_value,probability,reference,flag\n" : "axis_value,probability,flag\n";
  for (std::size_t i = 0; i < t.grid.size(); ++i) {
    out += format_real(t.grid[i]) + "," + format_real(t.probability[i]) + ",";
    if (ref) out += format_real(t.reference[i]) + ",";
    out += (i < t.flags.size() ? t.flags[i] : "") + "\n";
  }
  return out;
}

std::string table_to_json(const SweepTable& t) {
  ordered_json j;
  j["schema_version"] = kTableSchemaVersion;
  j["axis"] = t.axis;
  ordered_json meta = ordered_json::object();
  for (const auto& [k, v] : t.metadata) meta[k] = v;
  j["metadata"] = meta;
  j["grid"] = t.grid;
  j["probability"] = t.probability;
  j["reference"] = t.reference;
  j["flags"] = t.flags;
  return j.dump(2) + "\n";
}

SweepTable table_from_json(const std::string& text) {
  SweepTable t;
  try {
    ordered_json j = ordered_json::parse(text);
    if (j.at("schema_version").get<int>() != kTableSchemaVersion) {
      throw Error(ErrorKind::IoError, "unsupported table schema version");
    }
    t.axis = j.at("axis").get<std::string>();
    for (auto& [k, v] : j.at("metadata").items()) t.metadata.emplace_back(k, v.get<std::string>());
    t.grid = j.at("grid").get<std::vector<double>>();
    t.probability = j.at("probability").get<std::vector<double>>();
    t.reference = j.at("reference").get<std::vector<double>>();
    t.flags = j.at("flags").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::IoError, std::string("malformed table: ") + e.what());
  }
  if (t.probability.size() != t.grid.size()) throw Error(ErrorKind::IoError, "grid and probability lengths differ");
  return t;
}

void write_table(const SweepTable& t, TableFormat format, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoError, "cannot open " + path);
  out << (format == TableFormat::Csv ? table_to_csv(t) : table_to_json(t));
  if (!out) throw Error(ErrorKind::IoError, "write failed: " + path);
}

SweepTable read_table_json(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return table_from_json(ss.str());
}

}  // namespace pseudoherm
