#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <clocale>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "pseudoherm/errors.hpp"
#include "pseudoherm/table_io.hpp"

using namespace pseudoherm;

namespace {

SweepTable sample() {
  SweepTable t;
  t.axis = "omega";
  t.grid = {0.9, 1.0 / 3.0, 1.25};
  t.probability = {1e-300, 0.1 + 0.2, 1.00001};
  t.reference = {0.0, 0.5, 0.25};
  t.metadata = {{"family", "ho"}, {"g", "0.04"}, {"z_last", "x"}, {"a_after", "y"}};
  flag_rows(t);
  return t;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int count_rows(const std::string& csv) {
  int rows = 0;
  std::istringstream in(csv);
  std::string line;
  while (std::getline(in, line)) rows += !line.empty() && line[0] != '#';
  return rows - 1;  // header
}

}  // namespace

TEST_CASE("csv layout") {
  SweepTable t = sample();
  std::string csv = table_to_csv(t);
  CHECK(csv.find("# family=ho\n# g=0.04\n# z_last=x\n# a_after=y\n") != std::string::npos);
  CHECK(csv.find("axis_value,probability,reference,flag\n") != std::string::npos);
  CHECK(count_rows(csv) == 3);
  CHECK(csv.find("1.25,1.00001,0.25,peak|exceeds_unity\n") != std::string::npos);

  SweepTable empty;
  empty.axis = "t";
  CHECK(table_to_csv(empty) == "# axis=t\naxis_value,probability,flag\n");
}

TEST_CASE("csv ignores the process locale") {
  const char* previous = std::setlocale(LC_NUMERIC, nullptr);
  std::string saved = previous ? previous : "C";
  if (std::setlocale(LC_NUMERIC, "de_DE.UTF-8") == nullptr) std::setlocale(LC_NUMERIC, "C");
  CHECK(format_real(0.5) == "0.5");
  CHECK(format_real(-0.0) == "0");
  CHECK(format_real(1e-20) == "1e-20");
  std::setlocale(LC_NUMERIC, saved.c_str());
}

TEST_CASE("json round trip is exact") {
  SweepTable t = sample();
  SweepTable back = table_from_json(table_to_json(t));
  CHECK(back.axis == t.axis);
  CHECK(back.grid == t.grid);
  CHECK(back.probability == t.probability);
  CHECK(back.reference == t.reference);
  CHECK(back.flags == t.flags);
  CHECK(back.metadata == t.metadata);
  CHECK(table_to_json(back) == table_to_json(t));

  SweepTable empty;
  CHECK(table_from_json(table_to_json(empty)).grid.empty());

  CHECK_THROWS_AS(table_from_json("{"), Error);
  CHECK_THROWS_AS(table_from_json(R"({"schema_version": 99})"), Error);
}

TEST_CASE("files") {
  auto dir = std::filesystem::temp_directory_path() / "pseudoherm_table_io";
  std::filesystem::create_directories(dir);
  SweepTable t = sample();
  std::string csv = (dir / "t.csv").string(), json = (dir / "t.json").string();
  CHECK(table_format_for(csv) == TableFormat::Csv);
  CHECK(table_format_for(json) == TableFormat::Json);
  CHECK_THROWS_AS(table_format_for("t.txt"), Error);
  write_table(t, TableFormat::Csv, csv);
  write_table(t, TableFormat::Json, json);
  CHECK(slurp(csv) == table_to_csv(t));
  CHECK(read_table_json(json).probability == t.probability);
  try {
    write_table(t, TableFormat::Csv, (dir / "missing" / "t.csv").string());
    FAIL("expected IoError");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::IoError);
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("timestamp honours SOURCE_DATE_EPOCH") {
  setenv("SOURCE_DATE_EPOCH", "0", 1);
  CHECK(metadata_timestamp() == "1970-01-01T00:00:00Z");
  setenv("SOURCE_DATE_EPOCH", "1700000000", 1);
  CHECK(metadata_timestamp() == "2023-11-14T22:13:20Z");
  unsetenv("SOURCE_DATE_EPOCH");
}
