#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "pseudoherm/cli.hpp"
#include "pseudoherm/table_io.hpp"

using namespace pseudoherm;

namespace {

struct Outcome {
  int code;
  std::string out, err;
};

Outcome invoke(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  int code = cli_main(args, out, err);
  return {code, out.str(), err.str()};
}

ErrorKind parse_failure(const std::vector<std::string>& args) {
  try {
    parse_args(args);
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected a parse error");
  return ErrorKind::IoError;
}

std::filesystem::path scratch() {
  auto dir = std::filesystem::temp_directory_path() / "pseudoherm_cli";
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("parse_args") {
  RunConfig c = parse_args({"coeffs", "--upto", "12"});
  CHECK(c.command == "coeffs");
  CHECK(c.upto == 12);

  RunConfig s = parse_args({"sweep-frequency", "--g", "0.04", "--E0", "0.003", "--n-from", "15", "--n-to", "16"});
  CHECK(s.command == "sweep-frequency");
  CHECK(s.g == 0.04);
  CHECK(s.E0 == 0.003);
  CHECK(s.n_from == 15);
  CHECK(s.n_to == 16);
  CHECK(s.tau == 500);
  CHECK(s.envelope == "constant");

  RunConfig d = parse_args({"derive-pair", "swanson", "2", "2"});
  CHECK(d.family == "swanson");
  CHECK(d.n == 2);
  CHECK(d.m == 2);

  CHECK(parse_failure({"spectrum", "--N", "0"}) == ErrorKind::UsageError);
  CHECK(parse_failure({"spectrum", "--unknown", "1"}) == ErrorKind::UsageError);
  CHECK(parse_failure({"coeffs", "--g", "0.1"}) == ErrorKind::UsageError);
  CHECK(parse_failure({}) == ErrorKind::UsageError);
  CHECK(parse_failure({"sweep-frequency", "--mode", "both"}) == ErrorKind::UsageError);
  CHECK(parse_failure({"sweep-frequency", "--omega-min", "1.2", "--omega-max", "1.1"}) == ErrorKind::UsageError);
  CHECK(parse_failure({"sweep-frequency", "--out", "table.txt"}) == ErrorKind::UsageError);
  CHECK(parse_args({"spectrum", "--help"}).command == "help");
}

TEST_CASE("config file supplies defaults that flags override") {
  auto path = (scratch() / "run.cfg").string();
  {
    std::ofstream f(path);
    f << "# defaults\ng = 0.02\ntau=300\n\nenvelope = sin2\n";
  }
  RunConfig c = parse_args({"sweep-frequency", "--config", path, "--tau", "400"});
  CHECK(c.g == 0.02);
  CHECK(c.tau == 400);
  CHECK(c.envelope == "sin2");

  {
    std::ofstream f(path);
    f << "upto=12\n";
  }
  CHECK(parse_failure({"sweep-frequency", "--config", path}) == ErrorKind::UsageError);
  {
    std::ofstream f(path);
    f << "not a pair\n";
  }
  CHECK(parse_failure({"coeffs", "--config", path}) == ErrorKind::UsageError);
  CHECK(parse_failure({"coeffs", "--config", (scratch() / "absent.cfg").string()}) == ErrorKind::UsageError);
}

TEST_CASE("coeffs output is deterministic") {
  Outcome a = invoke({"coeffs", "--upto", "12"});
  Outcome b = invoke({"coeffs", "--upto", "12"});
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out.find("9,31/2,0\n") != std::string::npos);
  CHECK(a.out.find("10,0,-50521\n") != std::string::npos);
}

TEST_CASE("derive-pair prints the Hermitian counterpart") {
  Outcome r = invoke({"derive-pair", "swanson", "2", "2"});
  CHECK(r.code == 0);
  CHECK(r.out.find("h = ((1/2)*a + (1/2)*g^2)*x^2 + (1/2)*p^2\n") != std::string::npos);
  CHECK(invoke({"derive-pair", "ho", "4"}).code == 3);
}

TEST_CASE("exit codes") {
  CHECK(invoke({"spectrum", "--N", "0"}).code == 2);
  CHECK(invoke({"bogus"}).code == 2);
  CHECK(invoke({"spectrum", "--help"}).code == 0);
  CHECK(invoke({"wavefunction", "--family", "swanson"}).code == 2);
  CHECK(invoke({"sweep-frequency", "--N", "16"}).code == 2);  // level 16 untrusted
  CHECK(invoke({"sweep-frequency", "--family", "ho", "--mode", "eta", "--N", "64"}).code == 3);
  CHECK(invoke({"coeffs", "--out", (scratch() / "no" / "such" / "dir.txt").string()}).code == 3);
}

TEST_CASE("spectrum and gauge commands") {
  Outcome s = invoke({"spectrum", "--family", "swanson", "--n", "2", "--m", "2", "--g", "0", "--N", "40"});
  CHECK(s.code == 0);
  CHECK(s.out.find("0,0.5") != std::string::npos);
  Outcome g = invoke({"gauge", "--family", "swanson", "--n", "2", "--m", "2", "--gauge", "velocity"});
  CHECK(g.code == 0);
  CHECK(g.out.find("gauge = velocity") != std::string::npos);
}

TEST_CASE("sweep-frequency flags the argmax row and writes both formats") {
  setenv("SOURCE_DATE_EPOCH", "1700000000", 1);
  auto dir = scratch();
  std::string csv = (dir / "sweep.csv").string(), json = (dir / "sweep.json").string();
  std::vector<std::string> base{"sweep-frequency", "--N", "64", "--omega-min", "1.1", "--omega-max", "1.25"};
  auto with_out = [&](const std::string& path) {
    auto a = base;
    a.push_back("--out");
    a.push_back(path);
    return a;
  };
  REQUIRE(invoke(with_out(csv)).code == 0);
  REQUIRE(invoke(with_out(json)).code == 0);
  SweepTable t = read_table_json(json);
  std::size_t peak = 0;
  for (std::size_t i = 0; i < t.probability.size(); ++i) {
    if (t.probability[i] > t.probability[peak]) peak = i;
  }
  CHECK(t.flags[peak].find("peak") != std::string::npos);
  CHECK(t.reference.size() == t.grid.size());

  std::ifstream in(csv);
  std::stringstream ss;
  ss << in.rdbuf();
  std::string first = ss.str();
  CHECK(first.find("# timestamp=2023-11-14T22:13:20Z\n") != std::string::npos);
  CHECK(first.find("# N=64\n") != std::string::npos);
  REQUIRE(invoke(with_out(csv)).code == 0);
  std::ifstream again(csv);
  std::stringstream ss2;
  ss2 << again.rdbuf();
  CHECK(ss2.str() == first);
  unsetenv("SOURCE_DATE_EPOCH");
  std::filesystem::remove_all(dir);
}

TEST_CASE("scan-time starts from the initial level") {
  Outcome r = invoke({"scan-time", "--N", "64", "--t-step", "100", "--omega", "1.0"});
  CHECK(r.code == 0);
  CHECK(r.out.find("\n0,0,0,\n") != std::string::npos);
}

TEST_CASE("verify runs the self-checks") {
  Outcome r = invoke({"verify"});
  CHECK(r.code == 0);
  CHECK(r.out.find("9/9 checks passed") != std::string::npos);
  CHECK(r.out.find("FAIL") == std::string::npos);
}
