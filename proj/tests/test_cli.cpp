#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sys/wait.h>

#include "dglab/common.hpp"
#include "dglab/config.hpp"
#include "dglab/report.hpp"

using namespace dglab;
namespace fs = std::filesystem;

namespace {

ErrorKind kind_of(const Json& j) {
  try {
    config_from_json(j);
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::Dependency;  // not produced by config parsing
}

std::string message_of(const Json& j) {
  try {
    config_from_json(j);
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

fs::path scratch(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("dglab_test_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

int run_cli(const std::string& args) {
  std::string cmd = std::string(DGLAB_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  int st = std::system(cmd.c_str());
  return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

void write_file(const fs::path& p, const std::string& s) { std::ofstream(p) << s; }

}  // namespace

TEST_CASE("config parsing") {
  Json j = Json::parse(R"({"L": 4, "N": 3, "J": "nearest-neighbour", "beta": 12.5, "s": 0.01, "m2": 0.1,
                           "numerics": {"c_h": 0.2, "zero_mode": true}, "seed": 7})");
  RunConfig c = config_from_json(j);
  CHECK(c.L == 4);
  CHECK(*c.beta == 12.5);
  CHECK(*c.s == 0.01);
  CHECK(c.c_h == 0.2);
  CHECK(c.zero_mode);
  CHECK(c.seed == 7);
  CHECK(require_beta(c) == 12.5);

  RunConfig back = config_from_json(to_json(c));
  CHECK(to_json(back).dump() == to_json(c).dump());

  RunConfig d = config_from_json(Json::object());
  CHECK_FALSE(d.beta.has_value());
  CHECK_THROWS_AS(require_beta(d), Error);
  CHECK_THROWS_AS(require_s(d), Error);
}

TEST_CASE("config errors") {
  CHECK(kind_of(Json::parse(R"({"bogus": 1})")) == ErrorKind::InvalidInput);
  CHECK(message_of(Json::parse(R"({"numerics": {"bogus": 1}})")).find("bogus") != std::string::npos);
  CHECK(kind_of(Json::parse(R"({"L": "four"})")) == ErrorKind::InvalidInput);
  CHECK(message_of(Json::parse(R"({"L": 1})")).find("L >= 2") != std::string::npos);
  CHECK(message_of(Json::parse(R"({"m2": 2.0})")).find("m2") != std::string::npos);
  // theta = 1/4 for nearest neighbour
  CHECK(message_of(Json::parse(R"({"s": 0.3})")).find("theta_J") != std::string::npos);
  CHECK_NOTHROW(config_from_json(Json::parse(R"({"s": -0.2})")));
  CHECK(message_of(Json::parse(R"({"criteria": [16]})")).find("criteria") != std::string::npos);
  CHECK(kind_of(Json::parse("[1, 2]")) == ErrorKind::InvalidInput);
}

TEST_CASE("environment overrides touch numerics only") {
  RunConfig c;
  setenv("DGLAB_SWEEPS", "123", 1);
  setenv("DGLAB_WINDOW_SD", "9.5", 1);
  apply_env_overrides(c);
  CHECK(c.sweeps == 123);
  CHECK(c.window_sd == 9.5);
  setenv("DGLAB_SWEEPS", "12x", 1);
  CHECK_THROWS_AS(apply_env_overrides(c), Error);
  unsetenv("DGLAB_SWEEPS");
  unsetenv("DGLAB_WINDOW_SD");
}

TEST_CASE("checksums") {
  // FNV-1a 64 reference values
  CHECK(content_checksum("") == "cbf29ce484222325");
  CHECK(content_checksum("a") == "af63dc4c8601ec8c");

  Json cfg = {{"L", 4}};
  Json payload = {{"x", 1.5}, {"y", Json::array({1, 2, 3})}};
  std::string a = render_json("demo", cfg, payload), b = render_json("demo", cfg, payload);
  CHECK(a == b);
  Json v = verify_json_report(a);
  CHECK(v.at("payload") == payload);

  std::string bad = a;
  bad.replace(bad.find("1.5"), 3, "1.6");
  CHECK_THROWS_AS(verify_json_report(bad), Error);
  try {
    verify_json_report(bad);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Checksum);
  }
  CHECK_THROWS_AS(verify_json_report("{not json"), Error);

  Table t{{"p", "value"}, {{Json(1), Json(0.25)}, {Json(2), Json(0.5)}}};
  std::string csv = render_csv(cfg, t);
  CHECK(csv.rfind("# config=", 0) == 0);
  CHECK(csv.find("# checksum=") != std::string::npos);
  CHECK(csv.find("p,value") != std::string::npos);
  CHECK(csv == render_csv(cfg, t));
  CHECK_NOTHROW(verify_csv_report(csv));
  std::string tampered = csv;
  tampered.replace(tampered.find("0.25"), 4, "0.26");
  CHECK_THROWS_AS(verify_csv_report(tampered), Error);
}

TEST_CASE("command line exit codes") {
  fs::path dir = scratch("exit");
  const std::string out = " --out " + (dir / "out").string();
  write_file(dir / "ok.json", R"({"L": 4, "N": 2, "beta": 12.566370614359172, "s": 0.0, "m2": 0.1})");
  write_file(dir / "nobeta.json", R"({"L": 4, "N": 2, "s": 0.0, "m2": 0.1})");
  write_file(dir / "zero.json", R"({"L": 4, "N": 2, "s": 0.0, "m2": 0.0, "numerics": {"zero_mode": true}})");
  write_file(dir / "unknown.json", R"({"L": 4, "colour": "red"})");
  write_file(dir / "broken.json", "{");

  CHECK(run_cli("") == 1);
  CHECK(run_cli("frobnicate") == 1);
  CHECK(run_cli("frd-report --config " + (dir / "ok.json").string() + " --emit xml" + out) == 1);
  CHECK(run_cli("frd-report --config " + (dir / "unknown.json").string() + out) == 1);
  CHECK(run_cli("frd-report --config " + (dir / "broken.json").string() + out) == 1);
  CHECK(run_cli("flow --config " + (dir / "nobeta.json").string() + out) == 1);
  CHECK(run_cli("frd-report --config " + (dir / "zero.json").string() + out) == 1);

  CHECK(run_cli("frd-report --config " + (dir / "ok.json").string() + out) == 0);
  fs::path report = dir / "out" / "frd-report.json";
  REQUIRE(fs::exists(report));
  CHECK_NOTHROW(read_checked_json(report.string()));

  // the same report feeds a later run through covariance_file; corruption is rejected
  write_file(dir / "cov.json", R"({"L": 4, "N": 2, "beta": 12.566370614359172, "s": 0.0, "m2": 0.1, "covariance_file": ")" +
                                   report.string() + R"("})");
  CHECK(run_cli("frd-report --config " + (dir / "cov.json").string() + " --out " + (dir / "out2").string()) == 0);
  std::string text = read_text(report.string());
  text[text.find("\"payload\"") + 12] ^= 1;
  write_file(report, text);
  CHECK(run_cli("frd-report --config " + (dir / "cov.json").string() + " --out " + (dir / "out2").string()) == 1);

  CHECK(run_cli("frd-report --config " + (dir / "ok.json").string() + " --emit csv" + out) == 0);
  CHECK(fs::exists(dir / "out" / "frd-report.csv"));
  CHECK_NOTHROW(verify_csv_report(read_text((dir / "out" / "frd-report.csv").string())));
  fs::remove_all(dir);
}

TEST_CASE("flow command separates the phases") {
  fs::path dir = scratch("flow");
  write_file(dir / "hi.json", R"({"L": 8, "N": 3, "beta": 12.566370614359172, "s": 0.0, "numerics": {"flow_scales": 8}})");
  write_file(dir / "lo.json", R"({"L": 8, "N": 3, "beta": 3.141592653589793, "s": 0.0, "numerics": {"flow_scales": 8}})");
  CHECK(run_cli("flow --config " + (dir / "hi.json").string() + " --out " + (dir / "a").string()) == 0);
  CHECK(run_cli("flow --config " + (dir / "lo.json").string() + " --out " + (dir / "b").string()) == 2);
  // same seed and config reproduce the report byte for byte
  CHECK(run_cli("flow --config " + (dir / "hi.json").string() + " --out " + (dir / "c").string()) == 0);
  CHECK(read_text((dir / "a" / "flow.json").string()) == read_text((dir / "c" / "flow.json").string()));
  fs::remove_all(dir);
}
