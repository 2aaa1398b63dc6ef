#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli/cli.hpp"

namespace fs = std::filesystem;
using evolvekit::cli::run;
using json = nlohmann::json;

namespace {

struct Outcome {
  int code;
  std::string out, err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "evolvekit");
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream is(text);
  for (std::string line; std::getline(is, line);) out.push_back(line);
  return out;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream is(line);
  for (std::string cell; std::getline(is, cell, ',');) out.push_back(cell);
  return out;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), {}};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = EVOLVEKIT_TEST_TMPDIR;
  fs::create_directories(dir);
  return dir / name;
}

double telegraph(double x) {
  const double s = std::sqrt(1.0 - x * x);
  return std::exp(-1.0) / 2.0 * (std::cyl_bessel_i(0.0, s) + std::cyl_bessel_i(1.0, s) / s);
}

}  // namespace

TEST_CASE("number formatting round-trips") {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0}) CHECK(evolvekit::cli::parse_number(evolvekit::cli::format_number(v)) == v);
  CHECK(evolvekit::cli::format_number(0.1) == "0.10000000000000001");
  CHECK_THROWS(evolvekit::cli::parse_number("1,5"));
  CHECK_THROWS(evolvekit::cli::parse_number("nan"));
  CHECK_THROWS(evolvekit::cli::parse_number(""));
}

TEST_CASE("geometry command") {
  auto r = invoke({"geometry", "--n", "2", "--format", "csv"});
  REQUIRE(r.code == 0);
  auto ls = lines(r.out);
  REQUIRE(ls.size() == 5);
  CHECK(ls[0] == "vertex,x_1,x_2");
  CHECK(split(ls[2])[1] == "-0.5");
  CHECK(std::stod(split(ls[2])[2]) == doctest::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-16));
  CHECK(ls[4].rfind("#unit_volume=", 0) == 0);

  r = invoke({"geometry", "--n", "3", "--format", "json"});
  REQUIRE(r.code == 0);
  const json doc = json::parse(r.out);
  CHECK(doc["schema_version"] == 1);
  CHECK(doc["n"] == 3);
  CHECK(doc["vertices"].size() == 4);
  CHECK(json::parse(doc.dump()) == doc);

  CHECK(invoke({"geometry", "--n", "0"}).code == 2);
  CHECK(invoke({"geometry", "--n", "2", "--format", "xml"}).code == 2);
  CHECK(invoke({"nosuch"}).code == 2);
  CHECK(invoke({}).code == 2);
}

TEST_CASE("density command on a grid") {
  auto r = invoke({"density", "--n", "1", "--lambda", "1", "--v", "1", "--t", "1", "--grid", "-1.2:1.2:101"});
  REQUIRE(r.code == 0);
  auto ls = lines(r.out);
  REQUIRE(ls.size() == 103);
  CHECK(ls[0] == "x_1,membership,density");
  for (std::size_t i = 1; i <= 101; ++i) {
    const auto cells = split(ls[i]);
    const double x = std::stod(cells[0]);
    const double f = std::stod(cells[2]);
    if (cells[1] == "inside")
      CHECK(f == doctest::Approx(telegraph(x)).epsilon(1e-10));
    else
      CHECK(f == 0.0);
    if (std::abs(x) > 1.0 + 1e-9) CHECK(cells[1] == "outside");
  }
  CHECK(ls.back().rfind("#ac_mass=0.6321205588285", 0) == 0);
}

TEST_CASE("density command at points and errors") {
  auto r = invoke({"density", "--n", "2", "--t", "1", "--point", "0,0", "--format", "json"});
  REQUIRE(r.code == 0);
  const json doc = json::parse(r.out);
  REQUIRE(doc["rows"].size() == 1);
  CHECK(doc["rows"][0]["density"].get<double>() > 0.0);
  CHECK(doc["rows"][0]["membership"] == "inside");

  r = invoke({"density", "--n", "2", "--t", "1", "--grid", "simplex:4"});
  REQUIRE(r.code == 0);
  CHECK(lines(r.out).size() == 15 + 2);

  CHECK(invoke({"density", "--n", "1", "--t", "0", "--point", "0"}).code == 2);
  CHECK(invoke({"density", "--n", "1", "--t", "-1", "--point", "0"}).code == 2);
  CHECK(invoke({"density", "--n", "1", "--t", "1", "--point", "inf"}).code == 2);
  CHECK(invoke({"density", "--n", "2", "--t", "1", "--point", "0"}).code == 2);
  CHECK(invoke({"density", "--n", "1", "--t", "1"}).code == 2);
  CHECK(invoke({"density", "--n", "4", "--t", "1", "--grid", "simplex:3"}).code == 2);
}

TEST_CASE("simulate command is reproducible and writes a manifest") {
  const auto a = scratch("a.csv"), b = scratch("b.csv");
  for (const auto& p : {a, b})
    REQUIRE(invoke({"simulate", "--n", "2", "--t", "1.5", "--samples", "1000", "--seed", "7", "--out", p.string()}).code == 0);
  CHECK(slurp(a) == slurp(b));
  CHECK_FALSE(fs::exists(a.string() + ".partial"));
  const auto ls = lines(slurp(a));
  REQUIRE(ls.size() == 1001);
  CHECK(ls[0] == "x_1,x_2,switches,initial_direction,current_direction");
  double mean = 0.0;
  for (std::size_t i = 1; i < ls.size(); ++i) mean += std::stod(split(ls[i])[2]) / 1000.0;
  CHECK(std::abs(mean - 1.5) <= 3.0 * std::sqrt(1.5 / 1000.0));

  const json m = json::parse(slurp(a.string() + ".manifest.json"));
  CHECK(m["command"] == "simulate");
  CHECK(m["seed"] == 7);
  CHECK(m["params"]["samples"] == 1000);
  CHECK(m["params"]["policy"] == "uniform");
  CHECK(m.contains("version"));
  CHECK(m.contains("timestamp"));

  CHECK(invoke({"simulate", "--n", "2", "--policy", "fixed:5"}).code == 2);
  CHECK(invoke({"simulate", "--n", "2", "--samples", "0"}).code == 2);
  CHECK(invoke({"simulate", "--n", "2", "--out", "/nonexistent-dir/x.csv"}).code == 1);
}

TEST_CASE("verify command") {
  const auto path = scratch("report.json");
  auto r = invoke({"verify", "--suite", "coefficients", "--n", "3", "--out", path.string()});
  CHECK(r.code == 0);
  const json doc = json::parse(slurp(path));
  CHECK(doc["status"] == "all_passed");
  CHECK(doc["checks"].size() > 0);
  for (const auto& c : doc["checks"]) {
    CHECK(c.contains("target"));
    CHECK(c.contains("estimate"));
    CHECK(c.contains("sigma"));
    CHECK(c["pass"] == true);
  }
  CHECK(invoke({"verify", "--suite", "nosuch"}).code == 2);
  r = invoke({"verify", "--suite", "telegraph", "--budget", "0"});
  CHECK(r.code == 1);
  CHECK(json::parse(r.out)["status"] == "empty");
  CHECK(invoke({"verify", "--suite", "remark", "--mutate", "volume", "--n", "2"}).code == 1);
  CHECK(invoke({"verify", "--suite", "remark", "--n", "2", "--t", "0.5,3"}).code == 0);
}
