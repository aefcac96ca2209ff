#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "schubart/cli.hpp"

using schubart::cli::run;

namespace {

struct Outcome {
  int status = 0;
  std::string out;
  std::string err;
};

Outcome call(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  Outcome o;
  o.status = run(args, out, err);
  o.out = out.str();
  o.err = err.str();
  return o;
}

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "schubart_cli_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

int exit_status(const std::string& cmd) {
  const int raw = std::system(cmd.c_str());
  return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

}  // namespace

TEST_CASE("simulate writes a CSV with the config header") {
  const auto o = call({"simulate", "--r0", "0.1", "--gamma-from-energy", "--until", "u+=1.0", "--out", "-"});
  REQUIRE(o.status == 0);
  const auto head = first_line(o.out);
  REQUIRE(head.rfind("# ", 0) == 0);
  const auto cfg = nlohmann::json::parse(head.substr(2));
  CHECK(cfg["command"] == "simulate");
  CHECK(cfg["r0"] == 0.1);
  CHECK(o.out.find("sigma,t_phys,r,nu,u,gamma") != std::string::npos);
  CHECK(call({"simulate", "--r0", "0.1", "--gamma-from-energy", "--until", "u+=1.0", "--out", "-"}).out == o.out);
}

TEST_CASE("zvc crosses the axis near the oracle value") {
  const auto o = call({"zvc", "--m", "0.3333333333", "--h", "-1", "--region", "I", "--out", "-"});
  REQUIRE(o.status == 0);
  std::istringstream in(o.out);
  std::string line;
  std::getline(in, line);
  std::getline(in, line);
  CHECK(line == "region,polyline_id,x1,x2");
  std::string prev_id;
  double prev_x1 = 0, prev_x2 = 0;
  int crossings = 0;
  while (std::getline(in, line)) {
    std::istringstream row(line);
    std::string region, id, x1s, x2s;
    std::getline(row, region, ',');
    std::getline(row, id, ',');
    std::getline(row, x1s, ',');
    std::getline(row, x2s, ',');
    const double x1 = std::stod(x1s), x2 = std::stod(x2s);
    if (id == prev_id && ((prev_x2 < 0 && x2 >= 0) || (prev_x2 > 0 && x2 <= 0))) {
      const double t = prev_x2 / (prev_x2 - x2);
      CHECK(std::abs(prev_x1 + t * (x1 - prev_x1) - 0.534) <= 1e-3);
      ++crossings;
    }
    prev_id = id;
    prev_x1 = x1;
    prev_x2 = x2;
  }
  CHECK(crossings >= 1);
}

TEST_CASE("claims report") {
  const auto path = scratch("claims.json");
  const auto o = call({"claims", "--m", "0.5", "--out", path.string()});
  REQUIRE(o.status == 0);
  const auto j = nlohmann::json::parse(slurp(path));
  CHECK(j["all_pass"] == true);
  CHECK(j["config"]["m"] == 0.5);
  REQUIRE(j["reports"].size() == 1);
  CHECK(j["reports"][0]["claims"].size() == 6);
}

TEST_CASE("shoot writes orbit and report") {
  const auto orbit = scratch("orbit.csv");
  const auto report = scratch("report.json");
  const auto o = call({"shoot", "--m", "0.3333333333", "--h", "-1", "--out", orbit.string(), "--report",
                       report.string()});
  REQUIRE(o.status == 0);
  const auto j = nlohmann::json::parse(slurp(report));
  CHECK(j["closure_error"].get<double>() <= 1e-5);
  CHECK(std::abs(j["exit_nu"].get<double>()) <= 1e-8);
  CHECK(slurp(orbit).rfind("# {", 0) == 0);
}

TEST_CASE("homothetic, wazewski and linearize") {
  const auto h = call({"homothetic", "--scan-m", "0.05:0.5:4", "--h", "0.2", "--out", "-"});
  REQUIRE(h.status == 0);
  CHECK(h.out.find("m,h,regime,x1_eq,h0,motion") != std::string::npos);

  const auto w = call({"wazewski", "--scan-r0", "0.02:0.2:4", "--out", "-"});
  REQUIRE(w.status == 0);
  CHECK(w.out.find(",B2,") != std::string::npos);
  CHECK(w.out.find(",B1,") != std::string::npos);

  const auto l = call({"linearize", "--out", "-"});
  REQUIRE(l.status == 0);
  const auto j = nlohmann::json::parse(l.out);
  CHECK(j["max_entry_discrepancy"].get<double>() <= 1e-6);
}

TEST_CASE("config file and flag precedence") {
  const auto cfg = scratch("cfg.json");
  {
    std::ofstream f(cfg);
    f << R"({"m": 0.5, "r0": 0.05, "gamma_from_energy": true, "until": "sigma=0.5"})";
  }
  const auto a = call({"simulate", "--config", cfg.string(), "--out", "-"});
  REQUIRE(a.status == 0);
  CHECK(nlohmann::json::parse(first_line(a.out).substr(2))["m"] == 0.5);
  const auto b = call({"simulate", "--config", cfg.string(), "--m", "0.25", "--out", "-"});
  REQUIRE(b.status == 0);
  CHECK(nlohmann::json::parse(first_line(b.out).substr(2))["m"] == 0.25);

  {
    std::ofstream f(cfg);
    f << R"({"mass": 0.5})";
  }
  CHECK(call({"simulate", "--config", cfg.string()}).status == 2);
}

TEST_CASE("usage and numerical errors") {
  auto single_line = [](const std::string& s) { return !s.empty() && s.find('\n') == s.size() - 1; };
  const auto no_cmd = call({});
  CHECK(no_cmd.status == 2);
  CHECK(single_line(no_cmd.err));
  const auto bad_m = call({"claims", "--m", "1.5"});
  CHECK(bad_m.status == 2);
  CHECK(single_line(bad_m.err));
  CHECK(call({"simulate"}).status == 2);
  CHECK(call({"simulate", "--r0", "0.1", "--until", "w=1"}).status == 2);
  CHECK(call({"shoot", "--h", "0.5"}).status == 2);
  CHECK(call({"zvc", "--region", "V"}).status == 2);
  CHECK(call({"wazewski", "--scan-r0", "0.1:0.5:3"}).status == 2);
  CHECK(call({"frobnicate"}).status == 2);

  const auto imag = call({"simulate", "--r0", "0.3", "--gamma-from-energy", "--out", "-"});
  CHECK(imag.status == 1);
  CHECK(imag.err.find("ImaginaryGamma") != std::string::npos);
  CHECK(single_line(imag.err));
}

TEST_CASE("installed binary") {
  const std::string bin = SCHUBART_CLI_PATH;
  const auto out = scratch("bin_lin.json").string();
  CHECK(exit_status(bin + " linearize --out " + out + " > /dev/null 2>&1") == 0);
  const auto first = slurp(out);
  CHECK(exit_status(bin + " linearize --out " + out + " > /dev/null 2>&1") == 0);
  CHECK(slurp(out) == first);
  CHECK(exit_status(bin + " claims --m 2 > /dev/null 2>&1") == 2);
  CHECK(exit_status(bin + " simulate --r0 0.3 --gamma-from-energy --out - > /dev/null 2>&1") == 1);
  CHECK(exit_status(bin + " --help > /dev/null 2>&1") == 0);
}
