#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "catch_amalgamated.hpp"
#include "vacuous/io.hpp"
#include "vacuous/vacuous.hpp"

using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;
using namespace vacuous;
namespace fs = std::filesystem;

namespace {

const fs::path& scratch() {
  static const fs::path dir = [] {
    const fs::path p = fs::temp_directory_path() / ("vacuous_cli_" + std::to_string(::getpid()));
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
  }();
  return dir;
}

std::string write(const std::string& name, const std::string& content) {
  const fs::path p = scratch() / name;
  std::ofstream(p, std::ios::binary) << content;
  return p.string();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(const std::string& args) {
  const fs::path out = scratch() / "stdout.txt";
  const fs::path err = scratch() / "stderr.txt";
  const std::string command =
      std::string("\"") + VACUOUS_CLI_PATH + "\" " + args + " >\"" + out.string() + "\" 2>\"" + err.string() + "\"";
  const int status = std::system(command.c_str());
  const int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return {code, slurp(out), slurp(err)};
}

struct Inputs {
  std::string y = write("y.csv", "1\n1\n");
  std::string c = write("c.csv", "1,0\n0,1\n");
  std::string a = write("a.csv", "0\n0\n");

  [[nodiscard]] std::string flags() const { return "--y " + y + " --contrast " + c + " --rhs " + a; }
};

}  // namespace

TEST_CASE("test command: unit-variance example", "[cli]") {
  const Inputs in;
  const Run r = run("test " + in.flags());
  REQUIRE(r.code == 0);
  const auto record = nlohmann::json::parse(r.out);
  CHECK(record["t_y"].get<double>() == 2.0);
  CHECK(record["p"].get<double>() == 0.0);
  CHECK_THAT(record["q"].get<double>(), WithinAbs(0.632121, 5e-7));
  CHECK_THAT(record["r"].get<double>(), WithinAbs(0.367879, 5e-7));
  CHECK(record["consistent"].get<bool>());
}

TEST_CASE("test command: JSON round-trips to the library triple", "[cli]") {
  const Inputs in;
  const Run r = run("test " + in.flags() + " --var invchisq:nu=5");
  REQUIRE(r.code == 0);
  const auto record = nlohmann::json::parse(r.out);
  const LinearHypothesis h(Eigen::MatrixXd::Identity(2, 2), Eigen::VectorXd::Zero(2));
  const auto expected = linear_triple(h, {1.0, 1.0}, radius_law(2, InvChiSquaredPrior{5}));
  CHECK(record["q"].get<double>() == expected.q());
  CHECK(record["q"].get<double>() == specfun::f_cdf(2, 5, 2.0 / 0.4));
  CHECK(record["r"].get<double>() == expected.r());
}

TEST_CASE("test command: text format", "[cli]") {
  const Inputs in;
  const Run r = run("test " + in.flags() + " --format text");
  REQUIRE(r.code == 0);
  CHECK_THAT(r.out, ContainsSubstring("q           0.6321"));
  CHECK_THAT(r.out, ContainsSubstring("consistent  true"));
}

TEST_CASE("test command: error exits", "[cli]") {
  const Inputs in;
  const std::string short_rhs = write("a1.csv", "0\n");
  Run r = run("test --y " + in.y + " --contrast " + in.c + " --rhs " + short_rhs);
  CHECK(r.code == 2);
  CHECK_THAT(r.err, ContainsSubstring("a1.csv:"));

  const std::string wide = write("c3.csv", "1,0,0\n");
  r = run("test --y " + in.y + " --contrast " + wide + " --rhs " + short_rhs);
  CHECK(r.code == 2);
  CHECK_THAT(r.err, ContainsSubstring("c3.csv:1:"));

  const std::string garbled = write("ybad.csv", "1\nx\n");
  r = run("test --y " + garbled + " --contrast " + in.c + " --rhs " + in.a);
  CHECK(r.code == 2);
  CHECK_THAT(r.err, ContainsSubstring("ybad.csv:2:"));

  r = run("test " + in.flags() + " --side le");
  CHECK(r.code == 3);

  r = run("test " + in.flags() + " --var known:s2=-1");
  CHECK(r.code == 2);

  r = run("test " + in.flags() + " --out " + (scratch() / "no" / "such" / "dir" / "x.json").string());
  CHECK(r.code == 4);
}

TEST_CASE("tables command", "[cli]") {
  Run r = run("tables 1");
  REQUIRE(r.code == 0);
  CHECK_THAT(r.out, ContainsSubstring("k=5: 1.49 2.58 3.33\n"));
  CHECK(r.out == render_table(1));

  r = run("tables 2");
  REQUIRE(r.code == 0);
  CHECK_THAT(r.out, ContainsSubstring("k=10, \xCE\xB1=0.05: 0.36 0.00 0.64\n"));
  CHECK_THAT(r.out, ContainsSubstring("k=100, \xCE\xB1=0.2: 0.00 0.00 1.00\n"));

  CHECK(run("tables 3").code == 2);
}

TEST_CASE("region and rect commands", "[cli]") {
  const Inputs in;
  Run r = run("region --y " + in.y + " --alpha 0.05");
  REQUIRE(r.code == 0);
  auto record = nlohmann::json::parse(r.out);
  CHECK_THAT(record["threshold"].get<double>(), WithinAbs(-2.0 * std::log(0.05), 1e-9));
  CHECK_THAT(record["p"].get<double>(), WithinAbs(0.95, 1e-12));
  CHECK(record["r"].get<double>() == 0.0);

  r = run("rect --y " + in.y + " --alpha 0.05");
  REQUIRE(r.code == 0);
  record = nlohmann::json::parse(r.out);
  CHECK_THAT(record["p"].get<double>(), WithinAbs(0.9189, 5e-5));
  CHECK_THAT(record["bonferroni"].get<double>(), WithinAbs(2.2414, 5e-5));

  // the Bonferroni default needs s; with a prior an explicit width is required
  CHECK(run("rect --y " + in.y + " --var invchisq:nu=5").code == 2);
  CHECK(run("rect --y " + in.y + " --var invchisq:nu=5 --halfwidth 1.5").code == 0);
}

TEST_CASE("calibrate command", "[cli]") {
  const fs::path first = scratch() / "cal1";
  const fs::path second = scratch() / "cal2";
  Run r = run("calibrate --k 100 --reps 5000 --seed 7 --out " + first.string());
  REQUIRE(r.code == 0);
  std::istringstream summary(slurp(first / "summary.csv"));
  std::string line;
  std::getline(summary, line);
  CHECK(line == "metric,alpha,value");
  std::getline(summary, line);
  REQUIRE(line.starts_with("ks_uniform,,"));
  CHECK(std::stod(line.substr(12)) < 0.05);

  const std::string ecdf = slurp(first / "ecdf.csv");
  CHECK(std::count(ecdf.begin(), ecdf.end(), '\n') == 5001);

  r = run("calibrate --k 100 --reps 5000 --seed 7 --out " + second.string());
  REQUIRE(r.code == 0);
  CHECK(slurp(second / "ecdf.csv") == ecdf);
  CHECK(slurp(second / "summary.csv") == slurp(first / "summary.csv"));

  const std::string blocker = write("blocker", "x");
  CHECK(run("calibrate --k 3 --reps 10 --out " + blocker + "/sub").code == 4);
  CHECK(run("calibrate --k 1 --reps 10 --out " + (scratch() / "cal3").string()).code == 2);
}

TEST_CASE("oracle command", "[cli]") {
  const Inputs in;
  const Run r = run("oracle " + in.flags() + " --reps 20000 --seed 3");
  REQUIRE(r.code == 0);
  const auto record = nlohmann::json::parse(r.out);
  CHECK(record["n"].get<int>() == 20000);
  for (const char* key : {"p", "q", "r"}) {
    CHECK_THAT(record["mc"][key].get<double>(), WithinAbs(record["closed"][key].get<double>(), 0.015));
  }
  CHECK(run("oracle " + in.flags() + " --reps 20000 --seed 3").out == r.out);
}
