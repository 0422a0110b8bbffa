#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "support/fixtures.hpp"

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome cli(std::vector<std::string> args, const std::string& input = "") {
  args.insert(args.begin(), "lp01");
  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::istringstream in(input);
  std::ostringstream out, err;
  const int code = lp01::cli::main(static_cast<int>(argv.size()), argv.data(), in, out, err);
  return {code, out.str(), err.str()};
}

const std::string kEmp = std::string(LP01_SOURCE_DIR) + "/programs/emp.lp01";
const std::string kLoop = std::string(LP01_SOURCE_DIR) + "/programs/loop.lp01";

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("check") {
    const Outcome r = cli({"check", kEmp});
    CHECK(r.code == 0);
    CHECK(r.out == "ok: 7 clauses\n");
  }

  TEST_CASE("check reports where the error is") {
    const std::string path = "cli_bad.lp01";
    std::ofstream(path) << "emp(tom) := tt.\nemp(pete) := & .\n";
    const Outcome r = cli({"check", path});
    CHECK(r.code == 2);
    CHECK(r.err.find("cli_bad.lp01:2:14:") == 0);
    std::remove(path.c_str());
    CHECK(cli({"check", "does-not-exist.lp01"}).code == 2);
  }

  TEST_CASE("run with a script") {
    Outcome r = cli({"run", kEmp, "--goal", lp01::testing::kWifeGoal, "--script", "pete"});
    CHECK(r.code == 0);
    CHECK(r.out == "y = ann\nsuccess\n");
    r = cli({"run", kEmp, "--goal", lp01::testing::kWifeGoal, "--script", "tom"});
    CHECK(r.out == "y = mary\nsuccess\n");
    r = cli({"run", kEmp, "--goal", lp01::testing::kWifeGoal, "--script", "john"});
    CHECK(r.code == 0);
    CHECK(r.out == "vacuous success: emp(john) does not hold\n");
    r = cli({"run", kEmp, "--goal", lp01::testing::kBlindGoal});
    CHECK(r.code == 0);
    CHECK(r.out == "y = bob\nsuccess\n");
    CHECK(r.err.empty());
  }

  TEST_CASE("script problems abort") {
    CHECK(cli({"run", kEmp, "--goal", lp01::testing::kWifeGoal, "--script", "pete,tom"}).code == 4);
    CHECK(cli({"run", kEmp, "--goal", lp01::testing::kWifeGoal, "--script", "Pete"}).code == 4);
    CHECK(cli({"run", kEmp, "--goal", lp01::testing::kWifeGoal}, "").code == 4);
  }

  TEST_CASE("script file") {
    const std::string path = "cli_answers.txt";
    std::ofstream(path) << "pete\n";
    const Outcome r = cli({"run", kEmp, "--goal", lp01::testing::kWifeGoal, "--script-file", path});
    CHECK(r.code == 0);
    CHECK(r.out == "y = ann\nsuccess\n");
    std::remove(path.c_str());
  }

  TEST_CASE("interactive and scripted runs print the same") {
    const Outcome scripted = cli({"run", kEmp, "--goal", lp01::testing::kWifeGoal, "--script", "pete"});
    const Outcome typed = cli({"run", kEmp, "--goal", lp01::testing::kWifeGoal}, "Pete\n  pete \n");
    CHECK(typed.code == scripted.code);
    CHECK(typed.out == scripted.out);
    CHECK(typed.err.find("choose a value for x") != std::string::npos);
    CHECK(typed.err.find("'Pete' is not a constant") != std::string::npos);
  }

  TEST_CASE("prove exit codes") {
    CHECK(cli({"prove", kEmp, "--goal", "ff"}).code == 1);
    const Outcome loop = cli({"prove", kLoop, "--goal", "p", "--max-steps", "1000"});
    CHECK(loop.code == 3);
    CHECK(cli({"prove", kEmp, "--goal", "wife(x,Y)"}).code == 2);
    CHECK(cli({"prove", kEmp}).code == 2);
    CHECK(cli({}).code == 2);
    CHECK(cli({"frobnicate"}).code == 2);
    CHECK(cli({"prove", kEmp, "--goal", "exists y. wife(pete,y)", "--no-occurs-check"}).code == 0);
  }

  TEST_CASE("prove writes a tree that validate accepts") {
    const std::string path = "cli_tree.json";
    Outcome r = cli({"prove", kEmp, "--goal", lp01::testing::kWifeGoal, "--tree", path, "--listing"});
    CHECK(r.code == 0);
    CHECK(r.out.find("proved: 9 nodes\n") == 0);
    CHECK(r.out.find("4::1::nil % defL") != std::string::npos);
    r = cli({"validate", kEmp, path});
    CHECK(r.code == 0);
    CHECK(r.out == "valid: 9 nodes\n");
    r = cli({"validate", kLoop, path});
    CHECK(r.code == 2);
    CHECK(r.err.find("different program") != std::string::npos);
    std::ofstream(path) << "{}";
    CHECK(cli({"validate", kEmp, path}).code == 2);
    std::remove(path.c_str());
  }

  TEST_CASE("help") {
    const Outcome r = cli({"--help"});
    CHECK(r.code == 0);
    CHECK(r.out.find("prove") != std::string::npos);
  }
}
