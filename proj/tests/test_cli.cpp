#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "bumg/cli.hpp"
#include "test_support.hpp"

using bumg::testing::problem_path;

namespace {

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun run(std::vector<std::string> args) {
  args.insert(args.begin(), "bumg");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  int code = bumg::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("bumg_cli_" + name)).string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Cli, SolveSatisfiable) {
  CliRun r = run({"solve", problem_path("dl_example.p"), "--block", "ud"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("% SZS status Satisfiable for dl_example\n", 0), 0u);
  EXPECT_NE(r.out.find("domain: "), std::string::npos);
}

TEST(Cli, SolveUnsatisfiable) {
  CliRun r = run({"solve", problem_path("unsat_toy.p")});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("SZS status Unsatisfiable"), std::string::npos);
}

TEST(Cli, ResourceLimitExitCode) {
  CliRun r = run({"solve", problem_path("loop.p"), "--max-steps", "200"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("SZS status GaveUp"), std::string::npos);
}

TEST(Cli, ModelFileChecksAgainstProblem) {
  std::string model = temp_path("dl.model");
  CliRun r = run({"solve", problem_path("dl_example.p"), "--block", "sp", "--model-out", model});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out.find("model."), std::string::npos);
  CliRun c = run({"check-model", model, problem_path("dl_example.p")});
  EXPECT_EQ(c.code, 0) << c.out << c.err;

  // The same model does not satisfy a problem with an extra constraint.
  std::string harder = temp_path("harder.p");
  std::ofstream(harder) << slurp(problem_path("dl_example.p")) << "cnf(x, axiom, ~q(X)).\n";
  CliRun d = run({"check-model", model, harder});
  EXPECT_EQ(d.code, 1);
}

TEST(Cli, TraceFile) {
  std::string trace = temp_path("trace.txt");
  CliRun r = run({"solve", problem_path("dl_example.p"), "--block", "ud", "--trace", trace});
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(slurp(trace).find("EVENT kind=assert-eq"), std::string::npos);
}

TEST(Cli, TransformWritesClausesAndReport) {
  std::string report = temp_path("report.csv");
  CliRun r = run({"transform", problem_path("running_example.p"), "--report", report});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 15);
  std::string csv = slurp(report);
  EXPECT_EQ(csv.rfind("input_clauses,output_clauses,", 0), 0u);

  CliRun s = run({"transform", problem_path("running_example.p"), "--rr", "none"});
  EXPECT_EQ(std::count(s.out.begin(), s.out.end(), '\n'), 1);
  EXPECT_NE(s.err.find("input_clauses"), std::string::npos);
}

TEST(Cli, BenchCsvIsProblemMajor) {
  std::string csv = temp_path("bench.csv");
  CliRun r = run({"bench", BUMG_PROBLEMS_DIR, "--configs", "rr.blud,crr.blsd", "--csv", csv, "--max-steps", "2000"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream in(slurp(csv));
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "problem,pipeline,status,ms,rules,splits,domain");
  std::vector<std::string> rows;
  while (std::getline(in, line)) rows.push_back(line);
  ASSERT_EQ(rows.size() % 2, 0u);
  EXPECT_EQ(rows[0].rfind("blsp_example,rr.blud,", 0), 0u);
  EXPECT_EQ(rows[1].rfind("blsp_example,crr.blsd,", 0), 0u);
  EXPECT_NE(r.out.find("rr.blud"), std::string::npos);

  std::string csv4 = temp_path("bench4.csv");
  run({"bench", BUMG_PROBLEMS_DIR, "--configs", "rr.blud,crr.blsd", "--csv", csv4, "--max-steps", "2000", "--workers",
       "4"});
  auto strip_ms = [](const std::string& text) {
    std::istringstream s(text);
    std::string l, out;
    while (std::getline(s, l)) {
      auto a = l.find(',', l.find(',', l.find(',') + 1) + 1);
      auto b = l.find(',', a + 1);
      out += l.substr(0, a) + l.substr(b) + "\n";
    }
    return out;
  };
  EXPECT_EQ(strip_ms(slurp(csv)), strip_ms(slurp(csv4)));
}

TEST(Cli, Errors) {
  EXPECT_EQ(run({"solve", "/nonexistent.p"}).code, 1);
  EXPECT_EQ(run({"solve", problem_path("dl_example.p"), "--block", "xx"}).code, 1);
  EXPECT_EQ(run({"--help"}).code, 0);

  std::string bad = temp_path("bad.p");
  std::ofstream(bad) << "cnf(c, axiom, p(a) |).\n";
  CliRun r = run({"solve", bad});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("parse error at 1:"), std::string::npos);

  CliRun blocked = run({"solve", problem_path("dl_example.p"), "--rr", "none", "--block", "ud"});
  EXPECT_EQ(blocked.code, 1);
}
