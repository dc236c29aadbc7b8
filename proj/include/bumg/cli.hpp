#pragma once

// Command-line driver: solve, transform, bench and check-model subcommands.
// Exit codes: 0 decided (or check passed), 2 resource limit, 1 error.

#include <iosfwd>
#include <string>
#include <vector>

#include "bumg/engine.hpp"
#include "bumg/transform.hpp"

namespace bumg::cli {

struct BenchRow {
  std::string problem;
  std::string pipeline;
  std::string status;  // an SZS status name or Error
  double ms = 0;
  std::size_t rules = 0;
  std::size_t splits = 0;
  std::size_t domain = 0;  // only meaningful when Satisfiable
  std::string error;
};

std::string bench_header();
std::string bench_csv(const BenchRow& row);
bool solved(const BenchRow& row);

/// Runs every (problem file, config) cell; rows come back in problem-major
/// order regardless of the worker count. When `model_dir` is set, models of
/// satisfiable cells are written there as <problem>.<pipeline>.model.
std::vector<BenchRow> run_bench(const std::vector<std::string>& files, const std::vector<PipelineConfig>& configs,
                                const Strategy& limits, unsigned workers, const std::string& model_dir = {});

/// Solves one problem end to end and checks SAT answers against the
/// untransformed clauses as well.
SolveResult solve_problem(const Problem& p, const PipelineConfig& cfg, const Strategy& strategy);

int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace bumg::cli
