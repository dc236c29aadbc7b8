#include "bumg/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <thread>

namespace bumg::cli {

namespace fs = std::filesystem;

namespace {

constexpr int kExitDecided = 0;
constexpr int kExitError = 1;
constexpr int kExitResource = 2;

struct PipelineFlags {
  std::string rr = "new";
  bool shift = false;
  std::string block = "none";
  std::string constant = "reuse";

  PipelineConfig config() const {
    PipelineConfig cfg;
    cfg.rr = rr == "classical" ? RangeRestriction::Classical
             : rr == "none"    ? RangeRestriction::None
                               : RangeRestriction::New;
    cfg.shift = shift;
    static const std::map<std::string, Blocking> blocks{{"none", Blocking::None},
                                                        {"sd", Blocking::SubtermDomain},
                                                        {"sp", Blocking::SubtermPredicate},
                                                        {"ud", Blocking::UnrestrictedDomain},
                                                        {"up", Blocking::UnrestrictedPredicate}};
    cfg.blocking = blocks.at(block);
    cfg.constant_policy = constant == "fresh" ? ConstantPolicy::AlwaysFresh : ConstantPolicy::ReuseFirst;
    cfg.validate();
    return cfg;
  }
};

struct LimitFlags {
  std::size_t max_steps = 100000;
  std::size_t max_depth = 10000;
  double timeout = 60;

  Strategy strategy() const {
    Strategy s;
    s.max_rules = max_steps;
    s.max_depth = max_depth;
    s.timeout = std::chrono::milliseconds(static_cast<long long>(timeout * 1000));
    return s;
  }
};

void add_pipeline_flags(CLI::App* cmd, PipelineFlags& f) {
  cmd->add_option("--rr", f.rr, "Range restriction")->check(CLI::IsMember({"new", "classical", "none"}));
  cmd->add_flag("--shift", f.shift, "Apply shifting (partial flattening, then basic shifting) first");
  cmd->add_option("--block", f.block, "Blocking transformation")->check(CLI::IsMember({"none", "sd", "sp", "ud", "up"}));
  cmd->add_option("--const", f.constant, "Constant for dom(c): reuse the first input constant or a fresh one")
      ->check(CLI::IsMember({"reuse", "fresh"}));
}

void add_limit_flags(CLI::App* cmd, LimitFlags& f) {
  cmd->add_option("--max-steps", f.max_steps, "Maximum rule applications")->check(CLI::PositiveNumber);
  cmd->add_option("--max-depth", f.max_depth, "Maximum split depth")->check(CLI::PositiveNumber);
  cmd->add_option("--timeout", f.timeout, "Wall-clock limit in seconds")->check(CLI::PositiveNumber);
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << text;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int exit_code(SzsStatus s) {
  return s == SzsStatus::Satisfiable || s == SzsStatus::Unsatisfiable ? kExitDecided : kExitResource;
}

std::string format_ms(double ms) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(1) << ms;
  return out.str();
}

}  // namespace

SolveResult solve_problem(const Problem& p, const PipelineConfig& cfg, const Strategy& strategy) {
  auto transformed = apply_pipeline(p, cfg);
  SolveResult res = saturate(transformed.problem, strategy);
  if (res.status == SzsStatus::Satisfiable && res.model) {
    if (auto bad = check_model(*res.model, p.clauses)) {
      res.status = SzsStatus::GaveUp;
      res.reason = "model fails on the input clauses: " + *bad;
      res.model.reset();
    }
  }
  return res;
}

// ---------------------------------------------------------------------------
// Bench

std::string bench_header() { return "problem,pipeline,status,ms,rules,splits,domain"; }

std::string bench_csv(const BenchRow& r) {
  std::ostringstream out;
  out << r.problem << ',' << r.pipeline << ',' << r.status << ',' << format_ms(r.ms) << ',' << r.rules << ','
      << r.splits << ',';
  if (r.status == "Satisfiable") out << r.domain;
  return out.str();
}

bool solved(const BenchRow& r) { return r.status == "Satisfiable" || r.status == "Unsatisfiable"; }

std::vector<BenchRow> run_bench(const std::vector<std::string>& files, const std::vector<PipelineConfig>& configs,
                                const Strategy& limits, unsigned workers, const std::string& model_dir) {
  std::vector<BenchRow> rows(files.size() * configs.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < rows.size(); i = next++) {
      const std::string& file = files[i / configs.size()];
      const PipelineConfig& cfg = configs[i % configs.size()];
      BenchRow& row = rows[i];
      row.problem = fs::path(file).stem().string();
      row.pipeline = cfg.label();
      try {
        Problem p = parse_file(file);
        SolveResult res = solve_problem(p, cfg, limits);
        row.status = to_string(res.status);
        row.ms = res.stats.ms;
        row.rules = res.stats.rules;
        row.splits = res.stats.splits;
        if (res.model) {
          row.domain = res.model->domain.size();
          if (!model_dir.empty())
            write_file((fs::path(model_dir) / (row.problem + "." + row.pipeline + ".model")).string(),
                       print_model(*res.model));
        }
        if (!res.reason.empty()) row.error = res.reason;
      } catch (const std::exception& e) {
        row.status = "Error";
        row.error = e.what();
      }
    }
  };
  workers = std::max(1u, workers);
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Entry point

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bottom-up model generation with range restriction, shifting and blocking", "bumg"};
  app.require_subcommand(1);

  // solve
  auto* solve = app.add_subcommand("solve", "Transform and saturate a TPTP CNF problem");
  std::string solve_file, model_out, trace_path;
  PipelineFlags solve_pipe;
  LimitFlags solve_limits;
  solve->add_option("file", solve_file, "Problem file")->required()->check(CLI::ExistingFile);
  add_pipeline_flags(solve, solve_pipe);
  add_limit_flags(solve, solve_limits);
  solve->add_option("--model-out", model_out, "Write the model here when satisfiable");
  solve->add_option("--trace", trace_path, "Write derivation events here");

  // transform
  auto* transform = app.add_subcommand("transform", "Apply a transformation pipeline and print the clauses");
  std::string transform_file, transform_out, report_out;
  PipelineFlags transform_pipe;
  transform->add_option("file", transform_file, "Problem file")->required()->check(CLI::ExistingFile);
  add_pipeline_flags(transform, transform_pipe);
  transform->add_option("-o,--output", transform_out, "Output file (default: standard output)");
  transform->add_option("--report", report_out, "Write the size report as CSV (default: standard error)");

  // bench
  auto* bench = app.add_subcommand("bench", "Run pipeline configurations over a directory of problems");
  std::string bench_dir, csv_out, model_dir;
  std::vector<std::string> labels;
  unsigned workers = 1;
  LimitFlags bench_limits;
  bench->add_option("dir", bench_dir, "Directory of .p files")->required()->check(CLI::ExistingDirectory);
  bench->add_option("--configs", labels, "Pipeline labels such as rr,rr.blud (default: all 20)")->delimiter(',');
  bench->add_option("--csv", csv_out, "CSV output file (default: standard output)");
  bench->add_option("--models", model_dir, "Directory for models of satisfiable runs");
  bench->add_option("--workers", workers, "Parallel workers")->check(CLI::PositiveNumber);
  add_limit_flags(bench, bench_limits);

  // check-model
  auto* check = app.add_subcommand("check-model", "Check a model file against a problem");
  std::string check_model_file, check_problem_file;
  check->add_option("model", check_model_file, "Model file")->required()->check(CLI::ExistingFile);
  check->add_option("problem", check_problem_file, "Problem file")->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // --help exits 0; every usage error maps onto the generic error code.
    return app.exit(e, out, err) == 0 ? kExitDecided : kExitError;
  }

  try {
    if (*solve) {
      Problem p = parse_file(solve_file);
      Strategy strategy = solve_limits.strategy();
      std::ofstream trace;
      if (!trace_path.empty()) {
        trace.open(trace_path);
        if (!trace) throw Error("cannot write " + trace_path);
        strategy.trace = &trace;
      }
      SolveResult res = solve_problem(p, solve_pipe.config(), strategy);
      out << print_szs(res.status, p.name) << '\n';
      out << "% rules=" << res.stats.rules << " splits=" << res.stats.splits << " branches=" << res.stats.branches
          << " merges=" << res.stats.merges << " ms=" << format_ms(res.stats.ms) << '\n';
      if (!res.reason.empty()) err << "bumg: " << res.reason << '\n';
      if (res.model) {
        if (!model_out.empty()) write_file(model_out, print_model(*res.model));
        else out << print_model(*res.model);
      }
      return exit_code(res.status);
    }

    if (*transform) {
      Problem p = parse_file(transform_file);
      auto result = apply_pipeline(p, transform_pipe.config());
      std::string text = print_clauses(result.problem);
      if (transform_out.empty()) out << text;
      else write_file(transform_out, text);
      std::string csv = TransformReport::csv_header() + "\n" + result.report.csv_row() + "\n";
      if (report_out.empty()) err << csv;
      else write_file(report_out, csv);
      return kExitDecided;
    }

    if (*bench) {
      std::vector<std::string> files;
      for (const auto& entry : fs::directory_iterator(bench_dir))
        if (entry.is_regular_file() && entry.path().extension() == ".p") files.push_back(entry.path().string());
      std::sort(files.begin(), files.end());
      std::vector<PipelineConfig> configs;
      if (labels.empty()) configs = PipelineConfig::all();
      for (const auto& l : labels) configs.push_back(PipelineConfig::from_label(l));
      if (!model_dir.empty()) fs::create_directories(model_dir);

      auto rows = run_bench(files, configs, bench_limits.strategy(), workers, model_dir);

      std::ostringstream csv;
      csv << bench_header() << '\n';
      for (const auto& r : rows) {
        csv << bench_csv(r) << '\n';
        if (r.status == "Error") err << "bumg: " << r.problem << " " << r.pipeline << ": " << r.error << '\n';
      }
      if (csv_out.empty()) out << csv.str();
      else write_file(csv_out, csv.str());

      out << "% solved per pipeline (" << files.size() << " problems)\n";
      for (const auto& cfg : configs) {
        std::size_t n = std::count_if(rows.begin(), rows.end(),
                                      [&](const BenchRow& r) { return r.pipeline == cfg.label() && solved(r); });
        out << "% " << std::left << std::setw(12) << cfg.label() << ' ' << n << '\n';
      }
      return kExitDecided;
    }

    if (*check) {
      ModelDocument m = parse_model(read_file(check_model_file));
      Problem p = parse_file(check_problem_file);
      if (auto bad = check_model(m, p.clauses)) {
        out << "model does not satisfy " << p.name << ": " << *bad << '\n';
        return kExitError;
      }
      out << "model satisfies all " << p.clauses.size() << " clauses of " << p.name << '\n';
      return kExitDecided;
    }
  } catch (const ParseError& e) {
    err << "bumg: parse error at " << e.line() << ":" << e.column() << ": " << e.what() << '\n';
    return kExitError;
  } catch (const std::exception& e) {
    err << "bumg: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}

}  // namespace bumg::cli
