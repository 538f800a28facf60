// ptc: command-line front end (solve, validate, generate, export-lp, bench).
#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "ptc/bench.hpp"
#include "ptc/generator.hpp"
#include "ptc/ilp_export.hpp"
#include "ptc/search.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kInfeasible = 2;
constexpr int kInternal = 3;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!text.empty() && text.back() != '\n') out << '\n';
  if (!out) throw UsageError("cannot write " + path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Scheduling with qualification time constraints"};
  app.require_subcommand(1);

  // solve
  auto* solveCmd = app.add_subcommand("solve", "Solve an instance");
  std::string instancePath, solverName = "bnb", objectiveName = "lex-disq";
  std::string warmStart, outPath;
  double timeLimit = ptc::kShortTimeLimit;
  std::uint64_t seed = 0;
  solveCmd->add_option("--instance", instancePath, "Instance JSON")->required();
  solveCmd->add_option("--solver", solverName, "bnb|sch|qch|oracle")
      ->check(CLI::IsMember({"bnb", "sch", "qch", "oracle"}));
  solveCmd->add_option("--objective", objectiveName, "lex-disq|wsum-flow|wsum-disq|flow")
      ->check(CLI::IsMember({"lex-disq", "wsum-flow", "wsum-disq", "flow"}));
  solveCmd->add_option("--time-limit", timeLimit, "Seconds (bnb only)");
  solveCmd->add_option("--warm-start", warmStart, "Feasible schedule JSON (bnb only)");
  solveCmd->add_option("--out", outPath, "Result file (default stdout)");
  solveCmd->add_option("--seed", seed, "Tie-break seed (bnb only)");

  // validate
  auto* validateCmd = app.add_subcommand("validate", "Check and evaluate a schedule");
  std::string schedulePath;
  validateCmd->add_option("--instance", instancePath, "Instance JSON")->required();
  validateCmd->add_option("--schedule", schedulePath, "Schedule JSON")->required();
  validateCmd->add_option("--objective", objectiveName, "Objective used for the report")
      ->check(CLI::IsMember({"lex-disq", "wsum-flow", "wsum-disq", "flow"}));
  validateCmd->add_option("--out", outPath, "Report file (default stdout)");

  // generate
  auto* generateCmd = app.add_subcommand("generate", "Generate random instances");
  int genN = 20, genM = 3, genF = 4, count = 10;
  std::string className = "mixed", outDir = ".";
  bool table1 = false;
  generateCmd->add_option("--n", genN, "Jobs");
  generateCmd->add_option("--m", genM, "Machines");
  generateCmd->add_option("--f", genF, "Families");
  generateCmd->add_option("--class", className, "small|medium|large|mixed")
      ->check(CLI::IsMember({"small", "medium", "large", "mixed"}));
  generateCmd->add_option("--count", count, "Instances per class")->check(CLI::PositiveNumber);
  generateCmd->add_option("--seed", seed, "Base seed");
  generateCmd->add_option("--out-dir", outDir, "Output directory");
  generateCmd->add_flag("--table1", table1, "All 19 benchmark shapes, mixed classes");

  // export-lp
  auto* exportCmd = app.add_subcommand("export-lp", "Write the time-indexed ILP in LP format");
  std::string betaName = "flow";
  ptc::Time maxHorizon = ptc::IlpLimits{}.maxHorizon;
  exportCmd->add_option("--instance", instancePath, "Instance JSON")->required();
  exportCmd->add_option("--beta", betaName, "flow (beta=1) or disq (beta=N*T)")
      ->check(CLI::IsMember({"flow", "disq"}));
  exportCmd->add_option("--out", outPath, "LP file (default stdout)");
  exportCmd->add_option("--max-horizon", maxHorizon, "Refuse instances with a larger T");

  // bench
  auto* benchCmd = app.add_subcommand("bench", "Run solvers over a directory of instances");
  std::string dir, format = "md";
  std::vector<std::string> solverNames{"bnb"};
  unsigned threads = 0;
  benchCmd->add_option("--dir", dir, "Instance directory")->required();
  benchCmd->add_option("--solvers", solverNames, "Solvers to compare")
      ->delimiter(',')
      ->check(CLI::IsMember({"bnb", "sch", "qch", "oracle"}));
  benchCmd->add_option("--objective", objectiveName, "lex-disq|wsum-flow|wsum-disq|flow")
      ->check(CLI::IsMember({"lex-disq", "wsum-flow", "wsum-disq", "flow"}));
  benchCmd->add_option("--time-limit", timeLimit, "Seconds per solve");
  benchCmd->add_option("--threads", threads, "Workers (0 = all cores)");
  benchCmd->add_option("--seed", seed, "Tie-break seed");
  benchCmd->add_option("--format", format, "csv|md|json")
      ->check(CLI::IsMember({"csv", "md", "json"}));
  benchCmd->add_option("--out", outPath, "Report file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }

  try {
    if (*solveCmd) {
      const ptc::Instance inst = ptc::load_instance(instancePath);
      const ptc::ObjectiveSpec spec =
          ptc::spec_for(ptc::parse_objective_choice(objectiveName), inst);
      const ptc::SolverKind kind = ptc::parse_solver_kind(solverName);
      ptc::SolveResult res;
      if (kind == ptc::SolverKind::BranchAndBound) {
        ptc::SearchConfig cfg;
        cfg.timeLimitSeconds = timeLimit;
        cfg.seed = seed;
        if (!warmStart.empty()) cfg.warmStart = ptc::load_schedule(warmStart);
        res = ptc::solve(inst, spec, cfg);
      } else {
        res = ptc::run_solver(kind, inst, spec, timeLimit, seed);
      }
      emit(ptc::render_result(res, spec), outPath);
      return res.status == ptc::SolveStatus::Infeasible ? kInfeasible : kOk;
    }
    if (*validateCmd) {
      const ptc::Instance inst = ptc::load_instance(instancePath);
      const ptc::Schedule sched = ptc::load_schedule(schedulePath);
      const ptc::ObjectiveSpec spec =
          ptc::spec_for(ptc::parse_objective_choice(objectiveName), inst);
      emit(ptc::render_evaluation(inst, sched, spec), outPath);
      return ptc::is_feasible(inst, sched) ? kOk : kInfeasible;
    }
    if (*generateCmd) {
      std::vector<ptc::GeneratedInstance> set;
      auto add = [&](std::vector<ptc::GeneratedInstance> part) {
        std::move(part.begin(), part.end(), std::back_inserter(set));
      };
      if (table1) {
        for (const ptc::SetShape& s : ptc::table1_presets())
          add(ptc::generate_set(s, seed, count));
      } else if (className == "mixed") {
        add(ptc::generate_set({genN, genM, genF}, seed, count));
      } else {
        add(ptc::generate_class(
            {genN, genM, genF, ptc::parse_threshold_class(className), seed}, count));
      }
      const auto paths = ptc::write_instances(set, outDir);
      std::cerr << "wrote " << paths.size() << " instances to " << outDir << '\n';
      return kOk;
    }
    if (*exportCmd) {
      const ptc::Instance inst = ptc::load_instance(instancePath);
      const ptc::ObjectiveSpec spec = betaName == "disq"
                                          ? ptc::ObjectiveSpec::weightedDisqPriority(inst)
                                          : ptc::ObjectiveSpec::weightedFlowPriority();
      emit(ptc::export_ip3(inst, spec, {maxHorizon}), outPath);
      return kOk;
    }
    if (*benchCmd) {
      ptc::BenchOptions opts;
      opts.solvers.clear();
      for (const std::string& s : solverNames) opts.solvers.push_back(ptc::parse_solver_kind(s));
      opts.objective = ptc::parse_objective_choice(objectiveName);
      opts.timeLimitSeconds = timeLimit;
      opts.threads = threads;
      opts.seed = seed;
      if (!std::filesystem::is_directory(dir)) throw UsageError("not a directory: " + dir);
      const ptc::BenchReport rep = ptc::run_benchmark_dir(dir, opts);
      for (const std::string& w : rep.warnings) std::cerr << "warning: " << w << '\n';
      const std::string text = format == "csv"    ? rep.to_csv()
                               : format == "json" ? rep.to_json()
                                                  : rep.to_markdown();
      emit(text, outPath);
      return kOk;
    }
  } catch (const ptc::InstanceError& e) {
    std::cerr << "invalid instance";
    if (!e.path().empty()) std::cerr << " at " << e.path();
    std::cerr << ": " << e.what() << '\n';
    return kUsage;
  } catch (const ptc::ScheduleError& e) {
    std::cerr << "invalid schedule: " << e.what() << '\n';
    return kUsage;
  } catch (const ptc::IlpTooLarge& e) {
    std::cerr << "refused: " << e.what() << '\n';
    return kUsage;
  } catch (const UsageError& e) {
    std::cerr << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternal;
  }
  return kUsage;
}
