#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ptc/instance.hpp"
#include "ptc/oracle.hpp"
#include "ptc/schedule.hpp"
#include "ptc/solve_result.hpp"

namespace ptc {

enum class SolverKind { BranchAndBound, SchedulingCentric, QualificationCentric, Oracle };

std::string to_string(SolverKind kind);          // bnb, sch, qch, oracle
SolverKind parse_solver_kind(std::string_view text);

// Objective names used on the command line. The weighted variants take
// beta = 1 (flow priority) or beta = N*T (disqualification priority).
enum class ObjectiveChoice { LexDisq, WsumFlow, WsumDisq, Flow };

std::string to_string(ObjectiveChoice choice);   // lex-disq, wsum-flow, ...
ObjectiveChoice parse_objective_choice(std::string_view text);
ObjectiveSpec spec_for(ObjectiveChoice choice, const Instance& inst);

// One solve. The deadline only applies to the exact search; heuristics and
// the oracle ignore it (the oracle is bounded by its state limits).
SolveResult run_solver(SolverKind kind, const Instance& inst,
                       const ObjectiveSpec& spec, double timeLimitSeconds,
                       std::uint64_t seed = 0,
                       const OracleLimits& oracleLimits = {});

struct BenchOptions {
  std::vector<SolverKind> solvers{SolverKind::BranchAndBound};
  ObjectiveChoice objective = ObjectiveChoice::LexDisq;
  double timeLimitSeconds = 30.0;
  double grace = 0.05;   // runs over limit * (1 + grace) count as unsolved
  unsigned threads = 0;  // 0 = hardware concurrency
  std::uint64_t seed = 0;
  OracleLimits oracleLimits;
};

struct BenchRecord {
  std::string instance;  // file stem
  std::string group;     // N{n}_M{m}_F{f}
  SolverKind solver = SolverKind::BranchAndBound;
  SolveStatus status = SolveStatus::Unknown;
  bool solved = false;   // feasible schedule, re-validated, within the grace
  bool optimal = false;  // proven optimal
  bool consistent = true;  // reported objective == re-evaluated objective
  std::optional<ObjectiveValue> objective;
  double seconds = 0.0;
  std::string note;
};

struct BenchRow {
  SolverKind solver = SolverKind::BranchAndBound;
  std::string group;
  int instances = 0;
  int solvedCount = 0;
  double pctSol = 0.0;
  double pctOpt = 0.0;
  double pctVbs = 0.0;
  std::optional<double> avgDisq;  // over solved instances
  std::optional<double> avgObj;   // flow + disq, over solved instances
  double avgTime = 0.0;
};

struct BenchReport {
  ObjectiveChoice objective = ObjectiveChoice::LexDisq;
  double timeLimitSeconds = 0.0;
  std::vector<BenchRecord> records;
  std::vector<BenchRow> rows;  // ordered by (group, solver order)
  std::vector<std::string> warnings;

  // Share of runs with a schedule whose reported objective matched the
  // re-evaluated one (1.0 when nothing was solved).
  double consistency() const;

  std::string to_csv() const;
  std::string to_markdown() const;
  std::string to_json() const;
};

// Aggregates records into rows. %vbs is computed among the solvers present
// in `records` only.
BenchReport summarize(std::vector<BenchRecord> records, const BenchOptions& opts);

BenchReport run_benchmark(const std::vector<std::filesystem::path>& files,
                          const BenchOptions& opts);

// Every *.json file in `dir`, sorted by name. Empty dir: empty report plus a
// warning.
BenchReport run_benchmark_dir(const std::filesystem::path& dir,
                              const BenchOptions& opts);

}  // namespace ptc
