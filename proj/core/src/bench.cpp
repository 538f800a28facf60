#include "ptc/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <map>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "ptc/heuristics.hpp"
#include "ptc/search.hpp"

namespace ptc {

std::string to_string(SolverKind kind) {
  switch (kind) {
    case SolverKind::BranchAndBound: return "bnb";
    case SolverKind::SchedulingCentric: return "sch";
    case SolverKind::QualificationCentric: return "qch";
    case SolverKind::Oracle: return "oracle";
  }
  return "?";
}

SolverKind parse_solver_kind(std::string_view text) {
  if (text == "bnb") return SolverKind::BranchAndBound;
  if (text == "sch") return SolverKind::SchedulingCentric;
  if (text == "qch") return SolverKind::QualificationCentric;
  if (text == "oracle") return SolverKind::Oracle;
  throw std::invalid_argument("unknown solver: " + std::string(text));
}

std::string to_string(ObjectiveChoice choice) {
  switch (choice) {
    case ObjectiveChoice::LexDisq: return "lex-disq";
    case ObjectiveChoice::WsumFlow: return "wsum-flow";
    case ObjectiveChoice::WsumDisq: return "wsum-disq";
    case ObjectiveChoice::Flow: return "flow";
  }
  return "?";
}

ObjectiveChoice parse_objective_choice(std::string_view text) {
  if (text == "lex-disq") return ObjectiveChoice::LexDisq;
  if (text == "wsum-flow") return ObjectiveChoice::WsumFlow;
  if (text == "wsum-disq") return ObjectiveChoice::WsumDisq;
  if (text == "flow") return ObjectiveChoice::Flow;
  throw std::invalid_argument("unknown objective: " + std::string(text));
}

ObjectiveSpec spec_for(ObjectiveChoice choice, const Instance& inst) {
  switch (choice) {
    case ObjectiveChoice::LexDisq: return ObjectiveSpec::lexDisqThenFlow();
    case ObjectiveChoice::WsumFlow: return ObjectiveSpec::weightedFlowPriority();
    case ObjectiveChoice::WsumDisq: return ObjectiveSpec::weightedDisqPriority(inst);
    case ObjectiveChoice::Flow: return ObjectiveSpec::flowOnly();
  }
  return ObjectiveSpec::flowOnly();
}

SolveResult run_solver(SolverKind kind, const Instance& inst,
                       const ObjectiveSpec& spec, double timeLimitSeconds,
                       std::uint64_t seed, const OracleLimits& oracleLimits) {
  switch (kind) {
    case SolverKind::BranchAndBound: {
      SearchConfig cfg;
      cfg.timeLimitSeconds = timeLimitSeconds;
      cfg.seed = seed;
      return solve(inst, spec, cfg);
    }
    case SolverKind::SchedulingCentric: return schedule_centric(inst, spec);
    case SolverKind::QualificationCentric: return qualification_centric(inst, spec);
    case SolverKind::Oracle: return enumerate_optimal(inst, spec, oracleLimits);
  }
  throw std::invalid_argument("unknown solver");
}

namespace {

using Clock = std::chrono::steady_clock;

std::string group_of(const Instance& inst) {
  return "N" + std::to_string(inst.jobCount()) + "_M" +
         std::to_string(inst.machineCount()) + "_F" +
         std::to_string(inst.familyCount());
}

BenchRecord run_one(const std::filesystem::path& file, SolverKind solver,
                    const BenchOptions& opts) {
  BenchRecord rec;
  rec.instance = file.stem().string();
  rec.solver = solver;
  std::optional<Instance> inst;
  try {
    inst = load_instance(file.string());
  } catch (const std::exception& e) {
    rec.group = "invalid";
    rec.note = std::string("load failed: ") + e.what();
    return rec;
  }
  rec.group = group_of(*inst);
  const ObjectiveSpec spec = spec_for(opts.objective, *inst);

  const auto t0 = Clock::now();
  SolveResult res;
  try {
    res = run_solver(solver, *inst, spec, opts.timeLimitSeconds, opts.seed,
                     opts.oracleLimits);
  } catch (const std::exception& e) {
    rec.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    rec.note = std::string("solver failed: ") + e.what();
    return rec;
  }
  const double measured = std::chrono::duration<double>(Clock::now() - t0).count();
  rec.seconds = res.stats.wallSeconds > 0 ? res.stats.wallSeconds : measured;
  rec.status = res.status;
  rec.note = res.message;

  if (!res.schedule) return rec;
  if (!is_feasible(*inst, *res.schedule)) {
    rec.note = "reported schedule fails validation";
    rec.consistent = false;
    return rec;
  }
  const ObjectiveValue v = evaluate(*inst, *res.schedule, spec);
  rec.objective = v;
  rec.consistent = res.objective && *res.objective == v;
  if (!rec.consistent) {
    rec.note = "reported objective differs from re-evaluation";
    return rec;
  }
  if (solver == SolverKind::BranchAndBound &&
      measured > opts.timeLimitSeconds * (1.0 + opts.grace)) {
    rec.note = "time limit exceeded";
    return rec;
  }
  rec.solved = true;
  rec.optimal = res.status == SolveStatus::Optimal;
  return rec;
}

ObjectiveKey key_for(const BenchRecord& r) {
  return key_of(*r.objective, r.objective->spec);
}

}  // namespace

BenchReport summarize(std::vector<BenchRecord> records, const BenchOptions& opts) {
  BenchReport rep;
  rep.objective = opts.objective;
  rep.timeLimitSeconds = opts.timeLimitSeconds;

  // Best key per instance among solved records.
  std::map<std::string, ObjectiveKey> best;
  for (const BenchRecord& r : records) {
    if (!r.solved) continue;
    const ObjectiveKey k = key_for(r);
    auto it = best.find(r.instance);
    if (it == best.end() || k < it->second) best[r.instance] = k;
  }

  std::vector<SolverKind> order = opts.solvers;
  for (const BenchRecord& r : records)
    if (std::find(order.begin(), order.end(), r.solver) == order.end())
      order.push_back(r.solver);

  std::map<std::string, std::vector<const BenchRecord*>> byGroup;
  for (const BenchRecord& r : records) byGroup[r.group].push_back(&r);

  for (const auto& [group, recs] : byGroup) {
    for (SolverKind s : order) {
      BenchRow row;
      row.solver = s;
      row.group = group;
      int opt = 0, vbs = 0;
      double disq = 0, obj = 0, time = 0;
      for (const BenchRecord* r : recs) {
        if (r->solver != s) continue;
        ++row.instances;
        time += r->seconds;
        if (!r->solved) continue;
        ++row.solvedCount;
        if (r->optimal) ++opt;
        if (key_for(*r) == best[r->instance]) ++vbs;
        disq += r->objective->disqCount;
        obj += static_cast<double>(r->objective->flowTime + r->objective->disqCount);
      }
      if (row.instances == 0) continue;
      const double n = row.instances;
      row.pctSol = 100.0 * row.solvedCount / n;
      row.pctOpt = 100.0 * opt / n;
      row.pctVbs = 100.0 * vbs / n;
      row.avgTime = time / n;
      if (row.solvedCount > 0) {
        row.avgDisq = disq / row.solvedCount;
        row.avgObj = obj / row.solvedCount;
      }
      rep.rows.push_back(row);
    }
  }
  rep.records = std::move(records);
  return rep;
}

BenchReport run_benchmark(const std::vector<std::filesystem::path>& files,
                          const BenchOptions& opts) {
  struct Job {
    std::size_t file;
    SolverKind solver;
  };
  std::vector<Job> jobs;
  for (std::size_t i = 0; i < files.size(); ++i)
    for (SolverKind s : opts.solvers) jobs.push_back({i, s});

  std::vector<BenchRecord> records(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < jobs.size(); k = next++)
      records[k] = run_one(files[jobs[k].file], jobs[k].solver, opts);
  };
  unsigned n = opts.threads ? opts.threads : std::thread::hardware_concurrency();
  n = std::max(1u, std::min<unsigned>(n, static_cast<unsigned>(jobs.size())));
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < n; ++i) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();

  BenchReport rep = summarize(std::move(records), opts);
  if (files.empty()) rep.warnings.push_back("no instances to run");
  return rep;
}

BenchReport run_benchmark_dir(const std::filesystem::path& dir,
                              const BenchOptions& opts) {
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  BenchReport rep = run_benchmark(files, opts);
  if (files.empty()) rep.warnings = {"no instance files in " + dir.string()};
  return rep;
}

double BenchReport::consistency() const {
  int with = 0, ok = 0;
  for (const BenchRecord& r : records) {
    if (!r.objective && r.consistent) continue;
    ++with;
    if (r.consistent) ++ok;
  }
  return with == 0 ? 1.0 : static_cast<double>(ok) / with;
}

namespace {

std::string fixed(double v, int digits = 1) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string opt_fixed(const std::optional<double>& v) { return v ? fixed(*v) : ""; }

}  // namespace

std::string BenchReport::to_csv() const {
  std::ostringstream out;
  out << "group,solver,instances,pct_sol,pct_opt,pct_vbs,avg_disq,avg_obj,avg_time\n";
  for (const BenchRow& r : rows)
    out << r.group << ',' << to_string(r.solver) << ',' << r.instances << ','
        << fixed(r.pctSol) << ',' << fixed(r.pctOpt) << ',' << fixed(r.pctVbs)
        << ',' << opt_fixed(r.avgDisq) << ',' << opt_fixed(r.avgObj) << ','
        << fixed(r.avgTime, 3) << '\n';
  return out.str();
}

std::string BenchReport::to_markdown() const {
  const bool lex = objective == ObjectiveChoice::LexDisq;
  std::ostringstream out;
  out << "| group | solver | %sol | %opt | %vbs | " << (lex ? "#dis" : "obj") << " |\n"
      << "|---|---|---:|---:|---:|---:|\n";
  for (const BenchRow& r : rows) {
    const auto& last = lex ? r.avgDisq : r.avgObj;
    out << "| " << r.group << " | " << to_string(r.solver) << " | " << fixed(r.pctSol)
        << " | " << fixed(r.pctOpt) << " | " << fixed(r.pctVbs) << " | "
        << (last ? fixed(*last) : "-") << " |\n";
  }
  return out.str();
}

std::string BenchReport::to_json() const {
  nlohmann::ordered_json j;
  j["objective"] = to_string(objective);
  j["time_limit"] = timeLimitSeconds;
  j["warnings"] = warnings;
  j["rows"] = nlohmann::ordered_json::array();
  for (const BenchRow& r : rows) {
    nlohmann::ordered_json row;
    row["group"] = r.group;
    row["solver"] = to_string(r.solver);
    row["instances"] = r.instances;
    row["pct_sol"] = r.pctSol;
    row["pct_opt"] = r.pctOpt;
    row["pct_vbs"] = r.pctVbs;
    row["avg_disq"] = r.avgDisq ? nlohmann::ordered_json(*r.avgDisq) : nlohmann::ordered_json();
    row["avg_obj"] = r.avgObj ? nlohmann::ordered_json(*r.avgObj) : nlohmann::ordered_json();
    row["avg_time"] = r.avgTime;
    j["rows"].push_back(row);
  }
  j["records"] = nlohmann::ordered_json::array();
  for (const BenchRecord& r : records) {
    nlohmann::ordered_json rec;
    rec["instance"] = r.instance;
    rec["group"] = r.group;
    rec["solver"] = to_string(r.solver);
    rec["status"] = to_string(r.status);
    rec["solved"] = r.solved;
    rec["optimal"] = r.optimal;
    rec["consistent"] = r.consistent;
    if (r.objective) {
      rec["flow"] = r.objective->flowTime;
      rec["disqualified"] = r.objective->disqCount;
      rec["cmax"] = r.objective->cmax;
    }
    rec["seconds"] = r.seconds;
    if (!r.note.empty()) rec["note"] = r.note;
    j["records"].push_back(rec);
  }
  return j.dump(2);
}

}  // namespace ptc
