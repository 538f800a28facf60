// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <tuple>

#include "ptc/bench.hpp"
#include "ptc/generator.hpp"
#include "ptc/heuristics.hpp"
#include "ptc/ilp_export.hpp"
#include "ptc/oracle.hpp"
#include "ptc/search.hpp"
#include "test_support.hpp"

using namespace ptc;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Check {
  bool ok = true;
  std::ostringstream detail;

  void expect(bool cond, const std::string& what) {
    if (!cond && ok) detail << what;
    if (!cond) ok = false;
  }
};

const OracleLimits kTiny{5, 30};

// 1. Validator goldens for Example 1.
Check golden_suite() {
  Check c;
  const Instance inst = ptc::testing::example1();
  const Schedule a = ptc::testing::solution_a();
  const Schedule b = ptc::testing::solution_b();
  const auto t0 = Clock::now();
  const bool feasA = is_feasible(inst, a), feasB = is_feasible(inst, b);
  const MakespanFlow mfA = compute_makespan_flow(inst, a);
  const MakespanFlow mfB = compute_makespan_flow(inst, b);
  const DisqualificationReport dA = compute_disqualifications(inst, a);
  const DisqualificationReport dB = compute_disqualifications(inst, b);
  const double elapsed = seconds_since(t0);

  std::vector<std::tuple<int, int, Time>> lost;
  for (const PairStatus& p : dA.lost()) lost.emplace_back(p.family, p.machine, p.at);
  const std::vector<std::tuple<int, int, Time>> want{{2, 2, 26}, {3, 1, 22}, {3, 2, 22}};
  c.expect(feasA && feasB, "solutions not feasible; ");
  c.expect(mfA.flowTime == 114 && mfA.cmax == 30, "solution (a) flow/cmax; ");
  c.expect(lost == want, "solution (a) losses; ");
  c.expect(mfB.flowTime == 159 && mfB.cmax == 37 && dB.disqCount == 0, "solution (b); ");
  c.expect(elapsed < 1e-3, "slower than 1 ms; ");
  c.detail << "a: flow " << mfA.flowTime << " cmax " << mfA.cmax << " losses " << dA.disqCount
           << ", b: flow " << mfB.flowTime << " cmax " << mfB.cmax << " losses " << dB.disqCount
           << ", " << elapsed * 1e3 << " ms";
  return c;
}

// 2. Exact optimality on Example 1.
Check exact_example1() {
  Check c;
  const Instance inst = ptc::testing::example1();
  SearchConfig cfg;
  cfg.timeLimitSeconds = 600;
  const auto t0 = Clock::now();
  const SolveResult flow = solve(inst, ObjectiveSpec::flowOnly(), cfg);
  const double t1 = seconds_since(t0);
  const SolveResult lex = solve(inst, ObjectiveSpec::lexDisqThenFlow(), cfg);
  const double t2 = seconds_since(t0) - t1;
  c.expect(flow.status == SolveStatus::Optimal && flow.objective->flowTime == 114, "flow optimum; ");
  c.expect(lex.status == SolveStatus::Optimal && lex.objective->disqCount == 0 &&
               lex.objective->flowTime == 159,
           "lex optimum; ");
  c.detail << "flow " << (flow.objective ? flow.objective->flowTime : -1) << " in " << t1
           << " s, lex (" << (lex.objective ? lex.objective->disqCount : -1) << ", "
           << (lex.objective ? lex.objective->flowTime : -1) << ") in " << t2 << " s";
  return c;
}

std::vector<Instance> tiny_corpus() {
  std::vector<Instance> out;
  for (std::uint64_t seed = 0; seed < 200; ++seed)
    out.push_back(ptc::testing::random_tiny_instance(100000 + seed));
  return out;
}

// 3. bnb == oracle on the tiny corpus, every objective mode.
Check oracle_equivalence(const std::vector<Instance>& corpus) {
  Check c;
  const auto t0 = Clock::now();
  int solves = 0, feasible = 0;
  for (const Instance& inst : corpus) {
    c.expect(inst.jobCount() <= 5 && inst.machineCount() <= 2 && inst.familyCount() <= 3 &&
                 inst.horizon() <= 30,
             "corpus out of range; ");
    for (const ObjectiveSpec& spec :
         {ObjectiveSpec::flowOnly(), ObjectiveSpec::lexDisqThenFlow(),
          ObjectiveSpec::weightedFlowPriority(), ObjectiveSpec::weightedDisqPriority(inst)}) {
      const SolveResult o = enumerate_optimal(inst, spec, kTiny);
      const SolveResult b = solve(inst, spec);
      ++solves;
      if (o.status != b.status) {
        c.expect(false, "status mismatch on " + render_instance(inst) + "; ");
        continue;
      }
      if (!o.objective) continue;
      ++feasible;
      c.expect(key_of(*o.objective, spec) == key_of(*b.objective, spec),
               "objective mismatch on " + render_instance(inst) + "; ");
    }
  }
  const double elapsed = seconds_since(t0);
  c.expect(elapsed < 600, "over 10 minutes; ");
  c.detail << corpus.size() << " instances, " << solves << " solve pairs (" << feasible
           << " feasible), " << elapsed << " s";
  return c;
}

// 4. Makespan and flow lower bounds against the oracle.
Check bounds(const std::vector<Instance>& corpus) {
  Check c;
  int checked = 0;
  for (const Instance& inst : corpus) {
    const SolveResult o = enumerate_optimal(inst, ObjectiveSpec::flowOnly(), kTiny);
    if (!o.objective) continue;
    ++checked;
    const Time cmax = o.objective->cmax;
    c.expect(makespan_lower_bound(inst) <= cmax && cmax <= inst.horizon(),
             "makespan bound on " + render_instance(inst) + "; ");
    const SearchModel model(inst);
    c.expect(model.flow_lower_bound(model.root()) <= o.objective->flowTime,
             "flow bound on " + render_instance(inst) + "; ");
  }
  c.detail << checked << " feasible instances checked";
  return c;
}

// 5. Heuristics on one seed of every preset.
Check heuristics() {
  Check c;
  int schedules = 0, failures = 0;
  for (const SetShape& shape : table1_presets()) {
    const Instance inst = generate({shape.jobs, shape.machines, shape.families,
                                    ThresholdClass::Medium, 1});
    for (HeuristicKind kind : {HeuristicKind::SchedulingCentric, HeuristicKind::QualificationCentric}) {
      for (const ObjectiveSpec& spec :
           {ObjectiveSpec::lexDisqThenFlow(), ObjectiveSpec::weightedDisqPriority(inst)}) {
        const SolveResult r = run_heuristic(kind, inst, spec);
        if (!r.schedule) {
          ++failures;
          c.expect(r.status == SolveStatus::Unknown && !r.message.empty(), "silent failure; ");
          continue;
        }
        ++schedules;
        c.expect(is_feasible(inst, *r.schedule), "infeasible heuristic schedule; ");
        c.expect(r.objective && evaluate(inst, *r.schedule, spec) == *r.objective,
                 "reported objective differs; ");
      }
    }
  }
  c.detail << table1_presets().size() << " presets, " << schedules << " schedules, " << failures
           << " explicit failures";
  return c;
}

// 6. ILP counts and constraint replay.
Check ilp() {
  Check c;
  const Instance inst = ptc::testing::example1();
  const IlpModelSummary s = model_counts(inst);
  c.expect(s.boundVariables == 714, "variable bound; ");
  c.expect(s.boundConstraints <= 2484 && s.emittedConstraints <= s.boundConstraints,
           "constraint bound; ");
  const IlpModel m = build_ip3(inst, ObjectiveSpec::weightedFlowPriority());
  const ReplayResult a = replay_ip3(m, inst, ptc::testing::solution_a());
  const ReplayResult b = replay_ip3(m, inst, ptc::testing::solution_b());
  c.expect(a.satisfied && b.satisfied, "replay rejects a feasible solution; ");
  c.expect(a.impliedDisq == 3 && b.impliedDisq == 0, "implied Y; ");
  Schedule clash = ptc::testing::solution_a();
  for (Assignment& x : clash.assignments)
    if (x.job == 5) x.start = 14;
  c.expect(!replay_ip3(m, inst, clash).satisfied, "replay accepts an overlap; ");
  c.detail << "bound " << s.boundVariables << " vars / " << s.boundConstraints
           << " rows, emitted " << s.emittedVariables() << " / " << s.emittedConstraints
           << ", Y(a) " << a.impliedDisq << " Y(b) " << b.impliedDisq;
  return c;
}

// 7. Generated sets: 10/10/10 and structurally valid.
Check generator() {
  Check c;
  int total = 0;
  for (const SetShape& shape : table1_presets()) {
    const auto set = generate_set(shape, 2024);
    std::map<ThresholdClass, int> split;
    for (const GeneratedInstance& g : set) {
      ++split[g.config.thresholdClass];
      ++total;
      c.expect(structural_violations(g.instance).empty(), g.fileName + " structure; ");
    }
    c.expect(set.size() == 30 && split[ThresholdClass::Small] == 10 &&
                 split[ThresholdClass::Medium] == 10 && split[ThresholdClass::Large] == 10,
             "class split; ");
  }
  c.detail << total << " instances over " << table1_presets().size() << " presets";
  return c;
}

// 8. Bench self-consistency: every run's objective re-evaluates identically.
Check bench() {
  Check c;
  const auto dir = std::filesystem::temp_directory_path() / "ptc_acceptance_bench";
  std::filesystem::remove_all(dir);
  std::vector<GeneratedInstance> set;
  for (const SetShape& shape : {SetShape{5, 2, 2}, SetShape{10, 2, 3}})
    for (GeneratedInstance& g : generate_set(shape, 8, 2)) set.push_back(std::move(g));
  write_instances(set, dir);

  std::size_t runs = 0, withSchedule = 0, inconsistent = 0;
  for (ObjectiveChoice obj : {ObjectiveChoice::LexDisq, ObjectiveChoice::WsumFlow,
                              ObjectiveChoice::WsumDisq, ObjectiveChoice::Flow}) {
    BenchOptions opts;
    opts.solvers = {SolverKind::BranchAndBound, SolverKind::SchedulingCentric,
                    SolverKind::QualificationCentric, SolverKind::Oracle};
    opts.objective = obj;
    opts.timeLimitSeconds = 5;
    opts.oracleLimits.trivialBoundPruning = true;
    const BenchReport rep = run_benchmark_dir(dir, opts);
    for (const BenchRecord& r : rep.records) {
      ++runs;
      if (!r.objective) continue;
      ++withSchedule;
      inconsistent += !r.consistent;
    }
    c.expect(rep.consistency() == 1.0, "inconsistent run under " + to_string(obj) + "; ");
  }
  std::filesystem::remove_all(dir);
  c.expect(withSchedule > 0, "no schedules; ");
  c.detail << runs << " runs, " << withSchedule << " with schedules, " << inconsistent
           << " inconsistent";
  return c;
}

}  // namespace

int main() {
  const std::vector<Instance> corpus = tiny_corpus();
  const std::vector<std::pair<std::string, std::function<Check()>>> criteria = {
      {"1 example goldens", golden_suite},
      {"2 exact optimum on example 1", exact_example1},
      {"3 oracle equivalence", [&] { return oracle_equivalence(corpus); }},
      {"4 lower bounds", [&] { return bounds(corpus); }},
      {"5 heuristic contract", heuristics},
      {"6 ilp export", ilp},
      {"7 generator sets", generator},
      {"8 bench self-consistency", bench},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Check c;
    try {
      c = run();
    } catch (const std::exception& e) {
      c.ok = false;
      c.detail << "exception: " << e.what();
    }
    failed += !c.ok;
    std::printf("%s criterion %s: %s\n", c.ok ? "PASS" : "FAIL", name.c_str(), c.detail.str().c_str());
    std::fflush(stdout);
  }
  return failed ? 1 : 0;
}
