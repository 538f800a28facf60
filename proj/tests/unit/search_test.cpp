#include <gtest/gtest.h>

#include <functional>
#include <random>

#include "ptc/oracle.hpp"
#include "ptc/search.hpp"
#include "test_support.hpp"

using namespace ptc;
using ptc::testing::example1;

namespace {

struct Subtree {
  std::optional<Time> flow;
  std::optional<int> disq;
  std::optional<Time> cmax;
};

// Best completions below `s`, by plain enumeration of the model's children.
Subtree enumerate_subtree(const SearchModel& model, const SearchState& s) {
  Subtree best;
  std::function<void(const SearchState&)> rec = [&](const SearchState& x) {
    if (model.complete(x)) {
      const int d = model.final_disq(x);
      if (!best.flow || x.partialFlow < *best.flow) best.flow = x.partialFlow;
      if (!best.disq || d < *best.disq) best.disq = d;
      if (!best.cmax || x.maxEnd < *best.cmax) best.cmax = x.maxEnd;
      return;
    }
    for (const Placement& p : model.expand(x)) rec(model.apply(x, p));
  };
  rec(s);
  return best;
}

}  // namespace

TEST(Search, Example1FlowOptimal) {
  const SolveResult r = solve(example1(), ObjectiveSpec::flowOnly());
  ASSERT_EQ(r.status, SolveStatus::Optimal);
  EXPECT_EQ(r.objective->flowTime, 114);
  EXPECT_EQ(r.dualBound, (ObjectiveKey{114, 0}));
  EXPECT_TRUE(is_feasible(example1(), *r.schedule));
}

TEST(Search, Example1WeightedFlowPriority) {
  const SolveResult r = solve(example1(), ObjectiveSpec::weightedFlowPriority());
  ASSERT_EQ(r.status, SolveStatus::Optimal);
  EXPECT_EQ(r.objective->weighted, 117);
}

TEST(Search, SingleJob) {
  const Instance inst(1, {{1, 1, 3, 0, 25, {1}}});
  const SolveResult r = solve(inst, ObjectiveSpec::lexDisqThenFlow());
  ASSERT_EQ(r.status, SolveStatus::Optimal);
  EXPECT_EQ(r.objective->flowTime, 3);
  EXPECT_EQ(r.objective->disqCount, 0);
}

TEST(Search, ProvesInfeasibility) {
  const Instance inst(1, {{1, 2, 3, 0, 1, {1}}});
  const SolveResult r = solve(inst, ObjectiveSpec::flowOnly());
  EXPECT_EQ(r.status, SolveStatus::Infeasible);
  EXPECT_FALSE(r.schedule);
}

TEST(SearchModel, FlowBoundExamples) {
  const SearchModel ex(example1());
  EXPECT_LE(ex.flow_lower_bound(ex.root()), 114);

  const Instance inst(1, {{1, 2, 5, 0, 10, {1}}});
  const SearchModel model(inst);
  const SearchState s = model.apply(model.root(), {1, 1, 2});  // ends at 7
  EXPECT_EQ(s.partialFlow, 7);
  EXPECT_EQ(model.flow_lower_bound(s), 7 + 12);
  const SearchState done = model.apply(s, {1, 1, 7});
  EXPECT_EQ(model.flow_lower_bound(done), done.partialFlow);
}

TEST(SearchModel, DisqBoundExamples) {
  const SearchModel model(example1());
  SearchState s = model.root();
  EXPECT_EQ(model.disq_lower_bound(s), 0);
  // Solution (a) prefix: all four f3 jobs before time 2 on both machines.
  for (const Placement& p : {Placement{3, 1, 0}, Placement{3, 2, 0}, Placement{3, 1, 1},
                             Placement{3, 2, 1}})
    s = model.apply(s, p);
  EXPECT_GE(model.cmax_lower_bound(s), 25);
  EXPECT_EQ(model.disq_lower_bound(s), 2);
  EXPECT_EQ(model.disq_lower_bound(s, 30), 2);

  const Instance loose(2, {{1, 2, 2, 0, 50, {1, 2}}, {2, 2, 3, 1, 50, {1}}});
  const SearchModel lm(loose);
  SearchState t = lm.apply(lm.root(), {1, 1, 0});
  t = lm.apply(t, {1, 2, 0});
  EXPECT_EQ(lm.disq_lower_bound(t), 0);
}

TEST(SearchModel, ExpandRootExample1) {
  const SearchModel model(example1());
  const auto children = model.expand(model.root());
  bool f3m1 = false;
  for (const Placement& p : children) {
    f3m1 |= p == Placement{3, 1, 0};
    EXPECT_FALSE(p.family == 1 && p.machine == 1);
  }
  EXPECT_TRUE(f3m1);
}

TEST(SearchModel, ClosedWindowYieldsNoChildren) {
  // f1 on m1 only, window already closed: no f1 child at all, branch dead.
  const Instance inst(1, {{1, 2, 1, 0, 2, {1}}, {2, 1, 5, 0, 20, {1}}});
  const SearchModel model(inst);
  const SearchState s = model.apply(model.root(), {2, 1, 0});  // m1 busy to 5
  for (const Placement& p : model.expand(s)) EXPECT_NE(p.family, 1);
  EXPECT_TRUE(model.expand(s).empty());
}

TEST(SearchModel, SingleMachineSingleFamilyIsAChain) {
  const Instance inst(1, {{1, 4, 3, 2, 10, {1}}});
  SearchConfig cfg;
  cfg.useHeuristics = false;
  const SolveResult r = solve(inst, ObjectiveSpec::flowOnly(), cfg);
  ASSERT_EQ(r.status, SolveStatus::Optimal);
  EXPECT_EQ(r.objective->flowTime, 3 + 6 + 9 + 12);
  // Root plus one node per job: every later start is cut by the bound.
  EXPECT_EQ(r.stats.nodes, 5u);
  const SearchModel model(inst);
  EXPECT_EQ(model.expand(model.root()).front(), (Placement{1, 1, 0}));
}

TEST(SearchModel, BoundsAreAdmissibleOnSubtrees) {
  std::mt19937_64 rng(3);
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 80; ++seed) {
    const Instance inst = ptc::testing::random_tiny_instance(seed + 300, 20);
    const SearchModel model(inst);
    SearchState s = model.root();
    // Walk a random path and test every state on it.
    while (true) {
      const Subtree best = enumerate_subtree(model, s);
      if (best.flow) {
        EXPECT_LE(model.flow_lower_bound(s), *best.flow);
        EXPECT_LE(model.disq_lower_bound(s), *best.disq);
        EXPECT_LE(model.cmax_lower_bound(s), *best.cmax);
        ++checked;
      }
      const auto kids = model.expand(s);
      if (kids.empty()) break;
      s = model.apply(s, kids[rng() % kids.size()]);
    }
  }
  EXPECT_GT(checked, 100);
}

// Without setups, eligibility or binding windows the root relaxation is the
// identical-machines problem itself, so it must hit the optimum exactly.
TEST(SearchModel, SptBoundExactWithoutSideConstraints) {
  std::mt19937_64 rng(17);
  for (int k = 0; k < 40; ++k) {
    const int machines = 1 + static_cast<int>(rng() % 2);
    std::vector<Family> fams;
    const int F = 1 + static_cast<int>(rng() % 3);
    for (int f = 1; f <= F; ++f) {
      std::vector<int> all;
      for (int m = 1; m <= machines; ++m) all.push_back(m);
      fams.push_back({f, 1 + static_cast<int>(rng() % 2), 1 + static_cast<Time>(rng() % 4), 0, 100, all});
    }
    const Instance inst(machines, fams);
    if (inst.jobCount() > 5 || inst.horizon() > 30) continue;
    const SolveResult o = enumerate_optimal(inst, ObjectiveSpec::flowOnly(), {5, 30});
    ASSERT_EQ(o.status, SolveStatus::Optimal);
    const SearchModel model(inst);
    EXPECT_EQ(model.flow_lower_bound(model.root()), o.objective->flowTime) << render_instance(inst);
  }
}

TEST(Search, MatchesOracleOnTinyInstances) {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const Instance inst = ptc::testing::random_tiny_instance(seed + 9000);
    for (const ObjectiveSpec& spec :
         {ObjectiveSpec::flowOnly(), ObjectiveSpec::lexDisqThenFlow(),
          ObjectiveSpec::weightedFlowPriority(), ObjectiveSpec::weightedDisqPriority(inst)}) {
      const SolveResult o = enumerate_optimal(inst, spec, {5, 30});
      const SolveResult b = solve(inst, spec);
      ASSERT_EQ(o.status, b.status) << render_instance(inst);
      if (o.objective)
        EXPECT_EQ(key_of(*o.objective, spec), key_of(*b.objective, spec)) << render_instance(inst);
    }
  }
}

TEST(Search, AnytimeUnderNodeLimit) {
  const Instance inst = example1();
  const ObjectiveSpec lex = ObjectiveSpec::lexDisqThenFlow();
  SearchConfig cfg;
  cfg.maxNodes = 50;
  const SolveResult r = solve(inst, lex, cfg);
  EXPECT_TRUE(r.status == SolveStatus::Feasible || r.status == SolveStatus::Unknown);
  ASSERT_TRUE(r.dualBound);
  if (r.objective) {
    EXPECT_LE(*r.dualBound, key_of(*r.objective, lex));
    EXPECT_EQ(evaluate(inst, *r.schedule, lex), *r.objective);
  }
  for (std::size_t i = 1; i < r.stats.incumbents.size(); ++i)
    EXPECT_LT(key_of(r.stats.incumbents[i].objective, lex),
              key_of(r.stats.incumbents[i - 1].objective, lex));
}

TEST(Search, WarmStartNeverWorsens) {
  const Instance inst = example1();
  const ObjectiveSpec lex = ObjectiveSpec::lexDisqThenFlow();
  SearchConfig cfg;
  cfg.maxNodes = 10;
  cfg.useHeuristics = false;
  cfg.warmStart = ptc::testing::solution_b();
  const SolveResult r = solve(inst, lex, cfg);
  ASSERT_TRUE(r.objective);
  EXPECT_LE(key_of(*r.objective, lex), (ObjectiveKey{0, 159}));

  cfg.warmStart = Schedule{{{1, 1, 0}}};
  EXPECT_THROW(solve(inst, lex, cfg), ScheduleError);
  Schedule clash = ptc::testing::solution_a();
  for (Assignment& a : clash.assignments)
    if (a.job == 5) a.start = 14;
  cfg.warmStart = clash;
  EXPECT_THROW(solve(inst, lex, cfg), std::invalid_argument);
}

TEST(Search, Deterministic) {
  const Instance inst = ptc::testing::random_tiny_instance(77);
  for (std::uint64_t seed : {0u, 5u}) {
    SearchConfig cfg;
    cfg.seed = seed;
    const SolveResult a = solve(inst, ObjectiveSpec::lexDisqThenFlow(), cfg);
    const SolveResult b = solve(inst, ObjectiveSpec::lexDisqThenFlow(), cfg);
    EXPECT_EQ(a.schedule, b.schedule);
    EXPECT_EQ(a.stats.nodes, b.stats.nodes);
  }
}
