#include <gtest/gtest.h>

#include <regex>
#include <set>
#include <sstream>

#include "ptc/ilp_export.hpp"
#include "ptc/oracle.hpp"
#include "test_support.hpp"

using namespace ptc;
using ptc::testing::example1;

namespace {

bool gamma_at_least_p(const Instance& inst) {
  for (const Family& f : inst.families())
    if (f.threshold < f.processing) return false;
  return true;
}

// Minimal LP-format reader: section order, row syntax, declared variables.
struct LpCheck {
  std::vector<std::string> sections;
  std::set<std::string> used;
  std::set<std::string> declared;
  std::size_t rows = 0;
  std::string error;
};

LpCheck read_lp(const std::string& text) {
  LpCheck c;
  std::istringstream in(text);
  std::string line, logical, section;
  const std::regex name(R"([A-Za-z_][A-Za-z0-9_]*)");
  const std::regex term(R"(^[+-]?\s*([0-9.eE+-]+\s+)?([A-Za-z_][A-Za-z0-9_]*)$)");
  std::vector<std::string> statements;

  auto flush = [&] {
    if (logical.empty()) return;
    std::istringstream ts(logical);
    if (section == "Subject To" || section == "Minimize") {
      const auto colon = logical.find(':');
      if (colon == std::string::npos) c.error = "row without name: " + logical;
      std::string body = logical.substr(colon + 1);
      std::smatch m;
      std::regex sense(R"((<=|>=|=)\s*(-?[0-9]+)\s*$)");
      if (section == "Subject To") {
        if (!std::regex_search(body, m, sense)) c.error = "row without sense: " + logical;
        body = body.substr(0, m.position(0));
        ++c.rows;
      }
      // Split into signed terms.
      std::vector<std::string> parts;
      std::string cur;
      std::istringstream bs(body);
      std::string tok;
      while (bs >> tok) {
        if ((tok == "+" || tok == "-") && !cur.empty()) {
          parts.push_back(cur);
          cur.clear();
        }
        cur += (cur.empty() ? "" : " ") + tok;
      }
      if (!cur.empty()) parts.push_back(cur);
      for (const std::string& p : parts) {
        std::smatch tm;
        if (!std::regex_match(p, tm, term)) {
          c.error = "bad term '" + p + "' in " + logical;
          continue;
        }
        c.used.insert(tm[2]);
      }
    } else if (section == "Bounds") {
      std::string v;
      ts >> v;
      c.declared.insert(v);
    } else if (section == "Binaries") {
      std::string v;
      while (ts >> v) {
        if (!std::regex_match(v, name)) c.error = "bad name " + v;
        c.declared.insert(v);
      }
    }
    logical.clear();
  };

  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '\\') continue;
    if (line.size() > 255) c.error = "line longer than 255 characters";
    if (line[0] != ' ') {
      flush();
      section = line;
      c.sections.push_back(line);
      continue;
    }
    const bool continuation = line.rfind("    ", 0) == 0;
    if (!continuation) flush();
    logical += line;
  }
  flush();
  return c;
}

// True when some row of eq (8) fires without a loss: more jobs start in
// [t - p, T - 1] than the normalisation M (T - t) allows for.
bool eq8_overflows(const Instance& inst, const Schedule& s) {
  const Time T = inst.horizon();
  for (Time t = 1; t < T; ++t) {
    std::int64_t count = 0;
    for (const Assignment& a : s.assignments)
      if (a.start >= t - inst.family(family_of(inst, a.job)).processing) ++count;
    if (count > inst.machineCount() * (T - t)) return true;
  }
  return false;
}

}  // namespace

TEST(IlpExport, Example1Counts) {
  const IlpModelSummary s = model_counts(example1());
  EXPECT_EQ(s.horizon, 59);
  EXPECT_EQ(s.boundVariables, 714);
  EXPECT_EQ(s.boundConstraints, 2484);
  EXPECT_LT(s.emittedBinaries, s.boundVariables);
  EXPECT_LE(s.emittedConstraints, s.boundConstraints);
  const IlpModel m = build_ip3(example1(), ObjectiveSpec::weightedFlowPriority());
  EXPECT_EQ(static_cast<std::int64_t>(m.rows.size()), s.emittedConstraints);
  EXPECT_EQ(static_cast<std::int64_t>(m.variables.size()), s.emittedVariables());
}

TEST(IlpExport, TinyCounts) {
  const Instance one(1, {{1, 1, 1, 0, 1, {1}}});
  EXPECT_EQ(model_counts(one).boundVariables, 3);
  const std::string lp = export_ip3(one, ObjectiveSpec::weightedFlowPriority());
  EXPECT_NE(lp.find(" nf_f1: x_f1_m1_t0 = 1\n"), std::string::npos) << lp;
  const IlpModel m = build_ip3(one, ObjectiveSpec::weightedFlowPriority());
  int eq2 = 0;
  for (const IlpRow& r : m.rows) eq2 += r.equation == 2;
  EXPECT_EQ(eq2, 1);
}

TEST(IlpExport, VariableNames) {
  const IlpModel m = build_ip3(example1(), ObjectiveSpec::weightedDisqPriority(example1()));
  EXPECT_GE(m.index("x_f1_m2_t50"), 0);
  EXPECT_EQ(m.index("x_f1_m2_t51"), -1);  // 51 + 9 > 59
  EXPECT_EQ(m.index("x_f1_m1_t0"), -1);   // m1 not in M_f1
  EXPECT_GE(m.index("y_f3_m1_t58"), 0);
  EXPECT_GE(m.index("Y_f2_m2"), 0);
  EXPECT_GE(m.index("C_f3"), 0);
  EXPECT_FALSE(m.variables[m.index("C_f3")].binary);
  const std::string lp = render_lp(m);
  EXPECT_NE(lp.find("590 Y_f1_m2"), std::string::npos);
}

TEST(IlpExport, LpFileParses) {
  const std::string lp = export_ip3(example1(), ObjectiveSpec::weightedFlowPriority());
  const LpCheck c = read_lp(lp);
  EXPECT_EQ(c.error, "");
  EXPECT_EQ(c.sections,
            (std::vector<std::string>{"Minimize", "Subject To", "Bounds", "Binaries", "End"}));
  EXPECT_EQ(static_cast<std::int64_t>(c.rows), model_counts(example1()).emittedConstraints);
  for (const std::string& v : c.used) EXPECT_TRUE(c.declared.count(v)) << v;
  EXPECT_EQ(lp.find('\r'), std::string::npos);
}

TEST(IlpExport, Eq8CoefficientIsExactInMemory) {
  const IlpModel m = build_ip3(example1(), ObjectiveSpec::weightedFlowPriority());
  for (const IlpRow& r : m.rows) {
    if (r.equation != 8 || r.name != "ad_f3_m1_t10") continue;
    EXPECT_EQ(r.denominator, 2 * (59 - 10));
    EXPECT_EQ(r.terms.front().coef, 1);
  }
  const std::string lp = render_lp(m);
  EXPECT_NE(lp.find("0.01020408163265306 x_"), std::string::npos);  // 1/98
}

TEST(IlpExport, ReplayOfExampleSolutions) {
  const Instance inst = example1();
  const IlpModel m = build_ip3(inst, ObjectiveSpec::weightedFlowPriority());
  const ReplayResult a = replay_ip3(m, inst, ptc::testing::solution_a());
  EXPECT_TRUE(a.satisfied);
  EXPECT_EQ(a.impliedDisq, 3);
  EXPECT_EQ(a.objective, 117);
  const ReplayResult b = replay_ip3(m, inst, ptc::testing::solution_b());
  EXPECT_TRUE(b.satisfied);
  EXPECT_EQ(b.impliedDisq, 0);
  EXPECT_EQ(b.objective, 159);

  const DisqualificationReport va = compute_disqualifications(inst, ptc::testing::solution_a());
  for (std::size_t i = 0; i < va.entries.size(); ++i) {
    EXPECT_EQ(a.implied[i].lost, va.entries[i].lost);
    if (va.entries[i].lost) EXPECT_EQ(a.implied[i].at, va.entries[i].at);
  }

  Schedule clash = ptc::testing::solution_a();
  for (Assignment& x : clash.assignments)
    if (x.job == 5) x.start = 14;
  EXPECT_FALSE(replay_ip3(m, inst, clash).satisfied);
}

TEST(IlpExport, Refusals) {
  EXPECT_THROW(build_ip3(example1(), ObjectiveSpec::flowOnly()), std::invalid_argument);
  try {
    build_ip3(example1(), ObjectiveSpec::weightedFlowPriority(), {10});
    FAIL();
  } catch (const IlpTooLarge& e) {
    EXPECT_EQ(e.horizon, 59);
    EXPECT_NE(std::string(e.what()).find("59"), std::string::npos);
  }
}

// Replay agrees with the validator on instances where gamma >= p (eq (5)
// forbids a running job on a machine already past its window, which the
// validator allows when gamma < p). Eq (8) taken literally diverges in two
// ways, both confined to schedules that pack the end of the horizon:
//  - it reads y only up to T-2, so a loss at T-1 with cmax = T is not priced;
//  - its 1/(M(T-t)) scaling does not bound the count of starts in
//    [t-p, T-1], so a crowded tail forces Y = 1 without a loss.
TEST(IlpExportProperty, ReplayAgreesWithValidator) {
  int feasible = 0, infeasible = 0, diverged = 0;
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const Instance inst = ptc::testing::random_tiny_instance(seed + 2000);
    if (!gamma_at_least_p(inst)) continue;
    const IlpModel m = build_ip3(inst, ObjectiveSpec::weightedFlowPriority());
    std::vector<Schedule> pool;
    for (const ObjectiveSpec& spec : {ObjectiveSpec::flowOnly(), ObjectiveSpec::lexDisqThenFlow()}) {
      const SolveResult r = enumerate_optimal(inst, spec, {5, 30});
      if (r.schedule) pool.push_back(*r.schedule);
    }
    for (std::uint64_t k = 0; k < 20; ++k) pool.push_back(ptc::testing::random_schedule(inst, seed * 31 + k));
    for (const Schedule& s : pool) {
      const bool ok = is_feasible(inst, s);
      const ReplayResult r = replay_ip3(m, inst, s);
      EXPECT_EQ(r.satisfied, ok) << render_instance(inst) << render_schedule(s);
      if (!ok) {
        ++infeasible;
        continue;
      }
      ++feasible;
      const ObjectiveValue v = evaluate(inst, s, ObjectiveSpec::weightedFlowPriority());
      const DisqualificationReport d = compute_disqualifications(inst, s);
      int delta = 0;
      bool differs = false;
      for (std::size_t i = 0; i < d.entries.size(); ++i) {
        if (d.entries[i].lost == r.implied[i].lost) continue;
        differs = true;
        if (d.entries[i].lost) {
          EXPECT_EQ(d.entries[i].at, inst.horizon() - 1) << render_instance(inst) << render_schedule(s);
          EXPECT_EQ(v.cmax, inst.horizon());
          ++delta;
        } else {
          EXPECT_TRUE(eq8_overflows(inst, s)) << render_instance(inst) << render_schedule(s);
          --delta;
        }
      }
      diverged += differs;
      EXPECT_EQ(r.impliedDisq + delta, v.disqCount);
      EXPECT_EQ(r.objective + delta, v.weighted);
    }
  }
  EXPECT_GT(feasible, 50);
  EXPECT_GT(infeasible, 50);
  EXPECT_LT(diverged, feasible / 5);
}
