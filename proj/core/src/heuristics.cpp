#include "ptc/heuristics.hpp"

#include <algorithm>
#include <limits>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

namespace ptc {

namespace {

constexpr Time kNever = std::numeric_limits<Time>::max();

// Shared greedy machinery: machine frontiers, last family per machine and
// last start per (family, machine) pair (virtual start at 0).
class Greedy {
 public:
  explicit Greedy(const Instance& inst)
      : inst_(inst),
        F_(inst.familyCount()),
        M_(inst.machineCount()),
        T_(inst.horizon()),
        frontier_(M_ + 1, 0),
        last_(M_ + 1, 0),
        retired_(M_ + 1, false),
        pairLast_((F_ + 1) * (M_ + 1), 0),
        remaining_(F_ + 1, 0) {
    for (const Family& f : inst.families()) remaining_[f.id] = f.jobCount;
    left_ = inst.jobCount();
  }

  bool done() const { return left_ == 0; }

  // Earliest non-retired machine, lowest id on ties; 0 when none is left.
  int nextMachine() const {
    int best = 0;
    for (int m = 1; m <= M_; ++m)
      if (!retired_[m] && (best == 0 || frontier_[m] < frontier_[best])) best = m;
    return best;
  }

  void retire(int m) { retired_[m] = true; }

  Time setupFor(int f, int m) const {
    return last_[m] != 0 && last_[m] != f ? inst_.family(f).setup : 0;
  }
  Time earliest(int f, int m) const { return frontier_[m] + setupFor(f, m); }
  Time deadline(int f, int m) const {
    return pairLast_[f * (M_ + 1) + m] + inst_.family(f).threshold;
  }
  int remaining(int f) const { return remaining_[f]; }
  Time horizon() const { return T_; }

  // Families that can start on m at their earliest time.
  std::vector<int> candidates(int m) const {
    std::vector<int> out;
    for (const Family& f : inst_.families()) {
      if (remaining_[f.id] == 0 || !f.qualifiedOn(m)) continue;
      const Time e = earliest(f.id, m);
      if (e > deadline(f.id, m) || e + f.processing > T_) continue;
      out.push_back(f.id);
    }
    return out;
  }

  // Scheduling-centric choice: smallest setup + processing, no-setup
  // continuation first, then lowest family id.
  int shortestFirst(int m, const std::vector<int>& cands) const {
    auto key = [&](int f) {
      const Time s = setupFor(f, m);
      return std::make_tuple(s + inst_.family(f).processing, s > 0, f);
    };
    return *std::min_element(cands.begin(), cands.end(),
                             [&](int a, int b) { return key(a) < key(b); });
  }

  void place(int f, int m, Time start) {
    const int job = inst_.firstJob(f) + inst_.family(f).jobCount - remaining_[f];
    sched_.assignments.push_back({job, m, start});
    frontier_[m] = start + inst_.family(f).processing;
    last_[m] = f;
    pairLast_[f * (M_ + 1) + m] = start;
    --remaining_[f];
    --left_;
  }

  SolveResult finish(const ObjectiveSpec& spec, const char* name) {
    SolveResult r;
    if (!done()) {
      r.status = SolveStatus::Unknown;
      std::string families;
      for (const Family& f : inst_.families())
        if (remaining_[f.id] > 0)
          families += (families.empty() ? "" : ",") + std::to_string(f.id);
      r.message = std::string(name) +
                  ": dead end, every qualified machine closed for families " +
                  families;
      return r;
    }
    sched_.normalize();
    r.status = SolveStatus::Feasible;
    r.objective = evaluate(inst_, sched_, spec);
    r.schedule = sched_;
    r.stats.incumbents.push_back({0.0, *r.objective});
    return r;
  }

  const Instance& inst_;

 private:
  int F_;
  int M_;
  Time T_;
  std::vector<Time> frontier_;
  std::vector<int> last_;
  std::vector<bool> retired_;
  std::vector<Time> pairLast_;
  std::vector<int> remaining_;
  int left_ = 0;
  Schedule sched_;
};

}  // namespace

SolveResult schedule_centric(const Instance& inst, const ObjectiveSpec& spec) {
  Greedy g(inst);
  while (!g.done()) {
    const int m = g.nextMachine();
    if (m == 0) break;
    const std::vector<int> cands = g.candidates(m);
    // Frontier and last family stay put, so an empty list stays empty.
    if (cands.empty()) {
      g.retire(m);
      continue;
    }
    const int f = g.shortestFirst(m, cands);
    g.place(f, m, g.earliest(f, m));
  }
  return g.finish(spec, "schedule_centric");
}

SolveResult qualification_centric(const Instance& inst,
                                  const ObjectiveSpec& spec) {
  Greedy g(inst);
  const Time T = g.horizon();
  while (!g.done()) {
    const int m = g.nextMachine();
    if (m == 0) break;
    const std::vector<int> cands = g.candidates(m);
    if (cands.empty()) {
      g.retire(m);
      continue;
    }

    int chosen = 0;
    Time nearest = kNever;
    for (int f : cands) {
      const Time d = g.deadline(f, m);
      if (d < T && d < nearest) {
        nearest = d;
        chosen = f;
      }
    }
    if (chosen == 0) {
      const int f = g.shortestFirst(m, cands);
      g.place(f, m, g.earliest(f, m));
      continue;
    }

    const Family& fam = inst.family(chosen);
    Time start = g.earliest(chosen, m);
    // Last job of a family: start it as late as its window allows so the
    // qualification survives longer, without starving other deadlines here.
    if (g.remaining(chosen) == 1 && inst.familyCount() >= 2) {
      Time latest = std::min(nearest, T - fam.processing);
      for (int f : cands) {
        if (f == chosen) continue;
        const Time d = g.deadline(f, m);
        if (d >= T) continue;
        latest = std::min(latest, d - fam.processing - inst.family(f).setup);
      }
      start = std::max(start, latest);
    }
    g.place(chosen, m, start);
  }
  return g.finish(spec, "qualification_centric");
}

SolveResult run_heuristic(HeuristicKind kind, const Instance& inst,
                          const ObjectiveSpec& spec) {
  return kind == HeuristicKind::SchedulingCentric
             ? schedule_centric(inst, spec)
             : qualification_centric(inst, spec);
}

}  // namespace ptc
