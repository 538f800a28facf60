#include "ptc/search.hpp"

#include <algorithm>
#include <chrono>
#include <cstring>
#include <functional>
#include <queue>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "ptc/heuristics.hpp"

namespace ptc {

SearchModel::SearchModel(const Instance& inst)
    : inst_(inst),
      F_(inst.familyCount()),
      M_(inst.machineCount()),
      T_(inst.horizon()) {
  pairOf_.assign(static_cast<std::size_t>(F_) * M_, -1);
  familyPairs_.resize(F_ + 1);
  for (const Family& f : inst.families()) {
    for (int m : f.qualifiedMachines) {
      const int idx = static_cast<int>(pairFamily_.size());
      pairOf_[(f.id - 1) * M_ + (m - 1)] = idx;
      pairFamily_.push_back(f.id);
      pairMachine_.push_back(m);
      familyPairs_[f.id].push_back(idx);
    }
  }
}

SearchState SearchModel::root() const {
  SearchState s;
  s.frontierEnd.assign(M_ + 1, 0);
  s.lastFamily.assign(M_ + 1, 0);
  s.pairLastStart.assign(pairFamily_.size(), 0);
  s.familyLastStart.assign(F_ + 1, -1);
  s.placed.assign(F_ + 1, 0);
  return s;
}

bool SearchModel::complete(const SearchState& s) const {
  return static_cast<int>(s.assignments.size()) == inst_.jobCount();
}

int SearchModel::remaining(const SearchState& s, int family) const {
  return inst_.family(family).jobCount - s.placed[family];
}

int SearchModel::pairIndex(int family, int machine) const {
  if (family < 1 || family > F_ || machine < 1 || machine > M_) return -1;
  return pairOf_[(family - 1) * M_ + (machine - 1)];
}

Time SearchModel::deadline(const SearchState& s, int pair) const {
  return s.pairLastStart[pair] + inst_.family(pairFamily_[pair]).threshold;
}

Time SearchModel::earliestStart(const SearchState& s, int family,
                                int machine) const {
  Time e = s.frontierEnd[machine];
  const int last = s.lastFamily[machine];
  if (last != 0 && last != family) e += inst_.family(family).setup;
  if (e < s.prevStart) e = s.prevStart;
  if (e == s.prevStart && machine <= s.prevMachine) e = s.prevStart + 1;
  return e;
}

namespace {

// Availability of each machine for the remaining jobs.
std::vector<Time> releaseTimes(const SearchState& s, int machines) {
  std::vector<Time> a;
  a.reserve(machines);
  for (int m = 1; m <= machines; ++m) {
    Time r = std::max(s.frontierEnd[m], s.prevStart);
    if (r == s.prevStart && m <= s.prevMachine && s.prevMachine != 0) ++r;
    a.push_back(r);
  }
  return a;
}

}  // namespace

Time SearchModel::flow_lower_bound(const SearchState& s) const {
  std::vector<Time> durations;
  for (const Family& f : inst_.families())
    durations.insert(durations.end(), remaining(s, f.id), f.processing);
  if (durations.empty()) return s.partialFlow;
  std::sort(durations.begin(), durations.end());

  // Shortest job first onto the machine that frees up first; optimal for
  // total completion time on identical machines with availability times.
  std::priority_queue<Time, std::vector<Time>, std::greater<>> free(
      std::greater<>{}, releaseTimes(s, M_));
  Time flow = s.partialFlow;
  for (Time p : durations) {
    const Time a = free.top();
    free.pop();
    flow += a + p;
    free.push(a + p);
  }
  return flow;
}

Time SearchModel::cmax_lower_bound(const SearchState& s) const {
  Time lb = std::max(s.maxEnd, makespan_lower_bound(inst_));
  Time work = 0;
  Time longest = 0;
  for (const Family& f : inst_.families()) {
    const int r = remaining(s, f.id);
    if (r == 0) continue;
    work += r * f.processing;
    longest = std::max(longest, f.processing);
  }
  if (work == 0) return lb;

  std::vector<Time> a = releaseTimes(s, M_);
  std::sort(a.begin(), a.end());
  lb = std::max(lb, a.front() + longest);
  // Smallest C with sum_m max(0, C - a_m) >= work.
  Time prefix = 0;
  for (int k = 1; k <= M_; ++k) {
    prefix += a[k - 1];
    const Time c = (work + prefix + k - 1) / k;
    if (k == M_ || c <= a[k]) {
      lb = std::max(lb, c);
      break;
    }
  }
  return lb;
}

int SearchModel::disq_lower_bound(const SearchState& s) const {
  return disq_lower_bound(s, cmax_lower_bound(s));
}

int SearchModel::disq_lower_bound(const SearchState& s,
                                  Time cmaxLowerBound) const {
  int lost = 0;
  for (int q = 0; q < pairCount(); ++q) {
    const int f = pairFamily_[q];
    const int m = pairMachine_[q];
    const Time d = deadline(s, q);
    if (d >= cmaxLowerBound) continue;
    const Family& fam = inst_.family(f);
    const bool canStart =
        remaining(s, f) > 0 &&
        earliestStart(s, f, m) <= std::min(d, T_ - fam.processing);
    if (!canStart) ++lost;
  }
  return lost;
}

ObjectiveKey SearchModel::bound(const SearchState& s,
                                const ObjectiveSpec& spec) const {
  const Time flow = flow_lower_bound(s);
  if (spec.mode == ObjectiveMode::FlowOnly) return make_key(spec, flow, 0);
  return make_key(spec, flow, disq_lower_bound(s));
}

bool SearchModel::familyStillServable(const SearchState& s, int family,
                                      Time from) const {
  const Family& f = inst_.family(family);
  if (from + f.processing > T_) return false;
  for (int q : familyPairs_[family])
    if (deadline(s, q) >= from) return true;
  return false;
}

std::vector<Placement> SearchModel::expand(const SearchState& s,
                                           CandidateStartPolicy policy) const {
  std::vector<Placement> out;
  if (complete(s)) return out;

  std::vector<Time> deadlines;
  if (policy == CandidateStartPolicy::EarliestAndDeadlines) {
    for (int q = 0; q < pairCount(); ++q) deadlines.push_back(deadline(s, q));
    std::sort(deadlines.begin(), deadlines.end());
    deadlines.erase(std::unique(deadlines.begin(), deadlines.end()),
                    deadlines.end());
  }

  SearchState probe;  // scratch copy for the viability check
  for (const Family& fam : inst_.families()) {
    const int f = fam.id;
    if (remaining(s, f) == 0) continue;
    // Consecutive jobs of a family start at most gamma apart.
    Time familyCap = T_ - fam.processing;
    if (s.familyLastStart[f] >= 0)
      familyCap = std::min(familyCap, s.familyLastStart[f] + fam.threshold);

    for (int m : fam.qualifiedMachines) {
      const int q = pairIndex(f, m);
      const Time e = earliestStart(s, f, m);
      const Time latest = std::min(deadline(s, q), familyCap);
      if (e > latest) continue;

      auto viable = [&](Time t) {
        // Every family with jobs left must keep an open window at time t.
        for (const Family& g : inst_.families()) {
          const int left = remaining(s, g.id) - (g.id == f ? 1 : 0);
          if (left == 0) continue;
          if (t + g.processing > T_) return false;
          bool open = false;
          for (int r : familyPairs_[g.id]) {
            const Time d = r == q ? t + g.threshold : deadline(s, r);
            if (d >= t) {
              open = true;
              break;
            }
          }
          if (!open) return false;
        }
        return true;
      };

      if (policy == CandidateStartPolicy::FullGrid) {
        for (Time t = e; t <= latest; ++t)
          if (viable(t)) out.push_back({f, m, t});
      } else {
        if (viable(e)) out.push_back({f, m, e});
        for (Time d : deadlines)
          if (d > e && d <= latest && viable(d)) out.push_back({f, m, d});
      }
    }
  }
  (void)probe;
  std::sort(out.begin(), out.end(), [](const Placement& a, const Placement& b) {
    if (a.start != b.start) return a.start < b.start;
    if (a.family != b.family) return a.family < b.family;
    return a.machine < b.machine;
  });
  return out;
}

SearchState SearchModel::apply(const SearchState& s, const Placement& p) const {
  const Family& fam = inst_.family(p.family);
  SearchState c = s;
  const int job = inst_.firstJob(p.family) + c.placed[p.family];
  const Time end = p.start + fam.processing;
  c.frontierEnd[p.machine] = end;
  c.lastFamily[p.machine] = p.family;
  c.pairLastStart[pairIndex(p.family, p.machine)] = p.start;
  c.familyLastStart[p.family] = p.start;
  ++c.placed[p.family];
  c.partialFlow += end;
  c.maxEnd = std::max(c.maxEnd, end);
  c.prevStart = p.start;
  c.prevMachine = p.machine;
  c.assignments.push_back({job, p.machine, p.start});
  return c;
}

int SearchModel::final_disq(const SearchState& s) const {
  int lost = 0;
  for (int q = 0; q < pairCount(); ++q)
    if (deadline(s, q) < s.maxEnd) ++lost;
  return lost;
}

namespace {

using Clock = std::chrono::steady_clock;

class BranchAndBound {
 public:
  BranchAndBound(const Instance& inst, const ObjectiveSpec& spec,
                 const SearchConfig& cfg)
      : inst_(inst), model_(inst), spec_(spec), cfg_(cfg) {}

  SolveResult run() {
    start_ = Clock::now();
    if (cfg_.warmStart) {
      Schedule ws = *cfg_.warmStart;
      ws.normalize();
      if (!is_feasible(inst_, ws))
        throw std::invalid_argument("warm start schedule is infeasible");
      offer(ws);
    }
    if (cfg_.useHeuristics) {
      for (HeuristicKind kind :
           {HeuristicKind::SchedulingCentric, HeuristicKind::QualificationCentric}) {
        SolveResult h = run_heuristic(kind, inst_, spec_);
        if (h.schedule) offer(*h.schedule);
      }
    }

    const SearchState root = model_.root();
    const ObjectiveKey rootBound = model_.bound(root, spec_);
    dfs(root);

    SolveResult r;
    r.stats = stats_;
    r.stats.wallSeconds = elapsed();
    if (incumbent_) {
      r.schedule = incumbent_;
      r.objective = incumbentValue_;
    }
    if (!stopped_) {
      r.status = incumbent_ ? SolveStatus::Optimal : SolveStatus::Infeasible;
      if (incumbent_) r.dualBound = incumbentKey_;
    } else {
      r.status = incumbent_ ? SolveStatus::Feasible : SolveStatus::Unknown;
      r.dualBound = rootBound;
      if (incumbent_ && incumbentKey_ < rootBound) r.dualBound = incumbentKey_;
      r.message = "search stopped by limit";
    }
    return r;
  }

 private:
  double elapsed() const {
    return std::chrono::duration<double>(Clock::now() - start_).count();
  }

  void offer(const Schedule& sched) {
    const ObjectiveValue v = evaluate(inst_, sched, spec_);
    const ObjectiveKey k = key_of(v, spec_);
    if (incumbent_ && !(k < incumbentKey_)) return;
    incumbent_ = sched;
    incumbentValue_ = v;
    incumbentKey_ = k;
    stats_.incumbents.push_back({elapsed(), v});
  }

  bool limitReached() {
    if (cfg_.maxNodes != 0 && stats_.nodes >= cfg_.maxNodes) return true;
    if ((stats_.nodes & 255u) == 0 && elapsed() > cfg_.timeLimitSeconds)
      return true;
    return false;
  }

  std::string transpositionKey(const SearchState& s) const {
    std::vector<std::int32_t> k;
    k.reserve(4 + 2 * s.frontierEnd.size() + s.pairLastStart.size() +
              s.placed.size());
    k.push_back(static_cast<std::int32_t>(s.prevStart));
    k.push_back(s.prevMachine);
    for (Time e : s.frontierEnd) k.push_back(static_cast<std::int32_t>(e));
    for (int f : s.lastFamily) k.push_back(f);
    for (int q = 0; q < model_.pairCount(); ++q) {
      // A window closed before the last start is lost whatever its deadline.
      const Time d = model_.deadline(s, q);
      k.push_back(d < s.prevStart ? -1 : static_cast<std::int32_t>(d));
    }
    for (int p : s.placed) k.push_back(p);
    std::string out(k.size() * sizeof(std::int32_t), '\0');
    std::memcpy(out.data(), k.data(), out.size());
    return out;
  }

  // Same state reached before with a smaller or equal partial flow: the
  // futures are identical, so this node cannot do better.
  bool dominated(const SearchState& s) {
    std::string key = transpositionKey(s);
    auto it = seen_.find(key);
    if (it != seen_.end()) {
      if (it->second <= s.partialFlow) return true;
      it->second = s.partialFlow;
      return false;
    }
    if (seen_.size() < cfg_.transpositionEntries)
      seen_.emplace(std::move(key), s.partialFlow);
    return false;
  }

  std::uint64_t tieHash(const Placement& p) const {
    std::uint64_t h = cfg_.seed ^ 0x9e3779b97f4a7c15ULL;
    for (std::uint64_t v : {std::uint64_t(p.family), std::uint64_t(p.machine),
                            std::uint64_t(p.start)}) {
      h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
      h *= 0xbf58476d1ce4e5b9ULL;
    }
    return h;
  }

  void leaf(const SearchState& s) {
    const ObjectiveKey k = make_key(spec_, s.partialFlow, model_.final_disq(s));
    if (incumbent_ && !(k < incumbentKey_)) return;
    Schedule sched{s.assignments};
    sched.normalize();
    const ObjectiveValue v = evaluate(inst_, sched, spec_);
    if (key_of(v, spec_) != k)
      throw std::logic_error("search leaf disagrees with the validator");
    incumbent_ = std::move(sched);
    incumbentValue_ = v;
    incumbentKey_ = k;
    stats_.incumbents.push_back({elapsed(), v});
  }

  bool prunedByIncumbent(const ObjectiveKey& bound) const {
    return incumbent_ && !(bound < incumbentKey_);
  }

  void dfs(const SearchState& s) {
    if (stopped_) return;
    ++stats_.nodes;
    if (limitReached()) {
      stopped_ = true;
      return;
    }
    if (model_.complete(s)) {
      leaf(s);
      return;
    }
    if (prunedByIncumbent(model_.bound(s, spec_))) return;
    if (dominated(s)) return;

    struct Child {
      SearchState state;
      ObjectiveKey bound;
      Placement placement;
      std::uint64_t tie;
    };
    std::vector<Child> children;
    for (const Placement& p : model_.expand(s, cfg_.candidatePolicy)) {
      SearchState c = model_.apply(s, p);
      ObjectiveKey b = model_.bound(c, spec_);
      if (prunedByIncumbent(b)) continue;
      children.push_back({std::move(c), b, p, cfg_.seed ? tieHash(p) : 0});
    }
    if (cfg_.childOrder == ChildOrder::BestBound) {
      std::stable_sort(children.begin(), children.end(),
                       [](const Child& a, const Child& b) {
                         if (a.bound != b.bound) return a.bound < b.bound;
                         return a.tie < b.tie;
                       });
    }
    for (const Child& c : children) {
      if (stopped_) return;
      if (prunedByIncumbent(c.bound)) continue;
      dfs(c.state);
    }
  }

  const Instance& inst_;
  SearchModel model_;
  ObjectiveSpec spec_;
  SearchConfig cfg_;
  Clock::time_point start_;
  SearchStats stats_;
  bool stopped_ = false;
  std::optional<Schedule> incumbent_;
  ObjectiveValue incumbentValue_;
  ObjectiveKey incumbentKey_;
  std::unordered_map<std::string, Time> seen_;
};

}  // namespace

SolveResult solve(const Instance& inst, const ObjectiveSpec& spec,
                  const SearchConfig& cfg) {
  return BranchAndBound(inst, spec, cfg).run();
}

}  // namespace ptc
