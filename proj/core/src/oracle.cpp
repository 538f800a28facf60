#include "ptc/oracle.hpp"

#include <algorithm>
#include <chrono>
#include <cstring>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace ptc {

namespace {

struct Entry {
  enum Kind { Exact, Infeasible, AtLeast } kind = Infeasible;
  ObjectiveKey key;
};

using Budget = std::optional<ObjectiveKey>;

// Keys add and subtract componentwise; both orders in use (scalar and
// lexicographic) are invariant under translation.
ObjectiveKey operator+(ObjectiveKey a, ObjectiveKey b) {
  return {a.primary + b.primary, a.secondary + b.secondary};
}
ObjectiveKey operator-(ObjectiveKey a, ObjectiveKey b) {
  return {a.primary - b.primary, a.secondary - b.secondary};
}

// State layout (int16 each): t, rem[F], rel[M], last[M], age[P].
//   rel[m]  = end of the last job on m minus t, clamped below at -maxSetup
//   last[m] = family index + 1 of the last job on m, 0 when m is unused
//   age[p]  = t minus the last start of the pair (virtual start at 0),
//             clamped at gamma + 1 which marks the pair as lost
class Enumerator {
 public:
  Enumerator(const Instance& inst, const ObjectiveSpec& spec,
             const OracleLimits& limits)
      : inst_(inst), spec_(spec), limits_(limits) {
    F_ = inst.familyCount();
    M_ = inst.machineCount();
    T_ = inst.horizon();
    pairOf_.assign(F_ * M_, -1);
    for (int f = 0; f < F_; ++f) {
      const Family& fam = inst.family(f + 1);
      maxSetup_ = std::max<Time>(maxSetup_, fam.setup);
      for (int m : fam.qualifiedMachines) {
        pairOf_[f * M_ + (m - 1)] = static_cast<int>(pairFamily_.size());
        pairFamily_.push_back(f);
        pairMachine_.push_back(m - 1);
      }
    }
    P_ = static_cast<int>(pairFamily_.size());
  }

  Entry solveRoot() { return search(root(), std::nullopt); }

  // Follows optimal decisions from the root; `optimum` is the root value.
  Schedule reconstruct(ObjectiveKey optimum) {
    std::vector<std::vector<std::pair<Time, int>>> placements(F_);
    std::vector<std::int16_t> state = root();
    ObjectiveKey target = optimum;
    while (true) {
      bool advanced = false;
      bool finished = false;
      std::vector<std::int16_t> next;
      ObjectiveKey nextTarget;
      const Time t = state[0];
      forEachDecision(state, [&](const std::vector<int>& choice,
                                 const Transition& tr) {
        if (advanced || tr.dead) return;
        if (tr.terminal) {
          if (tr.cost != target) return;
        } else {
          const ObjectiveKey rest = target - tr.cost;
          // No child beats `rest`, so a budget of rest + 1 settles equality.
          Entry e = search(tr.next, ObjectiveKey{rest.primary, rest.secondary + 1});
          if (e.kind != Entry::Exact || e.key != rest) return;
          nextTarget = rest;
        }
        for (int m = 0; m < M_; ++m)
          if (choice[m] >= 0) placements[choice[m]].push_back({t, m});
        advanced = true;
        finished = tr.terminal;
        next = tr.next;
      });
      if (!advanced) throw std::logic_error("oracle reconstruction failed");
      if (finished) break;
      state = std::move(next);
      target = nextTarget;
    }
    Schedule s;
    for (int f = 0; f < F_; ++f) {
      auto& pl = placements[f];
      std::sort(pl.begin(), pl.end());
      int job = inst_.firstJob(f + 1);
      for (const auto& [t, m] : pl) s.assignments.push_back({job++, m + 1, t});
    }
    s.normalize();
    return s;
  }

  std::size_t states() const { return memo_.size(); }

 private:
  struct Transition {
    bool terminal = false;
    bool dead = false;
    ObjectiveKey cost;
    std::vector<std::int16_t> next;
  };

  std::vector<std::int16_t> root() const {
    std::vector<std::int16_t> s(1 + F_ + 2 * M_ + P_, 0);
    for (int f = 0; f < F_; ++f)
      s[1 + f] = static_cast<std::int16_t>(inst_.family(f + 1).jobCount);
    for (int m = 0; m < M_; ++m)
      s[1 + F_ + m] = static_cast<std::int16_t>(-maxSetup_);
    return s;
  }

  int remIdx(int f) const { return 1 + f; }
  int relIdx(int m) const { return 1 + F_ + m; }
  int lastIdx(int m) const { return 1 + F_ + M_ + m; }
  int ageIdx(int p) const { return 1 + F_ + 2 * M_ + p; }

  static std::string encode(const std::vector<std::int16_t>& s) {
    std::string key(s.size() * sizeof(std::int16_t), '\0');
    std::memcpy(key.data(), s.data(), key.size());
    return key;
  }

  // Calls fn(choice, transition) for every combination of per-machine
  // decisions at the state's time. choice[m] is a family index or -1 (idle).
  template <class Fn>
  void forEachDecision(const std::vector<std::int16_t>& state, Fn&& fn) {
    std::vector<int> choice(M_, -1);
    std::vector<std::int16_t> rem(state.begin() + 1, state.begin() + 1 + F_);
    chooseMachine(state, 0, choice, rem, fn);
  }

  template <class Fn>
  void chooseMachine(const std::vector<std::int16_t>& state, int m,
                     std::vector<int>& choice, std::vector<std::int16_t>& rem,
                     Fn& fn) {
    if (m == M_) {
      fn(choice, buildTransition(state, choice, rem));
      return;
    }
    const Time t = state[0];
    const int rel = state[relIdx(m)];
    const int last = state[lastIdx(m)];
    if (rel <= 0) {
      for (int f = 0; f < F_; ++f) {
        if (rem[f] == 0) continue;
        const int p = pairOf_[f * M_ + m];
        if (p < 0) continue;
        const Family& fam = inst_.family(f + 1);
        if (state[ageIdx(p)] > fam.threshold) continue;
        if (last != 0 && last != f + 1 && -rel < fam.setup) continue;
        if (t + fam.processing > T_) continue;
        choice[m] = f;
        --rem[f];
        chooseMachine(state, m + 1, choice, rem, fn);
        ++rem[f];
      }
    }
    choice[m] = -1;
    chooseMachine(state, m + 1, choice, rem, fn);
  }

  Transition buildTransition(const std::vector<std::int16_t>& state,
                             const std::vector<int>& choice,
                             const std::vector<std::int16_t>& rem) const {
    Transition tr;
    const Time t = state[0];
    Time flow = 0;
    std::vector<int> rel(M_);
    std::vector<bool> startedPair(P_, false);
    for (int m = 0; m < M_; ++m) {
      rel[m] = state[relIdx(m)];
      if (choice[m] >= 0) {
        const Family& fam = inst_.family(choice[m] + 1);
        flow += t + fam.processing;
        rel[m] = static_cast<int>(fam.processing);
        startedPair[pairOf_[choice[m] * M_ + m]] = true;
      }
    }
    const bool done =
        std::all_of(rem.begin(), rem.end(), [](std::int16_t r) { return r == 0; });
    if (done) {
      // The last job started now, so cmax = t + max remaining busy time.
      int cmaxRel = 0;
      for (int m = 0; m < M_; ++m) cmaxRel = std::max(cmaxRel, rel[m]);
      std::int64_t disq = 0;
      for (int p = 0; p < P_; ++p) {
        const Time gamma = inst_.family(pairFamily_[p] + 1).threshold;
        const Time age = startedPair[p] ? 0 : state[ageIdx(p)];
        if (gamma - age < cmaxRel) ++disq;  // last start + gamma < cmax
      }
      tr.terminal = true;
      tr.cost = make_key(spec_, flow, disq);
      return tr;
    }
    tr.cost = make_key(spec_, flow, 0);
    if (t + 1 >= T_) {
      tr.dead = true;
      return tr;
    }
    tr.next = state;
    tr.next[0] = static_cast<std::int16_t>(t + 1);
    for (int f = 0; f < F_; ++f) tr.next[remIdx(f)] = rem[f];
    for (int m = 0; m < M_; ++m) {
      tr.next[relIdx(m)] =
          static_cast<std::int16_t>(std::max<int>(rel[m] - 1, -maxSetup_));
      if (choice[m] >= 0)
        tr.next[lastIdx(m)] = static_cast<std::int16_t>(choice[m] + 1);
    }
    for (int p = 0; p < P_; ++p) {
      const Time gamma = inst_.family(pairFamily_[p] + 1).threshold;
      const Time age = startedPair[p] ? 0 : state[ageIdx(p)];
      tr.next[ageIdx(p)] = static_cast<std::int16_t>(std::min(age + 1, gamma + 1));
    }
    // A family with jobs left and every pair lost can never finish.
    for (int f = 0; f < F_; ++f) {
      if (rem[f] == 0) continue;
      bool open = false;
      for (int p = 0; p < P_; ++p)
        if (pairFamily_[p] == f &&
            tr.next[ageIdx(p)] <= inst_.family(f + 1).threshold)
          open = true;
      if (!open) tr.dead = true;
    }
    return tr;
  }

  // Admissible: every remaining job starts at t or later, and a pair whose
  // window already closed is lost because cmax > t.
  ObjectiveKey trivialBound(const std::vector<std::int16_t>& state) const {
    const Time t = state[0];
    Time flow = 0;
    for (int f = 0; f < F_; ++f)
      flow += state[remIdx(f)] * (t + inst_.family(f + 1).processing);
    std::int64_t lost = 0;
    for (int p = 0; p < P_; ++p)
      if (state[ageIdx(p)] > inst_.family(pairFamily_[p] + 1).threshold) ++lost;
    return make_key(spec_, flow, lost);
  }

  // Exact value of the sub-problem when it is below `budget` (or when no
  // budget is given); otherwise a lower bound >= budget.
  Entry search(const std::vector<std::int16_t>& state, Budget budget) {
    if (!limits_.trivialBoundPruning) budget.reset();
    std::string key = encode(state);
    auto it = memo_.find(key);
    if (it != memo_.end()) {
      const Entry& e = it->second;
      if (e.kind != Entry::AtLeast) return e;
      if (budget && e.key >= *budget) return e;
    }
    if (budget) {
      const ObjectiveKey lb = trivialBound(state);
      if (lb >= *budget) return store(std::move(key), {Entry::AtLeast, lb});
    }

    std::optional<ObjectiveKey> best;
    bool cut = false;
    forEachDecision(state, [&](const std::vector<int>&, const Transition& tr) {
      if (tr.dead) return;
      Budget cap = budget;
      if (best && (!cap || *best < *cap)) cap = best;
      if (cap && tr.cost >= *cap) {
        cut = true;
        return;
      }
      ObjectiveKey value = tr.cost;
      if (!tr.terminal) {
        Budget childBudget;
        if (cap) childBudget = *cap - tr.cost;
        const Entry e = search(tr.next, childBudget);
        if (e.kind == Entry::Infeasible) return;
        if (e.kind == Entry::AtLeast) {
          cut = true;
          return;
        }
        value = tr.cost + e.key;
      }
      if (!best || value < *best) best = value;
    });

    if (best && (!budget || *best < *budget))
      return store(std::move(key), {Entry::Exact, *best});
    if (!best && !cut) return store(std::move(key), {Entry::Infeasible, {}});
    return store(std::move(key), {Entry::AtLeast, *budget});
  }

  Entry store(std::string key, Entry e) {
    if (memo_.size() >= limits_.maxStates)
      throw LimitsExceeded("oracle state ceiling of " +
                           std::to_string(limits_.maxStates) + " reached");
    memo_[std::move(key)] = e;
    return e;
  }

  const Instance& inst_;
  ObjectiveSpec spec_;
  OracleLimits limits_;
  int F_ = 0, M_ = 0, P_ = 0;
  Time T_ = 0;
  Time maxSetup_ = 0;
  std::vector<int> pairOf_;
  std::vector<int> pairFamily_;
  std::vector<int> pairMachine_;
  std::unordered_map<std::string, Entry> memo_;
};

}  // namespace

SolveResult enumerate_optimal(const Instance& inst, const ObjectiveSpec& spec,
                              const OracleLimits& limits) {
  if (inst.jobCount() > limits.maxJobs)
    throw LimitsExceeded("oracle refuses " + std::to_string(inst.jobCount()) +
                         " jobs (limit " + std::to_string(limits.maxJobs) + ")");
  if (inst.horizon() > limits.maxHorizon)
    throw LimitsExceeded("oracle refuses horizon " +
                         std::to_string(inst.horizon()) + " (limit " +
                         std::to_string(limits.maxHorizon) + ")");
  if (inst.horizon() > 30000)
    throw LimitsExceeded("oracle state encoding limited to horizons <= 30000");

  const auto start = std::chrono::steady_clock::now();
  Enumerator en(inst, spec, limits);
  const Entry best = en.solveRoot();

  SolveResult r;
  if (best.kind == Entry::Infeasible) {
    r.status = SolveStatus::Infeasible;
  } else {
    Schedule s = en.reconstruct(best.key);
    ObjectiveValue v = evaluate(inst, s, spec);
    if (key_of(v, spec) != best.key)
      throw std::logic_error("oracle schedule does not reproduce its optimum");
    r.status = SolveStatus::Optimal;
    r.schedule = std::move(s);
    r.objective = v;
    r.dualBound = best.key;
  }
  r.stats.nodes = en.states();
  r.stats.wallSeconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (r.objective) r.stats.incumbents.push_back({r.stats.wallSeconds, *r.objective});
  return r;
}

}  // namespace ptc
