#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ptc/instance.hpp"
#include "ptc/schedule.hpp"
#include "ptc/solve_result.hpp"

namespace ptc {

enum class CandidateStartPolicy {
  // Every integer start in [earliest, latest]. Complete.
  FullGrid,
  // The earliest start plus every active qualification deadline in range.
  EarliestAndDeadlines,
};

enum class ChildOrder {
  BestBound,      // children sorted by their bound, then (start, family, machine)
  Chronological,  // (start, family, machine)
};

struct SearchConfig {
  double timeLimitSeconds = 30.0;
  std::optional<Schedule> warmStart;
  bool useHeuristics = true;  // seed the incumbent with both heuristics
  CandidateStartPolicy candidatePolicy = CandidateStartPolicy::FullGrid;
  ChildOrder childOrder = ChildOrder::BestBound;
  std::uint64_t seed = 0;  // non-zero: seeded tie-breaking among equal bounds
  std::uint64_t maxNodes = 0;  // 0 = unlimited
  std::size_t transpositionEntries = 1u << 22;
};

// Presets for the two time limits used in benchmark campaigns.
inline constexpr double kShortTimeLimit = 30.0;
inline constexpr double kLongTimeLimit = 600.0;

// A partial schedule built in chronological order: every new job starts no
// earlier than the previous placement (ties broken by increasing machine),
// and the jobs of a family are placed in index order.
struct SearchState {
  Time prevStart = 0;
  int prevMachine = 0;                // 1-based; 0 at the root
  std::vector<Time> frontierEnd;      // per machine, end of its last job
  std::vector<int> lastFamily;        // per machine, 0 when unused
  std::vector<Time> pairLastStart;    // per qualification pair, virtual 0
  std::vector<Time> familyLastStart;  // per family, -1 when none placed
  std::vector<int> placed;            // per family
  Time partialFlow = 0;
  Time maxEnd = 0;
  std::vector<Assignment> assignments;
};

struct Placement {
  int family = 0;   // 1-based
  int machine = 0;  // 1-based
  Time start = 0;

  friend bool operator==(const Placement&, const Placement&) = default;
};

// Stateless view of an instance for the search: state construction,
// bounds and child generation.
class SearchModel {
 public:
  explicit SearchModel(const Instance& inst);

  const Instance& instance() const { return inst_; }

  SearchState root() const;
  bool complete(const SearchState& s) const;
  int remaining(const SearchState& s, int family) const;

  // Index of pair (family, machine), or -1 when machine is not in M_f.
  int pairIndex(int family, int machine) const;
  int pairCount() const { return static_cast<int>(pairFamily_.size()); }
  int pairFamily(int pair) const { return pairFamily_[pair]; }
  int pairMachine(int pair) const { return pairMachine_[pair]; }

  // Qualification deadline of a pair: last start + gamma.
  Time deadline(const SearchState& s, int pair) const;

  // Earliest start for the next job of `family` on `machine`, ignoring the
  // qualification window.
  Time earliestStart(const SearchState& s, int family, int machine) const;

  // Partial flow plus the optimal total completion time of the remaining
  // jobs on M machines released at max(frontier, previous start), ignoring
  // setups, qualification sets and windows (SPT list scheduling).
  Time flow_lower_bound(const SearchState& s) const;

  // Lower bound on the final makespan.
  Time cmax_lower_bound(const SearchState& s) const;

  // Pairs certainly lost in every completion: no further start of the family
  // can happen on the machine and the deadline falls before the makespan
  // bound.
  int disq_lower_bound(const SearchState& s) const;
  int disq_lower_bound(const SearchState& s, Time cmaxLowerBound) const;

  ObjectiveKey bound(const SearchState& s, const ObjectiveSpec& spec) const;

  // Placements allowed from `s`, in (start, family, machine) order.
  std::vector<Placement> expand(const SearchState& s,
                                CandidateStartPolicy policy =
                                    CandidateStartPolicy::FullGrid) const;
  SearchState apply(const SearchState& s, const Placement& p) const;

  // Disqualification count of a complete state.
  int final_disq(const SearchState& s) const;

 private:
  bool familyStillServable(const SearchState& s, int family, Time from) const;

  Instance inst_;
  int F_ = 0;
  int M_ = 0;
  Time T_ = 0;
  std::vector<int> pairOf_;  // F x M
  std::vector<int> pairFamily_;
  std::vector<int> pairMachine_;
  std::vector<std::vector<int>> familyPairs_;
};

// Exact branch-and-bound. Anytime: returns the best incumbent found when the
// time limit (or node limit) stops the search; Optimal / Infeasible only
// after the tree is exhausted.
SolveResult solve(const Instance& inst, const ObjectiveSpec& spec,
                  const SearchConfig& cfg = {});

}  // namespace ptc
