#pragma once

#include <cstddef>
#include <stdexcept>

#include "ptc/instance.hpp"
#include "ptc/solve_result.hpp"

namespace ptc {

struct OracleLimits {
  int maxJobs = 5;
  Time maxHorizon = 32;
  std::size_t maxStates = 20'000'000;  // memo entries before giving up
  // Skip sub-problems whose trivial bound (every remaining job starts no
  // earlier than now; closed windows are lost) cannot beat the best schedule
  // found so far. Off by default: the plain enumeration is the reference.
  bool trivialBoundPruning = false;
};

class LimitsExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Exhaustive exact solver for tiny instances.
//
// Walks time t = 0..T-1 and, at every t, enumerates for every idle machine
// "stay idle" or "start a job of family f". Every integer-start schedule
// corresponds to exactly one path of decisions, so the walk covers every
// machine assignment, per-machine order and start vector. Identical
// sub-problems (same time, remaining jobs, machine states and qualification
// ages) are memoized; nothing is pruned unless trivialBoundPruning is set.
//
// Returns Optimal with the best schedule under `spec`, or Infeasible. Throws
// LimitsExceeded for instances outside `limits` (or when the memo outgrows
// maxStates).
SolveResult enumerate_optimal(const Instance& inst, const ObjectiveSpec& spec,
                              const OracleLimits& limits = {});

}  // namespace ptc
