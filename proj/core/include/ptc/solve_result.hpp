#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ptc/schedule.hpp"

namespace ptc {

enum class SolveStatus { Optimal, Feasible, Infeasible, Unknown };

std::string to_string(SolveStatus status);

struct Incumbent {
  double seconds = 0.0;
  ObjectiveValue objective;
};

struct SearchStats {
  std::uint64_t nodes = 0;
  double wallSeconds = 0.0;
  std::vector<Incumbent> incumbents;
};

// Common result of every solver (heuristics, exact search, oracle).
// Optimal implies objective == dualBound; any schedule present is feasible.
struct SolveResult {
  SolveStatus status = SolveStatus::Unknown;
  std::optional<Schedule> schedule;
  std::optional<ObjectiveValue> objective;
  std::optional<ObjectiveKey> dualBound;
  SearchStats stats;
  std::string message;  // failure reason, if any

  bool hasSolution() const { return schedule.has_value(); }
};

// SolveResult as JSON: status, nodes, wall_time, dual_bound, objective,
// incumbents [{t, objective}], assignments.
std::string render_result(const SolveResult& result, const ObjectiveSpec& spec);

}  // namespace ptc
