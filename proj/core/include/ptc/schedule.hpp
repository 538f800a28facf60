#pragma once

#include <compare>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ptc/instance.hpp"

namespace ptc {

struct Assignment {
  int job = 0;      // 1-based
  int machine = 0;  // 1-based
  Time start = 0;

  friend bool operator==(const Assignment&, const Assignment&) = default;
};

// One assignment per job; `assignments[j-1]` holds job j once normalized.
struct Schedule {
  std::vector<Assignment> assignments;

  // Sorts by job index. Does not check coverage.
  void normalize();
  friend bool operator==(const Schedule&, const Schedule&) = default;
};

// Thrown when a schedule is structurally broken (missing or duplicate job,
// job index out of range) or when an operation requires a feasible schedule.
class ScheduleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Violation {
  enum class Kind {
    NotQualified,     // machine outside M_f(job)
    BadStart,         // start < 0
    BeyondHorizon,    // start + p > T
    Overlap,          // next start before previous end (+ setup)
    QualificationGap  // start-to-start gap on (f, m) larger than gamma_f
  };

  Kind kind;
  int job = 0;           // offending job
  int otherJob = 0;      // previous job on the machine / of the pair, 0 if none
  int family = 0;
  int machine = 0;
  Time time = 0;         // offending start
  Time limit = 0;        // earliest allowed (Overlap) or latest allowed start

  std::string describe() const;
};

std::string to_string(Violation::Kind kind);

struct PairStatus {
  int family = 0;
  int machine = 0;
  bool lost = false;
  Time at = 0;  // loss instant when lost
};

struct DisqualificationReport {
  std::vector<PairStatus> entries;  // ordered by (family, machine)
  int disqCount = 0;
  int qualifiedCount = 0;

  std::vector<PairStatus> lost() const;
};

struct ObjectiveValue {
  Time flowTime = 0;
  Time cmax = 0;
  int disqCount = 0;
  int qualifiedCount = 0;
  std::int64_t weighted = 0;  // alpha * flow + beta * disq (WeightedSum only)
  ObjectiveSpec spec;         // the spec this value was evaluated under

  friend bool operator==(const ObjectiveValue&, const ObjectiveValue&) = default;
};

// Totally ordered image of an ObjectiveValue (or a bound) under a spec.
// Smaller is better. Lexicographic mode uses (disq, flow); the other modes
// put their scalar in `primary` and leave `secondary` at zero.
struct ObjectiveKey {
  std::int64_t primary = 0;
  std::int64_t secondary = 0;

  auto operator<=>(const ObjectiveKey&) const = default;
};

ObjectiveKey make_key(const ObjectiveSpec& spec, std::int64_t flow,
                      std::int64_t disq);
ObjectiveKey key_of(const ObjectiveValue& value, const ObjectiveSpec& spec);

// Returns the list of violations; empty means feasible. Throws ScheduleError
// on structural problems.
std::vector<Violation> check_feasibility(const Instance& inst,
                                         const Schedule& sched);
bool is_feasible(const Instance& inst, const Schedule& sched);

struct MakespanFlow {
  Time cmax = 0;
  Time flowTime = 0;
};
MakespanFlow compute_makespan_flow(const Instance& inst, const Schedule& sched);

DisqualificationReport compute_disqualifications(const Instance& inst,
                                                 const Schedule& sched);

ObjectiveValue evaluate(const Instance& inst, const Schedule& sched,
                        const ObjectiveSpec& spec);

// "less" means `a` is better. Throws std::invalid_argument when either value
// was evaluated under a different spec.
std::strong_ordering compare(const ObjectiveValue& a, const ObjectiveValue& b,
                             const ObjectiveSpec& spec);

// Solution file: {"assignments": [{"job", "machine", "start"}, ...]}
Schedule parse_schedule(std::string_view text);
Schedule load_schedule(const std::string& path);
std::string render_schedule(const Schedule& sched);

// Evaluation report JSON (feasible, violations, cmax, flow, disqualified,
// objective).
std::string render_evaluation(const Instance& inst, const Schedule& sched,
                              const ObjectiveSpec& spec);

}  // namespace ptc
