#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ptc {

using Time = std::int64_t;

// A family of identical jobs. Ids (family and machines) are 1-based, as they
// appear in instance files and reports.
struct Family {
  int id = 0;
  int jobCount = 0;
  Time processing = 0;
  Time setup = 0;
  Time threshold = 0;
  std::vector<int> qualifiedMachines;  // sorted, unique

  bool qualifiedOn(int machine) const;
  friend bool operator==(const Family&, const Family&) = default;
};

// Raised by parse_instance and Instance::validate. `path` is a JSON-pointer
// style location of the offending field ("/families/0/qualified").
class InstanceError : public std::runtime_error {
 public:
  enum class Kind { Syntax, Semantic };

  InstanceError(Kind kind, std::string path, const std::string& what);

  Kind kind() const { return kind_; }
  const std::string& path() const { return path_; }

 private:
  Kind kind_;
  std::string path_;
};

// Immutable after construction. Jobs are indexed 1..N with the jobs of family
// 1 first, then family 2, and so on.
class Instance {
 public:
  Instance(int machineCount, std::vector<Family> families);

  int machineCount() const { return machineCount_; }
  int familyCount() const { return static_cast<int>(families_.size()); }
  int jobCount() const { return jobCount_; }

  // 1-based.
  const Family& family(int id) const { return families_.at(id - 1); }
  const std::vector<Family>& families() const { return families_; }

  // First job index (1-based) of family `id`.
  int firstJob(int id) const { return firstJob_.at(id - 1); }

  // Number of (family, qualified machine) pairs, i.e. sum of |M_f|.
  int qualificationPairCount() const { return pairCount_; }

  // Makespan upper bound, sum n_f (p_f + s_f). All starts live in [0, T).
  Time horizon() const { return horizon_; }

  friend bool operator==(const Instance& a, const Instance& b) {
    return a.machineCount_ == b.machineCount_ && a.families_ == b.families_;
  }

 private:
  int machineCount_;
  std::vector<Family> families_;
  std::vector<int> firstJob_;
  int jobCount_ = 0;
  int pairCount_ = 0;
  Time horizon_ = 0;
};

enum class ObjectiveMode { WeightedSum, LexDisqThenFlow, FlowOnly };

struct ObjectiveSpec {
  ObjectiveMode mode = ObjectiveMode::FlowOnly;
  std::int64_t alpha = 1;
  std::int64_t beta = 0;

  static ObjectiveSpec flowOnly() { return {ObjectiveMode::FlowOnly, 1, 0}; }
  static ObjectiveSpec lexDisqThenFlow() {
    return {ObjectiveMode::LexDisqThenFlow, 1, 0};
  }
  // beta = 1: the flow time has priority.
  static ObjectiveSpec weightedFlowPriority() {
    return {ObjectiveMode::WeightedSum, 1, 1};
  }
  // beta = N * T: the number of disqualifications has priority.
  static ObjectiveSpec weightedDisqPriority(const Instance& inst);

  friend bool operator==(const ObjectiveSpec&, const ObjectiveSpec&) = default;
};

std::string to_string(ObjectiveMode mode);

// Parses the instance JSON format:
//   {"machines": M, "families": [{"id", "jobs", "processing", "setup",
//    "threshold", "qualified": [..]}, ...]}
Instance parse_instance(std::string_view text);
Instance load_instance(const std::string& path);

// Canonical JSON rendering; parse_instance(render_instance(i)) == i.
std::string render_instance(const Instance& inst);

Time makespan_upper_bound(const Instance& inst);
Time makespan_lower_bound(const Instance& inst);

// f(j) for a 1-based job index. Throws std::out_of_range.
int family_of(const Instance& inst, int job);

}  // namespace ptc
