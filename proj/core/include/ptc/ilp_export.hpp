#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "ptc/instance.hpp"
#include "ptc/schedule.hpp"

namespace ptc {

// Sizes of the time-indexed model IP3. The bound figures are the closed
// forms F*M*(2T+1) and 2F + T*M*(4F+F^2); the emitted figures count what
// export_ip3 actually writes (x only for t <= T-p_f, pairs with m in M_f).
struct IlpModelSummary {
  int families = 0;
  int machines = 0;
  Time horizon = 0;
  std::int64_t boundVariables = 0;
  std::int64_t boundConstraints = 0;
  std::int64_t emittedBinaries = 0;    // x, y and Y
  std::int64_t emittedContinuous = 0;  // C_f
  std::int64_t emittedConstraints = 0;
  std::int64_t alpha = 1;
  std::int64_t beta = 1;

  std::int64_t emittedVariables() const {
    return emittedBinaries + emittedContinuous;
  }
};

enum class RowSense { LessEqual, GreaterEqual, Equal };

struct IlpTerm {
  int var = 0;
  std::int64_t coef = 0;
};

// sum(coef_i / denominator * v_i) <sense> rhs. Only eq (8) uses a
// denominator other than 1, which keeps every coefficient exact.
struct IlpRow {
  std::string name;
  int equation = 0;  // 2..8
  std::vector<IlpTerm> terms;
  RowSense sense = RowSense::LessEqual;
  std::int64_t rhs = 0;
  std::int64_t denominator = 1;
};

struct IlpVariable {
  std::string name;
  bool binary = true;
};

// Variable indices of one (family, machine) pair; x[t] is -1 for t > T-p_f.
struct IlpPair {
  int family = 0;
  int machine = 0;
  std::vector<int> x;
  std::vector<int> y;
  int disq = -1;  // Y_f^m
};

struct IlpModel {
  std::vector<IlpVariable> variables;
  std::vector<IlpPair> pairs;
  std::vector<int> completion;  // C_f by family id (index 0 unused)
  std::vector<IlpTerm> objective;
  std::vector<IlpRow> rows;
  IlpModelSummary summary;

  int index(const std::string& name) const;  // -1 when absent
};

struct IlpLimits {
  Time maxHorizon = 5000;
};

class IlpTooLarge : public std::runtime_error {
 public:
  explicit IlpTooLarge(Time horizon);
  Time horizon;
};

// Builds IP3 under a weighted-sum spec (alpha, beta). Throws
// std::invalid_argument for other objective modes and IlpTooLarge when T
// exceeds the cap.
IlpModel build_ip3(const Instance& inst, const ObjectiveSpec& spec,
                   const IlpLimits& limits = {});

// CPLEX LP text: Minimize / Subject To / Bounds / Binaries / End. The eq (8)
// coefficient 1/(M(T-t)) is printed with 17 significant digits.
std::string render_lp(const IlpModel& model);

std::string export_ip3(const Instance& inst, const ObjectiveSpec& spec,
                       const IlpLimits& limits = {});

// Counts without building the rows; alpha/beta are left at 1.
IlpModelSummary model_counts(const Instance& inst);

// Substitutes a schedule into the model: x from the starts, y and Y at the
// smallest values the rows allow, C_f at its eq (3) sum. Rows are checked
// exactly.
struct ReplayResult {
  bool satisfied = true;
  std::vector<std::string> violated;  // row names, or "x:<reason>"
  std::vector<PairStatus> implied;    // Y per (family, machine) pair
  int impliedDisq = 0;                // sum of Y
  std::int64_t objective = 0;         // alpha * sum C + beta * sum Y
};

ReplayResult replay_ip3(const IlpModel& model, const Instance& inst,
                        const Schedule& sched);

}  // namespace ptc
