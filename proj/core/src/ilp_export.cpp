#include "ptc/ilp_export.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace ptc {

IlpTooLarge::IlpTooLarge(Time t)
    : std::runtime_error("horizon T=" + std::to_string(t) +
                         " exceeds the time-indexed export cap"),
      horizon(t) {}

int IlpModel::index(const std::string& name) const {
  for (std::size_t i = 0; i < variables.size(); ++i)
    if (variables[i].name == name) return static_cast<int>(i);
  return -1;
}

IlpModelSummary model_counts(const Instance& inst) {
  IlpModelSummary s;
  const std::int64_t F = inst.familyCount();
  const std::int64_t M = inst.machineCount();
  const Time T = inst.horizon();
  s.families = static_cast<int>(F);
  s.machines = static_cast<int>(M);
  s.horizon = T;
  s.boundVariables = F * M * (2 * T + 1);
  s.boundConstraints = 2 * F + T * M * (4 * F + F * F);

  std::int64_t rows = 2 * F;
  for (const Family& f : inst.families()) {
    for (int m : f.qualifiedMachines) {
      s.emittedBinaries += (T - f.processing + 1) + T + 1;
      rows += T;                                        // (5)
      rows += std::max<Time>(0, T - f.threshold);       // (6)
      rows += 2 * (T - 1);                              // (7), (8)
      for (const Family& g : inst.families())           // (4)
        if (g.id != f.id && g.qualifiedOn(m)) rows += T - g.processing + 1;
    }
  }
  s.emittedContinuous = F;
  s.emittedConstraints = rows;
  return s;
}

IlpModel build_ip3(const Instance& inst, const ObjectiveSpec& spec,
                   const IlpLimits& limits) {
  if (spec.mode != ObjectiveMode::WeightedSum)
    throw std::invalid_argument("IP3 export needs a weighted-sum objective");
  const Time T = inst.horizon();
  if (T > limits.maxHorizon) throw IlpTooLarge(T);

  IlpModel model;
  model.summary = model_counts(inst);
  model.summary.alpha = spec.alpha;
  model.summary.beta = spec.beta;
  auto addVar = [&](std::string name, bool binary) {
    model.variables.push_back({std::move(name), binary});
    return static_cast<int>(model.variables.size() - 1);
  };

  std::vector<std::vector<int>> pairAt(inst.familyCount() + 1,
                                       std::vector<int>(inst.machineCount() + 1, -1));
  for (const Family& f : inst.families()) {
    for (int m : f.qualifiedMachines) {
      IlpPair pr;
      pr.family = f.id;
      pr.machine = m;
      const std::string tag = "_f" + std::to_string(f.id) + "_m" + std::to_string(m);
      pr.x.assign(T, -1);
      for (Time t = 0; t <= T - f.processing; ++t)
        pr.x[t] = addVar("x" + tag + "_t" + std::to_string(t), true);
      for (Time t = 0; t < T; ++t)
        pr.y.push_back(addVar("y" + tag + "_t" + std::to_string(t), true));
      pr.disq = addVar("Y" + tag, true);
      pairAt[f.id][m] = static_cast<int>(model.pairs.size());
      model.pairs.push_back(std::move(pr));
    }
  }
  model.completion.assign(inst.familyCount() + 1, -1);
  for (const Family& f : inst.families())
    model.completion[f.id] = addVar("C_f" + std::to_string(f.id), false);

  // (1)
  for (const Family& f : inst.families())
    model.objective.push_back({model.completion[f.id], spec.alpha});
  for (const IlpPair& pr : model.pairs)
    model.objective.push_back({pr.disq, spec.beta});

  auto xRange = [&](const IlpPair& pr, Time from, Time to, std::int64_t coef,
                    std::vector<IlpTerm>& out) {
    from = std::max<Time>(from, 0);
    to = std::min<Time>(to, T - 1);
    for (Time t = from; t <= to; ++t)
      if (pr.x[t] >= 0) out.push_back({pr.x[t], coef});
  };
  const std::string sep = "_";

  // (2), (3)
  for (const Family& f : inst.families()) {
    IlpRow jobs{"nf_f" + std::to_string(f.id), 2, {}, RowSense::Equal, f.jobCount};
    IlpRow comp{"cf_f" + std::to_string(f.id), 3, {}, RowSense::LessEqual, 0};
    for (int m : f.qualifiedMachines) {
      const IlpPair& pr = model.pairs[pairAt[f.id][m]];
      for (Time t = 0; t <= T - f.processing; ++t) {
        jobs.terms.push_back({pr.x[t], 1});
        comp.terms.push_back({pr.x[t], t + f.processing});
      }
    }
    comp.terms.push_back({model.completion[f.id], -1});
    model.rows.push_back(std::move(jobs));
    model.rows.push_back(std::move(comp));
  }

  for (const IlpPair& pr : model.pairs) {
    const Family& f = inst.family(pr.family);
    const std::string tag = "_f" + std::to_string(f.id) + "_m" + std::to_string(pr.machine);
    const int m = pr.machine;

    // (4) for every other family g sharing m: a start of g at t excludes
    // starts of f in [t - p_f - s_g + 1, t].
    for (const Family& g : inst.families()) {
      if (g.id == f.id || !g.qualifiedOn(m)) continue;
      const IlpPair& pg = model.pairs[pairAt[g.id][m]];
      for (Time t = 0; t <= T - g.processing; ++t) {
        IlpRow r{"ov" + tag + "_g" + std::to_string(g.id) + "_t" + std::to_string(t),
                 4, {}, RowSense::LessEqual, f.jobCount};
        r.terms.push_back({pg.x[t], f.jobCount});
        xRange(pr, t - f.processing - g.setup + 1, t, 1, r.terms);
        model.rows.push_back(std::move(r));
      }
    }
    // (5)
    for (Time t = 0; t < T; ++t) {
      IlpRow r{"oq" + tag + sep + "t" + std::to_string(t), 5, {}, RowSense::LessEqual, 1};
      r.terms.push_back({pr.y[t], 1});
      xRange(pr, t - f.processing + 1, t, 1, r.terms);
      model.rows.push_back(std::move(r));
    }
    // (6)
    for (Time t = f.threshold; t < T; ++t) {
      IlpRow r{"dq" + tag + sep + "t" + std::to_string(t), 6, {}, RowSense::GreaterEqual, 1};
      r.terms.push_back({pr.y[t], 1});
      xRange(pr, t - f.threshold + 1, t, 1, r.terms);
      model.rows.push_back(std::move(r));
    }
    // (7)
    for (Time t = 1; t < T; ++t) {
      IlpRow r{"md" + tag + sep + "t" + std::to_string(t), 7,
               {{pr.y[t - 1], 1}, {pr.y[t], -1}}, RowSense::LessEqual, 0};
      model.rows.push_back(std::move(r));
    }
    // (8), scaled by D = M(T-t): sum x + D y_{t-1} - D Y <= D.
    for (Time t = 1; t < T; ++t) {
      const std::int64_t D = static_cast<std::int64_t>(inst.machineCount()) * (T - t);
      IlpRow r{"ad" + tag + sep + "t" + std::to_string(t), 8, {}, RowSense::LessEqual, 1};
      r.denominator = D;
      for (const IlpPair& other : model.pairs)
        xRange(other, t - inst.family(other.family).processing, T - 1, 1, r.terms);
      r.terms.push_back({pr.y[t - 1], D});
      r.terms.push_back({pr.disq, -D});
      model.rows.push_back(std::move(r));
    }
  }
  return model;
}

namespace {

std::string coefficientText(std::int64_t num, std::int64_t den) {
  if (num % den == 0) return std::to_string(num / den);
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", static_cast<double>(num) / den);
  return buf;
}

// Writes " + c name" terms, wrapping before lines get long.
class LineWriter {
 public:
  explicit LineWriter(std::ostringstream& out) : out_(out) {}

  void start(const std::string& head) {
    out_ << ' ' << head;
    col_ = head.size() + 1;
  }
  void term(std::int64_t num, std::int64_t den, const std::string& name,
            bool first) {
    std::string piece;
    const bool negative = num < 0;
    const std::int64_t mag = negative ? -num : num;
    if (!first || negative) piece += negative ? "- " : "+ ";
    if (mag != den) piece += coefficientText(mag, den) + ' ';
    piece += name;
    emit(piece);
  }
  void emit(const std::string& piece) {
    if (col_ + piece.size() + 1 > kWidth) {
      out_ << "\n   ";
      col_ = 3;
    }
    out_ << ' ' << piece;
    col_ += piece.size() + 1;
  }
  void end() {
    out_ << '\n';
    col_ = 0;
  }

 private:
  static constexpr std::size_t kWidth = 200;
  std::ostringstream& out_;
  std::size_t col_ = 0;
};

}  // namespace

std::string render_lp(const IlpModel& model) {
  std::ostringstream out;
  LineWriter w(out);
  const IlpModelSummary& s = model.summary;
  out << "\\ IP3 time-indexed model: F=" << s.families << " M=" << s.machines
      << " T=" << s.horizon << " alpha=" << s.alpha << " beta=" << s.beta << '\n';
  out << "\\ variables " << s.emittedVariables() << " (bound " << s.boundVariables
      << "), constraints " << s.emittedConstraints << " (bound "
      << s.boundConstraints << ")\n";

  out << "Minimize\n";
  w.start("obj:");
  bool first = true;
  for (const IlpTerm& t : model.objective) {
    w.term(t.coef, 1, model.variables[t.var].name, first);
    first = false;
  }
  w.end();

  out << "Subject To\n";
  for (const IlpRow& r : model.rows) {
    w.start(r.name + ':');
    first = true;
    for (const IlpTerm& t : r.terms) {
      w.term(t.coef, r.denominator, model.variables[t.var].name, first);
      first = false;
    }
    if (r.terms.empty()) w.emit("0 " + model.variables.front().name);
    const char* sense = r.sense == RowSense::LessEqual      ? "<="
                        : r.sense == RowSense::GreaterEqual ? ">="
                                                            : "=";
    w.emit(std::string(sense) + ' ' + std::to_string(r.rhs));
    w.end();
  }

  out << "Bounds\n";
  for (const IlpVariable& v : model.variables)
    if (!v.binary) out << ' ' << v.name << " >= 0\n";

  out << "Binaries\n";
  w.start("");
  for (const IlpVariable& v : model.variables)
    if (v.binary) w.emit(v.name);
  w.end();
  out << "End\n";
  return out.str();
}

std::string export_ip3(const Instance& inst, const ObjectiveSpec& spec,
                       const IlpLimits& limits) {
  return render_lp(build_ip3(inst, spec, limits));
}

namespace {

std::int64_t rowActivity(const IlpRow& r, const std::vector<std::int64_t>& v) {
  std::int64_t sum = 0;
  for (const IlpTerm& t : r.terms) sum += t.coef * v[t.var];
  return sum;
}

bool rowHolds(const IlpRow& r, const std::vector<std::int64_t>& v) {
  const std::int64_t lhs = rowActivity(r, v);
  const std::int64_t rhs = r.rhs * r.denominator;
  switch (r.sense) {
    case RowSense::LessEqual: return lhs <= rhs;
    case RowSense::GreaterEqual: return lhs >= rhs;
    case RowSense::Equal: return lhs == rhs;
  }
  return false;
}

}  // namespace

ReplayResult replay_ip3(const IlpModel& model, const Instance& inst,
                        const Schedule& sched) {
  ReplayResult res;
  std::vector<std::int64_t> v(model.variables.size(), 0);
  const Time T = model.summary.horizon;

  auto findPair = [&](int f, int m) -> const IlpPair* {
    for (const IlpPair& pr : model.pairs)
      if (pr.family == f && pr.machine == m) return &pr;
    return nullptr;
  };
  for (const Assignment& a : sched.assignments) {
    const int f = family_of(inst, a.job);
    const IlpPair* pr = findPair(f, a.machine);
    if (pr == nullptr || a.start < 0 || a.start >= T || pr->x[a.start] < 0) {
      res.violated.push_back("x:job " + std::to_string(a.job) + " at t=" +
                             std::to_string(a.start) + " on m" +
                             std::to_string(a.machine) + " has no variable");
      continue;
    }
    ++v[pr->x[a.start]];
  }
  for (std::size_t i = 0; i < v.size(); ++i)
    if (model.variables[i].binary && v[i] > 1)
      res.violated.push_back("x:" + model.variables[i].name + " = " +
                             std::to_string(v[i]));

  // Smallest y satisfying (6) and (7): once a window of gamma steps has no
  // start, y stays 1.
  for (const IlpPair& pr : model.pairs) {
    const Family& f = inst.family(pr.family);
    bool lost = false;
    for (Time t = 0; t < T; ++t) {
      if (!lost && t >= f.threshold) {
        std::int64_t starts = 0;
        for (Time tau = t - f.threshold + 1; tau <= t; ++tau)
          if (pr.x[tau] >= 0) starts += v[pr.x[tau]];
        lost = starts == 0;
      }
      v[pr.y[t]] = lost ? 1 : 0;
    }
  }
  // Smallest Y and C satisfying (8) and (3).
  for (const IlpRow& r : model.rows) {
    if (r.equation == 8) {
      const IlpTerm& disq = r.terms.back();
      if (rowActivity(r, v) - disq.coef * v[disq.var] > r.rhs * r.denominator)
        v[disq.var] = 1;
    } else if (r.equation == 3) {
      const IlpTerm& c = r.terms.back();
      v[c.var] = rowActivity(r, v) - c.coef * v[c.var];
    }
  }

  for (const IlpRow& r : model.rows)
    if (!rowHolds(r, v)) res.violated.push_back(r.name);
  res.satisfied = res.violated.empty();

  for (const IlpPair& pr : model.pairs) {
    PairStatus st;
    st.family = pr.family;
    st.machine = pr.machine;
    st.lost = v[pr.disq] == 1;
    st.at = 0;
    for (Time t = 0; t < T; ++t)
      if (v[pr.y[t]] == 1) {
        st.at = t;
        break;
      }
    res.impliedDisq += st.lost ? 1 : 0;
    res.implied.push_back(st);
  }
  for (const IlpTerm& t : model.objective) res.objective += t.coef * v[t.var];
  return res;
}

}  // namespace ptc
