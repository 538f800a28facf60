#pragma once

#include "ptc/instance.hpp"
#include "ptc/solve_result.hpp"

namespace ptc {

enum class HeuristicKind { SchedulingCentric, QualificationCentric };

// Greedy constructive heuristics. Both are list schedulers driven by machine
// availability events; ties go to the lowest family id, then the lowest
// machine id. Results carry status Feasible with a validated schedule, or
// Unknown with `message` explaining the dead end.
//
// Scheduling-centric: at the earliest machine event, start the family with
// the smallest setup + processing time among those whose qualification
// window on that machine is still open; same-family continuations win ties.
SolveResult schedule_centric(const Instance& inst,
                             const ObjectiveSpec& spec = ObjectiveSpec::flowOnly());

// Qualification-centric: at the earliest machine event, serve the pair whose
// qualification deadline (last start + gamma) is nearest, paying a setup if
// needed. Only deadlines that can bind (< T) drive the choice; otherwise it
// behaves like schedule_centric. When a family is down to its last job, that
// job may be delayed up to its own deadline, capped so that the next
// deadline on the machine can still be met and the job ends by T.
SolveResult qualification_centric(
    const Instance& inst, const ObjectiveSpec& spec = ObjectiveSpec::flowOnly());

SolveResult run_heuristic(HeuristicKind kind, const Instance& inst,
                          const ObjectiveSpec& spec);

}  // namespace ptc
