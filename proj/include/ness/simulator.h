#ifndef NESS_SIMULATOR_H_
#define NESS_SIMULATOR_H_

#include <optional>
#include <string>
#include <vector>

#include "ness/core.h"
#include "ness/domain.h"

namespace ness {

/// The event trace E_0..E_n of a scenario together with its induced states
/// S_0..S_{n+1}. E_{-1} = {ini(l) | l in S_0} and S_{-1} = {} are implicit.
///
/// A trace that stopped before the horizon is quiescent: no scheduled action
/// remains and nothing triggers, so later event sets are empty and the last
/// state persists up to S_{N+1}. The accessors extend the trace accordingly.
class Trace {
 public:
  Trace(std::vector<EventSet> events, std::vector<LiteralSet> states, int horizon,
        EventSet initial_events);

  const std::vector<EventSet>& events() const { return events_; }
  const std::vector<LiteralSet>& states() const { return states_; }
  int horizon() const { return horizon_; }

  /// E_t for -1 <= t <= N. Throws QueryError outside that range.
  const EventSet& events_at(int t) const;
  /// S_t for -1 <= t <= N + 1. Throws QueryError outside that range.
  const LiteralSet& state_at(int t) const;

  /// Index n of the last explicit event set, -1 when no event set was built.
  int last_event_time() const { return static_cast<int>(events_.size()) - 1; }

  bool operator==(const Trace&) const = default;

 private:
  std::vector<EventSet> events_;
  std::vector<LiteralSet> states_;
  int horizon_;
  EventSet initial_events_;
};

/// {l_i | e in events, [psi_i]l_i in eff(e), state |= psi_i, l_i not in state}.
/// Throws SimulationError(kIncoherentEffects) on a complementary pair.
LiteralSet actual_effects(const Context& ctx, const EventSet& events, const LiteralSet& state);

/// state \ complement(A) u A with A = actual_effects(events, state).
LiteralSet update(const Context& ctx, const LiteralSet& state, const EventSet& events);

/// As update, but returns nullopt instead of throwing on incoherent effects.
/// Works on partial states.
std::optional<LiteralSet> try_update(const Context& ctx, const LiteralSet& state,
                                     const EventSet& events);

/// Two events interfere when their effect literals, conditions ignored, hold a
/// complementary pair.
bool interfering(const Context& ctx, const std::string& a, const std::string& b);

/// The event set occurring in `state` given the scheduled actions: every
/// scheduled action plus every exogenous event whose tri holds, minus the
/// events dominated under the priority order by another candidate.
///
/// Throws SimulationError: kScenarioActionConflict when a scheduled action is
/// dominated or two scheduled actions interfere, kUnresolvedInterference when
/// any other selected pair interferes.
EventSet select_events(const Context& ctx, const LiteralSet& state, const EventSet& scheduled);

/// Exogenous events occurring in `state` when no action is scheduled.
EventSet triggered_events(const Context& ctx, const LiteralSet& state);

/// Simulates the scenario up to the horizon or until quiescence.
/// Throws SimulationError(kPreconditionViolated) when a scheduled action is
/// not executable, and the errors of select_events.
Trace build_trace(const Context& ctx, const Scenario& scenario);

struct ValidityReport {
  bool executable = true;
  std::optional<Occurrence> first_not_executable;
  std::string executable_detail;

  bool concurrent_correct = true;
  std::optional<std::pair<Occurrence, Occurrence>> priority_violation;

  bool trigger_correct = true;
  std::optional<Occurrence> missing_trigger;

  bool valid() const { return executable && concurrent_correct && trigger_correct; }
};

/// Checks the event sequence E_0..E_n (E_{-1} implied by the initial state)
/// clause by clause. Never throws for sequences over declared events.
ValidityReport validate_sequence(const Context& ctx, const std::vector<EventSet>& sequence);

}  // namespace ness

#endif  // NESS_SIMULATOR_H_
