#include "ness/simulator.h"

#include "ness/errors.h"

namespace ness {

Trace::Trace(std::vector<EventSet> events, std::vector<LiteralSet> states, int horizon,
             EventSet initial_events)
    : events_(std::move(events)),
      states_(std::move(states)),
      horizon_(horizon),
      initial_events_(std::move(initial_events)) {}

const EventSet& Trace::events_at(int t) const {
  static const EventSet kNone;
  if (t < -1 || t > horizon_) {
    throw QueryError(QueryError::Kind::kTimeOutOfRange,
                     "time point " + std::to_string(t) + " outside -1.." + std::to_string(horizon_));
  }
  if (t == -1) return initial_events_;
  if (t < static_cast<int>(events_.size())) return events_[t];
  return kNone;
}

const LiteralSet& Trace::state_at(int t) const {
  static const LiteralSet kEmpty;
  if (t < -1 || t > horizon_ + 1) {
    throw QueryError(QueryError::Kind::kTimeOutOfRange,
                     "state index " + std::to_string(t) + " outside -1.." +
                         std::to_string(horizon_ + 1));
  }
  if (t == -1) return kEmpty;
  if (t < static_cast<int>(states_.size())) return states_[t];
  return states_.back();
}

namespace {

LiteralSet RawEffects(const Context& ctx, const EventSet& events, const LiteralSet& state) {
  LiteralSet out;
  for (const auto& name : events) {
    for (const auto& ce : ctx.event(name).eff) {
      if (!state.contains(ce.literal) && evaluate(state, ce.condition)) out.insert(ce.literal);
    }
  }
  return out;
}

// First pair of events whose actual effects clash, in name order.
std::optional<std::pair<std::string, std::string>> Clash(const Context& ctx,
                                                         const EventSet& events,
                                                         const LiteralSet& state) {
  for (auto a = events.begin(); a != events.end(); ++a) {
    LiteralSet ea = RawEffects(ctx, {*a}, state);
    for (auto b = events.begin(); b != events.end(); ++b) {
      if (a == b) continue;
      LiteralSet eb = RawEffects(ctx, {*b}, state);
      if (!ea.united(eb).coherent()) return std::make_pair(*a, *b);
    }
  }
  return std::nullopt;
}

// Static interference: the effect literals of a and b, conditions ignored,
// contain a complementary pair.
bool Interfere(const Context& ctx, const std::string& a, const std::string& b) {
  LiteralSet la;
  for (const auto& ce : ctx.event(a).eff) la.insert(ce.literal);
  for (const auto& ce : ctx.event(b).eff) {
    if (la.contains(ce.literal.complement())) return true;
  }
  return false;
}

}  // namespace

bool interfering(const Context& ctx, const std::string& a, const std::string& b) {
  return Interfere(ctx, a, b);
}

LiteralSet actual_effects(const Context& ctx, const EventSet& events, const LiteralSet& state) {
  LiteralSet out = RawEffects(ctx, events, state);
  if (!out.coherent()) {
    std::string detail = "incoherent actual effects " + out.to_string();
    if (auto pair = Clash(ctx, events, state)) {
      detail += " from interfering events " + pair->first + " and " + pair->second;
    }
    throw SimulationError(SimulationError::Kind::kIncoherentEffects, detail);
  }
  return out;
}

LiteralSet update(const Context& ctx, const LiteralSet& state, const EventSet& events) {
  LiteralSet effects = actual_effects(ctx, events, state);
  return state.minus(effects.complement()).united(effects);
}

std::optional<LiteralSet> try_update(const Context& ctx, const LiteralSet& state,
                                     const EventSet& events) {
  LiteralSet effects = RawEffects(ctx, events, state);
  if (!effects.coherent()) return std::nullopt;
  return state.minus(effects.complement()).united(effects);
}

EventSet select_events(const Context& ctx, const LiteralSet& state, const EventSet& scheduled) {
  EventSet candidates = scheduled;
  for (const auto& e : ctx.events()) {
    if (e.kind == EventKind::kExogenous && evaluate(state, e.tri)) candidates.insert(e.name);
  }
  // With a transitively closed strict order the only concurrent- and
  // trigger-correct selection is the set of undominated candidates.
  EventSet selected;
  for (const auto& c : candidates) {
    bool dominated = false;
    for (const auto& d : candidates) dominated = dominated || ctx.dominates(d, c);
    if (!dominated) {
      selected.insert(c);
    } else if (scheduled.count(c)) {
      std::string by;
      for (const auto& d : candidates) {
        if (ctx.dominates(d, c)) by = d;
      }
      throw SimulationError(SimulationError::Kind::kScenarioActionConflict,
                            "scheduled action " + c + " is overridden by " + by);
    }
  }
  for (auto a = selected.begin(); a != selected.end(); ++a) {
    for (auto b = std::next(a); b != selected.end(); ++b) {
      if (!Interfere(ctx, *a, *b)) continue;
      bool both_actions = scheduled.count(*a) && scheduled.count(*b);
      throw SimulationError(both_actions ? SimulationError::Kind::kScenarioActionConflict
                                         : SimulationError::Kind::kUnresolvedInterference,
                            "events " + *a + " and " + *b + " interfere and neither has priority");
    }
  }
  return selected;
}

EventSet triggered_events(const Context& ctx, const LiteralSet& state) {
  return select_events(ctx, state, {});
}

Trace build_trace(const Context& ctx, const Scenario& scenario) {
  scenario.validate(ctx);
  std::vector<EventSet> events;
  std::vector<LiteralSet> states{ctx.initial_state()};
  for (int t = 0; t <= ctx.horizon(); ++t) {
    const LiteralSet& s = states.back();
    EventSet scheduled = scenario.actions_at(t);
    if (t > scenario.last_time()) {
      bool any = false;
      for (const auto& e : ctx.events()) {
        any = any || (e.kind == EventKind::kExogenous && evaluate(s, e.tri));
      }
      if (!any) break;
    }
    for (const auto& a : scheduled) {
      if (!evaluate(s, ctx.event(a).pre)) {
        throw SimulationError(SimulationError::Kind::kPreconditionViolated,
                              "precondition of " + a + "@" + std::to_string(t) +
                                  " does not hold in " + s.to_string());
      }
    }
    EventSet selected = select_events(ctx, s, scheduled);
    states.push_back(update(ctx, s, selected));
    events.push_back(std::move(selected));
  }
  return Trace(std::move(events), std::move(states), ctx.horizon(), ctx.initial_events());
}

ValidityReport validate_sequence(const Context& ctx, const std::vector<EventSet>& sequence) {
  ValidityReport report;
  LiteralSet state = ctx.initial_state();
  for (int t = 0; t < static_cast<int>(sequence.size()); ++t) {
    const EventSet& et = sequence[t];
    for (const auto& e : et) {
      if (report.executable && !evaluate(state, ctx.event(e).pre)) {
        report.executable = false;
        report.first_not_executable = Occurrence{e, t};
        report.executable_detail = "precondition does not hold";
      }
      for (const auto& f : et) {
        if (report.concurrent_correct && ctx.dominates(e, f)) {
          report.concurrent_correct = false;
          report.priority_violation = std::make_pair(Occurrence{e, t}, Occurrence{f, t});
        }
      }
    }
    for (const auto& u : ctx.events()) {
      if (u.kind != EventKind::kExogenous || et.count(u.name) || !evaluate(state, u.tri)) continue;
      bool dominated = false;
      for (const auto& e : et) dominated = dominated || ctx.dominates(e, u.name);
      if (!dominated && report.trigger_correct) {
        report.trigger_correct = false;
        report.missing_trigger = Occurrence{u.name, t};
      }
    }
    try {
      state = update(ctx, state, et);
    } catch (const SimulationError& err) {
      if (report.executable) {
        report.executable = false;
        report.first_not_executable = Occurrence{*et.begin(), t};
        report.executable_detail = err.what();
      }
      break;
    }
  }
  return report;
}

}  // namespace ness
