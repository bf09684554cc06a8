// Property checks shared by the unit tests and the acceptance binary. Each
// returns human-readable violations; empty means the property holds.

#ifndef NESS_TESTS_PROPERTIES_H_
#define NESS_TESTS_PROPERTIES_H_

#include <string>
#include <vector>

#include "ness/causation.h"
#include "ness/simulator.h"

namespace ness::testing {

inline std::vector<std::string> TraceViolations(const Context& ctx, const Trace& trace) {
  std::vector<std::string> bad;
  auto fail = [&](int t, const std::string& what) {
    bad.push_back(ctx.name() + " t=" + std::to_string(t) + ": " + what);
  };
  const auto& states = trace.states();
  if (states.empty() || states.front() != ctx.initial_state()) fail(0, "S0 differs from init");
  if (states.size() != trace.events().size() + 1) fail(-1, "state/event count mismatch");

  // eff(E_-1) = S0.
  LiteralSet from_ini;
  for (const auto& e : trace.events_at(-1)) {
    for (const auto& ce : ctx.event(e).eff) from_ini.insert(ce.literal);
  }
  if (from_ini != ctx.initial_state()) fail(-1, "eff(E-1) != S0");

  for (std::size_t t = 0; t < states.size(); ++t) {
    if (!states[t].coherent()) fail(t, "incoherent state");
    if (!states[t].complete(ctx.fluents().size())) fail(t, "incomplete state");
  }
  for (std::size_t t = 0; t + 1 < states.size(); ++t) {
    const LiteralSet& s = states[t];
    const EventSet& e = trace.events()[t];
    // Recompute the successor independently of update().
    LiteralSet added;
    for (const auto& name : e) {
      for (const auto& ce : ctx.event(name).eff) {
        if (evaluate(s, ce.condition) && !s.contains(ce.literal)) added.insert(ce.literal);
      }
    }
    LiteralSet expected;
    for (const auto& l : s) {
      if (!added.contains(l.complement())) expected.insert(l);
    }
    for (const auto& l : added) expected.insert(l);
    if (states[t + 1] != expected) fail(t, "S(t+1) != S(t) > E(t)");
    if (update(ctx, s, e) != states[t + 1]) fail(t, "update disagrees with trace");

    LiteralSet actual = actual_effects(ctx, e, s);
    if (!actual.intersected(s).empty()) fail(t, "actual effects overlap the state");
    // Frame: fluents without an actual effect keep their value.
    for (const auto& l : s) {
      bool touched = actual.contains(l) || actual.contains(l.complement());
      if (!touched && !states[t + 1].contains(l)) fail(t, "frame violated for " + l.fluent);
    }
  }
  ValidityReport v = validate_sequence(ctx, trace.events());
  if (!v.executable) fail(-1, "not executable: " + v.executable_detail);
  if (!v.concurrent_correct) fail(-1, "not concurrent-correct");
  if (!v.trigger_correct) fail(-1, "not trigger-correct");
  // Quiescent tail: nothing triggers in the final state.
  if (trace.last_event_time() < ctx.horizon() && !triggered_events(ctx, states.back()).empty()) {
    fail(trace.last_event_time() + 1, "stopped although events still trigger");
  }
  return bad;
}

// Checks every clause of a direct relation literally against the trace.
inline std::vector<std::string> RelationViolations(const CausalSetting& setting,
                                                   const DirectRelation& r) {
  std::vector<std::string> bad;
  const Context& ctx = setting.context();
  const std::string where = to_string(r);
  if (!evaluate(r.backing, r.target)) bad.push_back(where + ": backing insufficient");
  for (const auto& l : r.backing) {
    LiteralSet smaller = r.backing;
    smaller.erase(l);
    if (evaluate(smaller, r.target)) bad.push_back(where + ": backing not minimal");
  }
  LiteralSet joined;
  for (std::size_t i = 0; i < r.partition.size(); ++i) {
    const auto& cell = r.partition[i];
    if (i > 0 && cell.time >= r.partition[i - 1].time) bad.push_back(where + ": order");
    if (!joined.intersected(cell.literals).empty()) bad.push_back(where + ": overlapping cells");
    joined = joined.united(cell.literals);

    for (int t = cell.time + 1; t <= r.target_time; ++t) {
      if (!setting.state_at(t).includes(cell.literals)) bad.push_back(where + ": persistency");
    }
    EventSet c;
    for (const auto& o : r.causes_at(cell.time)) c.insert(o.event);
    const EventSet& happened = setting.events_at(cell.time);
    if (!std::includes(happened.begin(), happened.end(), c.begin(), c.end())) {
      bad.push_back(where + ": cause did not occur");
    }
    const LiteralSet& before = setting.state_at(cell.time);
    auto achieves = [&](const EventSet& es) {
      auto next = try_update(ctx, before, es);
      return next && next->includes(cell.literals);
    };
    if (!achieves(c)) bad.push_back(where + ": weak necessity");
    for (const auto& drop : c) {
      EventSet smaller = c;
      smaller.erase(drop);
      if (achieves(smaller)) bad.push_back(where + ": cause set not minimal");
    }
  }
  if (joined != r.backing) bad.push_back(where + ": cells do not cover the backing");
  std::size_t placed = 0;
  for (const auto& cell : r.partition) placed += r.causes_at(cell.time).size();
  if (placed != r.causes.size()) bad.push_back(where + ": cause outside the partition");
  return bad;
}

}  // namespace ness::testing

#endif  // NESS_TESTS_PROPERTIES_H_
