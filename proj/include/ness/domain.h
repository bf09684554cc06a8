#ifndef NESS_DOMAIN_H_
#define NESS_DOMAIN_H_

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ness/core.h"

namespace ness {

enum class EventKind {
  kAction,     // performed by an agent, scheduled by a scenario
  kExogenous,  // fires whenever its triggering condition holds
  kInitial,    // synthesized ini(l) pseudo-event at t = -1
};

struct EventDecl {
  std::string name;
  EventKind kind = EventKind::kAction;
  Formula pre;
  Formula tri;
  EffectFormula eff;

  bool operator==(const EventDecl&) const = default;
};

using EventSet = std::set<std::string>;

/// An event occurring at a time point, printed as name@t.
struct Occurrence {
  std::string event;
  int time = 0;

  /// Parses "name@t"; throws std::invalid_argument on malformed text.
  static Occurrence Parse(std::string_view text);

  std::string to_string() const { return event + "@" + std::to_string(time); }

  bool operator==(const Occurrence&) const = default;
  std::strong_ordering operator<=>(const Occurrence& other) const {
    if (auto c = time <=> other.time; c != 0) return c;
    return event <=> other.event;
  }
};

using OccurrenceSet = std::set<Occurrence>;

std::string to_string(const OccurrenceSet& occurrences);

/// Name of the pseudo-event recording that `l` held initially: "ini(l)".
std::string ini_event_name(const Literal& l);

/// A validated domain declaration: fluents, events, initial state, priorities
/// and the horizon N bounding the time points {-1, 0, ..., N}.
class Context {
 public:
  Context() = default;

  /// Validates and assembles a context. Throws SemanticError on unknown
  /// fluents, duplicate names, an incoherent or incomplete initial state, or a
  /// cyclic priority relation. `priority` is closed transitively.
  Context(std::string name, std::vector<std::string> fluents, LiteralSet initial_state,
          std::vector<EventDecl> events, std::set<std::pair<std::string, std::string>> priority,
          int horizon, bool init_strict = false);

  const std::string& name() const { return name_; }
  const std::vector<std::string>& fluents() const { return fluents_; }
  bool has_fluent(std::string_view f) const;
  const LiteralSet& initial_state() const { return initial_state_; }
  int horizon() const { return horizon_; }
  bool init_strict() const { return init_strict_; }

  /// Declared events in declaration order.
  const std::vector<EventDecl>& events() const { return events_; }
  std::vector<std::string> actions() const;
  std::vector<std::string> exogenous_events() const;

  /// Declared or ini(l) event by name, or nullptr.
  const EventDecl* find_event(std::string_view name) const;
  /// As find_event but throws std::out_of_range.
  const EventDecl& event(std::string_view name) const;
  bool is_action(std::string_view name) const;

  /// E_{-1} = {ini(l) | l in S_0}.
  EventSet initial_events() const;

  /// Transitive closure of the priority relation, pairs (higher, lower).
  const std::set<std::pair<std::string, std::string>>& priority() const { return priority_; }
  bool dominates(std::string_view higher, std::string_view lower) const;

  bool operator==(const Context&) const = default;

 private:
  std::string name_;
  std::vector<std::string> fluents_;
  LiteralSet initial_state_;
  std::vector<EventDecl> events_;
  std::map<std::string, EventDecl, std::less<>> initial_decls_;
  std::set<std::pair<std::string, std::string>> priority_;
  int horizon_ = 0;
  bool init_strict_ = false;
};

/// The set of timed actions given as input to a simulation.
struct Scenario {
  OccurrenceSet actions;

  /// Throws SemanticError when an action is unknown, exogenous, or scheduled
  /// outside 0..horizon.
  void validate(const Context& ctx) const;

  EventSet actions_at(int t) const;
  /// Latest scheduled time, or -1 when empty.
  int last_time() const;

  bool operator==(const Scenario&) const = default;
};

}  // namespace ness

#endif  // NESS_DOMAIN_H_
