#include "ness/domain.h"

#include <algorithm>
#include <charconv>
#include <stdexcept>

#include "ness/errors.h"

namespace ness {

Occurrence Occurrence::Parse(std::string_view text) {
  auto at = text.rfind('@');
  if (at == std::string_view::npos || at == 0 || at + 1 == text.size()) {
    throw std::invalid_argument("expected name@time, got '" + std::string(text) + "'");
  }
  int t = 0;
  auto digits = text.substr(at + 1);
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), t);
  if (ec != std::errc() || ptr != digits.data() + digits.size()) {
    throw std::invalid_argument("bad time point in '" + std::string(text) + "'");
  }
  return Occurrence{std::string(text.substr(0, at)), t};
}

std::string to_string(const OccurrenceSet& occurrences) {
  std::string out = "{";
  bool first = true;
  for (const auto& o : occurrences) {
    if (!first) out += ", ";
    out += o.to_string();
    first = false;
  }
  return out + "}";
}

std::string ini_event_name(const Literal& l) { return "ini(" + l.to_string() + ")"; }

namespace {

void CheckFormula(const Formula& f, const Context& ctx, const std::string& where) {
  for (const auto& l : f.literals()) {
    if (!ctx.has_fluent(l.fluent)) {
      throw SemanticError("unknown fluent '" + l.fluent + "' in " + where);
    }
  }
}

}  // namespace

Context::Context(std::string name, std::vector<std::string> fluents, LiteralSet initial_state,
                 std::vector<EventDecl> events,
                 std::set<std::pair<std::string, std::string>> priority, int horizon,
                 bool init_strict)
    : name_(std::move(name)),
      fluents_(std::move(fluents)),
      initial_state_(std::move(initial_state)),
      events_(std::move(events)),
      horizon_(horizon),
      init_strict_(init_strict) {
  if (fluents_.empty()) throw SemanticError("domain declares no fluents");
  std::set<std::string> seen;
  for (const auto& f : fluents_) {
    if (f.empty()) throw SemanticError("empty fluent name");
    if (!seen.insert(f).second) throw SemanticError("duplicate fluent '" + f + "'");
  }
  if (horizon_ < 0) throw SemanticError("horizon must be non-negative");

  for (const auto& l : initial_state_) {
    if (!has_fluent(l.fluent)) {
      throw SemanticError("unknown fluent '" + l.fluent + "' in init");
    }
  }
  if (!initial_state_.coherent()) throw SemanticError("init is not coherent");
  if (!initial_state_.complete(fluents_.size())) {
    throw SemanticError("init does not assign every fluent");
  }

  std::set<std::string> names;
  for (const auto& e : events_) {
    if (e.name.empty()) throw SemanticError("empty event name");
    if (e.kind == EventKind::kInitial) {
      throw SemanticError("event '" + e.name + "' cannot be declared as initial");
    }
    if (!names.insert(e.name).second) throw SemanticError("duplicate event '" + e.name + "'");
    if (e.kind == EventKind::kExogenous && !(e.pre == e.tri)) {
      throw SemanticError("exogenous event '" + e.name + "' must have tri equal to pre");
    }
    CheckFormula(e.pre, *this, "pre of " + e.name);
    CheckFormula(e.tri, *this, "tri of " + e.name);
    for (const auto& ce : e.eff) {
      CheckFormula(ce.condition, *this, "effect condition of " + e.name);
      if (!has_fluent(ce.literal.fluent)) {
        throw SemanticError("unknown fluent '" + ce.literal.fluent + "' in eff of " + e.name);
      }
    }
  }

  for (const auto& l : initial_state_) {
    EventDecl ini;
    ini.name = ini_event_name(l);
    ini.kind = EventKind::kInitial;
    ini.eff = {ConditionalEffect{Formula::Top(), l}};
    initial_decls_.emplace(ini.name, std::move(ini));
  }

  // Transitive closure; a pair (x, x) afterwards means a cycle.
  for (const auto& [hi, lo] : priority) {
    for (const auto& n : {hi, lo}) {
      if (!names.count(n)) throw SemanticError("unknown event '" + n + "' in priority");
    }
  }
  priority_ = std::move(priority);
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& [a, b] : std::set(priority_)) {
      for (auto it = priority_.lower_bound({b, ""}); it != priority_.end() && it->first == b;
           ++it) {
        if (priority_.emplace(a, it->second).second) changed = true;
      }
    }
  }
  for (const auto& [a, b] : priority_) {
    if (a == b) throw SemanticError("priority relation has a cycle through '" + a + "'");
  }
}

bool Context::has_fluent(std::string_view f) const {
  return std::find(fluents_.begin(), fluents_.end(), f) != fluents_.end();
}

std::vector<std::string> Context::actions() const {
  std::vector<std::string> out;
  for (const auto& e : events_) {
    if (e.kind == EventKind::kAction) out.push_back(e.name);
  }
  return out;
}

std::vector<std::string> Context::exogenous_events() const {
  std::vector<std::string> out;
  for (const auto& e : events_) {
    if (e.kind == EventKind::kExogenous) out.push_back(e.name);
  }
  return out;
}

const EventDecl* Context::find_event(std::string_view name) const {
  for (const auto& e : events_) {
    if (e.name == name) return &e;
  }
  if (auto it = initial_decls_.find(name); it != initial_decls_.end()) return &it->second;
  return nullptr;
}

const EventDecl& Context::event(std::string_view name) const {
  if (const auto* e = find_event(name)) return *e;
  throw std::out_of_range("unknown event '" + std::string(name) + "'");
}

bool Context::is_action(std::string_view name) const {
  const auto* e = find_event(name);
  return e != nullptr && e->kind == EventKind::kAction;
}

EventSet Context::initial_events() const {
  EventSet out;
  for (const auto& [name, decl] : initial_decls_) out.insert(name);
  return out;
}

bool Context::dominates(std::string_view higher, std::string_view lower) const {
  return priority_.count({std::string(higher), std::string(lower)}) != 0;
}

void Scenario::validate(const Context& ctx) const {
  for (const auto& o : actions) {
    const auto* e = ctx.find_event(o.event);
    if (e == nullptr) throw SemanticError("unknown action '" + o.event + "' in scenario");
    if (e->kind != EventKind::kAction) {
      throw SemanticError("'" + o.event + "' is not an action and cannot be scheduled");
    }
    if (o.time < 0 || o.time > ctx.horizon()) {
      throw SemanticError("time point " + std::to_string(o.time) + " of '" + o.event +
                          "' is outside 0.." + std::to_string(ctx.horizon()));
    }
  }
}

EventSet Scenario::actions_at(int t) const {
  EventSet out;
  for (const auto& o : actions) {
    if (o.time == t) out.insert(o.event);
  }
  return out;
}

int Scenario::last_time() const { return actions.empty() ? -1 : actions.rbegin()->time; }

}  // namespace ness
