#include "ness/oracle.h"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>

#include "ness/simulator.h"

namespace ness {

Formula random_formula(Rng& rng, const std::vector<std::string>& fluents, int depth) {
  if (depth <= 0 || rng.between(0, 2) == 0) {
    return Literal(fluents[rng.between(0, static_cast<int>(fluents.size()) - 1)], rng.chance(0.5));
  }
  std::vector<Formula> kids{random_formula(rng, fluents, depth - 1),
                            random_formula(rng, fluents, depth - 1)};
  return rng.chance(0.5) ? Formula::And(std::move(kids)) : Formula::Or(std::move(kids));
}

namespace {

EffectFormula RandomEffect(Rng& rng, const std::vector<std::string>& fluents, double p_cond) {
  EffectFormula eff;
  int n = rng.between(1, 3);
  for (int i = 0; i < n; ++i) {
    ConditionalEffect ce;
    ce.literal = Literal(fluents[rng.between(0, static_cast<int>(fluents.size()) - 1)],
                         rng.chance(0.6));
    if (rng.chance(p_cond)) ce.condition = random_formula(rng, fluents, 1);
    if (std::find(eff.begin(), eff.end(), ce) == eff.end()) eff.push_back(ce);
  }
  return eff;
}

GeneratedCase Candidate(Rng& rng, const GeneratorConfig& cfg) {
  int nf = rng.between(cfg.min_fluents, cfg.max_fluents);
  std::vector<std::string> fluents;
  for (int i = 0; i < nf; ++i) fluents.push_back("f" + std::to_string(i));
  int horizon = rng.between(1, cfg.max_horizon);
  LiteralSet init;
  for (const auto& f : fluents) init.insert(Literal(f, rng.chance(0.4)));

  std::vector<EventDecl> events;
  int ne = rng.between(1, cfg.max_events);
  int actions = 0;
  int exo = 0;
  for (int i = 0; i < ne; ++i) {
    EventDecl e;
    if (rng.chance(cfg.exogenous_probability)) {
      e.kind = EventKind::kExogenous;
      e.name = "u" + std::to_string(exo++);
      e.tri = random_formula(rng, fluents, 2);
      e.pre = e.tri;
    } else {
      e.kind = EventKind::kAction;
      e.name = "a" + std::to_string(actions++);
      if (rng.chance(0.4)) e.pre = random_formula(rng, fluents, 1);
      e.tri = e.pre;
    }
    e.eff = RandomEffect(rng, fluents, cfg.conditional_effect_probability);
    events.push_back(std::move(e));
  }
  // Only earlier-declared over later-declared, so the order stays acyclic.
  std::set<std::pair<std::string, std::string>> priority;
  for (std::size_t i = 0; i < events.size(); ++i) {
    for (std::size_t j = i + 1; j < events.size(); ++j) {
      if (rng.chance(0.15)) priority.emplace(events[i].name, events[j].name);
    }
  }
  Scenario scenario;
  for (int t = 0; t <= horizon; ++t) {
    for (const auto& e : events) {
      if (e.kind == EventKind::kAction && rng.chance(cfg.schedule_probability)) {
        scenario.actions.insert(Occurrence{e.name, t});
      }
    }
  }
  Context ctx("random", fluents, init, events, priority, horizon, false);
  return {std::move(ctx), std::move(scenario), 0};
}

}  // namespace

GeneratedCase generate(const GeneratorConfig& config) {
  bool bounded = config.min_fluents >= 1 && config.min_fluents <= config.max_fluents &&
                 config.max_fluents <= 6 && config.max_events >= 1 && config.max_events <= 6 &&
                 config.max_horizon >= 1 && config.max_horizon <= 5;
  if (!bounded) throw std::invalid_argument("generator bounds out of range");
  Rng rng(config.seed);
  for (int attempt = 1; attempt <= config.max_attempts; ++attempt) {
    try {
      GeneratedCase c = Candidate(rng, config);
      build_trace(c.context, c.scenario);
      c.attempts = attempt;
      return c;
    } catch (const Error&) {
      // rejected, draw again
    }
  }
  throw GenerationExhausted("no valid domain after " + std::to_string(config.max_attempts) +
                            " attempts (seed " + std::to_string(config.seed) + ")");
}

namespace {

// Deliberately separate from the library's evaluator and update operator.
bool Holds(const std::set<Literal>& s, const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::kTrue:
      return true;
    case Formula::Kind::kLiteral:
      return s.count(f.literal()) > 0;
    case Formula::Kind::kAnd:
      for (const auto& c : f.children()) {
        if (!Holds(s, c)) return false;
      }
      return true;
    case Formula::Kind::kOr:
      for (const auto& c : f.children()) {
        if (Holds(s, c)) return true;
      }
      return false;
  }
  return false;
}

std::set<Literal> Apply(const Context& ctx, const std::set<Literal>& s,
                        const std::set<std::string>& events) {
  std::set<Literal> add;
  for (const auto& e : events) {
    for (const auto& ce : ctx.event(e).eff) {
      if (Holds(s, ce.condition) && !s.count(ce.literal)) add.insert(ce.literal);
    }
  }
  std::set<Literal> out;
  for (const auto& l : s) {
    if (!add.count(l.complement())) out.insert(l);
  }
  out.insert(add.begin(), add.end());
  return out;
}

std::set<Literal> Std(const LiteralSet& s) { return {s.begin(), s.end()}; }

bool Subset(const std::set<Literal>& a, const std::set<Literal>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

template <typename T>
std::vector<std::set<T>> PowerSet(const std::set<T>& base) {
  std::vector<T> items(base.begin(), base.end());
  std::vector<std::set<T>> out;
  for (std::size_t m = 0; m < (std::size_t{1} << items.size()); ++m) {
    std::set<T> s;
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (m >> i & 1) s.insert(items[i]);
    }
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace

std::vector<DirectRelation> brute_force_direct(const CausalSetting& setting, const Formula& psi,
                                               int t_psi) {
  const Context& ctx = setting.context();
  const auto& fluents = ctx.fluents();
  if (fluents.size() > 6 || ctx.horizon() > 5) {
    throw SizeLimitError("brute force limited to 6 fluents and horizon 5");
  }
  std::map<int, std::set<Literal>> state;
  for (int t = -1; t <= t_psi; ++t) state[t] = Std(setting.state_at(t));
  if (!Holds(state[t_psi], psi)) return {};

  // All coherent partial states satisfying psi.
  std::vector<std::set<Literal>> sufficient;
  std::size_t total = 1;
  for (std::size_t i = 0; i < fluents.size(); ++i) total *= 3;
  for (std::size_t code = 0; code < total; ++code) {
    std::set<Literal> w;
    std::size_t c = code;
    for (const auto& f : fluents) {
      if (c % 3 == 1) w.insert(Literal(f, true));
      if (c % 3 == 2) w.insert(Literal(f, false));
      c /= 3;
    }
    if (Holds(w, psi)) sufficient.push_back(std::move(w));
  }
  std::vector<DirectRelation> out;
  for (const auto& w : sufficient) {
    bool minimal = true;
    for (const auto& sub : PowerSet(w)) {
      if (sub.size() < w.size() && Holds(sub, psi)) minimal = false;
    }
    if (!minimal || !Subset(w, state[t_psi])) continue;

    // Each literal: the time it was produced and then persisted until t_psi.
    std::map<int, std::set<Literal>> cells;
    for (const auto& l : w) {
      std::vector<int> times;
      for (int t = -1; t < t_psi; ++t) {
        bool produced_here = !state[t].count(l);
        bool persists = true;
        for (int u = t + 1; u <= t_psi; ++u) persists = persists && state[u].count(l);
        if (produced_here && persists) times.push_back(t);
      }
      if (times.size() != 1) throw std::logic_error("ambiguous achievement time");
      cells[times.front()].insert(l);
    }
    // Per cell, every minimal subset of E(t) producing it.
    std::vector<std::pair<int, std::vector<std::set<std::string>>>> options;
    bool ok = true;
    for (const auto& [t, lits] : cells) {
      const EventSet& happened = setting.events_at(t);
      std::set<std::string> ev(happened.begin(), happened.end());
      std::vector<std::set<std::string>> minimal_sets;
      for (const auto& c : PowerSet(ev)) {
        if (!Subset(lits, Apply(ctx, state[t], c))) continue;
        bool min = true;
        for (const auto& sub : PowerSet(c)) {
          if (sub.size() < c.size() && Subset(lits, Apply(ctx, state[t], sub))) min = false;
        }
        if (min) minimal_sets.push_back(c);
      }
      if (minimal_sets.empty()) ok = false;
      options.emplace_back(t, std::move(minimal_sets));
    }
    if (!ok) continue;
    std::function<void(std::size_t, DirectRelation)> combine = [&](std::size_t i,
                                                                   DirectRelation r) {
      if (i == options.size()) {
        out.push_back(std::move(r));
        return;
      }
      for (const auto& c : options[i].second) {
        DirectRelation next = r;
        for (const auto& e : c) next.causes.insert(Occurrence{e, options[i].first});
        combine(i + 1, std::move(next));
      }
    };
    DirectRelation base;
    base.backing = LiteralSet(w.begin(), w.end());
    base.target = psi;
    base.target_time = t_psi;
    for (auto it = cells.rbegin(); it != cells.rend(); ++it) {
      base.partition.push_back({it->first, LiteralSet(it->second.begin(), it->second.end())});
    }
    combine(0, base);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace ness
