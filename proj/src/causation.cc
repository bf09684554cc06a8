#include "ness/causation.h"

#include <algorithm>
#include <map>
#include <set>
#include <tuple>

#include "ness/errors.h"

namespace ness {

CausalSetting::CausalSetting(Context context, Scenario scenario)
    : context_(std::move(context)),
      scenario_(std::move(scenario)),
      trace_(build_trace(context_, scenario_)) {}

OccurrenceSet DirectRelation::causes_at(int t) const {
  OccurrenceSet out;
  for (const auto& o : causes) {
    if (o.time == t) out.insert(o);
  }
  return out;
}

bool DirectRelation::operator==(const DirectRelation& other) const {
  return causes == other.causes && backing == other.backing && partition == other.partition;
}

bool DirectRelation::operator<(const DirectRelation& other) const {
  return std::tie(backing, causes, partition) <
         std::tie(other.backing, other.causes, other.partition);
}

std::string to_string(const DirectRelation& r) {
  return to_string(r.causes) + " ~>_" + r.backing.to_string() + " (" + r.target.to_string() +
         ", " + std::to_string(r.target_time) + ")";
}

namespace {

// Effects `event` would have on its own in `state`, ignoring coherence.
LiteralSet EventEffects(const Context& ctx, const std::string& event, const LiteralSet& state) {
  LiteralSet out;
  for (const auto& ce : ctx.event(event).eff) {
    if (!state.contains(ce.literal) && evaluate(state, ce.condition)) out.insert(ce.literal);
  }
  return out;
}

// Minimal subsets of the universe meeting every family member.
std::vector<EventSet> MinimalHittingSets(const std::vector<EventSet>& family) {
  EventSet universe;
  for (const auto& s : family) universe.insert(s.begin(), s.end());
  std::vector<std::string> items(universe.begin(), universe.end());
  if (items.size() > 20) {
    throw SizeLimitError("too many concurrent achievers (" + std::to_string(items.size()) + ")");
  }
  std::vector<unsigned> masks;
  for (const auto& s : family) {
    unsigned m = 0;
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (s.count(items[i])) m |= 1u << i;
    }
    masks.push_back(m);
  }
  std::vector<unsigned> found;
  std::vector<unsigned> order;
  for (unsigned m = 0; m < (1u << items.size()); ++m) order.push_back(m);
  std::stable_sort(order.begin(), order.end(), [](unsigned a, unsigned b) {
    return __builtin_popcount(a) < __builtin_popcount(b);
  });
  for (unsigned m : order) {
    bool hits = std::all_of(masks.begin(), masks.end(), [m](unsigned s) { return (s & m) != 0; });
    if (!hits) continue;
    bool minimal = std::none_of(found.begin(), found.end(),
                                [m](unsigned f) { return (f & m) == f; });
    if (minimal) found.push_back(m);
  }
  std::vector<EventSet> out;
  for (unsigned m : found) {
    EventSet s;
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (m & (1u << i)) s.insert(items[i]);
    }
    out.push_back(std::move(s));
  }
  return out;
}

void CheckTime(const CausalSetting& setting, int t) {
  if (t < 0 || t > setting.last_time()) {
    throw QueryError(QueryError::Kind::kTimeOutOfRange,
                     "query time " + std::to_string(t) + " outside 0.." +
                         std::to_string(setting.last_time()));
  }
}

std::set<std::string> Fluents(const LiteralSet& lits) {
  std::set<std::string> out;
  for (const auto& l : lits) out.insert(l.fluent);
  return out;
}

}  // namespace

DirectAnalysis analyse_direct(const CausalSetting& setting, const Formula& psi, int t_psi,
                              const CausalOptions& options) {
  CheckTime(setting, t_psi);
  const Context& ctx = setting.context();
  DirectAnalysis out;
  const LiteralSet& now = setting.state_at(t_psi);
  if (!evaluate(now, psi)) return out;

  for (const auto& w : minimal_backings(psi, options.backing)) {
    if (!now.includes(w)) {
      out.rejected.push_back({w, "persistency: not true at " + std::to_string(t_psi)});
      continue;
    }
    // Cell of each literal: the last time point before t_psi where it did not hold.
    std::map<int, LiteralSet, std::greater<>> cells;
    for (const auto& l : w) {
      int t = t_psi - 1;
      while (t >= 0 && setting.state_at(t).contains(l)) --t;
      cells[t].insert(l);
    }
    // Per cell, the minimal event sets producing it.
    std::vector<std::pair<int, std::vector<EventSet>>> choices;
    std::string missing;
    for (const auto& [t, lits] : cells) {
      const LiteralSet& before = setting.state_at(t);
      std::vector<EventSet> family;
      for (const auto& l : lits) {
        EventSet achievers;
        for (const auto& e : setting.events_at(t)) {
          if (EventEffects(ctx, e, before).contains(l)) achievers.insert(e);
        }
        if (achievers.empty()) missing = l.to_string() + "@" + std::to_string(t);
        family.push_back(std::move(achievers));
      }
      choices.emplace_back(t, MinimalHittingSets(family));
    }
    if (!missing.empty()) {
      out.rejected.push_back({w, "no achiever for " + missing});
      continue;
    }
    std::vector<std::size_t> idx(choices.size(), 0);
    while (true) {
      DirectRelation r;
      r.backing = w;
      r.target = psi;
      r.target_time = t_psi;
      for (std::size_t i = 0; i < choices.size(); ++i) {
        int t = choices[i].first;
        r.partition.push_back({t, cells[t]});
        for (const auto& e : choices[i].second[idx[i]]) r.causes.insert(Occurrence{e, t});
      }
      out.relations.push_back(std::move(r));
      std::size_t k = 0;
      while (k < idx.size() && ++idx[k] == choices[k].second.size()) idx[k++] = 0;
      if (k == idx.size()) break;
    }
  }
  std::sort(out.relations.begin(), out.relations.end());
  out.relations.erase(std::unique(out.relations.begin(), out.relations.end()),
                      out.relations.end());
  return out;
}

std::vector<DirectRelation> direct_ness_causes(const CausalSetting& setting, const Formula& psi,
                                               int t_psi, const CausalOptions& options) {
  return analyse_direct(setting, psi, t_psi, options).relations;
}

Formula after(const CausalSetting& setting, const EventSet& events, const LiteralSet& produced,
              const LiteralSet& maintained, int t) {
  const Context& ctx = setting.context();
  const LiteralSet& state = setting.state_at(t);
  LiteralSet goal = produced.united(maintained);
  if (!goal.coherent()) {
    throw QueryError(QueryError::Kind::kNoWitness, "incoherent target " + goal.to_string());
  }
  const EventSet& happened = setting.events_at(t);
  bool consistent = state.includes(maintained) && !state.includes(produced) &&
                    std::includes(happened.begin(), happened.end(), events.begin(), events.end());
  if (!consistent) {
    throw QueryError(QueryError::Kind::kNoWitness,
                     "inconsistent query at " + std::to_string(t) + ": produce " +
                         produced.to_string() + ", maintain " + maintained.to_string());
  }

  // Only fluents mentioned by the goal or the events' effects can matter;
  // an effect fluent's current value decides whether its effect is actual.
  std::set<std::string> relevant = Fluents(goal);
  for (const auto& e : events) {
    for (const auto& ce : ctx.event(e).eff) {
      for (const auto& f : Fluents(ce.condition.literals())) relevant.insert(f);
      relevant.insert(ce.literal.fluent);
    }
  }
  std::vector<Literal> candidates;
  for (const auto& l : state) {
    if (relevant.count(l.fluent) && !maintained.contains(l) &&
        !maintained.contains(l.complement())) {
      candidates.push_back(l);
    }
  }
  if (candidates.size() > 16) {
    throw SizeLimitError("after: " + std::to_string(candidates.size()) + " condition literals");
  }

  auto achieves = [&](const LiteralSet& base, const EventSet& es) {
    auto next = try_update(ctx, base, es);
    return next && next->includes(goal);
  };
  std::vector<EventSet> proper;
  {
    std::vector<std::string> ev(events.begin(), events.end());
    for (unsigned m = 0; m + 1 < (1u << ev.size()); ++m) {
      EventSet s;
      for (std::size_t i = 0; i < ev.size(); ++i) {
        if (m & (1u << i)) s.insert(ev[i]);
      }
      proper.push_back(std::move(s));
    }
  }
  auto witness = [&](const LiteralSet& w) {
    LiteralSet base = w.united(maintained);
    std::vector<std::string> free;
    std::set<std::string> fixed = Fluents(base);
    for (const auto& f : relevant) {
      if (!fixed.count(f)) free.push_back(f);
    }
    if (free.size() > 12) {
      throw SizeLimitError("after: " + std::to_string(free.size()) + " unconstrained fluents");
    }
    std::size_t total = 1;
    for (std::size_t i = 0; i < free.size(); ++i) total *= 3;
    for (std::size_t code = 0; code < total; ++code) {
      LiteralSet ext = base;
      std::size_t c = code;
      for (const auto& f : free) {
        if (c % 3 == 1) ext.insert(Literal(f, true));
        if (c % 3 == 2) ext.insert(Literal(f, false));
        c /= 3;
      }
      if (!achieves(ext, events)) return false;
    }
    return std::none_of(proper.begin(), proper.end(),
                        [&](const EventSet& es) { return achieves(base, es); });
  };

  std::vector<unsigned> order;
  for (unsigned m = 0; m < (1u << candidates.size()); ++m) order.push_back(m);
  std::stable_sort(order.begin(), order.end(), [](unsigned a, unsigned b) {
    return __builtin_popcount(a) < __builtin_popcount(b);
  });
  std::vector<unsigned> found;
  for (unsigned m : order) {
    if (std::any_of(found.begin(), found.end(), [m](unsigned f) { return (f & m) == f; })) continue;
    LiteralSet w;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      if (m & (1u << i)) w.insert(candidates[i]);
    }
    if (witness(w)) found.push_back(m);
  }
  if (found.empty()) {
    throw QueryError(QueryError::Kind::kNoWitness,
                     "no condition in " + state.to_string() + " lets the events achieve " +
                         goal.to_string());
  }
  std::vector<LiteralSet> witnesses;
  for (unsigned m : found) {
    LiteralSet w;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      if (m & (1u << i)) w.insert(candidates[i]);
    }
    witnesses.push_back(std::move(w));
  }
  std::sort(witnesses.begin(), witnesses.end());
  std::vector<Formula> terms;
  for (const auto& w : witnesses) terms.push_back(Formula::Conjunction(w));
  return Formula::Or(std::move(terms));
}

namespace {

struct Reach {
  std::set<OccurrenceSet> all;
  std::set<OccurrenceSet> terminal;
};

class Engine {
 public:
  Engine(const CausalSetting& setting, const CausalOptions& options)
      : setting_(setting), options_(options) {
    max_depth_ = options.max_depth < 0 ? setting.context().horizon() + 2 : options.max_depth;
  }

  const DirectAnalysis& Direct(const Formula& psi, int t) {
    auto key = std::make_pair(psi.to_string(), t);
    auto it = direct_.find(key);
    if (it == direct_.end()) {
      it = direct_.emplace(key, analyse_direct(setting_, psi, t, options_)).first;
    }
    return it->second;
  }

  Reach Relation(const DirectRelation& r, int depth) {
    Reach acc;
    acc.all.insert(OccurrenceSet{});
    acc.terminal.insert(OccurrenceSet{});
    for (const auto& o : r.causes) {
      Reach option = Occurrence_(r, o, depth);
      acc.all = Product(acc.all, option.all);
      acc.terminal = Product(acc.terminal, option.terminal);
    }
    return acc;
  }

  std::vector<Expansion> expansions() const {
    std::vector<Expansion> out;
    for (const auto& [key, e] : expansions_) out.push_back(e);
    return out;
  }

 private:
  // Alternatives for a single occurrence of r: itself, or any expansion.
  Reach Occurrence_(const DirectRelation& r, const Occurrence& o, int depth) {
    Reach self;
    self.all.insert(OccurrenceSet{o});
    self.terminal.insert(OccurrenceSet{o});
    if (o.time < 0) return self;
    std::size_t cell = 0;
    while (r.partition[cell].time != o.time) ++cell;
    const LiteralSet& w = r.partition[cell].literals;
    const LiteralSet& before = setting_.state_at(o.time);
    LiteralSet produced = w.intersected(EventEffects(setting_.context(), o.event, before));
    LiteralSet maintained = w.minus(produced).intersected(before);
    for (std::size_t j = cell + 1; j < r.partition.size(); ++j) {
      maintained = maintained.united(r.partition[j].literals);
    }
    Formula condition;
    try {
      condition = Formula::And({setting_.context().event(o.event).tri,
                                after(setting_, {o.event}, produced, maintained, o.time)});
    } catch (const QueryError& err) {
      if (err.kind() != QueryError::Kind::kNoWitness) throw;
      return self;
    }
    if (condition.is_true()) return self;
    Reach sub = Expand(o, condition, depth + 1);
    if (sub.all.empty()) return self;
    sub.all.insert(OccurrenceSet{o});
    return sub;
  }

  Reach Expand(const Occurrence& o, const Formula& condition, int depth) {
    if (depth > max_depth_) {
      throw QueryError(QueryError::Kind::kRecursionDepthExceeded,
                       "expansion of " + o.to_string() + " exceeds depth " +
                           std::to_string(max_depth_));
    }
    auto key = std::make_pair(o, condition.to_string());
    if (auto it = reach_.find(key); it != reach_.end()) return it->second;
    const DirectAnalysis& analysis = Direct(condition, o.time);
    Expansion record{o, condition, {}};
    Reach out;
    for (const auto& rel : analysis.relations) {
      if (rel.causes.empty()) continue;
      record.relations.push_back(rel);
      Reach part = Relation(rel, depth);
      out.all.insert(part.all.begin(), part.all.end());
      out.terminal.insert(part.terminal.begin(), part.terminal.end());
      Check(out.all.size());
    }
    expansions_.emplace(key, std::move(record));
    reach_.emplace(key, out);
    return out;
  }

  std::set<OccurrenceSet> Product(const std::set<OccurrenceSet>& a,
                                  const std::set<OccurrenceSet>& b) {
    std::set<OccurrenceSet> out;
    for (const auto& x : a) {
      for (const auto& y : b) {
        OccurrenceSet u = x;
        u.insert(y.begin(), y.end());
        out.insert(std::move(u));
        Check(out.size());
      }
    }
    return out;
  }

  void Check(std::size_t n) const {
    if (n > options_.max_cause_sets) {
      throw SizeLimitError("more than " + std::to_string(options_.max_cause_sets) +
                           " cause sets");
    }
  }

  const CausalSetting& setting_;
  const CausalOptions& options_;
  int max_depth_;
  std::map<std::pair<std::string, int>, DirectAnalysis> direct_;
  std::map<std::pair<Occurrence, std::string>, Reach> reach_;
  std::map<std::pair<Occurrence, std::string>, Expansion> expansions_;
};

bool Decisional(const Context& ctx, const OccurrenceSet& causes) {
  bool action = false;
  for (const auto& o : causes) {
    if (o.time < 0) continue;
    if (!ctx.is_action(o.event)) return false;
    action = true;
  }
  return action;
}

}  // namespace

CausalReport ness_causes(const CausalSetting& setting, const Formula& psi, int t_psi,
                         const CausalOptions& options) {
  CausalReport report;
  report.target = psi;
  report.time = t_psi;
  Engine engine(setting, options);
  DirectAnalysis direct = engine.Direct(psi, t_psi);
  report.direct = direct.relations;
  report.rejected = direct.rejected;

  std::set<OccurrenceSet> all;
  std::set<OccurrenceSet> terminal;
  for (const auto& r : report.direct) {
    report.direct_union.insert(r.causes.begin(), r.causes.end());
    Reach reach = engine.Relation(r, 0);
    all.insert(reach.all.begin(), reach.all.end());
    terminal.insert(reach.terminal.begin(), reach.terminal.end());
    if (all.size() > options.max_cause_sets) {
      throw SizeLimitError("more than " + std::to_string(options.max_cause_sets) +
                           " cause sets");
    }
  }
  report.expansions = engine.expansions();

  const Context& ctx = setting.context();
  for (const auto& c : all) {
    CauseSet cs{c, Decisional(ctx, c), terminal.count(c) != 0};
    if (cs.terminal) report.expanded_union.insert(c.begin(), c.end());
    if (cs.decisional) {
      for (const auto& o : c) {
        if (o.time >= 0) report.decisional.insert(o);
      }
    }
    report.cause_sets.push_back(std::move(cs));
  }
  return report;
}

CausalReport actual_causes(const CausalSetting& setting, const std::string& event, int t,
                           const CausalOptions& options) {
  const EventDecl* decl = setting.context().find_event(event);
  bool occurred = decl && decl->kind != EventKind::kInitial && t >= 0 &&
                  t <= setting.context().horizon() && setting.events_at(t).count(event);
  if (!occurred) {
    throw QueryError(QueryError::Kind::kNotOccurred,
                     event + " does not occur at " + std::to_string(t));
  }
  return ness_causes(setting, decl->tri, t, options);
}

ButForResult but_for(const CausalSetting& setting, const Occurrence& action, const Formula& psi,
                     int t_psi) {
  CheckTime(setting, t_psi);
  Scenario without = setting.scenario();
  if (!without.actions.erase(action)) {
    throw QueryError(QueryError::Kind::kNotScheduled,
                     action.to_string() + " is not part of the scenario");
  }
  Trace cf = build_trace(setting.context(), without);
  ButForResult out{true, !evaluate(cf.state_at(t_psi), psi), true, cf};
  for (int t = 0; t <= setting.last_time(); ++t) {
    bool holds = evaluate(cf.state_at(t), psi);
    if (t >= t_psi && holds) out.but_for = false;
    if (holds) out.absent_throughout = false;
  }
  return out;
}

}  // namespace ness
