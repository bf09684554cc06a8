#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>

#include "ness/causation.h"
#include "ness/errors.h"
#include "ness/oracle.h"
#include "ness/serialize.h"
#include "properties.h"
#include "test_util.h"

using namespace ness;
using namespace ness::testing;

namespace {

const Formula kSwitchPsi = parse_formula("l1 & l4 | l2 & l4 | l3 & l4");

OccurrenceSet Union(const std::vector<DirectRelation>& rels) {
  OccurrenceSet out;
  for (const auto& r : rels) out.insert(r.causes.begin(), r.causes.end());
  return out;
}

std::set<OccurrenceSet> Sets(const CausalReport& r) {
  std::set<OccurrenceSet> out;
  for (const auto& c : r.cause_sets) out.insert(c.causes);
  return out;
}

QueryError::Kind QueryKind(const std::function<void()>& f) {
  try {
    f();
  } catch (const QueryError& e) {
    return e.kind();
  }
  FAIL("expected a query error");
  return QueryError::Kind::kNoWitness;
}

// Independent reading of after(): try every W drawn from S(t) minus the
// maintained literals and check the clauses over all coherent extensions.
std::set<LiteralSet> AfterWitnesses(const CausalSetting& s, const EventSet& events,
                                    const LiteralSet& produced, const LiteralSet& maintained,
                                    int t) {
  const Context& ctx = s.context();
  LiteralSet goal = produced.united(maintained);
  auto apply = [&](const LiteralSet& base, const EventSet& es) -> std::optional<LiteralSet> {
    LiteralSet add;
    for (const auto& e : es) {
      for (const auto& ce : ctx.event(e).eff) {
        if (evaluate(base, ce.condition) && !base.contains(ce.literal)) add.insert(ce.literal);
      }
    }
    if (!add.coherent()) return std::nullopt;
    return base.minus(add.complement()).united(add);
  };
  auto ok = [&](const LiteralSet& base, const EventSet& es) {
    auto r = apply(base, es);
    return r && r->includes(goal);
  };
  std::vector<Literal> pool;
  for (const auto& l : s.state_at(t).minus(maintained)) pool.push_back(l);
  std::vector<LiteralSet> valid;
  for (unsigned m = 0; m < (1u << pool.size()); ++m) {
    LiteralSet w;
    for (std::size_t i = 0; i < pool.size(); ++i) {
      if (m >> i & 1) w.insert(pool[i]);
    }
    LiteralSet base = w.united(maintained);
    bool good = true;
    // Every coherent extension over all fluents.
    std::vector<std::string> free;
    for (const auto& f : ctx.fluents()) {
      if (!base.contains(Literal(f, true)) && !base.contains(Literal(f, false))) free.push_back(f);
    }
    std::size_t total = 1;
    for (std::size_t i = 0; i < free.size(); ++i) total *= 3;
    for (std::size_t code = 0; code < total && good; ++code) {
      LiteralSet ext = base;
      std::size_t c = code;
      for (const auto& f : free) {
        if (c % 3 == 1) ext.insert(Literal(f, true));
        if (c % 3 == 2) ext.insert(Literal(f, false));
        c /= 3;
      }
      good = ok(ext, events);
    }
    std::vector<std::string> ev(events.begin(), events.end());
    for (unsigned em = 0; good && em + 1 < (1u << ev.size()); ++em) {
      EventSet sub;
      for (std::size_t i = 0; i < ev.size(); ++i) {
        if (em >> i & 1) sub.insert(ev[i]);
      }
      if (ok(base, sub)) good = false;
    }
    if (good) valid.push_back(w);
  }
  std::set<LiteralSet> minimal;
  for (const auto& w : valid) {
    bool min = true;
    for (const auto& v : valid) {
      if (v != w && w.includes(v)) min = false;
    }
    if (min) minimal.insert(w);
  }
  return minimal;
}

Formula ExpectedAfter(const std::set<LiteralSet>& witnesses) {
  std::vector<Formula> terms;
  for (const auto& w : witnesses) terms.push_back(Formula::Conjunction(w));
  return Formula::Or(terms);
}

}  // namespace

TEST_CASE("switches: direct causes per backing and their union") {
  CausalSetting s = LoadSetting("switches.adl", "switches.sc");
  DirectAnalysis a = analyse_direct(s, kSwitchPsi, 2);
  REQUIRE(a.relations.size() == 2);
  CHECK(a.relations[0].backing == Lits("l2, l4"));
  CHECK(a.relations[0].causes == Occs({"e2@0", "e4@1"}));
  CHECK(a.relations[0].partition ==
        std::vector<PartitionCell>{{1, Lits("l4")}, {0, Lits("l2")}});
  CHECK(a.relations[1].backing == Lits("l3, l4"));
  CHECK(a.relations[1].causes == Occs({"e3@1", "e4@1"}));
  CHECK(a.relations[1].partition == std::vector<PartitionCell>{{1, Lits("l3, l4")}});
  CHECK(Union(a.relations) == Occs({"e2@0", "e3@1", "e4@1"}));
  REQUIRE(a.rejected.size() == 1);
  CHECK(a.rejected[0].backing == Lits("l1, l4"));
  CHECK(a.rejected[0].reason.rfind("persistency", 0) == 0);
}

TEST_CASE("untouched initial literal is caused by its ini event") {
  CausalSetting s = LoadSetting("pollution.adl", "duplication.sc");
  for (int t = 0; t <= 4; ++t) {
    auto rels = direct_ness_causes(s, F("t_os"), t);
    REQUIRE(rels.size() == 1);
    CHECK(rels[0].causes == Occs({"ini(t_os)@-1"}));
    CHECK(rels[0].backing == Lits("t_os"));
  }
}

TEST_CASE("conditional effects: direct causes, after and one recursion step") {
  CausalSetting s = LoadSetting("after.adl", "after.sc");
  CHECK(actual_effects(s.context(), {"e"}, s.state_at(1)) == Lits("l2, l3"));
  auto rels = direct_ness_causes(s, F("l1 & l2 & l3"), 2);
  REQUIRE(rels.size() == 1);
  CHECK(rels[0].causes == Occs({"e@1", "ini(l1)@-1"}));
  Formula cond = after(s, {"e"}, Lits("l2, l3"), Lits("l1"), 1);
  CHECK(cond.to_string() == "!l_c1 & l_c3");
  CHECK(ExpectedAfter(AfterWitnesses(s, {"e"}, Lits("l2, l3"), Lits("l1"), 1)) == cond);

  CausalReport r = ness_causes(s, F("l1 & l2 & l3"), 2);
  REQUIRE(r.expansions.size() == 1);
  CHECK(r.expansions[0].parent == Occurrence{"e", 1});
  CHECK(r.expansions[0].condition.to_string() == "!l_c1 & l_c3");
  CHECK(Union(r.expansions[0].relations) == Occs({"e_prime@0"}));
  CHECK(Sets(r).count(Occs({"e_prime@0", "ini(l1)@-1"})));
  CHECK(Sets(r).count(Occs({"e@1", "ini(l1)@-1"})));
}

TEST_CASE("after: unconditional effects need no condition") {
  CausalSetting s = LoadSetting("switches.adl", "switches.sc");
  CHECK(after(s, {"e3"}, Lits("l3"), {}, 1).is_true());
  CHECK(after(s, {"e3", "e4"}, Lits("l3, l4"), Lits("l2"), 1).is_true());
}

TEST_CASE("after: a conditional effect needs its condition") {
  Context ctx = parse_domain(R"(
domain cond {
  fluents: c, l, k;
  init: c;
  horizon: 1;
  action e { eff: [c] l; }
  action f { eff: [c & !k] l, [k] l; }
})");
  CausalSetting s(ctx, parse_scenario("0: e, f;", ctx));
  CHECK(after(s, {"e"}, Lits("l"), {}, 0) == F("c"));
  CHECK(ExpectedAfter(AfterWitnesses(s, {"e"}, Lits("l"), {}, 0)) == F("c"));
  // Both events produce l, so neither is necessary within {e, f}.
  CHECK(QueryKind([&] { after(s, {"e", "f"}, Lits("l"), {}, 0); }) ==
        QueryError::Kind::kNoWitness);
  CHECK(QueryKind([&] { after(s, {"e"}, Lits("c"), {}, 0); }) == QueryError::Kind::kNoWitness);
}

TEST_CASE("after agrees with a brute-force reading on generated expansions") {
  int compared = 0;
  for (std::uint64_t seed = 1; seed <= 300; ++seed) {
    GeneratorConfig cfg;
    cfg.seed = seed;
    cfg.max_fluents = 4;
    cfg.conditional_effect_probability = 0.6;
    GeneratedCase gen = generate(cfg);
    CausalSetting s(gen.context, gen.scenario);
    int last = s.last_time();
    for (const auto& l : s.state_at(last)) {
      for (const auto& r : direct_ness_causes(s, l, last)) {
        for (std::size_t i = 0; i < r.partition.size(); ++i) {
          const auto& cell = r.partition[i];
          if (cell.time < 0) continue;
          for (const auto& o : r.causes_at(cell.time)) {
            LiteralSet before = s.state_at(cell.time);
            LiteralSet eff = actual_effects(s.context(), {o.event}, before);
            LiteralSet produced = cell.literals.intersected(eff);
            LiteralSet maintained = cell.literals.minus(produced).intersected(before);
            for (std::size_t j = i + 1; j < r.partition.size(); ++j) {
              maintained = maintained.united(r.partition[j].literals);
            }
            auto expected = AfterWitnesses(s, {o.event}, produced, maintained, cell.time);
            CAPTURE(seed);
            CAPTURE(o.to_string());
            if (expected.empty()) {
              CHECK(QueryKind([&] { after(s, {o.event}, produced, maintained, cell.time); }) ==
                    QueryError::Kind::kNoWitness);
            } else {
              CHECK(after(s, {o.event}, produced, maintained, cell.time) ==
                    ExpectedAfter(expected));
            }
            ++compared;
          }
        }
      }
    }
  }
  CHECK(compared > 100);
}

TEST_CASE("duplication: both productions are decisional causes of the harm") {
  CausalSetting s = LoadSetting("pollution.adl", "duplication.sc");
  CausalReport r = ness_causes(s, F("d"), 3);
  CHECK(r.direct_union == Occs({"fau_p@2"}));
  CHECK(r.decisional == Occs({"prod_s@0", "prod_m@0"}));
  CHECK(r.expanded_union == Occs({"prod_s@0", "prod_m@0", "ini(t_os)@-1"}));
  CHECK(Sets(r) == std::set<OccurrenceSet>{Occs({"fau_p@2"}), Occs({"dis_w@1"}),
                                           Occs({"prod_s@0"}),
                                           Occs({"prod_m@0", "ini(t_os)@-1"})});
  for (const auto& c : r.cause_sets) {
    bool expected = c.causes == Occs({"prod_s@0"}) || c.causes == Occs({"prod_m@0", "ini(t_os)@-1"});
    CHECK(c.decisional == expected);
    CHECK(c.terminal == expected);
  }
  CHECK_FALSE(but_for(s, Occurrence{"prod_s", 0}, F("d"), 3).but_for);
  CHECK_FALSE(but_for(s, Occurrence{"prod_m", 0}, F("d"), 3).but_for);
}

TEST_CASE("preemption: only the earlier production is decisional") {
  CausalSetting s = LoadSetting("pollution.adl", "preemption.sc");
  CausalReport r = ness_causes(s, F("d"), 3);
  CHECK(r.decisional == Occs({"prod_s@0"}));
  CHECK(Sets(r) == std::set<OccurrenceSet>{Occs({"fau_p@2"}), Occs({"dis_w@1"}),
                                           Occs({"prod_s@0"})});
  REQUIRE(r.expansions.size() == 2);
  ButForResult bf = but_for(s, Occurrence{"prod_s", 0}, F("d"), 3);
  CHECK_FALSE(bf.but_for);
  CHECK_FALSE(bf.absent_throughout);
  // The medicine path alone produces the harm one step later.
  CHECK(bf.absent_at_time);
  CHECK(evaluate(bf.counterfactual.state_at(4), F("d")));
  CHECK_FALSE(but_for(s, Occurrence{"prod_m", 1}, F("d"), 3).but_for);
}

TEST_CASE("but-for holds with a single factory") {
  Context ctx = LoadDomain("pollution.adl");
  CausalSetting s(ctx, parse_scenario("0: prod_s;", ctx));
  ButForResult bf = but_for(s, Occurrence{"prod_s", 0}, F("d"), 3);
  CHECK(bf.but_for);
  CHECK(bf.absent_throughout);
  CHECK(ness_causes(s, F("d"), 3).decisional == Occs({"prod_s@0"}));
  CHECK(QueryKind([&] { but_for(s, Occurrence{"prod_m", 0}, F("d"), 3); }) ==
        QueryError::Kind::kNotScheduled);
}

TEST_CASE("actual causes of the plant fault") {
  CausalSetting s = LoadSetting("pollution.adl", "duplication.sc");
  CausalReport r = actual_causes(s, "fau_p", 2);
  CHECK(r.direct_union == Occs({"dis_w@1"}));
  CHECK(r.decisional == Occs({"prod_s@0", "prod_m@0"}));
  CHECK(Sets(r).count(Occs({"prod_m@0", "ini(t_os)@-1"})));
  CHECK(QueryKind([&] { actual_causes(s, "ini(t_os)", 0); }) == QueryError::Kind::kNotOccurred);
  CHECK(QueryKind([&] { actual_causes(s, "ini(t_os)", -1); }) == QueryError::Kind::kNotOccurred);
  CHECK(QueryKind([&] { actual_causes(s, "fau_p", 1); }) == QueryError::Kind::kNotOccurred);
  CHECK(QueryKind([&] { actual_causes(s, "nope", 1); }) == QueryError::Kind::kNotOccurred);
}

TEST_CASE("actual causes of a hypothetical electrocution") {
  std::string text = Slurp(DomainPath("switches.adl"));
  text.replace(text.find("l4;"), 3, "l4, shock;");
  text.replace(text.rfind('}'), 1,
               "  event electrocution { tri: l1 & l4 | l2 & l4 | l3 & l4; eff: shock; }\n}");
  Context ctx = parse_domain(text);
  CausalSetting s(ctx, parse_scenario(Slurp(DomainPath("switches.sc")), ctx));
  CHECK(s.events_at(2) == EventSet{"electrocution"});
  CausalReport r = actual_causes(s, "electrocution", 2);
  CHECK(r.direct_union == Occs({"e2@0", "e3@1", "e4@1"}));
  CHECK(r.direct == direct_ness_causes(s, kSwitchPsi, 2));
}

TEST_CASE("query errors and limits") {
  CausalSetting s = LoadSetting("pollution.adl", "duplication.sc");
  CHECK(QueryKind([&] { direct_ness_causes(s, F("d"), 5); }) ==
        QueryError::Kind::kTimeOutOfRange);
  CHECK(QueryKind([&] { direct_ness_causes(s, F("d"), -1); }) ==
        QueryError::Kind::kTimeOutOfRange);
  CHECK(direct_ness_causes(s, F("!t_os"), 3).empty());
  CHECK(ness_causes(s, F("d"), 2).cause_sets.empty());

  CausalOptions shallow;
  shallow.max_depth = 0;
  CHECK(QueryKind([&] { ness_causes(s, F("d"), 3, shallow); }) ==
        QueryError::Kind::kRecursionDepthExceeded);
  CausalOptions few;
  few.max_cause_sets = 2;
  CHECK_THROWS_AS(ness_causes(s, F("d"), 3, few), SizeLimitError);
}

TEST_CASE("reports are deterministic") {
  CausalSetting s = LoadSetting("pollution.adl", "duplication.sc");
  CHECK(to_json(ness_causes(s, F("d"), 3)).dump() == to_json(ness_causes(s, F("d"), 3)).dump());
}

TEST_CASE("engine matches the brute-force oracle on examples") {
  CausalSetting sw = LoadSetting("switches.adl", "switches.sc");
  CHECK(brute_force_direct(sw, kSwitchPsi, 2) == direct_ness_causes(sw, kSwitchPsi, 2));
  CausalSetting ex6 = LoadSetting("after.adl", "after.sc");
  CHECK(brute_force_direct(ex6, F("l1 & l2 & l3"), 2) ==
        direct_ness_causes(ex6, F("l1 & l2 & l3"), 2));
  CHECK(brute_force_direct(sw, F("l1"), 2).empty());
}

TEST_CASE("engine matches the oracle and is sound on random domains") {
  for (std::uint64_t seed = 1; seed <= 120; ++seed) {
    GeneratorConfig cfg;
    cfg.seed = seed;
    GeneratedCase gen = generate(cfg);
    CausalSetting s(gen.context, gen.scenario);
    Rng rng(seed * 7919);
    for (int q = 0; q < 4; ++q) {
      Formula psi = random_formula(rng, gen.context.fluents(), 2);
      int t = rng.between(0, s.last_time());
      CAPTURE(seed);
      CAPTURE(psi.to_string());
      CAPTURE(t);
      auto engine = direct_ness_causes(s, psi, t);
      CHECK(engine == brute_force_direct(s, psi, t));
      for (const auto& r : engine) {
        auto bad = RelationViolations(s, r);
        CHECK_MESSAGE(bad.empty(), (bad.empty() ? "" : bad.front()));
      }
      // Every cause set only mentions occurrences of the trace.
      for (const auto& c : ness_causes(s, psi, t).cause_sets) {
        for (const auto& o : c.causes) CHECK(s.events_at(o.time).count(o.event));
      }
    }
  }
}

namespace {

// Renames every fluent and declared event consistently.
Context Renamed(const Context& ctx, std::map<std::string, std::string>& names) {
  auto fluent = [](const std::string& f) { return "q_" + f; };
  auto lit = [&](const Literal& l) { return Literal(fluent(l.fluent), l.positive); };
  std::function<Formula(const Formula&)> rename = [&](const Formula& f) -> Formula {
    switch (f.kind()) {
      case Formula::Kind::kTrue:
        return f;
      case Formula::Kind::kLiteral:
        return lit(f.literal());
      case Formula::Kind::kAnd:
      case Formula::Kind::kOr: {
        std::vector<Formula> kids;
        for (const auto& c : f.children()) kids.push_back(rename(c));
        return f.kind() == Formula::Kind::kAnd ? Formula::And(kids) : Formula::Or(kids);
      }
    }
    return f;
  };
  std::vector<std::string> fluents;
  for (const auto& f : ctx.fluents()) fluents.push_back(fluent(f));
  LiteralSet init;
  for (const auto& l : ctx.initial_state()) {
    init.insert(lit(l));
    names[ini_event_name(l)] = ini_event_name(lit(l));
  }
  std::vector<EventDecl> events;
  for (const auto& e : ctx.events()) {
    EventDecl d = e;
    d.name = "ev_" + e.name;
    names[e.name] = d.name;
    d.pre = rename(e.pre);
    d.tri = rename(e.tri);
    for (auto& ce : d.eff) {
      ce.condition = rename(ce.condition);
      ce.literal = lit(ce.literal);
    }
    events.push_back(d);
  }
  std::set<std::pair<std::string, std::string>> prio;
  for (const auto& [hi, lo] : ctx.priority()) prio.emplace("ev_" + hi, "ev_" + lo);
  return Context(ctx.name(), fluents, init, events, prio, ctx.horizon(), ctx.init_strict());
}

}  // namespace

TEST_CASE("renaming fluents and events renames the cause sets") {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    GeneratorConfig cfg;
    cfg.seed = seed;
    GeneratedCase gen = generate(cfg);
    std::map<std::string, std::string> names;
    Context renamed = Renamed(gen.context, names);
    Scenario sc;
    for (const auto& o : gen.scenario.actions) sc.actions.insert({names[o.event], o.time});
    CausalSetting a(gen.context, gen.scenario);
    CausalSetting b(renamed, sc);
    int last = a.last_time();
    for (const auto& l : a.state_at(last)) {
      CausalReport ra = ness_causes(a, l, last);
      CausalReport rb = ness_causes(b, Literal("q_" + l.fluent, l.positive), last);
      std::set<OccurrenceSet> mapped;
      for (const auto& c : ra.cause_sets) {
        OccurrenceSet m;
        for (const auto& o : c.causes) m.insert({names.at(o.event), o.time});
        mapped.insert(m);
      }
      CAPTURE(seed);
      CHECK(mapped == Sets(rb));
      CHECK(ra.decisional.size() == rb.decisional.size());
    }
  }
}
