#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ness/dsl.h"
#include "ness/errors.h"
#include "ness/oracle.h"
#include "test_util.h"

using namespace ness;
using namespace ness::testing;

TEST_CASE("same seed, same case") {
  GeneratorConfig cfg;
  cfg.seed = 1;
  GeneratedCase a = generate(cfg);
  GeneratedCase b = generate(cfg);
  CHECK(a.context == b.context);
  CHECK(a.scenario == b.scenario);
  CHECK(print_domain(a.context) == print_domain(b.context));
  cfg.seed = 2;
  CHECK(print_domain(generate(cfg).context) != print_domain(a.context));
}

TEST_CASE("rng helpers are deterministic and in range") {
  Rng a(9), b(9);
  for (int i = 0; i < 1000; ++i) {
    int x = a.between(-2, 3);
    CHECK(x == b.between(-2, 3));
    CHECK(x >= -2);
    CHECK(x <= 3);
  }
  Rng c(5);
  int hits = 0;
  for (int i = 0; i < 1000; ++i) hits += c.chance(0.25);
  CHECK(hits > 150);
  CHECK(hits < 350);
}

TEST_CASE("single-fluent bound still yields a valid case") {
  GeneratorConfig cfg;
  cfg.max_fluents = 1;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    cfg.seed = seed;
    GeneratedCase g = generate(cfg);
    CHECK(g.context.fluents().size() == 1);
    CHECK_NOTHROW(build_trace(g.context, g.scenario));
  }
}

TEST_CASE("bounds are enforced") {
  GeneratorConfig cfg;
  cfg.max_fluents = 7;
  CHECK_THROWS_AS(generate(cfg), std::invalid_argument);
  cfg = GeneratorConfig{};
  cfg.max_horizon = 6;
  CHECK_THROWS_AS(generate(cfg), std::invalid_argument);
  cfg = GeneratorConfig{};
  cfg.max_events = 0;
  CHECK_THROWS_AS(generate(cfg), std::invalid_argument);
  cfg = GeneratorConfig{};
  cfg.max_attempts = 0;
  CHECK_THROWS_AS(generate(cfg), GenerationExhausted);
}

TEST_CASE("a hundred seeds give valid traces") {
  for (std::uint64_t seed = 1000; seed < 1100; ++seed) {
    GeneratorConfig cfg;
    cfg.seed = seed;
    cfg.max_fluents = 6;
    cfg.max_events = 6;
    cfg.max_horizon = 5;
    GeneratedCase g = generate(cfg);
    CHECK(g.attempts >= 1);
    Trace tr = build_trace(g.context, g.scenario);
    CHECK(validate_sequence(g.context, tr.events()).valid());
    for (const auto& o : g.scenario.actions) {
      CHECK(g.context.is_action(o.event));
      CHECK(evaluate(tr.state_at(o.time), g.context.event(o.event).pre));
    }
  }
}

TEST_CASE("oracle reproduces the switches result") {
  CausalSetting s = LoadSetting("switches.adl", "switches.sc");
  auto rels = brute_force_direct(s, F("l1 & l4 | l2 & l4 | l3 & l4"), 2);
  REQUIRE(rels.size() == 2);
  CHECK(rels[0].causes == Occs({"e2@0", "e4@1"}));
  CHECK(rels[1].causes == Occs({"e3@1", "e4@1"}));
  CHECK(brute_force_direct(s, F("l1"), 2).empty());
}

TEST_CASE("oracle agrees with the engine on a four-fluent domain from seed 42") {
  GeneratorConfig cfg;
  cfg.seed = 42;
  cfg.min_fluents = 4;
  cfg.max_fluents = 4;
  GeneratedCase g = generate(cfg);
  REQUIRE(g.context.fluents().size() == 4);
  CausalSetting s(g.context, g.scenario);
  int compared = 0;
  for (int t = 0; t <= s.last_time(); ++t) {
    for (const auto& l : s.state_at(t)) {
      CHECK(brute_force_direct(s, l, t) == direct_ness_causes(s, l, t));
      ++compared;
    }
  }
  CHECK(compared > 0);
}

TEST_CASE("oracle refuses large domains") {
  Context ctx("big", {"a", "b", "c", "d", "e", "f", "g"}, Lits("!a, !b, !c, !d, !e, !f, !g"), {},
              {}, 1);
  CausalSetting s(ctx, Scenario{});
  CHECK_THROWS_AS(brute_force_direct(s, F("!a"), 0), SizeLimitError);
}
