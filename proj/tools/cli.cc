#include "cli.h"

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "ness/causation.h"
#include "ness/dsl.h"
#include "ness/errors.h"
#include "ness/oracle.h"
#include "ness/serialize.h"
#include "ness/simulator.h"

namespace ness::cli {
namespace {

using nlohmann::json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Error tied to an input file, reported as "path: message".
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

template <typename F>
auto WithPath(const std::string& path, F&& parse) {
  try {
    return parse(ReadFile(path));
  } catch (const Error& e) {
    throw InputError(path + ": " + e.what());
  }
}

struct Options {
  std::string domain;
  std::string scenario;
  std::string formula;
  std::string event;
  int at = -1;
  bool any_time = false;
  std::string format = "text";
  std::uint64_t seed = 1;
  int runs = 50;
};

CausalOptions FromEnv() {
  CausalOptions opts;
  if (const char* v = std::getenv("NESS_MAX_IMPLICANTS")) {
    try {
      long long n = std::stoll(v);
      if (n > 0) opts.backing.max_implicants = static_cast<std::size_t>(n);
    } catch (const std::exception&) {
      throw UsageError(std::string("NESS_MAX_IMPLICANTS is not a number: ") + v);
    }
  }
  return opts;
}

Occurrence ParseOccurrence(const std::string& text) {
  try {
    return Occurrence::Parse(text);
  } catch (const std::invalid_argument& e) {
    throw UsageError("--event: " + std::string(e.what()));
  }
}

std::string Braces(const EventSet& events) {
  std::string out = "{";
  for (const auto& e : events) out += (out.size() > 1 ? ", " : "") + e;
  return out + "}";
}

void RequireFormat(const Options& o, std::initializer_list<const char*> allowed) {
  for (const char* f : allowed) {
    if (o.format == f) return;
  }
  throw UsageError("--format " + o.format + " is not supported by this command");
}

struct Loaded {
  Context ctx;
  Scenario scenario;
};

Loaded Load(const Options& o) {
  Context ctx = WithPath(o.domain, [](const std::string& text) { return parse_domain(text); });
  Scenario sc = WithPath(o.scenario, [&](const std::string& text) {
    return parse_scenario(text, ctx);
  });
  return {std::move(ctx), std::move(sc)};
}

Formula QueryFormula(const Options& o, const Context& ctx) {
  try {
    return parse_formula(o.formula, &ctx);
  } catch (const Error& e) {
    throw InputError(std::string("--formula: ") + e.what());
  }
}

void PrintReport(const CausalReport& report, const std::string& format, std::ostream& out) {
  if (format == "json") {
    out << to_json(report).dump(2) << "\n";
  } else if (format == "dot") {
    out << to_dot(report);
  } else {
    for (const auto& c : report.cause_sets) {
      out << to_string(c.causes);
      if (c.decisional) out << " decisional";
      if (c.terminal) out << " terminal";
      out << "\n";
    }
  }
}

int Check(const Options& o, std::ostream& out) {
  RequireFormat(o, {"text", "json"});
  Context ctx = WithPath(o.domain, [](const std::string& text) { return parse_domain(text); });
  if (!o.scenario.empty()) {
    Scenario sc = WithPath(o.scenario, [&](const std::string& text) {
      return parse_scenario(text, ctx);
    });
    build_trace(ctx, sc);
  }
  if (o.format == "json") {
    out << json{{"status", "OK"}, {"domain", ctx.name()}}.dump(2) << "\n";
  } else {
    out << "OK\n";
  }
  return 0;
}

int Simulate(const Options& o, std::ostream& out) {
  RequireFormat(o, {"text", "json"});
  Loaded in = Load(o);
  Trace trace = build_trace(in.ctx, in.scenario);
  if (o.format == "json") {
    out << to_json(in.ctx, trace).dump(2) << "\n";
    return 0;
  }
  out << "E-1: " << Braces(trace.events_at(-1)) << "\n";
  for (int t = 0; t < static_cast<int>(trace.states().size()); ++t) {
    out << "S" << t << ": " << trace.states()[t].to_string() << "\n";
    if (t <= trace.last_event_time()) out << "E" << t << ": " << Braces(trace.events_at(t)) << "\n";
  }
  if (trace.last_event_time() < in.ctx.horizon()) {
    out << "quiescent after " << trace.last_event_time() << "\n";
  }
  return 0;
}

int Causes(const Options& o, std::ostream& out, bool force_dot) {
  if (!force_dot) RequireFormat(o, {"text", "json", "dot"});
  Loaded in = Load(o);
  Formula psi = QueryFormula(o, in.ctx);
  CausalSetting setting(in.ctx, in.scenario);
  CausalReport report = ness_causes(setting, psi, o.at, FromEnv());
  PrintReport(report, force_dot ? "dot" : o.format, out);
  return 0;
}

int ActualCause(const Options& o, std::ostream& out) {
  RequireFormat(o, {"text", "json", "dot"});
  Occurrence occ = ParseOccurrence(o.event);
  Loaded in = Load(o);
  CausalSetting setting(in.ctx, in.scenario);
  PrintReport(actual_causes(setting, occ.event, occ.time, FromEnv()), o.format, out);
  return 0;
}

int ButFor(const Options& o, std::ostream& out) {
  RequireFormat(o, {"text", "json"});
  Occurrence occ = ParseOccurrence(o.event);
  Loaded in = Load(o);
  Formula psi = QueryFormula(o, in.ctx);
  CausalSetting setting(in.ctx, in.scenario);
  ButForResult r = but_for(setting, occ, psi, o.at);
  bool answer = o.any_time ? r.absent_throughout : r.but_for;
  if (o.format == "json") {
    out << json{{"event", to_json(occ)},
                {"formula", psi.to_string()},
                {"t", o.at},
                {"but_for", r.but_for},
                {"absent_at_time", r.absent_at_time},
                {"absent_throughout", r.absent_throughout}}
               .dump(2)
        << "\n";
  } else {
    out << (answer ? "true" : "false") << "\n";
  }
  return 0;
}

struct BenchRow {
  std::uint64_t seed;
  std::string query;
  std::string action;
  std::string but_for;
  bool in_ness;
  bool decisional;
};

// Compares the But-for test with NESS cause sets on the random corpus, and
// the engine's direct relations with the brute-force reference.
int Bench(const Options& o, std::ostream& out) {
  RequireFormat(o, {"text", "json"});
  if (o.runs < 0) throw UsageError("--runs must be non-negative");
  CausalOptions opts = FromEnv();
  std::vector<BenchRow> rows;
  int queries = 0, checks = 0, agree = 0, but_for_only = 0, ness_only = 0, cf_errors = 0;
  int mismatches = 0, skipped = 0;
  for (int i = 0; i < o.runs; ++i) {
    GeneratorConfig cfg;
    cfg.seed = o.seed + static_cast<std::uint64_t>(i);
    GeneratedCase gen = generate(cfg);
    CausalSetting setting(gen.context, gen.scenario);
    int last = setting.last_time();
    for (const auto& l : setting.state_at(last)) {
      if (setting.context().initial_state().contains(l)) continue;
      Formula psi = l;
      ++queries;
      CausalReport report;
      try {
        report = ness_causes(setting, psi, last, opts);
      } catch (const Error&) {
        ++skipped;
        continue;
      }
      if (brute_force_direct(setting, psi, last) != report.direct) ++mismatches;
      for (const auto& a : gen.scenario.actions) {
        ++checks;
        bool in_ness = false;
        for (const auto& c : report.cause_sets) in_ness = in_ness || c.causes.count(a);
        std::string bf;
        try {
          bf = but_for(setting, a, psi, last).but_for ? "yes" : "no";
        } catch (const Error&) {
          bf = "error";
          ++cf_errors;
        }
        bool dis = (bf == "yes") != in_ness;
        if (bf == "error") {
          dis = true;
        } else if (!dis) {
          ++agree;
        } else if (bf == "yes") {
          ++but_for_only;
        } else {
          ++ness_only;
        }
        if (dis) {
          rows.push_back({cfg.seed, psi.to_string() + "@" + std::to_string(last), a.to_string(), bf,
                          in_ness, report.decisional.count(a) != 0});
        }
      }
    }
  }
  if (o.format == "json") {
    json jrows = json::array();
    for (const auto& r : rows) {
      jrows.push_back({{"seed", r.seed},
                       {"query", r.query},
                       {"action", r.action},
                       {"but_for", r.but_for},
                       {"ness", r.in_ness},
                       {"decisional", r.decisional}});
    }
    out << json{{"disagreements", jrows},
                {"summary",
                 {{"runs", o.runs},
                  {"queries", queries},
                  {"action_checks", checks},
                  {"agree", agree},
                  {"but_for_only", but_for_only},
                  {"ness_only", ness_only},
                  {"counterfactual_errors", cf_errors},
                  {"skipped_queries", skipped},
                  {"oracle_mismatches", mismatches}}}}
               .dump(2)
        << "\n";
    return 0;
  }
  out << std::left << std::setw(8) << "seed" << std::setw(14) << "query" << std::setw(12)
      << "action" << std::setw(9) << "but-for" << std::setw(6) << "ness"
      << "decisional\n";
  for (const auto& r : rows) {
    out << std::left << std::setw(8) << r.seed << std::setw(14) << r.query << std::setw(12)
        << r.action << std::setw(9) << r.but_for << std::setw(6) << (r.in_ness ? "yes" : "no")
        << (r.decisional ? "yes" : "no") << "\n";
  }
  out << "runs " << o.runs << ", queries " << queries << ", action checks " << checks
      << ", agree " << agree << ", but-for only " << but_for_only << ", ness only " << ness_only
      << ", counterfactual errors " << cf_errors << ", skipped " << skipped
      << ", oracle mismatches " << mismatches << "\n";
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"NESS causation over action-language traces", "ness"};
  app.require_subcommand(1);
  Options o;
  auto formats = CLI::IsMember({"json", "text", "dot"});

  auto files = [&](CLI::App* cmd, bool scenario_required) {
    cmd->add_option("domain", o.domain, "domain file (.adl)")->required();
    auto* s = cmd->add_option("scenario", o.scenario, "scenario file (.sc)");
    if (scenario_required) s->required();
    cmd->add_option("--format", o.format, "json, text or dot")->check(formats);
  };
  auto query = [&](CLI::App* cmd) {
    cmd->add_option("--formula", o.formula, "target formula")->required();
    cmd->add_option("--at", o.at, "time point of the formula")->required();
  };

  auto* check = app.add_subcommand("check", "parse and validate a domain (and scenario)");
  files(check, false);
  auto* simulate = app.add_subcommand("simulate", "print the trace of a scenario");
  files(simulate, true);
  auto* causes = app.add_subcommand("causes", "NESS-causes of a formula at a time point");
  files(causes, true);
  query(causes);
  auto* actual = app.add_subcommand("actual-cause", "actual causes of an event occurrence");
  files(actual, true);
  actual->add_option("--event", o.event, "occurrence name@t")->required();
  auto* butfor = app.add_subcommand("butfor", "But-for test for a scheduled action");
  files(butfor, true);
  query(butfor);
  butfor->add_option("--event", o.event, "scheduled action name@t")->required();
  butfor->add_flag("--any-time", o.any_time, "require the formula to be false at every time");
  auto* dot = app.add_subcommand("export-dot", "causal graph of a formula in DOT");
  files(dot, true);
  query(dot);
  auto* bench = app.add_subcommand("bench", "But-for versus NESS on random domains");
  bench->add_option("--seed", o.seed, "first seed");
  bench->add_option("--runs", o.runs, "number of generated domains");
  bench->add_option("--format", o.format, "json or text")->check(formats);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (check->parsed()) return Check(o, out);
    if (simulate->parsed()) return Simulate(o, out);
    if (causes->parsed()) return Causes(o, out, false);
    if (actual->parsed()) return ActualCause(o, out);
    if (butfor->parsed()) return ButFor(o, out);
    if (dot->parsed()) return Causes(o, out, true);
    if (bench->parsed()) return Bench(o, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace ness::cli
