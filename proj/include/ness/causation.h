// NESS-style actual causation over simulated traces.
//
// A direct relation C ~>_W (psi, t_psi) says that the event occurrences C are
// necessary for the sufficiency of a minimal backing W of psi: W is split by
// the time each literal was last achieved, every cell W_i is produced by a
// minimal subset C(t_i) of the events occurring at t_i, and every cell stays
// true up to t_psi. Literals true since the initial state are attributed to
// the ini(l) pseudo-events at t = -1.
//
// NESS-causes extend direct causes upstream: an occurrence o in cell W_i is
// replaced by the causes of psi' = tri(o) & after({o}, produced, maintained)
// at t_i, i.e. of whatever triggered o and made o have its actual effects.

#ifndef NESS_CAUSATION_H_
#define NESS_CAUSATION_H_

#include <cstddef>
#include <string>
#include <vector>

#include "ness/core.h"
#include "ness/domain.h"
#include "ness/simulator.h"

namespace ness {

/// A scenario and context with their memoised trace.
class CausalSetting {
 public:
  /// Builds the trace; throws the simulator's errors.
  CausalSetting(Context context, Scenario scenario);

  const Context& context() const { return context_; }
  const Scenario& scenario() const { return scenario_; }
  const Trace& trace() const { return trace_; }

  /// E(t) for -1 <= t <= N.
  const EventSet& events_at(int t) const { return trace_.events_at(t); }
  /// S(t) for -1 <= t <= N + 1.
  const LiteralSet& state_at(int t) const { return trace_.state_at(t); }
  /// Latest time point at which a formula can be queried (N + 1).
  int last_time() const { return context_.horizon() + 1; }

 private:
  Context context_;
  Scenario scenario_;
  Trace trace_;
};

struct PartitionCell {
  int time = 0;
  LiteralSet literals;

  bool operator==(const PartitionCell&) const = default;
  auto operator<=>(const PartitionCell&) const = default;
};

struct DirectRelation {
  OccurrenceSet causes;
  LiteralSet backing;
  /// Cells in strictly decreasing time order; their union is `backing`.
  std::vector<PartitionCell> partition;
  Formula target;
  int target_time = 0;

  OccurrenceSet causes_at(int t) const;

  /// Compares causes, backing and partition; the target is not compared.
  bool operator==(const DirectRelation& other) const;
  bool operator<(const DirectRelation& other) const;
};

std::string to_string(const DirectRelation& r);

struct RejectedBacking {
  LiteralSet backing;
  std::string reason;
};

struct DirectAnalysis {
  std::vector<DirectRelation> relations;
  std::vector<RejectedBacking> rejected;
};

struct CausalOptions {
  BackingOptions backing;
  /// Maximum nesting of upstream expansions; negative means horizon + 2.
  int max_depth = -1;
  /// Bound on the number of distinct cause sets collected by ness_causes.
  std::size_t max_cause_sets = 100000;
};

/// Direct relations for every minimal backing of psi true at t_psi, plus the
/// backings that were rejected and why. Empty when psi is false at t_psi.
/// Throws QueryError(kTimeOutOfRange) unless 0 <= t_psi <= N + 1.
DirectAnalysis analyse_direct(const CausalSetting& setting, const Formula& psi, int t_psi,
                              const CausalOptions& options = {});

std::vector<DirectRelation> direct_ness_causes(const CausalSetting& setting, const Formula& psi,
                                               int t_psi, const CausalOptions& options = {});

/// The condition on S(t) under which `events` produce `produced` while
/// keeping `maintained`: a conjunction over a minimal witness W such that
/// (W u maintained) > events satisfies both sets, no proper subset of
/// `events` does, and every coherent extension of W u maintained still does.
/// W is drawn from S(t). Several minimal witnesses yield their disjunction;
/// true when no condition is needed. Throws QueryError(kNoWitness).
Formula after(const CausalSetting& setting, const EventSet& events, const LiteralSet& produced,
              const LiteralSet& maintained, int t);

/// One upstream step: the occurrences that caused `parent` to occur and to
/// have its actual effects, as direct relations of `condition` at parent.time.
struct Expansion {
  Occurrence parent;
  Formula condition;
  std::vector<DirectRelation> relations;
};

struct CauseSet {
  OccurrenceSet causes;
  /// Only actions remain once ini(l) occurrences are set aside.
  bool decisional = false;
  /// No occurrence can be expanded further.
  bool terminal = false;

  bool operator==(const CauseSet&) const = default;
};

struct CausalReport {
  Formula target;
  int time = 0;
  std::vector<DirectRelation> direct;
  std::vector<RejectedBacking> rejected;
  /// Union of the direct causes over all backings.
  OccurrenceSet direct_union;
  std::vector<Expansion> expansions;
  /// Every cause set reachable by expanding each direct cause zero or more
  /// steps, deduplicated and sorted.
  std::vector<CauseSet> cause_sets;
  /// Union of the terminal cause sets.
  OccurrenceSet expanded_union;
  /// Union of the action occurrences of the decisional cause sets.
  OccurrenceSet decisional;
};

CausalReport ness_causes(const CausalSetting& setting, const Formula& psi, int t_psi,
                         const CausalOptions& options = {});

/// NESS-causes of tri(event) at t. Throws QueryError(kNotOccurred) unless the
/// declared event occurs at t >= 0.
CausalReport actual_causes(const CausalSetting& setting, const std::string& event, int t,
                           const CausalOptions& options = {});

struct ButForResult {
  /// Without the action, psi does not hold at t_psi nor at any later point:
  /// a harm that merely comes later still occurs.
  bool but_for = false;
  /// psi is false at exactly t_psi in the counterfactual trace.
  bool absent_at_time = false;
  /// psi is false at every time point 0..N+1 of the counterfactual trace.
  bool absent_throughout = false;
  Trace counterfactual;
};

/// Counterfactual re-simulation without `action`. Throws
/// QueryError(kNotScheduled) when the action is not in the scenario and
/// propagates simulator errors from the counterfactual run.
ButForResult but_for(const CausalSetting& setting, const Occurrence& action, const Formula& psi,
                     int t_psi);

}  // namespace ness

#endif  // NESS_CAUSATION_H_
