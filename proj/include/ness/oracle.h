// Random domain generation and a brute-force reference for direct causes.
//
// The reference enumerates every coherent partial state, every time
// assignment and every event subset instead of computing backings and
// hitting sets, so it only scales to toy domains.

#ifndef NESS_ORACLE_H_
#define NESS_ORACLE_H_

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "ness/causation.h"
#include "ness/core.h"
#include "ness/domain.h"
#include "ness/errors.h"

namespace ness {

class GenerationExhausted : public Error {
 public:
  using Error::Error;
};

struct GeneratorConfig {
  std::uint64_t seed = 1;
  int min_fluents = 1;
  int max_fluents = 5;    // at most 6
  int max_events = 5;     // actions and exogenous events together, at most 6
  int max_horizon = 4;    // 1..5
  double conditional_effect_probability = 0.3;
  double exogenous_probability = 0.4;
  double schedule_probability = 0.35;
  int max_attempts = 1000;
};

struct GeneratedCase {
  Context context;
  Scenario scenario;
  int attempts = 0;
};

/// Deterministic in the seed. Candidates whose context is ill-formed or whose
/// scenario fails to simulate are rejected; throws GenerationExhausted after
/// max_attempts rejections and std::invalid_argument for out-of-range bounds.
GeneratedCase generate(const GeneratorConfig& config);

/// Small uniform helpers over mt19937_64 that do not depend on the standard
/// library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  std::uint64_t next() { return engine_(); }
  /// Uniform in [lo, hi].
  int between(int lo, int hi) { return lo + static_cast<int>(next() % static_cast<std::uint64_t>(hi - lo + 1)); }
  bool chance(double p) { return static_cast<double>(next() >> 11) * 0x1.0p-53 < p; }

 private:
  std::mt19937_64 engine_;
};

/// Random negation-normal formula over `fluents` with nesting up to `depth`.
Formula random_formula(Rng& rng, const std::vector<std::string>& fluents, int depth);

/// Direct relations for (psi, t_psi) by exhaustive search. Throws
/// SizeLimitError for more than 6 fluents or a horizon above 5.
std::vector<DirectRelation> brute_force_direct(const CausalSetting& setting, const Formula& psi,
                                               int t_psi);

}  // namespace ness

#endif  // NESS_ORACLE_H_
