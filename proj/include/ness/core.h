// Fluents, literals, partial states and the two formula languages used by
// the action language: preconditions/triggers (literals combined with & and |)
// and effects (sets of conditional literals [condition] literal).

#ifndef NESS_CORE_H_
#define NESS_CORE_H_

#include <compare>
#include <cstddef>
#include <initializer_list>
#include <memory>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace ness {

struct Literal {
  std::string fluent;
  bool positive = true;

  Literal() = default;
  Literal(std::string f, bool pos = true) : fluent(std::move(f)), positive(pos) {}

  /// Parses "f" or "!f". No validation of the fluent name.
  static Literal Parse(std::string_view text);

  Literal complement() const { return Literal(fluent, !positive); }
  std::string to_string() const { return positive ? fluent : "!" + fluent; }

  bool operator==(const Literal&) const = default;
  // Canonical order: by fluent name, positive before negative.
  std::strong_ordering operator<=>(const Literal& other) const {
    if (auto c = fluent <=> other.fluent; c != 0) return c;
    return other.positive <=> positive;
  }
};

inline Literal complement(const Literal& l) { return l.complement(); }

std::ostream& operator<<(std::ostream& os, const Literal& l);

/// A set of literals kept in canonical order. Coherence is not enforced by the
/// container; callers check it where the semantics require a partial state.
class LiteralSet {
 public:
  using const_iterator = std::set<Literal>::const_iterator;

  LiteralSet() = default;
  LiteralSet(std::initializer_list<Literal> lits) : lits_(lits) {}
  template <typename It>
  LiteralSet(It first, It last) : lits_(first, last) {}

  /// Parses a comma or space separated list such as "a, !b".
  static LiteralSet Parse(std::string_view text);

  bool contains(const Literal& l) const { return lits_.count(l) != 0; }
  bool includes(const LiteralSet& other) const;
  bool coherent() const;
  /// Coherent and mentions every one of `fluent_count` fluents.
  bool complete(std::size_t fluent_count) const {
    return coherent() && lits_.size() == fluent_count;
  }

  LiteralSet complement() const;
  LiteralSet united(const LiteralSet& other) const;
  LiteralSet intersected(const LiteralSet& other) const;
  LiteralSet minus(const LiteralSet& other) const;

  void insert(const Literal& l) { lits_.insert(l); }
  void erase(const Literal& l) { lits_.erase(l); }

  std::size_t size() const { return lits_.size(); }
  bool empty() const { return lits_.empty(); }
  const_iterator begin() const { return lits_.begin(); }
  const_iterator end() const { return lits_.end(); }

  std::vector<std::string> strings() const;
  /// "{a, !b}"
  std::string to_string() const;

  bool operator==(const LiteralSet&) const = default;
  auto operator<=>(const LiteralSet& other) const { return lits_ <=> other.lits_; }

 private:
  std::set<Literal> lits_;
};

std::ostream& operator<<(std::ostream& os, const LiteralSet& s);

using PartialState = LiteralSet;
using State = LiteralSet;

/// Immutable negation-normal formula: true, a literal, or an n-ary & / |.
/// Nested connectives of the same kind are flattened on construction.
class Formula {
 public:
  enum class Kind { kTrue, kLiteral, kAnd, kOr };

  /// The constant true.
  Formula();
  Formula(Literal l);  // NOLINT(google-explicit-constructor)

  static Formula Top() { return Formula(); }
  static Formula And(std::vector<Formula> children);
  static Formula Or(std::vector<Formula> children);
  /// Conjunction of the literals of `lits` in canonical order; true if empty.
  static Formula Conjunction(const LiteralSet& lits);

  Kind kind() const;
  bool is_true() const { return kind() == Kind::kTrue; }
  const Literal& literal() const;
  const std::vector<Formula>& children() const;

  /// Every literal mentioned anywhere in the formula.
  LiteralSet literals() const;

  std::string to_string() const;

  bool operator==(const Formula& other) const;

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  std::shared_ptr<const Node> node_;
};

std::ostream& operator<<(std::ostream& os, const Formula& f);

struct ConditionalEffect {
  Formula condition;
  Literal literal;

  bool operator==(const ConditionalEffect&) const = default;
};

/// Conjunction of conditional effects in set notation.
using EffectFormula = std::vector<ConditionalEffect>;

std::string to_string(const EffectFormula& eff);

/// L |= psi with membership semantics for literals.
bool evaluate(const LiteralSet& state, const Formula& formula);

struct BackingOptions {
  std::size_t max_implicants = 10000;
};

/// All coherent minimal partial states W with W |= psi, deduplicated and in
/// canonical order. Throws SizeLimitError when an intermediate disjunctive
/// normal form exceeds `options.max_implicants` terms.
std::vector<LiteralSet> minimal_backings(const Formula& formula,
                                         const BackingOptions& options = {});

}  // namespace ness

#endif  // NESS_CORE_H_
