#include "ness/core.h"

#include <algorithm>
#include <sstream>
#include <string_view>

#include "ness/errors.h"

namespace ness {

namespace {

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

}  // namespace

SyntaxError::SyntaxError(int line, int column, std::vector<std::string> expected,
                         const std::string& found)
    : Error([&] {
        std::ostringstream ss;
        ss << "line " << line << ", column " << column << ": expected ";
        for (std::size_t i = 0; i < expected.size(); ++i) {
          if (i > 0) ss << (i + 1 == expected.size() ? " or " : ", ");
          ss << expected[i];
        }
        ss << ", found " << found;
        return ss.str();
      }()),
      line_(line),
      column_(column),
      expected_(std::move(expected)) {}

Literal Literal::Parse(std::string_view text) {
  text = Trim(text);
  if (!text.empty() && text.front() == '!') {
    return Literal(std::string(Trim(text.substr(1))), false);
  }
  return Literal(std::string(text), true);
}

std::ostream& operator<<(std::ostream& os, const Literal& l) { return os << l.to_string(); }

LiteralSet LiteralSet::Parse(std::string_view text) {
  LiteralSet out;
  std::string token;
  auto flush = [&] {
    if (!token.empty()) out.insert(Literal::Parse(token));
    token.clear();
  };
  for (char c : text) {
    if (c == ',' || c == ' ' || c == '{' || c == '}') {
      flush();
    } else {
      token.push_back(c);
    }
  }
  flush();
  return out;
}

bool LiteralSet::includes(const LiteralSet& other) const {
  return std::includes(lits_.begin(), lits_.end(), other.lits_.begin(), other.lits_.end());
}

bool LiteralSet::coherent() const {
  // Complementary literals are adjacent in canonical order.
  for (auto it = lits_.begin(); it != lits_.end(); ++it) {
    auto next = std::next(it);
    if (next != lits_.end() && next->fluent == it->fluent) return false;
  }
  return true;
}

LiteralSet LiteralSet::complement() const {
  LiteralSet out;
  for (const auto& l : lits_) out.insert(l.complement());
  return out;
}

LiteralSet LiteralSet::united(const LiteralSet& other) const {
  LiteralSet out = *this;
  out.lits_.insert(other.lits_.begin(), other.lits_.end());
  return out;
}

LiteralSet LiteralSet::intersected(const LiteralSet& other) const {
  LiteralSet out;
  std::set_intersection(lits_.begin(), lits_.end(), other.lits_.begin(), other.lits_.end(),
                        std::inserter(out.lits_, out.lits_.end()));
  return out;
}

LiteralSet LiteralSet::minus(const LiteralSet& other) const {
  LiteralSet out;
  std::set_difference(lits_.begin(), lits_.end(), other.lits_.begin(), other.lits_.end(),
                      std::inserter(out.lits_, out.lits_.end()));
  return out;
}

std::vector<std::string> LiteralSet::strings() const {
  std::vector<std::string> out;
  out.reserve(lits_.size());
  for (const auto& l : lits_) out.push_back(l.to_string());
  return out;
}

std::string LiteralSet::to_string() const {
  std::string out = "{";
  bool first = true;
  for (const auto& l : lits_) {
    if (!first) out += ", ";
    out += l.to_string();
    first = false;
  }
  return out + "}";
}

std::ostream& operator<<(std::ostream& os, const LiteralSet& s) { return os << s.to_string(); }

// ---------------------------------------------------------------------------
// Formula

struct Formula::Node {
  Kind kind = Kind::kTrue;
  Literal literal;
  std::vector<Formula> children;
};

Formula::Formula() {
  static const auto kTop = std::make_shared<const Node>();
  node_ = kTop;
}

Formula::Formula(Literal l) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::kLiteral;
  node->literal = std::move(l);
  node_ = std::move(node);
}

Formula Formula::And(std::vector<Formula> children) {
  std::vector<Formula> flat;
  for (auto& c : children) {
    if (c.kind() == Kind::kTrue) continue;
    if (c.kind() == Kind::kAnd) {
      flat.insert(flat.end(), c.children().begin(), c.children().end());
    } else {
      flat.push_back(std::move(c));
    }
  }
  if (flat.empty()) return Top();
  if (flat.size() == 1) return flat.front();
  auto node = std::make_shared<Node>();
  node->kind = Kind::kAnd;
  node->children = std::move(flat);
  return Formula(std::shared_ptr<const Node>(std::move(node)));
}

Formula Formula::Or(std::vector<Formula> children) {
  std::vector<Formula> flat;
  for (auto& c : children) {
    if (c.kind() == Kind::kTrue) return Top();
    if (c.kind() == Kind::kOr) {
      flat.insert(flat.end(), c.children().begin(), c.children().end());
    } else {
      flat.push_back(std::move(c));
    }
  }
  if (flat.empty()) return Top();
  if (flat.size() == 1) return flat.front();
  auto node = std::make_shared<Node>();
  node->kind = Kind::kOr;
  node->children = std::move(flat);
  return Formula(std::shared_ptr<const Node>(std::move(node)));
}

Formula Formula::Conjunction(const LiteralSet& lits) {
  std::vector<Formula> parts;
  for (const auto& l : lits) parts.emplace_back(l);
  return And(std::move(parts));
}

Formula::Kind Formula::kind() const { return node_->kind; }
const Literal& Formula::literal() const { return node_->literal; }
const std::vector<Formula>& Formula::children() const { return node_->children; }

LiteralSet Formula::literals() const {
  LiteralSet out;
  switch (kind()) {
    case Kind::kTrue:
      break;
    case Kind::kLiteral:
      out.insert(literal());
      break;
    default:
      for (const auto& c : children()) out = out.united(c.literals());
  }
  return out;
}

std::string Formula::to_string() const {
  switch (kind()) {
    case Kind::kTrue:
      return "true";
    case Kind::kLiteral:
      return literal().to_string();
    case Kind::kAnd: {
      std::string out;
      for (std::size_t i = 0; i < children().size(); ++i) {
        if (i > 0) out += " & ";
        const auto& c = children()[i];
        out += c.kind() == Kind::kOr ? "(" + c.to_string() + ")" : c.to_string();
      }
      return out;
    }
    case Kind::kOr: {
      std::string out;
      for (std::size_t i = 0; i < children().size(); ++i) {
        if (i > 0) out += " | ";
        out += children()[i].to_string();
      }
      return out;
    }
  }
  return {};
}

bool Formula::operator==(const Formula& other) const {
  if (node_ == other.node_) return true;
  if (kind() != other.kind()) return false;
  switch (kind()) {
    case Kind::kTrue:
      return true;
    case Kind::kLiteral:
      return literal() == other.literal();
    default:
      return children() == other.children();
  }
}

std::ostream& operator<<(std::ostream& os, const Formula& f) { return os << f.to_string(); }

std::string to_string(const EffectFormula& eff) {
  std::string out;
  for (std::size_t i = 0; i < eff.size(); ++i) {
    if (i > 0) out += ", ";
    if (!eff[i].condition.is_true()) out += "[" + eff[i].condition.to_string() + "] ";
    out += eff[i].literal.to_string();
  }
  return out;
}

bool evaluate(const LiteralSet& state, const Formula& formula) {
  switch (formula.kind()) {
    case Formula::Kind::kTrue:
      return true;
    case Formula::Kind::kLiteral:
      return state.contains(formula.literal());
    case Formula::Kind::kAnd:
      return std::all_of(formula.children().begin(), formula.children().end(),
                         [&](const Formula& c) { return evaluate(state, c); });
    case Formula::Kind::kOr:
      return std::any_of(formula.children().begin(), formula.children().end(),
                         [&](const Formula& c) { return evaluate(state, c); });
  }
  return false;
}

// ---------------------------------------------------------------------------
// Backings

namespace {

using Dnf = std::vector<LiteralSet>;

// Sorts, deduplicates and removes every term that strictly contains another.
Dnf Absorb(Dnf terms) {
  std::sort(terms.begin(), terms.end(),
            [](const LiteralSet& a, const LiteralSet& b) {
              if (a.size() != b.size()) return a.size() < b.size();
              return a < b;
            });
  terms.erase(std::unique(terms.begin(), terms.end()), terms.end());
  Dnf kept;
  for (auto& t : terms) {
    bool absorbed = std::any_of(kept.begin(), kept.end(),
                                [&](const LiteralSet& k) { return t.includes(k); });
    if (!absorbed) kept.push_back(std::move(t));
  }
  return kept;
}

void CheckSize(std::size_t n, const BackingOptions& options) {
  if (n > options.max_implicants) {
    throw SizeLimitError("formula expands to more than " +
                         std::to_string(options.max_implicants) + " implicants");
  }
}

Dnf Expand(const Formula& f, const BackingOptions& options) {
  switch (f.kind()) {
    case Formula::Kind::kTrue:
      return {LiteralSet{}};
    case Formula::Kind::kLiteral:
      return {LiteralSet{f.literal()}};
    case Formula::Kind::kOr: {
      Dnf out;
      for (const auto& c : f.children()) {
        Dnf sub = Expand(c, options);
        out.insert(out.end(), sub.begin(), sub.end());
        CheckSize(out.size(), options);
      }
      return Absorb(std::move(out));
    }
    case Formula::Kind::kAnd: {
      Dnf acc = {LiteralSet{}};
      for (const auto& c : f.children()) {
        Dnf sub = Expand(c, options);
        CheckSize(acc.size() * sub.size(), options);
        Dnf next;
        next.reserve(acc.size() * sub.size());
        for (const auto& a : acc) {
          for (const auto& b : sub) {
            LiteralSet u = a.united(b);
            if (u.coherent()) next.push_back(std::move(u));
          }
        }
        acc = Absorb(std::move(next));
      }
      return acc;
    }
  }
  return {};
}

}  // namespace

std::vector<LiteralSet> minimal_backings(const Formula& formula, const BackingOptions& options) {
  Dnf terms = Expand(formula, options);
  std::sort(terms.begin(), terms.end());
  return terms;
}

}  // namespace ness
