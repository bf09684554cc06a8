#include "ness/dsl.h"

#include <cctype>
#include <charconv>
#include <map>
#include <optional>
#include <sstream>

#include "ness/errors.h"

namespace ness {

namespace {

enum class Tok {
  kIdent,
  kNumber,
  kLBrace,
  kRBrace,
  kLParen,
  kRParen,
  kLBracket,
  kRBracket,
  kColon,
  kSemi,
  kComma,
  kAnd,
  kOr,
  kNot,
  kGreater,
  kEnd,
};

struct Token {
  Tok kind = Tok::kEnd;
  std::string text;
  int line = 1;
  int column = 1;
};

std::string Describe(const Token& t) {
  switch (t.kind) {
    case Tok::kEnd:
      return "end of input";
    case Tok::kIdent:
      return "identifier '" + t.text + "'";
    case Tok::kNumber:
      return "number '" + t.text + "'";
    default:
      return "'" + t.text + "'";
  }
}

bool IsIdentStart(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool IsIdentChar(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
}

std::vector<Token> Lex(std::string_view src) {
  std::vector<Token> out;
  int line = 1;
  int col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < src.size(); ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < src.size()) {
    char c = src[i];
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    Token t;
    t.line = line;
    t.column = col;
    if (IsIdentStart(c)) {
      std::size_t j = i;
      while (j < src.size() && IsIdentChar(src[j])) ++j;
      t.kind = Tok::kIdent;
      t.text = std::string(src.substr(i, j - i));
      advance(j - i);
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      t.kind = Tok::kNumber;
      t.text = std::string(src.substr(i, j - i));
      advance(j - i);
    } else {
      static const std::map<char, Tok> kPunct = {
          {'{', Tok::kLBrace}, {'}', Tok::kRBrace},   {'(', Tok::kLParen}, {')', Tok::kRParen},
          {'[', Tok::kLBracket}, {']', Tok::kRBracket}, {':', Tok::kColon}, {';', Tok::kSemi},
          {',', Tok::kComma},  {'&', Tok::kAnd},      {'|', Tok::kOr},     {'!', Tok::kNot},
          {'>', Tok::kGreater},
      };
      auto it = kPunct.find(c);
      if (it == kPunct.end()) {
        throw SyntaxError(line, col, {"a token"}, std::string("character '") + c + "'");
      }
      t.kind = it->second;
      t.text = std::string(1, c);
      advance(1);
    }
    out.push_back(std::move(t));
  }
  Token end;
  end.line = line;
  end.column = col;
  out.push_back(end);
  return out;
}

class Parser {
 public:
  explicit Parser(std::string_view src) : toks_(Lex(src)) {}

  const Token& peek() const { return toks_[pos_]; }
  bool at(Tok k) const { return peek().kind == k; }
  bool at_keyword(std::string_view kw) const { return at(Tok::kIdent) && peek().text == kw; }

  [[noreturn]] void fail(std::vector<std::string> expected) const {
    throw SyntaxError(peek().line, peek().column, std::move(expected), Describe(peek()));
  }

  Token expect(Tok k, const std::string& what) {
    if (!at(k)) fail({what});
    return toks_[pos_++];
  }

  void expect_keyword(std::string_view kw) {
    if (!at_keyword(kw)) fail({"'" + std::string(kw) + "'"});
    ++pos_;
  }

  bool accept(Tok k) {
    if (!at(k)) return false;
    ++pos_;
    return true;
  }

  std::string identifier() {
    if (at_keyword("true")) fail({"identifier"});
    return expect(Tok::kIdent, "identifier").text;
  }

  int number() {
    Token t = expect(Tok::kNumber, "number");
    int v = 0;
    auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (ec != std::errc()) throw SyntaxError(t.line, t.column, {"number"}, Describe(t));
    return v;
  }

  Literal literal() {
    bool positive = true;
    if (accept(Tok::kNot)) {
      positive = false;
      if (at(Tok::kLParen)) {
        fail({"fluent name (negation applies to literals only)"});
      }
    }
    return Literal(identifier(), positive);
  }

  Formula formula() {
    std::vector<Formula> parts{conjunction()};
    while (accept(Tok::kOr)) parts.push_back(conjunction());
    return Formula::Or(std::move(parts));
  }

  Formula conjunction() {
    std::vector<Formula> parts{atom()};
    while (accept(Tok::kAnd)) parts.push_back(atom());
    return Formula::And(std::move(parts));
  }

  Formula atom() {
    if (accept(Tok::kLParen)) {
      Formula f = formula();
      expect(Tok::kRParen, "')'");
      return f;
    }
    if (at_keyword("true")) {
      ++pos_;
      return Formula::Top();
    }
    if (!at(Tok::kIdent) && !at(Tok::kNot)) fail({"literal", "'true'", "'('"});
    return Formula(literal());
  }

  EffectFormula effects() {
    EffectFormula eff;
    if (at(Tok::kSemi)) return eff;
    do {
      Formula cond;
      if (accept(Tok::kLBracket)) {
        cond = formula();
        expect(Tok::kRBracket, "']'");
      }
      ConditionalEffect ce{cond, literal()};
      bool dup = false;
      for (const auto& e : eff) dup = dup || e == ce;
      if (!dup) eff.push_back(std::move(ce));
    } while (accept(Tok::kComma));
    return eff;
  }

  template <typename F>
  void list(F&& item) {
    if (at(Tok::kSemi)) return;
    do {
      item();
    } while (accept(Tok::kComma));
  }

  bool done() const { return at(Tok::kEnd); }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

EventDecl ParseEventBody(Parser& p, EventKind kind) {
  EventDecl e;
  e.kind = kind;
  e.name = p.identifier();
  p.expect(Tok::kLBrace, "'{'");
  std::optional<Formula> pre;
  std::optional<Formula> tri;
  bool have_eff = false;
  while (!p.accept(Tok::kRBrace)) {
    if (p.at_keyword("pre") || p.at_keyword("tri")) {
      bool is_pre = p.peek().text == "pre";
      p.expect(Tok::kIdent, "field");
      p.expect(Tok::kColon, "':'");
      auto& slot = is_pre ? pre : tri;
      if (slot) throw SemanticError("duplicate field in event '" + e.name + "'");
      slot = p.formula();
      p.expect(Tok::kSemi, "';'");
    } else if (p.at_keyword("eff")) {
      p.expect(Tok::kIdent, "field");
      p.expect(Tok::kColon, "':'");
      if (have_eff) throw SemanticError("duplicate eff in event '" + e.name + "'");
      have_eff = true;
      e.eff = p.effects();
      p.expect(Tok::kSemi, "';'");
    } else {
      p.fail({"'pre'", "'tri'", "'eff'", "'}'"});
    }
  }
  if (kind == EventKind::kExogenous) {
    if (!pre && !tri) throw SemanticError("event '" + e.name + "' needs a tri condition");
    if (pre && tri && !(*pre == *tri)) {
      throw SemanticError("exogenous event '" + e.name + "' has tri different from pre");
    }
    e.tri = tri ? *tri : *pre;
    e.pre = e.tri;
  } else {
    e.pre = pre.value_or(Formula::Top());
    e.tri = tri.value_or(e.pre);
  }
  return e;
}

}  // namespace

Context parse_domain(std::string_view text) {
  Parser p(text);
  p.expect_keyword("domain");
  std::string name = p.identifier();
  p.expect(Tok::kLBrace, "'{'");

  std::vector<std::string> fluents;
  bool have_fluents = false;
  LiteralSet init;
  bool init_strict = false;
  std::optional<int> horizon;
  std::vector<EventDecl> events;
  std::set<std::pair<std::string, std::string>> priority;

  while (!p.accept(Tok::kRBrace)) {
    if (p.at_keyword("fluents")) {
      p.expect(Tok::kIdent, "'fluents'");
      p.expect(Tok::kColon, "':'");
      have_fluents = true;
      p.list([&] { fluents.push_back(p.identifier()); });
      p.expect(Tok::kSemi, "';'");
    } else if (p.at_keyword("init")) {
      p.expect(Tok::kIdent, "'init'");
      p.expect(Tok::kColon, "':'");
      p.list([&] { init.insert(p.literal()); });
      p.expect(Tok::kSemi, "';'");
    } else if (p.at_keyword("init-strict")) {
      p.expect(Tok::kIdent, "'init-strict'");
      p.expect(Tok::kSemi, "';'");
      init_strict = true;
    } else if (p.at_keyword("horizon")) {
      p.expect(Tok::kIdent, "'horizon'");
      p.expect(Tok::kColon, "':'");
      if (horizon) throw SemanticError("horizon declared twice");
      horizon = p.number();
      p.expect(Tok::kSemi, "';'");
    } else if (p.at_keyword("action") || p.at_keyword("event")) {
      auto kind = p.peek().text == "action" ? EventKind::kAction : EventKind::kExogenous;
      p.expect(Tok::kIdent, "'action' or 'event'");
      events.push_back(ParseEventBody(p, kind));
    } else if (p.at_keyword("priority")) {
      p.expect(Tok::kIdent, "'priority'");
      p.expect(Tok::kColon, "':'");
      std::string prev = p.identifier();
      p.expect(Tok::kGreater, "'>'");
      do {
        std::string next = p.identifier();
        priority.emplace(prev, next);
        prev = std::move(next);
      } while (p.accept(Tok::kGreater));
      p.expect(Tok::kSemi, "';'");
    } else {
      p.fail({"'fluents'", "'init'", "'init-strict'", "'horizon'", "'action'", "'event'",
              "'priority'", "'}'"});
    }
  }
  if (!p.done()) p.fail({"end of input"});

  if (!have_fluents || fluents.empty()) throw SemanticError("domain declares no fluents");
  if (!horizon) throw SemanticError("missing horizon");

  std::set<std::string> known(fluents.begin(), fluents.end());
  for (const auto& l : init) {
    if (!known.count(l.fluent)) throw SemanticError("unknown fluent '" + l.fluent + "' in init");
  }
  if (!init.coherent()) throw SemanticError("init is not coherent");
  if (init_strict && init.size() != known.size()) {
    throw SemanticError("init-strict requires every fluent in init");
  }
  // Closed-world default for unlisted fluents.
  for (const auto& f : fluents) {
    if (!init.contains(Literal(f, true)) && !init.contains(Literal(f, false))) {
      init.insert(Literal(f, false));
    }
  }
  return Context(std::move(name), std::move(fluents), std::move(init), std::move(events),
                 std::move(priority), *horizon, init_strict);
}

Scenario parse_scenario(std::string_view text, const Context& ctx) {
  Parser p(text);
  Scenario sc;
  while (!p.done()) {
    int t = p.number();
    p.expect(Tok::kColon, "':'");
    p.list([&] { sc.actions.insert(Occurrence{p.identifier(), t}); });
    p.expect(Tok::kSemi, "';'");
  }
  sc.validate(ctx);
  return sc;
}

Formula parse_formula(std::string_view text, const Context* ctx) {
  Parser p(text);
  Formula f = p.formula();
  if (!p.done()) p.fail({"'&'", "'|'", "end of formula"});
  if (ctx != nullptr) {
    for (const auto& l : f.literals()) {
      if (!ctx->has_fluent(l.fluent)) {
        throw SemanticError("unknown fluent '" + l.fluent + "' in formula");
      }
    }
  }
  return f;
}

std::string print_domain(const Context& ctx) {
  std::ostringstream os;
  auto join = [](const std::vector<std::string>& items) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) out += (i ? ", " : "") + items[i];
    return out;
  };
  os << "domain " << ctx.name() << " {\n";
  os << "  fluents: " << join(ctx.fluents()) << ";\n";
  os << "  init: " << join(ctx.initial_state().strings()) << ";\n";
  if (ctx.init_strict()) os << "  init-strict;\n";
  os << "  horizon: " << ctx.horizon() << ";\n";
  for (const auto& e : ctx.events()) {
    if (e.kind == EventKind::kAction) {
      os << "  action " << e.name << " {\n";
      os << "    pre: " << e.pre << ";\n";
      if (!(e.tri == e.pre)) os << "    tri: " << e.tri << ";\n";
    } else {
      os << "  event " << e.name << " {\n";
      os << "    tri: " << e.tri << ";\n";
    }
    os << "    eff: " << to_string(e.eff) << ";\n";
    os << "  }\n";
  }
  for (const auto& [hi, lo] : ctx.priority()) os << "  priority: " << hi << " > " << lo << ";\n";
  os << "}\n";
  return os.str();
}

std::string print_scenario(const Scenario& scenario) {
  std::ostringstream os;
  std::map<int, std::vector<std::string>> by_time;
  for (const auto& o : scenario.actions) by_time[o.time].push_back(o.event);
  for (const auto& [t, names] : by_time) {
    os << t << ":";
    for (std::size_t i = 0; i < names.size(); ++i) os << (i ? ", " : " ") << names[i];
    os << ";\n";
  }
  return os.str();
}

}  // namespace ness
