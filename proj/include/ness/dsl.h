// Text formats for domains (.adl) and scenarios (.sc).
//
//   # comment
//   domain pollution {
//     fluents: w_s, w_m, t_os, s_sup, d;
//     init: t_os;                 # unlisted fluents start false
//     horizon: 3;
//     action prod_s { pre: true; eff: w_s; }
//     event dis_w { tri: w_s | w_m & t_os; eff: s_sup; }
//     event fau_p { tri: s_sup; eff: d; }
//     priority: dis_w > fau_p;    # orders interfering events
//   }
//
// Formulas use &, | and parentheses over literals `f` / `!f` and `true`;
// negation applies to literals only. `init-strict;` requires init to list
// every fluent. A scenario is a list of `T: a, b;` statements.

#ifndef NESS_DSL_H_
#define NESS_DSL_H_

#include <string>
#include <string_view>

#include "ness/core.h"
#include "ness/domain.h"

namespace ness {

/// Throws SyntaxError or SemanticError.
Context parse_domain(std::string_view text);

/// Throws SyntaxError or SemanticError (unknown action, exogenous event,
/// time point outside 0..horizon).
Scenario parse_scenario(std::string_view text, const Context& ctx);

/// Parses a standalone formula. When `ctx` is given, every fluent must exist.
Formula parse_formula(std::string_view text, const Context* ctx = nullptr);

/// Canonical domain text; parse_domain(print_domain(c)) == c.
std::string print_domain(const Context& ctx);
std::string print_scenario(const Scenario& scenario);

}  // namespace ness

#endif  // NESS_DSL_H_
