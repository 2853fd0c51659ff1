#pragma once

// LTL safety-requirement synthesis from refined requirements, plus the
// canonical renderer and a parser for round-trip checks.

#include <memory>
#include <string>
#include <string_view>

#include "stpatc/stpa.hpp"

namespace stpatc {

enum class LtlOp { Atom, Not, And, Or, Implies, G, X, U };

struct LtlNode;
using LtlPtr = std::shared_ptr<const LtlNode>;

struct LtlNode {
  LtlOp op = LtlOp::Atom;
  ExprPtr atom;  // Atom only: relational expression / controlAction equality
  LtlPtr lhs, rhs;

  static LtlPtr make_atom(ExprPtr e);
  static LtlPtr make(LtlOp op, LtlPtr l, LtlPtr r = nullptr);
};

bool ltl_equal(const LtlNode& a, const LtlNode& b);

/// Canonical text: parentheses around every atom and every binary
/// application, `!` tight, same-operator conjunction/disjunction chains
/// flattened into one group, SMV operator spelling except `==` in atoms.
std::string render_ltl(const LtlNode& f);

/// Parses the canonical form (and whitespace variations of it).
LtlPtr parse_ltl(std::string_view text);

struct LtlFormula {
  std::string id;
  std::string source_rssr;  // Rssr id
  LtlPtr ast;
  std::string rendered;  // canonical text
};

/// Applies the rule selected by the requirement's context/timing:
///   Providing + any time:  G (Cs -> !(controlAction==CA))
///   Providing + too early: G (((controlAction==CA) -> Cs) & !((controlAction==CA) U Cs))
///   Providing + too late:  G ((Cs -> (controlAction==CA)) & !(Cs U (controlAction==CA)))
///   Not providing:         G (Cs -> X (controlAction==CA))
/// Throws UnsupportedTimingError when no rule applies.
LtlFormula generate_ltl(const Rssr& r, std::string id = "");

/// The Cs atom for one combination entry: `name==value` for plain values,
/// the relational expression verbatim for comparative values.
ExprPtr combination_atom(const std::string& name, const std::string& value);

}  // namespace stpatc
