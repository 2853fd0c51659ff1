#pragma once

// Closed guard/action expression language shared by the statechart,
// SMV emitter and test-path interpreter.

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "stpatc/errors.hpp"

namespace stpatc {

// -- variable domains ------------------------------------------------------

enum class DomainKind { Bool, Enum, Int, Real };

struct Domain {
  DomainKind kind = DomainKind::Bool;
  std::vector<std::string> values;   // Enum values; optional partition for Real
  long long imin = 0, imax = 0;      // Int bounds
  double rmin = 0, rmax = 0;         // Real bounds
  int scale = 0;                     // Real: decimal scaling for SMV (10^scale)

  bool finite() const {
    return kind != DomainKind::Real || !values.empty();
  }
  /// Value literals in declaration order. Throws UnboundedDomainError for a
  /// Real domain without a declared partition.
  std::vector<std::string> enumerate(const std::string& var_name) const;

  static Domain boolean();
  static Domain enumeration(std::vector<std::string> values);
  static Domain integer(long long min, long long max);
  static Domain real(double min, double max, int scale);
};

// -- runtime values --------------------------------------------------------

struct Value {
  enum class Kind { Bool, Num, Sym };
  Kind kind = Kind::Bool;
  bool b = false;
  double num = 0;
  std::string sym;

  static Value boolean(bool v) { return {Kind::Bool, v, 0, {}}; }
  static Value number(double v) { return {Kind::Num, false, v, {}}; }
  static Value symbol(std::string v) { return {Kind::Sym, false, 0, std::move(v)}; }

  bool operator==(const Value& o) const;
  /// Literal form: TRUE/FALSE, bare identifier, or shortest decimal.
  std::string literal() const;
};

/// Parses a value literal against a domain ("TRUE", "Aligned", "42", "1.5").
Value value_from_literal(const std::string& text, const Domain& d,
                         const std::string& context);

// -- expression AST --------------------------------------------------------

enum class UnOp { Not, Neg, Sqrt, Abs };
enum class BinOp { Add, Sub, Mul, Div, Eq, Ne, Lt, Le, Gt, Ge, And, Or };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  enum class Kind { BoolLit, NumLit, Ident, Unary, Binary };
  Kind kind = Kind::BoolLit;
  bool bval = false;
  double num = 0;
  std::string text;  // Ident name, or the numeric literal as written
  UnOp uop = UnOp::Not;
  BinOp bop = BinOp::And;
  ExprPtr lhs, rhs;

  static ExprPtr boolean(bool v);
  static ExprPtr number(double v, std::string spelled);
  static ExprPtr ident(std::string name);
  static ExprPtr unary(UnOp op, ExprPtr operand);
  static ExprPtr binary(BinOp op, ExprPtr l, ExprPtr r);
};

bool expr_equal(const Expr& a, const Expr& b);

/// Parses with standard precedence:
/// unary > mul > add > relational > equality > && > ||.
ExprPtr parse_expression(std::string_view text);

enum class RenderStyle {
  Canonical,  // single spaces around binary operators
  Compact,    // no spaces; used for LTL atoms
  Smv,        // SMV spelling: = & | !
};

std::string render_expr(const Expr& e, RenderStyle style = RenderStyle::Canonical);

// -- typing and evaluation -------------------------------------------------

/// Declared variables visible to guards/actions.
struct VarTable {
  struct Entry {
    std::string name;
    Domain domain;
  };
  std::vector<Entry> entries;

  const Entry* find(const std::string& name) const;
  /// Variable owning a given enum value, if unique among candidates matching
  /// `against` (the enum-typed variable on the other side of an equality).
  bool is_enum_value_of(const std::string& value, const Entry& var) const;
};

/// Checks well-typedness of a bool-context expression; throws ExprTypeError.
/// Bare enum identifiers are resolved against the enum variable they are
/// compared with; elsewhere they are rejected.
void typecheck_bool(const Expr& e, const VarTable& vars, const std::string& where);

/// Checks an assignment's value expression against the target's domain.
/// A bare identifier that is not a declared variable must be a value of an
/// enum-typed target.
void typecheck_assignment(const Domain& target, const Expr& value,
                          const VarTable& vars, const std::string& where);

using Env = std::map<std::string, Value>;

/// Evaluates under an environment; unbound names, division by zero and
/// sqrt of a negative raise EvalError tagged with `where`.
Value eval_expr(const Expr& e, const Env& env, const std::string& where);
bool eval_bool(const Expr& e, const Env& env, const std::string& where);

// -- actions ---------------------------------------------------------------

/// `name = expr` assignment; emitting a control action is the assignment
/// `controlAction = <name>`.
struct Action {
  std::string target;
  ExprPtr value;
};

/// Parses a ';'- or newline-separated action list.
std::vector<Action> parse_actions(std::string_view text);

std::string render_actions(const std::vector<Action>& actions);

}  // namespace stpatc
