#include "stpatc/expr.hpp"

#include <cctype>
#include <cmath>
#include <sstream>

namespace stpatc {

// -- domains ---------------------------------------------------------------

Domain Domain::boolean() { return Domain{DomainKind::Bool, {}, 0, 0, 0, 0, 0}; }

Domain Domain::enumeration(std::vector<std::string> values) {
  Domain d;
  d.kind = DomainKind::Enum;
  d.values = std::move(values);
  return d;
}

Domain Domain::integer(long long min, long long max) {
  Domain d;
  d.kind = DomainKind::Int;
  d.imin = min;
  d.imax = max;
  return d;
}

Domain Domain::real(double min, double max, int scale) {
  Domain d;
  d.kind = DomainKind::Real;
  d.rmin = min;
  d.rmax = max;
  d.scale = scale;
  return d;
}

std::vector<std::string> Domain::enumerate(const std::string& var_name) const {
  switch (kind) {
    case DomainKind::Bool:
      return {"FALSE", "TRUE"};
    case DomainKind::Enum:
      return values;
    case DomainKind::Int: {
      std::vector<std::string> out;
      for (long long v = imin; v <= imax; ++v) out.push_back(std::to_string(v));
      return out;
    }
    case DomainKind::Real:
      if (values.empty())
        throw UnboundedDomainError("variable '" + var_name +
                                   "' has a real domain without a declared value partition");
      return values;
  }
  return {};
}

// -- values ----------------------------------------------------------------

bool Value::operator==(const Value& o) const {
  if (kind != o.kind) return false;
  switch (kind) {
    case Kind::Bool: return b == o.b;
    case Kind::Num: return num == o.num;
    case Kind::Sym: return sym == o.sym;
  }
  return false;
}

std::string Value::literal() const {
  switch (kind) {
    case Kind::Bool:
      return b ? "TRUE" : "FALSE";
    case Kind::Sym:
      return sym;
    case Kind::Num: {
      if (num == static_cast<long long>(num))
        return std::to_string(static_cast<long long>(num));
      std::ostringstream out;
      out << num;
      return out.str();
    }
  }
  return "";
}

Value value_from_literal(const std::string& text, const Domain& d,
                         const std::string& context) {
  switch (d.kind) {
    case DomainKind::Bool:
      if (text == "TRUE" || text == "true") return Value::boolean(true);
      if (text == "FALSE" || text == "false") return Value::boolean(false);
      throw SchemaError(context, "expected TRUE or FALSE, got '" + text + "'");
    case DomainKind::Enum:
      for (const std::string& v : d.values)
        if (v == text) return Value::symbol(text);
      throw SchemaError(context, "'" + text + "' is not a declared enum value");
    case DomainKind::Int:
    case DomainKind::Real: {
      try {
        std::size_t used = 0;
        double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return Value::number(v);
      } catch (const std::exception&) {
        throw SchemaError(context, "expected a numeric literal, got '" + text + "'");
      }
    }
  }
  throw SchemaError(context, "unknown domain");
}

// -- AST construction ------------------------------------------------------

ExprPtr Expr::boolean(bool v) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::BoolLit;
  e->bval = v;
  return e;
}

ExprPtr Expr::number(double v, std::string spelled) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::NumLit;
  e->num = v;
  e->text = std::move(spelled);
  return e;
}

ExprPtr Expr::ident(std::string name) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Ident;
  e->text = std::move(name);
  return e;
}

ExprPtr Expr::unary(UnOp op, ExprPtr operand) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Unary;
  e->uop = op;
  e->lhs = std::move(operand);
  return e;
}

ExprPtr Expr::binary(BinOp op, ExprPtr l, ExprPtr r) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Binary;
  e->bop = op;
  e->lhs = std::move(l);
  e->rhs = std::move(r);
  return e;
}

bool expr_equal(const Expr& a, const Expr& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Expr::Kind::BoolLit: return a.bval == b.bval;
    case Expr::Kind::NumLit: return a.num == b.num;
    case Expr::Kind::Ident: return a.text == b.text;
    case Expr::Kind::Unary:
      return a.uop == b.uop && expr_equal(*a.lhs, *b.lhs);
    case Expr::Kind::Binary:
      return a.bop == b.bop && expr_equal(*a.lhs, *b.lhs) && expr_equal(*a.rhs, *b.rhs);
  }
  return false;
}

// -- lexer / parser --------------------------------------------------------

namespace {

struct Token {
  enum class Kind { Ident, Number, Op, End };
  Kind kind = Kind::End;
  std::string text;
  double num = 0;
  std::size_t column = 0;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) { advance(); }

  const Token& cur() const { return cur_; }

  void advance() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_])))
      ++pos_;
    cur_ = Token{};
    cur_.column = pos_;
    if (pos_ >= src_.size()) return;
    char c = src_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
        ++pos_;
      cur_.kind = Token::Kind::Ident;
      cur_.text = std::string(src_.substr(start, pos_ - start));
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < src_.size() &&
             (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.'))
        ++pos_;
      cur_.kind = Token::Kind::Number;
      cur_.text = std::string(src_.substr(start, pos_ - start));
      try {
        cur_.num = std::stod(cur_.text);
      } catch (const std::exception&) {
        throw ExprSyntaxError(start, "malformed number '" + cur_.text + "'");
      }
      return;
    }
    static const char* two[] = {"==", "!=", "<=", ">=", "&&", "||"};
    for (const char* op : two) {
      if (src_.substr(pos_, 2) == op) {
        cur_.kind = Token::Kind::Op;
        cur_.text = op;
        pos_ += 2;
        return;
      }
    }
    if (std::string("!<>+-*/()").find(c) != std::string::npos) {
      cur_.kind = Token::Kind::Op;
      cur_.text = std::string(1, c);
      ++pos_;
      return;
    }
    throw ExprSyntaxError(pos_, std::string("unexpected character '") + c + "'");
  }

  bool eat_op(std::string_view op) {
    if (cur_.kind == Token::Kind::Op && cur_.text == op) {
      advance();
      return true;
    }
    return false;
  }

 private:
  std::string_view src_;
  std::size_t pos_ = 0;
  Token cur_;
};

class Parser {
 public:
  explicit Parser(std::string_view src) : lex_(src) {}

  ExprPtr parse() {
    ExprPtr e = or_expr();
    if (lex_.cur().kind != Token::Kind::End)
      throw ExprSyntaxError(lex_.cur().column,
                            "unexpected token '" + lex_.cur().text + "'");
    return e;
  }

 private:
  ExprPtr or_expr() {
    ExprPtr e = and_expr();
    while (lex_.eat_op("||")) e = Expr::binary(BinOp::Or, e, and_expr());
    return e;
  }
  ExprPtr and_expr() {
    ExprPtr e = eq_expr();
    while (lex_.eat_op("&&")) e = Expr::binary(BinOp::And, e, eq_expr());
    return e;
  }
  ExprPtr eq_expr() {
    ExprPtr e = rel_expr();
    for (;;) {
      if (lex_.eat_op("==")) e = Expr::binary(BinOp::Eq, e, rel_expr());
      else if (lex_.eat_op("!=")) e = Expr::binary(BinOp::Ne, e, rel_expr());
      else return e;
    }
  }
  ExprPtr rel_expr() {
    ExprPtr e = add_expr();
    for (;;) {
      if (lex_.eat_op("<=")) e = Expr::binary(BinOp::Le, e, add_expr());
      else if (lex_.eat_op(">=")) e = Expr::binary(BinOp::Ge, e, add_expr());
      else if (lex_.eat_op("<")) e = Expr::binary(BinOp::Lt, e, add_expr());
      else if (lex_.eat_op(">")) e = Expr::binary(BinOp::Gt, e, add_expr());
      else return e;
    }
  }
  ExprPtr add_expr() {
    ExprPtr e = mul_expr();
    for (;;) {
      if (lex_.eat_op("+")) e = Expr::binary(BinOp::Add, e, mul_expr());
      else if (lex_.eat_op("-")) e = Expr::binary(BinOp::Sub, e, mul_expr());
      else return e;
    }
  }
  ExprPtr mul_expr() {
    ExprPtr e = unary();
    for (;;) {
      if (lex_.eat_op("*")) e = Expr::binary(BinOp::Mul, e, unary());
      else if (lex_.eat_op("/")) e = Expr::binary(BinOp::Div, e, unary());
      else return e;
    }
  }
  ExprPtr unary() {
    if (lex_.eat_op("!")) return Expr::unary(UnOp::Not, unary());
    if (lex_.eat_op("-")) return Expr::unary(UnOp::Neg, unary());
    return primary();
  }
  ExprPtr primary() {
    const Token& t = lex_.cur();
    if (t.kind == Token::Kind::Number) {
      ExprPtr e = Expr::number(t.num, t.text);
      lex_.advance();
      return e;
    }
    if (t.kind == Token::Kind::Ident) {
      std::string name = t.text;
      std::size_t col = t.column;
      lex_.advance();
      if (name == "TRUE") return Expr::boolean(true);
      if (name == "FALSE") return Expr::boolean(false);
      if (name == "sqrt" || name == "abs") {
        if (!lex_.eat_op("("))
          throw ExprSyntaxError(col, "expected '(' after " + name);
        ExprPtr arg = or_expr();
        if (!lex_.eat_op(")"))
          throw ExprSyntaxError(lex_.cur().column, "expected ')'");
        return Expr::unary(name == "sqrt" ? UnOp::Sqrt : UnOp::Abs, arg);
      }
      return Expr::ident(std::move(name));
    }
    if (t.kind == Token::Kind::Op && t.text == "(") {
      lex_.advance();
      ExprPtr e = or_expr();
      if (!lex_.eat_op(")"))
        throw ExprSyntaxError(lex_.cur().column, "expected ')'");
      return e;
    }
    throw ExprSyntaxError(t.column, "expected an expression");
  }

  Lexer lex_;
};

int precedence(const Expr& e) {
  if (e.kind != Expr::Kind::Binary) return 7;
  switch (e.bop) {
    case BinOp::Or: return 1;
    case BinOp::And: return 2;
    case BinOp::Eq:
    case BinOp::Ne: return 3;
    case BinOp::Lt:
    case BinOp::Le:
    case BinOp::Gt:
    case BinOp::Ge: return 4;
    case BinOp::Add:
    case BinOp::Sub: return 5;
    case BinOp::Mul:
    case BinOp::Div: return 6;
  }
  return 7;
}

std::string op_text(BinOp op, RenderStyle style) {
  switch (op) {
    case BinOp::Add: return "+";
    case BinOp::Sub: return "-";
    case BinOp::Mul: return "*";
    case BinOp::Div: return "/";
    case BinOp::Eq: return style == RenderStyle::Smv ? "=" : "==";
    case BinOp::Ne: return "!=";
    case BinOp::Lt: return "<";
    case BinOp::Le: return "<=";
    case BinOp::Gt: return ">";
    case BinOp::Ge: return ">=";
    case BinOp::And: return style == RenderStyle::Smv ? "&" : "&&";
    case BinOp::Or: return style == RenderStyle::Smv ? "|" : "||";
  }
  return "?";
}

void render(const Expr& e, RenderStyle style, std::string& out) {
  auto child = [&](const Expr& c, bool need_parens) {
    if (need_parens) out += '(';
    render(c, style, out);
    if (need_parens) out += ')';
  };
  switch (e.kind) {
    case Expr::Kind::BoolLit:
      out += e.bval ? "TRUE" : "FALSE";
      return;
    case Expr::Kind::NumLit:
      out += e.text;
      return;
    case Expr::Kind::Ident:
      out += e.text;
      return;
    case Expr::Kind::Unary:
      switch (e.uop) {
        case UnOp::Not:
          out += '!';
          child(*e.lhs, precedence(*e.lhs) < 7);
          return;
        case UnOp::Neg:
          out += '-';
          child(*e.lhs, precedence(*e.lhs) < 7);
          return;
        case UnOp::Sqrt:
        case UnOp::Abs:
          out += e.uop == UnOp::Sqrt ? "sqrt(" : "abs(";
          render(*e.lhs, style, out);
          out += ')';
          return;
      }
      return;
    case Expr::Kind::Binary: {
      int prec = precedence(e);
      bool spaced = false;
      switch (style) {
        case RenderStyle::Canonical: spaced = true; break;
        case RenderStyle::Compact: spaced = false; break;
        case RenderStyle::Smv:
          spaced = e.bop == BinOp::And || e.bop == BinOp::Or;
          break;
      }
      child(*e.lhs, precedence(*e.lhs) < prec);
      if (spaced) out += ' ';
      out += op_text(e.bop, style);
      if (spaced) out += ' ';
      child(*e.rhs, precedence(*e.rhs) <= prec);
      return;
    }
  }
}

}  // namespace

ExprPtr parse_expression(std::string_view text) { return Parser(text).parse(); }

std::string render_expr(const Expr& e, RenderStyle style) {
  std::string out;
  render(e, style, out);
  return out;
}

// -- typing ----------------------------------------------------------------

const VarTable::Entry* VarTable::find(const std::string& name) const {
  for (const Entry& e : entries)
    if (e.name == name) return &e;
  return nullptr;
}

bool VarTable::is_enum_value_of(const std::string& value, const Entry& var) const {
  if (var.domain.kind != DomainKind::Enum) return false;
  for (const std::string& v : var.domain.values)
    if (v == value) return true;
  return false;
}

namespace {

struct Type {
  enum class Kind { Bool, Num, Enum };
  Kind kind = Kind::Bool;
  std::string enum_var;  // owning variable name for Enum
};

Type infer(const Expr& e, const VarTable& vars, const std::string& where);

Type infer_operand(const Expr& e, const VarTable& vars, const std::string& where,
                   bool* unresolved_ident) {
  if (e.kind == Expr::Kind::Ident && !vars.find(e.text)) {
    *unresolved_ident = true;
    return {};
  }
  *unresolved_ident = false;
  return infer(e, vars, where);
}

Type infer(const Expr& e, const VarTable& vars, const std::string& where) {
  auto fail = [&](const std::string& msg) -> Type {
    throw ExprTypeError(where + ": " + msg);
  };
  switch (e.kind) {
    case Expr::Kind::BoolLit:
      return {Type::Kind::Bool, {}};
    case Expr::Kind::NumLit:
      return {Type::Kind::Num, {}};
    case Expr::Kind::Ident: {
      const VarTable::Entry* v = vars.find(e.text);
      if (!v) return fail("unknown identifier '" + e.text + "'");
      switch (v->domain.kind) {
        case DomainKind::Bool: return {Type::Kind::Bool, {}};
        case DomainKind::Enum: return {Type::Kind::Enum, v->name};
        default: return {Type::Kind::Num, {}};
      }
    }
    case Expr::Kind::Unary: {
      Type t = infer(*e.lhs, vars, where);
      if (e.uop == UnOp::Not) {
        if (t.kind != Type::Kind::Bool) return fail("'!' needs a boolean operand");
        return t;
      }
      if (t.kind != Type::Kind::Num) return fail("numeric operator on non-numeric operand");
      return t;
    }
    case Expr::Kind::Binary: {
      switch (e.bop) {
        case BinOp::And:
        case BinOp::Or: {
          if (infer(*e.lhs, vars, where).kind != Type::Kind::Bool ||
              infer(*e.rhs, vars, where).kind != Type::Kind::Bool)
            return fail("boolean connective on non-boolean operand");
          return {Type::Kind::Bool, {}};
        }
        case BinOp::Eq:
        case BinOp::Ne: {
          bool lfree = false, rfree = false;
          Type lt = infer_operand(*e.lhs, vars, where, &lfree);
          Type rt = infer_operand(*e.rhs, vars, where, &rfree);
          if (lfree && rfree)
            return fail("unknown identifier '" + e.lhs->text + "'");
          if (lfree || rfree) {
            const Expr& free_side = lfree ? *e.lhs : *e.rhs;
            const Type& bound = lfree ? rt : lt;
            if (bound.kind != Type::Kind::Enum)
              return fail("unknown identifier '" + free_side.text + "'");
            const VarTable::Entry* var = vars.find(bound.enum_var);
            if (!vars.is_enum_value_of(free_side.text, *var))
              return fail("'" + free_side.text + "' is not a value of enum variable '" +
                          var->name + "'");
            return {Type::Kind::Bool, {}};
          }
          if (lt.kind != rt.kind)
            return fail("'==' needs operands of the same type");
          if (lt.kind == Type::Kind::Enum && lt.enum_var != rt.enum_var) {
            const VarTable::Entry* lv = vars.find(lt.enum_var);
            const VarTable::Entry* rv = vars.find(rt.enum_var);
            if (lv->domain.values != rv->domain.values)
              return fail("'==' between unrelated enum variables");
          }
          return {Type::Kind::Bool, {}};
        }
        case BinOp::Lt:
        case BinOp::Le:
        case BinOp::Gt:
        case BinOp::Ge: {
          if (infer(*e.lhs, vars, where).kind != Type::Kind::Num ||
              infer(*e.rhs, vars, where).kind != Type::Kind::Num)
            return fail("relational operator on non-numeric operand");
          return {Type::Kind::Bool, {}};
        }
        default: {
          if (infer(*e.lhs, vars, where).kind != Type::Kind::Num ||
              infer(*e.rhs, vars, where).kind != Type::Kind::Num)
            return fail("arithmetic on non-numeric operand");
          return {Type::Kind::Num, {}};
        }
      }
    }
  }
  return {};
}

}  // namespace

void typecheck_bool(const Expr& e, const VarTable& vars, const std::string& where) {
  if (infer(e, vars, where).kind != Type::Kind::Bool)
    throw ExprTypeError(where + ": expression is not boolean");
}

void typecheck_assignment(const Domain& target, const Expr& value,
                          const VarTable& vars, const std::string& where) {
  auto fail = [&](const std::string& msg) {
    throw ExprTypeError(where + ": " + msg);
  };
  if (value.kind == Expr::Kind::Ident && !vars.find(value.text)) {
    if (target.kind != DomainKind::Enum)
      fail("unknown identifier '" + value.text + "'");
    for (const std::string& v : target.values)
      if (v == value.text) return;
    fail("'" + value.text + "' is not a value of the target's enum domain");
  }
  Type t = infer(value, vars, where);
  switch (target.kind) {
    case DomainKind::Bool:
      if (t.kind != Type::Kind::Bool) fail("boolean target assigned a non-boolean");
      return;
    case DomainKind::Int:
    case DomainKind::Real:
      if (t.kind != Type::Kind::Num) fail("numeric target assigned a non-number");
      return;
    case DomainKind::Enum: {
      if (t.kind != Type::Kind::Enum) fail("enum target assigned a non-enum expression");
      const VarTable::Entry* src = vars.find(t.enum_var);
      for (const std::string& v : src->domain.values) {
        bool found = false;
        for (const std::string& tv : target.values) found = found || tv == v;
        if (!found)
          fail("enum value '" + v + "' of '" + src->name +
               "' is outside the target's domain");
      }
      return;
    }
  }
}

// -- evaluation ------------------------------------------------------------

namespace {

// Ident not bound in the environment: candidate enum literal.
struct Operand {
  bool is_free = false;
  std::string free_name;
  Value value;
};

Operand eval_operand(const Expr& e, const Env& env, const std::string& where) {
  if (e.kind == Expr::Kind::Ident && !env.count(e.text))
    return {true, e.text, {}};
  return {false, {}, eval_expr(e, env, where)};
}

}  // namespace

Value eval_expr(const Expr& e, const Env& env, const std::string& where) {
  auto fail = [&](const std::string& msg) -> Value {
    throw EvalError(where + ": " + msg);
  };
  auto num = [&](const Expr& sub) {
    Value v = eval_expr(sub, env, where);
    if (v.kind != Value::Kind::Num) fail("expected a number");
    return v.num;
  };
  switch (e.kind) {
    case Expr::Kind::BoolLit:
      return Value::boolean(e.bval);
    case Expr::Kind::NumLit:
      return Value::number(e.num);
    case Expr::Kind::Ident: {
      auto it = env.find(e.text);
      if (it == env.end()) return fail("unbound name '" + e.text + "'");
      return it->second;
    }
    case Expr::Kind::Unary:
      switch (e.uop) {
        case UnOp::Not: {
          Value v = eval_expr(*e.lhs, env, where);
          if (v.kind != Value::Kind::Bool) return fail("'!' on non-boolean");
          return Value::boolean(!v.b);
        }
        case UnOp::Neg:
          return Value::number(-num(*e.lhs));
        case UnOp::Abs:
          return Value::number(std::fabs(num(*e.lhs)));
        case UnOp::Sqrt: {
          double v = num(*e.lhs);
          if (v < 0) return fail("sqrt of a negative value");
          return Value::number(std::sqrt(v));
        }
      }
      return {};
    case Expr::Kind::Binary:
      switch (e.bop) {
        case BinOp::And: {
          Value l = eval_expr(*e.lhs, env, where);
          if (l.kind != Value::Kind::Bool) return fail("'&&' on non-boolean");
          if (!l.b) return Value::boolean(false);
          Value r = eval_expr(*e.rhs, env, where);
          if (r.kind != Value::Kind::Bool) return fail("'&&' on non-boolean");
          return r;
        }
        case BinOp::Or: {
          Value l = eval_expr(*e.lhs, env, where);
          if (l.kind != Value::Kind::Bool) return fail("'||' on non-boolean");
          if (l.b) return Value::boolean(true);
          Value r = eval_expr(*e.rhs, env, where);
          if (r.kind != Value::Kind::Bool) return fail("'||' on non-boolean");
          return r;
        }
        case BinOp::Eq:
        case BinOp::Ne: {
          Operand l = eval_operand(*e.lhs, env, where);
          Operand r = eval_operand(*e.rhs, env, where);
          if (l.is_free && r.is_free)
            return fail("unbound name '" + l.free_name + "'");
          bool equal;
          if (l.is_free || r.is_free) {
            const Operand& free_side = l.is_free ? l : r;
            const Operand& bound = l.is_free ? r : l;
            if (bound.value.kind != Value::Kind::Sym)
              return fail("unbound name '" + free_side.free_name + "'");
            equal = bound.value.sym == free_side.free_name;
          } else {
            equal = l.value == r.value;
          }
          return Value::boolean(e.bop == BinOp::Eq ? equal : !equal);
        }
        case BinOp::Lt: return Value::boolean(num(*e.lhs) < num(*e.rhs));
        case BinOp::Le: return Value::boolean(num(*e.lhs) <= num(*e.rhs));
        case BinOp::Gt: return Value::boolean(num(*e.lhs) > num(*e.rhs));
        case BinOp::Ge: return Value::boolean(num(*e.lhs) >= num(*e.rhs));
        case BinOp::Add: return Value::number(num(*e.lhs) + num(*e.rhs));
        case BinOp::Sub: return Value::number(num(*e.lhs) - num(*e.rhs));
        case BinOp::Mul: return Value::number(num(*e.lhs) * num(*e.rhs));
        case BinOp::Div: {
          double d = num(*e.rhs);
          if (d == 0) return fail("division by zero");
          return Value::number(num(*e.lhs) / d);
        }
      }
  }
  return {};
}

bool eval_bool(const Expr& e, const Env& env, const std::string& where) {
  Value v = eval_expr(e, env, where);
  if (v.kind != Value::Kind::Bool)
    throw EvalError(where + ": guard is not boolean");
  return v.b;
}

// -- actions ---------------------------------------------------------------

std::vector<Action> parse_actions(std::string_view text) {
  std::vector<Action> out;
  std::size_t start = 0;
  auto flush = [&](std::size_t end) {
    std::string_view stmt = text.substr(start, end - start);
    std::size_t a = stmt.find_first_not_of(" \t\r\n");
    if (a == std::string_view::npos) return;
    std::size_t b = stmt.find_last_not_of(" \t\r\n");
    stmt = stmt.substr(a, b - a + 1);
    // target = expr; '=' must not be part of ==, <=, >=, !=
    std::size_t eq = std::string_view::npos;
    for (std::size_t i = 0; i + 1 <= stmt.size(); ++i) {
      if (stmt[i] != '=') continue;
      if (i + 1 < stmt.size() && stmt[i + 1] == '=') { ++i; continue; }
      if (i > 0 && (stmt[i - 1] == '=' || stmt[i - 1] == '<' || stmt[i - 1] == '>' ||
                    stmt[i - 1] == '!'))
        continue;
      eq = i;
      break;
    }
    if (eq == std::string_view::npos)
      throw ExprSyntaxError(start, "action is not an assignment: '" +
                                       std::string(stmt) + "'");
    std::string target(stmt.substr(0, eq));
    std::size_t tb = target.find_last_not_of(" \t");
    target = target.substr(0, tb == std::string::npos ? 0 : tb + 1);
    if (target.empty())
      throw ExprSyntaxError(start, "assignment without a target");
    out.push_back(Action{std::move(target), parse_expression(stmt.substr(eq + 1))});
  };
  for (std::size_t i = 0; i < text.size(); ++i)
    if (text[i] == ';' || text[i] == '\n') {
      flush(i);
      start = i + 1;
    }
  flush(text.size());
  return out;
}

std::string render_actions(const std::vector<Action>& actions) {
  std::string out;
  for (const Action& a : actions) {
    if (!out.empty()) out += "; ";
    out += a.target + " = " + render_expr(*a.value);
  }
  return out;
}

}  // namespace stpatc
