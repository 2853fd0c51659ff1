#include "stpatc/ltl.hpp"

#include <cctype>
#include <vector>

namespace stpatc {

LtlPtr LtlNode::make_atom(ExprPtr e) {
  auto n = std::make_shared<LtlNode>();
  n->op = LtlOp::Atom;
  n->atom = std::move(e);
  return n;
}

LtlPtr LtlNode::make(LtlOp op, LtlPtr l, LtlPtr r) {
  auto n = std::make_shared<LtlNode>();
  n->op = op;
  n->lhs = std::move(l);
  n->rhs = std::move(r);
  return n;
}

bool ltl_equal(const LtlNode& a, const LtlNode& b) {
  if (a.op != b.op) return false;
  if (a.op == LtlOp::Atom) return expr_equal(*a.atom, *b.atom);
  if ((a.lhs == nullptr) != (b.lhs == nullptr)) return false;
  if ((a.rhs == nullptr) != (b.rhs == nullptr)) return false;
  if (a.lhs && !ltl_equal(*a.lhs, *b.lhs)) return false;
  if (a.rhs && !ltl_equal(*a.rhs, *b.rhs)) return false;
  return true;
}

namespace {

void flatten_chain(const LtlNode& n, LtlOp op, std::vector<const LtlNode*>& out) {
  if (n.op == op) {
    flatten_chain(*n.lhs, op, out);
    flatten_chain(*n.rhs, op, out);
  } else {
    out.push_back(&n);
  }
}

std::string wrap(const std::string& s) {
  return s.empty() || s[0] != '(' ? "(" + s + ")" : s;
}

}  // namespace

std::string render_ltl(const LtlNode& f) {
  switch (f.op) {
    case LtlOp::Atom:
      return "(" + render_expr(*f.atom, RenderStyle::Compact) + ")";
    case LtlOp::Not:
      return "!" + wrap(render_ltl(*f.lhs));
    case LtlOp::And:
    case LtlOp::Or: {
      std::vector<const LtlNode*> parts;
      flatten_chain(f, f.op, parts);
      std::string out = "(";
      for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += f.op == LtlOp::And ? " & " : " | ";
        out += render_ltl(*parts[i]);
      }
      return out + ")";
    }
    case LtlOp::Implies:
      return "(" + render_ltl(*f.lhs) + " -> " + render_ltl(*f.rhs) + ")";
    case LtlOp::U:
      return "(" + render_ltl(*f.lhs) + " U " + render_ltl(*f.rhs) + ")";
    case LtlOp::G:
      return "G " + wrap(render_ltl(*f.lhs));
    case LtlOp::X:
      return "X " + wrap(render_ltl(*f.lhs));
  }
  return "";
}

// -- parser ----------------------------------------------------------------

namespace {

struct LtlToken {
  enum class Kind { LPar, RPar, Bang, Amp, Bar, Arrow, KwG, KwX, KwU, Word, RelOp, End };
  Kind kind = Kind::End;
  std::string text;
  std::size_t column = 0;
};

std::vector<LtlToken> lex_ltl(std::string_view src) {
  std::vector<LtlToken> out;
  std::size_t pos = 0;
  while (pos < src.size()) {
    char c = src[pos];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++pos;
      continue;
    }
    LtlToken t;
    t.column = pos;
    auto push1 = [&](LtlToken::Kind k) {
      t.kind = k;
      t.text = std::string(1, c);
      ++pos;
      out.push_back(t);
    };
    if (c == '(') { push1(LtlToken::Kind::LPar); continue; }
    if (c == ')') { push1(LtlToken::Kind::RPar); continue; }
    if (c == '&') { push1(LtlToken::Kind::Amp); continue; }
    if (c == '|') { push1(LtlToken::Kind::Bar); continue; }
    if (src.substr(pos, 2) == "->") {
      t.kind = LtlToken::Kind::Arrow;
      t.text = "->";
      pos += 2;
      out.push_back(t);
      continue;
    }
    if (c == '!' && (pos + 1 >= src.size() || src[pos + 1] != '=')) {
      push1(LtlToken::Kind::Bang);
      continue;
    }
    static const char* relops[] = {"==", "!=", "<=", ">="};
    bool matched = false;
    for (const char* op : relops)
      if (src.substr(pos, 2) == op) {
        t.kind = LtlToken::Kind::RelOp;
        t.text = op;
        pos += 2;
        out.push_back(t);
        matched = true;
        break;
      }
    if (matched) continue;
    if (c == '<' || c == '>') { push1(LtlToken::Kind::RelOp); continue; }
    if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.') {
      std::size_t start = pos;
      while (pos < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_' ||
              src[pos] == '.'))
        ++pos;
      t.text = std::string(src.substr(start, pos - start));
      if (t.text == "G") t.kind = LtlToken::Kind::KwG;
      else if (t.text == "X") t.kind = LtlToken::Kind::KwX;
      else if (t.text == "U") t.kind = LtlToken::Kind::KwU;
      else t.kind = LtlToken::Kind::Word;
      out.push_back(t);
      continue;
    }
    throw ExprSyntaxError(pos, std::string("unexpected character '") + c + "' in LTL");
  }
  out.push_back(LtlToken{});
  return out;
}

class LtlParser {
 public:
  explicit LtlParser(std::string_view src) : toks_(lex_ltl(src)) {}

  LtlPtr parse() {
    LtlPtr f = implies();
    if (cur().kind != LtlToken::Kind::End)
      throw ExprSyntaxError(cur().column, "unexpected token '" + cur().text + "' in LTL");
    return f;
  }

 private:
  const LtlToken& cur() const { return toks_[pos_]; }
  bool eat(LtlToken::Kind k) {
    if (cur().kind != k) return false;
    ++pos_;
    return true;
  }

  LtlPtr implies() {
    LtlPtr l = or_f();
    if (eat(LtlToken::Kind::Arrow)) return LtlNode::make(LtlOp::Implies, l, implies());
    return l;
  }
  LtlPtr or_f() {
    LtlPtr l = and_f();
    while (eat(LtlToken::Kind::Bar)) l = LtlNode::make(LtlOp::Or, l, and_f());
    return l;
  }
  LtlPtr and_f() {
    LtlPtr l = until();
    while (eat(LtlToken::Kind::Amp)) l = LtlNode::make(LtlOp::And, l, until());
    return l;
  }
  LtlPtr until() {
    LtlPtr l = unary();
    while (eat(LtlToken::Kind::KwU)) l = LtlNode::make(LtlOp::U, l, unary());
    return l;
  }
  LtlPtr unary() {
    if (eat(LtlToken::Kind::Bang)) return LtlNode::make(LtlOp::Not, unary());
    if (eat(LtlToken::Kind::KwG)) return LtlNode::make(LtlOp::G, unary());
    if (eat(LtlToken::Kind::KwX)) return LtlNode::make(LtlOp::X, unary());
    if (eat(LtlToken::Kind::LPar)) {
      LtlPtr f = implies();
      if (!eat(LtlToken::Kind::RPar))
        throw ExprSyntaxError(cur().column, "expected ')' in LTL");
      return f;
    }
    return atom();
  }
  LtlPtr atom() {
    if (cur().kind != LtlToken::Kind::Word)
      throw ExprSyntaxError(cur().column, "expected an atom in LTL");
    std::string text = cur().text;
    ++pos_;
    if (cur().kind == LtlToken::Kind::RelOp) {
      text += cur().text;
      ++pos_;
      if (cur().kind != LtlToken::Kind::Word)
        throw ExprSyntaxError(cur().column, "expected an operand after relational operator");
      text += cur().text;
      ++pos_;
    }
    return LtlNode::make_atom(parse_expression(text));
  }

  std::vector<LtlToken> toks_;
  std::size_t pos_ = 0;
};

bool is_relational_value(const std::string& v) {
  return !v.empty() && (v[0] == '<' || v[0] == '>' || v[0] == '=' || v[0] == '!');
}

bool looks_numeric(const std::string& v) {
  if (v.empty()) return false;
  bool digit = false;
  for (std::size_t i = 0; i < v.size(); ++i) {
    char c = v[i];
    if (std::isdigit(static_cast<unsigned char>(c))) digit = true;
    else if (c == '.' || (c == '-' && i == 0)) continue;
    else return false;
  }
  return digit;
}

}  // namespace

LtlPtr parse_ltl(std::string_view text) { return LtlParser(text).parse(); }

ExprPtr combination_atom(const std::string& name, const std::string& value) {
  if (is_relational_value(value)) return parse_expression(name + value);
  ExprPtr rhs;
  if (value == "TRUE") rhs = Expr::boolean(true);
  else if (value == "FALSE") rhs = Expr::boolean(false);
  else if (looks_numeric(value)) rhs = Expr::number(std::stod(value), value);
  else rhs = Expr::ident(value);
  return Expr::binary(BinOp::Eq, Expr::ident(name), std::move(rhs));
}

LtlFormula generate_ltl(const Rssr& r, std::string id) {
  const ContextCombination& cs = r.source.combination;

  LtlPtr cond;  // Cs as a conjunction of per-assignment atoms
  for (const auto& [name, value] : cs.assignments) {
    LtlPtr atom = LtlNode::make_atom(combination_atom(name, value));
    cond = cond ? LtlNode::make(LtlOp::And, cond, atom) : atom;
  }
  if (!cond)
    throw UnsupportedTimingError("requirement '" + r.id + "' has an empty combination");

  LtlPtr ca = LtlNode::make_atom(Expr::binary(
      BinOp::Eq, Expr::ident("controlAction"), Expr::ident(r.source.action_name)));

  LtlPtr body;
  if (cs.context == CombinationContext::Providing) {
    if (!cs.timing)
      throw UnsupportedTimingError("requirement '" + r.id +
                                   "' has no timing for a Providing context");
    switch (*cs.timing) {
      case Timing::AnyTime:
        body = LtlNode::make(LtlOp::Implies, cond, LtlNode::make(LtlOp::Not, ca));
        break;
      case Timing::TooEarly:
        body = LtlNode::make(
            LtlOp::And, LtlNode::make(LtlOp::Implies, ca, cond),
            LtlNode::make(LtlOp::Not, LtlNode::make(LtlOp::U, ca, cond)));
        break;
      case Timing::TooLate:
        body = LtlNode::make(
            LtlOp::And, LtlNode::make(LtlOp::Implies, cond, ca),
            LtlNode::make(LtlOp::Not, LtlNode::make(LtlOp::U, cond, ca)));
        break;
    }
  } else {
    body = LtlNode::make(LtlOp::Implies, cond, LtlNode::make(LtlOp::X, ca));
  }

  LtlFormula f;
  f.id = std::move(id);
  f.source_rssr = r.id;
  f.ast = LtlNode::make(LtlOp::G, body);
  f.rendered = render_ltl(*f.ast);
  return f;
}

}  // namespace stpatc
