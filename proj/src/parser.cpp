#include "foamlab/parser.hpp"

#include <cctype>

namespace foamlab {

Rat parse_rat(const std::string& text) {
  std::size_t i = 0;
  bool neg = false;
  if (i < text.size() && (text[i] == '-' || text[i] == '+')) neg = text[i++] == '-';
  std::size_t start = i;
  while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
  if (i == start) throw std::invalid_argument("not a rational: '" + text + "'");
  Int num(text.substr(start, i - start));
  Int den(1);
  if (i < text.size() && text[i] == '/') {
    ++i;
    std::size_t dstart = i;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
    if (i == dstart) throw std::invalid_argument("not a rational: '" + text + "'");
    den = Int(text.substr(dstart, i - dstart));
    if (den == 0) throw std::invalid_argument("zero denominator in rational '" + text + "'");
  }
  if (i != text.size()) throw std::invalid_argument("trailing characters in rational '" + text + "'");
  Rat r(num, den);
  return neg ? Rat(-r) : r;
}

namespace {

struct Lexer {
  const std::string& s;
  std::size_t pos = 0;

  explicit Lexer(const std::string& text) : s(text) {}

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  char peek() {
    skip_ws();
    return pos < s.size() ? s[pos] : '\0';
  }
  bool eat(char c) {
    if (peek() == c) {
      ++pos;
      return true;
    }
    return false;
  }
  void expect(char c, const char* what) {
    if (!eat(c)) throw ParseError(std::string("expected '") + c + "' " + what, pos);
  }
  bool at_digit() { return std::isdigit(static_cast<unsigned char>(peek())); }
  bool at_alpha() { return std::isalpha(static_cast<unsigned char>(peek())); }

  Int integer() {
    skip_ws();
    std::size_t start = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos == start) throw ParseError("expected an integer", pos);
    return Int(s.substr(start, pos - start));
  }

  std::string ident() {
    skip_ws();
    std::size_t start = pos;
    while (pos < s.size() &&
           (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
      ++pos;
    if (pos == start) throw ParseError("expected an identifier", pos);
    return s.substr(start, pos - start);
  }
};

struct Parser {
  Lexer lex;
  ParseOptions opts;

  Parser(const std::string& text, const ParseOptions& o) : lex(text), opts(o) {}

  static RawPtr node(RawExpr e) { return std::make_shared<const RawExpr>(std::move(e)); }

  RawPtr binary(RawExpr::Kind k, RawPtr a, RawPtr b) {
    RawExpr e;
    e.kind = k;
    e.a = std::move(a);
    e.b = std::move(b);
    return node(std::move(e));
  }

  RawPtr parse() {
    RawPtr e = expr();
    lex.skip_ws();
    if (lex.pos != lex.s.size()) throw ParseError("unexpected trailing input", lex.pos);
    return e;
  }

  RawPtr expr() {
    RawPtr e = term();
    while (true) {
      if (lex.eat('+'))
        e = binary(RawExpr::Kind::Add, e, term());
      else if (lex.eat('-'))
        e = binary(RawExpr::Kind::Sub, e, term());
      else
        return e;
    }
  }

  RawPtr term() {
    RawPtr e = factor();
    while (true) {
      if (lex.eat('*')) {
        e = binary(RawExpr::Kind::Mul, e, factor());
      } else if (lex.peek() == '/') {
        if (!opts.allow_div)
          throw ParseError("no general division in the expression grammar", lex.pos);
        lex.eat('/');
        e = binary(RawExpr::Kind::Div, e, factor());
      } else {
        return e;
      }
    }
  }

  RawPtr factor() {
    RawPtr b = base();
    if (lex.eat('^')) {
      bool neg = lex.eat('-');
      Int p = lex.integer();
      if (neg) throw ParseError("negative exponents are not in the grammar", lex.pos);
      if (p > 64) throw ParseError("exponent too large", lex.pos);
      RawExpr e;
      e.kind = RawExpr::Kind::Pow;
      e.ipow = p.template convert_to<int>();
      e.a = b;
      return node(std::move(e));
    }
    return b;
  }

  RawPtr base() {
    char c = lex.peek();
    if (c == '-') {
      lex.eat('-');
      RawExpr e;
      e.kind = RawExpr::Kind::Neg;
      e.a = base();
      return node(std::move(e));
    }
    if (c == '(') {
      lex.eat('(');
      RawPtr e = expr();
      lex.expect(')', "to close parenthesis");
      return e;
    }
    if (lex.at_digit()) return rational();
    if (lex.at_alpha()) return identifier();
    throw ParseError("expected a rational, variable, function call, or parenthesis", lex.pos);
  }

  RawPtr rational() {
    Int num = lex.integer();
    Rat value(num);
    // INT '/' INT is a rational literal; '/' followed by anything else is
    // division (template mode only).
    if (lex.peek() == '/') {
      std::size_t save = lex.pos;
      lex.eat('/');
      if (lex.at_digit()) {
        std::size_t dpos = lex.pos;
        Int den = lex.integer();
        if (den == 0) throw ParseError("zero denominator in rational literal", dpos);
        value = Rat(num, den);
      } else {
        lex.pos = save;  // leave the '/' for term()
      }
    }
    RawExpr e;
    e.kind = RawExpr::Kind::Const;
    e.value = value;
    return node(std::move(e));
  }

  RawPtr identifier() {
    std::size_t at = lex.pos;
    std::string id = lex.ident();
    if (id == "k") {
      if (!opts.allow_k) throw ParseError("index symbol 'k' not allowed here", at);
      RawExpr e;
      e.kind = RawExpr::Kind::K;
      return node(std::move(e));
    }
    if (id.size() >= 2 && id[0] == 'x' && std::isdigit(static_cast<unsigned char>(id[1]))) {
      int axis = std::stoi(id.substr(1));
      if (axis < 1 || axis > 3) throw ParseError("unknown variable '" + id + "'", at);
      RawExpr e;
      e.kind = RawExpr::Kind::Var;
      e.var = axis;
      return node(std::move(e));
    }
    if (id == "exp" || id == "sin" || id == "cos" || id == "bump" || id == "sstep" || id == "inv") {
      if (id == "inv" && !opts.allow_inv)
        throw ParseError("unguarded inv: reciprocals are only allowed inside pieces with a validated region", at);
      lex.expect('(', ("after '" + id + "'").c_str());
      RawExpr e;
      e.kind = RawExpr::Kind::Call;
      e.fn = id;
      e.a = expr();
      lex.expect(')', ("to close '" + id + "'").c_str());
      return node(std::move(e));
    }
    if (id == "gbump") {
      // extended form used when printing bump derivatives:
      //   gbump(arg; c0,c1,...; m)
      lex.expect('(', "after 'gbump'");
      RawExpr e;
      e.kind = RawExpr::Kind::Call;
      e.fn = id;
      e.a = expr();
      lex.expect(';', "after gbump argument");
      while (true) {
        bool neg = lex.eat('-');
        Int num = lex.integer();
        Rat coeff(num);
        if (lex.eat('/')) {
          Int den = lex.integer();
          if (den == 0) throw ParseError("zero denominator in gbump coefficient", lex.pos);
          coeff = Rat(num, den);
        }
        e.gnum.push_back(neg ? Rat(-coeff) : coeff);
        if (!lex.eat(',')) break;
      }
      lex.expect(';', "before gbump denominator exponent");
      e.gden = lex.integer().template convert_to<int>();
      lex.expect(')', "to close 'gbump'");
      return node(std::move(e));
    }
    throw ParseError("unknown identifier '" + id + "'", at);
  }
};

}  // namespace

RawPtr parse_raw(const std::string& text, const ParseOptions& opts) {
  Parser p(text, opts);
  return p.parse();
}

bool raw_mentions_k(const RawExpr& r) {
  switch (r.kind) {
    case RawExpr::Kind::K:
      return true;
    case RawExpr::Kind::Const:
    case RawExpr::Kind::Var:
      return false;
    default:
      return (r.a && raw_mentions_k(*r.a)) || (r.b && raw_mentions_k(*r.b));
  }
}

Expr raw_to_expr(const RawExpr& r, const std::optional<Rat>& k) {
  switch (r.kind) {
    case RawExpr::Kind::Const:
      return e_const(r.value);
    case RawExpr::Kind::K:
      if (!k) throw ValidationError("expression mentions 'k' outside a net template");
      return e_const(*k);
    case RawExpr::Kind::Var:
      return e_var(r.var);
    case RawExpr::Kind::Add:
      return e_add(raw_to_expr(*r.a, k), raw_to_expr(*r.b, k));
    case RawExpr::Kind::Sub:
      return e_sub(raw_to_expr(*r.a, k), raw_to_expr(*r.b, k));
    case RawExpr::Kind::Mul:
      return e_mul(raw_to_expr(*r.a, k), raw_to_expr(*r.b, k));
    case RawExpr::Kind::Div: {
      Expr num = raw_to_expr(*r.a, k);
      Expr den = raw_to_expr(*r.b, k);
      auto c = den.constant_value();
      if (!c) throw ValidationError("division requires a constant denominator after index substitution");
      if (*c == 0) throw ValidationError("division by zero after index substitution");
      return e_scale(Rat(1) / *c, num);
    }
    case RawExpr::Kind::Neg:
      return e_neg(raw_to_expr(*r.a, k));
    case RawExpr::Kind::Pow:
      return e_pow(raw_to_expr(*r.a, k), r.ipow);
    case RawExpr::Kind::Call: {
      Expr a = raw_to_expr(*r.a, k);
      if (r.fn == "exp") return e_exp(a);
      if (r.fn == "sin") return e_sin(a);
      if (r.fn == "cos") return e_cos(a);
      if (r.fn == "bump") return e_bump(a);
      if (r.fn == "sstep") return e_sstep(a);
      if (r.fn == "inv") return e_inv(a);
      if (r.fn == "gbump") return e_gbump(a, r.gnum, r.gden);
      throw ValidationError("unknown function '" + r.fn + "'");
    }
  }
  return Expr{};
}

Expr parse_expr(const std::string& text) {
  return raw_to_expr(*parse_raw(text, ParseOptions{}), std::nullopt);
}

Expr parse_piece_expr(const std::string& text) {
  ParseOptions o;
  o.allow_inv = true;
  return raw_to_expr(*parse_raw(text, o), std::nullopt);
}

}  // namespace foamlab

namespace foamlab {

RawPtr raw_const(const Rat& c) {
  RawExpr e;
  e.kind = RawExpr::Kind::Const;
  e.value = c;
  return std::make_shared<const RawExpr>(std::move(e));
}

RawPtr raw_binary(RawExpr::Kind kind, RawPtr a, RawPtr b) {
  RawExpr e;
  e.kind = kind;
  e.a = std::move(a);
  e.b = std::move(b);
  return std::make_shared<const RawExpr>(std::move(e));
}

namespace {

RawPtr raw_call(const std::string& fn, RawPtr arg, std::vector<Rat> gnum = {}, int gden = 0) {
  RawExpr e;
  e.kind = RawExpr::Kind::Call;
  e.fn = fn;
  e.a = std::move(arg);
  e.gnum = std::move(gnum);
  e.gden = gden;
  return std::make_shared<const RawExpr>(std::move(e));
}

RawPtr raw_mul(RawPtr a, RawPtr b) { return raw_binary(RawExpr::Kind::Mul, std::move(a), std::move(b)); }
RawPtr raw_add(RawPtr a, RawPtr b) { return raw_binary(RawExpr::Kind::Add, std::move(a), std::move(b)); }

bool raw_is_zero(const RawPtr& r) {
  return r->kind == RawExpr::Kind::Const && r->value == 0;
}

RawPtr raw_sum(RawPtr a, RawPtr b) {
  if (raw_is_zero(a)) return b;
  if (raw_is_zero(b)) return a;
  return raw_add(std::move(a), std::move(b));
}

RawPtr raw_prod(RawPtr a, RawPtr b) {
  if (raw_is_zero(a) || raw_is_zero(b)) return raw_const(Rat(0));
  return raw_mul(std::move(a), std::move(b));
}

// numerator polynomial of d/dt [B(t) P(t) / (1-t^2)^m]; denominator gains 2
std::vector<Rat> gbump_deriv_num(const std::vector<Rat>& P, int m) {
  std::vector<Rat> out(P.size() + 3, Rat(0));
  for (std::size_t i = 0; i < P.size(); ++i) {
    out[i + 1] += Rat(-2) * P[i];
    out[i + 1] += Rat(2 * m) * P[i];
    out[i + 3] -= Rat(2 * m) * P[i];
    if (i >= 1) {
      Rat d = Rat(static_cast<long>(i)) * P[i];
      out[i - 1] += d;
      out[i + 1] -= Rat(2) * d;
      out[i + 3] += d;
    }
  }
  return out;
}

}  // namespace

RawPtr raw_diff(const RawPtr& r, int axis) {
  switch (r->kind) {
    case RawExpr::Kind::Const:
    case RawExpr::Kind::K:
      return raw_const(Rat(0));
    case RawExpr::Kind::Var:
      return raw_const(r->var == axis ? Rat(1) : Rat(0));
    case RawExpr::Kind::Add:
      return raw_sum(raw_diff(r->a, axis), raw_diff(r->b, axis));
    case RawExpr::Kind::Sub:
      return raw_binary(RawExpr::Kind::Sub, raw_diff(r->a, axis), raw_diff(r->b, axis));
    case RawExpr::Kind::Mul:
      return raw_sum(raw_prod(raw_diff(r->a, axis), r->b), raw_prod(r->a, raw_diff(r->b, axis)));
    case RawExpr::Kind::Div:
      // denominators fold to constants at instantiation
      return raw_binary(RawExpr::Kind::Div, raw_diff(r->a, axis), r->b);
    case RawExpr::Kind::Neg: {
      RawExpr e;
      e.kind = RawExpr::Kind::Neg;
      e.a = raw_diff(r->a, axis);
      return std::make_shared<const RawExpr>(std::move(e));
    }
    case RawExpr::Kind::Pow: {
      if (r->ipow == 0) return raw_const(Rat(0));
      RawExpr pw;
      pw.kind = RawExpr::Kind::Pow;
      pw.ipow = r->ipow - 1;
      pw.a = r->a;
      RawPtr reduced = r->ipow == 1 ? raw_const(Rat(1)) : std::make_shared<const RawExpr>(std::move(pw));
      return raw_prod(raw_prod(raw_const(Rat(r->ipow)), reduced), raw_diff(r->a, axis));
    }
    case RawExpr::Kind::Call: {
      RawPtr inner = raw_diff(r->a, axis);
      if (r->fn == "exp") return raw_prod(raw_call("exp", r->a), inner);
      if (r->fn == "sin") return raw_prod(raw_call("cos", r->a), inner);
      if (r->fn == "cos") {
        RawExpr e;
        e.kind = RawExpr::Kind::Neg;
        e.a = raw_prod(raw_call("sin", r->a), inner);
        return std::make_shared<const RawExpr>(std::move(e));
      }
      if (r->fn == "sstep")
        return raw_prod(raw_prod(raw_const(bump_norm_reciprocal()),
                                 raw_call("gbump", r->a, {Rat(1)}, 0)),
                        inner);
      if (r->fn == "bump")
        return raw_prod(raw_call("gbump", r->a, gbump_deriv_num({Rat(1)}, 0), 2), inner);
      if (r->fn == "gbump")
        return raw_prod(raw_call("gbump", r->a, gbump_deriv_num(r->gnum, r->gden), r->gden + 2),
                        inner);
      if (r->fn == "inv") {
        RawExpr sq;
        sq.kind = RawExpr::Kind::Pow;
        sq.ipow = 2;
        sq.a = raw_call("inv", r->a);
        RawExpr e;
        e.kind = RawExpr::Kind::Neg;
        e.a = raw_prod(std::make_shared<const RawExpr>(std::move(sq)), inner);
        return std::make_shared<const RawExpr>(std::move(e));
      }
      throw ValidationError("raw_diff: unknown function '" + r->fn + "'");
    }
  }
  return raw_const(Rat(0));
}

namespace {

RawPtr raw_from_atom(const Atom& a) {
  switch (a.kind) {
    case AtomKind::Var: {
      RawExpr e;
      e.kind = RawExpr::Kind::Var;
      e.var = a.var;
      return std::make_shared<const RawExpr>(std::move(e));
    }
    case AtomKind::Exp:
      return raw_call("exp", raw_from_expr(*a.arg));
    case AtomKind::Sin:
      return raw_call("sin", raw_from_expr(*a.arg));
    case AtomKind::Cos:
      return raw_call("cos", raw_from_expr(*a.arg));
    case AtomKind::SStep:
      return raw_call("sstep", raw_from_expr(*a.arg));
    case AtomKind::GBump:
      return raw_call("gbump", raw_from_expr(*a.arg), a.gnum, a.gden);
    case AtomKind::Inv:
      return raw_call("inv", raw_from_expr(*a.arg));
  }
  return raw_const(Rat(0));
}

}  // namespace

RawPtr raw_from_expr(const Expr& e) {
  if (e.terms.empty()) return raw_const(Rat(0));
  RawPtr sum;
  for (const auto& t : e.terms) {
    RawPtr term = raw_const(t.coeff);
    for (const auto& f : t.mono.factors) {
      RawPtr base = raw_from_atom(f.atom);
      if (f.power > 1) {
        RawExpr pw;
        pw.kind = RawExpr::Kind::Pow;
        pw.ipow = f.power;
        pw.a = std::move(base);
        base = std::make_shared<const RawExpr>(std::move(pw));
      }
      term = raw_mul(std::move(term), std::move(base));
    }
    sum = sum ? raw_add(std::move(sum), std::move(term)) : std::move(term);
  }
  return sum;
}

}  // namespace foamlab
