#include "foamlab/ktemplate.hpp"

#include <cctype>
#include <sstream>

namespace foamlab {

std::string KLin::str() const {
  std::string s;
  auto append = [&](const Rat& c, const std::string& sym) {
    if (c == 0) return;
    if (s.empty()) {
      if (c < 0) s += "-";
    } else {
      s += c < 0 ? " - " : " + ";
    }
    Rat mag = c < 0 ? Rat(-c) : c;
    if (sym.empty()) {
      s += rat_str(mag);
    } else {
      if (mag != 1) s += rat_str(mag) + "*";
      s += sym;
    }
  };
  append(c0, "");
  append(ck, "k");
  append(cik, "1/k");
  if (s.empty()) s = "0";
  return s;
}

namespace {

struct LinTok {
  // one parsed term of a linear combination
  Rat coeff;
  int var = 0;   // 1-based variable, 0 = none
  int kpow = 0;  // +1 for k, -1 for 1/k
};

struct LinParser {
  const std::string& s;
  std::size_t pos = 0;
  int dim;

  LinParser(const std::string& text, int n) : s(text), dim(n) {}

  void skip() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  char peek() {
    skip();
    return pos < s.size() ? s[pos] : '\0';
  }
  bool eat(char c) {
    if (peek() == c) {
      ++pos;
      return true;
    }
    return false;
  }

  Rat integer() {
    skip();
    std::size_t start = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos == start) throw ParseError("expected a number in linear term", pos);
    return Rat(Int(s.substr(start, pos - start)));
  }

  bool at_digit() { return std::isdigit(static_cast<unsigned char>(peek())); }

  // var or k after an optional coefficient
  LinTok symbol(Rat coeff) {
    skip();
    if (peek() == 'k') {
      ++pos;
      LinTok t;
      t.coeff = coeff;
      t.kpow = 1;
      if (peek() == '/') {  // k / RATIONAL
        ++pos;
        Rat d = rational();
        if (d == 0) throw ParseError("division by zero", pos);
        t.coeff /= d;
      }
      return t;
    }
    if (peek() == 'x') {
      ++pos;
      Rat idx = integer();
      int v = static_cast<int>(rat_num(idx));
      if (v < 1 || v > dim) throw ParseError("variable index out of range", pos);
      LinTok t;
      t.coeff = coeff;
      t.var = v;
      return t;
    }
    throw ParseError("expected 'k' or a variable after coefficient", pos);
  }

  Rat rational() {
    Rat num = integer();
    if (peek() == '/') {
      std::size_t save = pos;
      ++pos;
      if (at_digit()) {
        Rat den = integer();
        if (den == 0) throw ParseError("zero denominator", pos);
        return num / den;
      }
      pos = save;
    }
    return num;
  }

  LinTok term() {
    skip();
    if (at_digit()) {
      Rat c = rational();
      if (eat('*')) return symbol(c);
      if (peek() == '/') {  // RATIONAL / k
        ++pos;
        skip();
        if (peek() == 'k') {
          ++pos;
          LinTok t;
          t.coeff = c;
          t.kpow = -1;
          return t;
        }
        throw ParseError("expected 'k' after '/'", pos);
      }
      LinTok t;
      t.coeff = c;
      return t;
    }
    return symbol(Rat(1));
  }

  void lincomb(std::vector<Rat>& coeffs, KLin& klin) {
    bool neg = false;
    if (eat('-'))
      neg = true;
    else
      eat('+');
    while (true) {
      LinTok t = term();
      Rat c = neg ? Rat(-t.coeff) : t.coeff;
      if (t.var > 0) {
        if (t.kpow != 0) throw ParseError("k-dependent variable coefficients not supported", pos);
        coeffs[t.var - 1] += c;
      } else if (t.kpow == 1) {
        klin.ck += c;
      } else if (t.kpow == -1) {
        klin.cik += c;
      } else {
        klin.c0 += c;
      }
      skip();
      if (eat('+')) {
        neg = false;
      } else if (peek() == '-') {
        ++pos;
        neg = true;
      } else {
        return;
      }
    }
  }
};

KLin klin_sub(const KLin& a, const KLin& b) {
  return KLin(a.c0 - b.c0, a.ck - b.ck, a.cik - b.cik);
}
KLin klin_neg(const KLin& a) { return KLin(-a.c0, -a.ck, -a.cik); }

}  // namespace

KLin parse_klin(const std::string& text) {
  LinParser p(text, 3);
  std::vector<Rat> coeffs(3, Rat(0));
  KLin k;
  p.lincomb(coeffs, k);
  p.skip();
  if (p.pos != text.size()) throw ParseError("trailing input in k-linear value", p.pos);
  for (const auto& c : coeffs)
    if (c != 0) throw ParseError("variables not allowed in this value", 0);
  return k;
}

RegionSet RegionTemplate::at(const DomainPtr& dom, const Rat& k) const {
  RegionSet r(dom);
  for (const auto& ct : cells) {
    std::vector<Constraint> cons;
    for (const auto& c : ct.cons) cons.push_back(c.at(k));
    RegionSet cell = region_from_cell(dom, cons);
    r.cells.insert(r.cells.end(), cell.cells.begin(), cell.cells.end());
  }
  return r;
}

RegionTemplate RegionTemplate::strictified() const {
  RegionTemplate out;
  for (const auto& ct : cells) {
    CellTemplate s;
    for (auto c : ct.cons) {
      c.strict = true;
      s.cons.push_back(std::move(c));
    }
    out.cells.push_back(std::move(s));
  }
  return out;
}

RegionTemplate RegionTemplate::unite(const RegionTemplate& x, const RegionTemplate& y) {
  RegionTemplate out = x;
  out.cells.insert(out.cells.end(), y.cells.begin(), y.cells.end());
  return out;
}

RegionTemplate RegionTemplate::intersect(const RegionTemplate& x, const RegionTemplate& y) {
  RegionTemplate out;
  for (const auto& cx : x.cells)
    for (const auto& cy : y.cells) {
      CellTemplate c = cx;
      c.cons.insert(c.cons.end(), cy.cons.begin(), cy.cons.end());
      out.cells.push_back(std::move(c));
    }
  return out;
}

RegionTemplate RegionTemplate::complement(int dim) const {
  // whole space when empty
  RegionTemplate out;
  if (cells.empty()) {
    out.cells.push_back(CellTemplate{});
    return out;
  }
  out.cells.push_back(CellTemplate{});
  for (const auto& cell : cells) {
    // complement of one cell: first-violated-constraint decomposition
    RegionTemplate cellc;
    CellTemplate prefix;
    for (const auto& con : cell.cons) {
      CellTemplate piece = prefix;
      ConstraintTemplate flipped;
      flipped.a.resize(dim);
      for (int i = 0; i < dim; ++i) flipped.a[i] = -con.a[i];
      flipped.b = KLin(-con.b.c0, -con.b.ck, -con.b.cik);
      flipped.strict = !con.strict;
      piece.cons.push_back(std::move(flipped));
      cellc.cells.push_back(std::move(piece));
      prefix.cons.push_back(con);
    }
    out = intersect(out, cellc);
  }
  return out;
}

std::optional<RegionSet> RegionTemplate::monotone_limit(const DomainPtr& dom) const {
  RegionSet out(dom);
  for (const auto& ct : cells) {
    std::vector<Constraint> cons;
    for (const auto& c : ct.cons) {
      // the satisfaction set of a.x <= c0 + ck*k + cik/k must be
      // non-decreasing on k >= 1, i.e. ck >= 0 and ck >= cik
      if (c.b.ck < 0 || c.b.ck < c.b.cik) return std::nullopt;
      if (c.b.ck > 0) continue;  // bound runs to +infinity: constraint drops out
      if (c.b.cik < 0) {
        // approaches c0 from inside: limit membership is strict
        cons.emplace_back(c.a, c.b.c0, true);
      } else {
        cons.emplace_back(c.a, c.b.c0, c.strict);
      }
    }
    RegionSet cell = region_from_cell(dom, cons);
    out.cells.insert(out.cells.end(), cell.cells.begin(), cell.cells.end());
  }
  return out;
}

std::string RegionTemplate::str() const {
  std::string s;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) s += " | ";
    for (std::size_t j = 0; j < cells[i].cons.size(); ++j) {
      if (j) s += ", ";
      const auto& c = cells[i].cons[j];
      std::string lhs;
      bool first = true;
      for (std::size_t v = 0; v < c.a.size(); ++v) {
        if (c.a[v] == 0) continue;
        Rat mag = c.a[v] < 0 ? Rat(-c.a[v]) : c.a[v];
        if (first) {
          if (c.a[v] < 0) lhs += "-";
        } else {
          lhs += c.a[v] < 0 ? " - " : " + ";
        }
        if (mag != 1) lhs += rat_str(mag) + "*";
        lhs += "x" + std::to_string(v + 1);
        first = false;
      }
      if (first) lhs = "0";
      s += lhs + (c.strict ? " < " : " <= ") + c.b.str();
    }
  }
  return s.empty() ? "{}" : s;
}

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : text) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

bool blank(const std::string& t) { return t.find_first_not_of(" \t") == std::string::npos; }

}  // namespace

RegionTemplate parse_region_template(const std::string& text, int dim) {
  RegionTemplate out;
  if (blank(text) || text == "empty" || text == "{}") return out;
  for (const std::string& cell_text : split(text, '|')) {
    CellTemplate cell;
    for (const std::string& con_text : split(cell_text, ',')) {
      std::size_t at = std::string::npos;
      std::string rel;
      for (const char* r : {"<=", ">=", "==", "<", ">"}) {
        std::size_t p = con_text.find(r);
        if (p != std::string::npos && (at == std::string::npos || p < at)) {
          at = p;
          rel = r;
        }
      }
      if (at == std::string::npos) throw ParseError("constraint needs a relation: " + con_text);
      std::string lhs_text = con_text.substr(0, at);
      std::string rhs_text = con_text.substr(at + rel.size());

      std::vector<Rat> lc(dim, Rat(0)), rc(dim, Rat(0));
      KLin lk, rk;
      LinParser lp(lhs_text, dim);
      lp.lincomb(lc, lk);
      lp.skip();
      if (lp.pos != lhs_text.size()) throw ParseError("trailing input in constraint: " + lhs_text);
      LinParser rp(rhs_text, dim);
      rp.lincomb(rc, rk);
      rp.skip();
      if (rp.pos != rhs_text.size()) throw ParseError("trailing input in constraint: " + rhs_text);

      // normal form: (l - r) . x REL (rk - lk)
      std::vector<Rat> a(dim);
      for (int i = 0; i < dim; ++i) a[i] = lc[i] - rc[i];
      KLin b = klin_sub(rk, lk);

      auto push = [&](std::vector<Rat> coeffs, KLin rhs, bool strict) {
        ConstraintTemplate ct;
        ct.a = std::move(coeffs);
        ct.b = std::move(rhs);
        ct.strict = strict;
        cell.cons.push_back(std::move(ct));
      };
      std::vector<Rat> na(dim);
      for (int i = 0; i < dim; ++i) na[i] = -a[i];
      if (rel == "<=")
        push(a, b, false);
      else if (rel == "<")
        push(a, b, true);
      else if (rel == ">=")
        push(na, klin_neg(b), false);
      else if (rel == ">")
        push(na, klin_neg(b), true);
      else {  // ==
        push(a, b, false);
        push(na, klin_neg(b), false);
      }
    }
    out.cells.push_back(std::move(cell));
  }
  return out;
}

RegionSet parse_region(const std::string& text, const DomainPtr& dom) {
  RegionTemplate t = parse_region_template(text, dom->n);
  for (const auto& c : t.cells)
    for (const auto& con : c.cons)
      if (!con.b.constant()) throw ParseError("region must not mention k here: " + text);
  return t.at(dom, Rat(1));
}

}  // namespace foamlab
