#include "foamlab/expr.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <sstream>

namespace foamlab {

// ---------------------------------------------------------------------------
// ordering
// ---------------------------------------------------------------------------

static int cmp_rat(const Rat& a, const Rat& b) { return a < b ? -1 : (b < a ? 1 : 0); }

int compare(const Atom& a, const Atom& b) {
  if (a.kind != b.kind) return static_cast<int>(a.kind) < static_cast<int>(b.kind) ? -1 : 1;
  if (a.kind == AtomKind::Var) return a.var < b.var ? -1 : (a.var > b.var ? 1 : 0);
  if (int c = compare(*a.arg, *b.arg)) return c;
  if (a.kind == AtomKind::GBump) {
    if (a.gden != b.gden) return a.gden < b.gden ? -1 : 1;
    if (a.gnum.size() != b.gnum.size()) return a.gnum.size() < b.gnum.size() ? -1 : 1;
    for (std::size_t i = 0; i < a.gnum.size(); ++i)
      if (int c = cmp_rat(a.gnum[i], b.gnum[i])) return c;
  }
  return 0;
}

int compare(const Monomial& a, const Monomial& b) {
  std::size_t n = std::min(a.factors.size(), b.factors.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (int c = compare(a.factors[i].atom, b.factors[i].atom)) return c;
    if (a.factors[i].power != b.factors[i].power)
      return a.factors[i].power < b.factors[i].power ? -1 : 1;
  }
  if (a.factors.size() != b.factors.size()) return a.factors.size() < b.factors.size() ? -1 : 1;
  return 0;
}

int compare(const Expr& a, const Expr& b) {
  std::size_t n = std::min(a.terms.size(), b.terms.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (int c = compare(a.terms[i].mono, b.terms[i].mono)) return c;
    if (int c = cmp_rat(a.terms[i].coeff, b.terms[i].coeff)) return c;
  }
  if (a.terms.size() != b.terms.size()) return a.terms.size() < b.terms.size() ? -1 : 1;
  return 0;
}

int Expr::max_var() const {
  int m = 0;
  for (const auto& t : terms)
    for (const auto& f : t.mono.factors) {
      if (f.atom.kind == AtomKind::Var)
        m = std::max(m, f.atom.var);
      else
        m = std::max(m, f.atom.arg->max_var());
    }
  return m;
}

// ---------------------------------------------------------------------------
// canonical builder
// ---------------------------------------------------------------------------

namespace {

struct MonoLess {
  bool operator()(const Monomial& a, const Monomial& b) const { return compare(a, b) < 0; }
};

using Poly = std::map<Monomial, Rat, MonoLess>;

Expr emit(Poly&& p) {
  Expr e;
  for (auto& [m, c] : p)
    if (c != 0) e.terms.push_back(Term{m, c});
  return e;
}

Poly to_poly(const Expr& e) {
  Poly p;
  for (const auto& t : e.terms) p.emplace(t.mono, t.coeff);
  return p;
}

void add_into(Poly& p, const Monomial& m, const Rat& c) {
  auto [it, fresh] = p.emplace(m, c);
  if (!fresh) {
    it->second += c;
    if (it->second == 0) p.erase(it);
  }
}

Monomial mono_mul(const Monomial& a, const Monomial& b) {
  Monomial r;
  std::size_t i = 0, j = 0;
  while (i < a.factors.size() && j < b.factors.size()) {
    int c = compare(a.factors[i].atom, b.factors[j].atom);
    if (c < 0)
      r.factors.push_back(a.factors[i++]);
    else if (c > 0)
      r.factors.push_back(b.factors[j++]);
    else {
      r.factors.push_back(Factor{a.factors[i].atom, a.factors[i].power + b.factors[j].power});
      ++i, ++j;
    }
  }
  while (i < a.factors.size()) r.factors.push_back(a.factors[i++]);
  while (j < b.factors.size()) r.factors.push_back(b.factors[j++]);
  return r;
}

Expr atom_expr(Atom a) {
  Expr e;
  e.terms.push_back(Term{Monomial{{Factor{std::move(a), 1}}}, Rat(1)});
  return e;
}

ExprPtr share(const Expr& e) { return std::make_shared<const Expr>(e); }

}  // namespace

// ---------------------------------------------------------------------------
// constructors
// ---------------------------------------------------------------------------

Expr e_const(const Rat& c) {
  Expr e;
  if (c != 0) e.terms.push_back(Term{Monomial{}, c});
  return e;
}

Expr e_var(int axis) {
  if (axis < 1 || axis > 3) throw ValidationError("variable axis out of range: x" + std::to_string(axis));
  Atom a;
  a.kind = AtomKind::Var;
  a.var = axis;
  return atom_expr(std::move(a));
}

Expr e_add(const Expr& a, const Expr& b) {
  Poly p = to_poly(a);
  for (const auto& t : b.terms) add_into(p, t.mono, t.coeff);
  return emit(std::move(p));
}

Expr e_neg(const Expr& a) { return e_scale(Rat(-1), a); }

Expr e_sub(const Expr& a, const Expr& b) { return e_add(a, e_neg(b)); }

Expr e_scale(const Rat& c, const Expr& a) {
  if (c == 0) return Expr{};
  Expr e = a;
  for (auto& t : e.terms) t.coeff *= c;
  return e;
}

Expr e_mul(const Expr& a, const Expr& b) {
  Poly p;
  for (const auto& ta : a.terms)
    for (const auto& tb : b.terms) add_into(p, mono_mul(ta.mono, tb.mono), ta.coeff * tb.coeff);
  return emit(std::move(p));
}

Expr e_pow(const Expr& a, int n) {
  if (n < 0) throw ValidationError("negative exponent: use inv for guarded reciprocals");
  Expr r = e_const(Rat(1));
  Expr base = a;
  while (n > 0) {
    if (n & 1) r = e_mul(r, base);
    base = e_mul(base, base);
    n >>= 1;
  }
  return r;
}

static Expr unary_atom(AtomKind kind, const Expr& a) {
  Atom at;
  at.kind = kind;
  at.arg = share(a);
  return atom_expr(std::move(at));
}

Expr e_exp(const Expr& a) {
  if (auto c = a.constant_value(); c && *c == 0) return e_const(Rat(1));
  return unary_atom(AtomKind::Exp, a);
}
Expr e_sin(const Expr& a) {
  if (auto c = a.constant_value(); c && *c == 0) return Expr{};
  return unary_atom(AtomKind::Sin, a);
}
Expr e_cos(const Expr& a) {
  if (auto c = a.constant_value(); c && *c == 0) return e_const(Rat(1));
  return unary_atom(AtomKind::Cos, a);
}

Expr e_gbump(const Expr& a, std::vector<Rat> num, int den) {
  while (!num.empty() && num.back() == 0) num.pop_back();
  if (num.empty()) return Expr{};
  if (auto c = a.constant_value()) {
    // constant argument: fold to a rational multiple of exp(-1/(1-c^2)) only
    // when outside the support, where the value is literally 0
    if (*c >= 1 || *c <= -1) return Expr{};
  }
  Atom at;
  at.kind = AtomKind::GBump;
  at.arg = share(a);
  at.gnum = std::move(num);
  at.gden = den;
  return atom_expr(std::move(at));
}

Expr e_bump(const Expr& a) { return e_gbump(a, {Rat(1)}, 0); }

Expr e_sstep(const Expr& a) {
  if (auto c = a.constant_value()) {
    if (*c >= 1) return e_const(Rat(1));
    if (*c <= -1) return Expr{};
  }
  return unary_atom(AtomKind::SStep, a);
}

Expr e_inv(const Expr& a) {
  if (auto c = a.constant_value()) {
    if (*c == 0) throw ValidationError("inv of literal zero");
    return e_const(Rat(1) / *c);
  }
  return unary_atom(AtomKind::Inv, a);
}

// ---------------------------------------------------------------------------
// constants
// ---------------------------------------------------------------------------

const Rat& bump_norm_reciprocal() {
  // 1 / integral_{-1}^{1} exp(-1/(1-x^2)) dx, frozen; |error| < 3e-25.
  static const Rat r = Rat(Int("1794326126554111"), Int("796669704378848"));
  return r;
}

double bump_integral() { return 0.44399381616807943782; }

// ---------------------------------------------------------------------------
// differentiation
// ---------------------------------------------------------------------------

static Expr diff_atom(const Atom& a, int axis) {
  switch (a.kind) {
    case AtomKind::Var:
      return a.var == axis ? e_const(Rat(1)) : Expr{};
    case AtomKind::Exp:
      return e_mul(atom_expr(Atom(a)), diff_axis(*a.arg, axis));
    case AtomKind::Sin: {
      Atom c;
      c.kind = AtomKind::Cos;
      c.arg = a.arg;
      return e_mul(atom_expr(std::move(c)), diff_axis(*a.arg, axis));
    }
    case AtomKind::Cos: {
      Atom s;
      s.kind = AtomKind::Sin;
      s.arg = a.arg;
      return e_neg(e_mul(atom_expr(std::move(s)), diff_axis(*a.arg, axis)));
    }
    case AtomKind::SStep:
      // sstep' = normalized bump of the argument
      return e_scale(bump_norm_reciprocal(), e_mul(e_gbump(*a.arg, {Rat(1)}, 0), diff_axis(*a.arg, axis)));
    case AtomKind::GBump: {
      // d/dt [ B(t) P(t) / (1-t^2)^m ]
      //   = B(t) [ -2 t P + (1-t^2)^2 P' + 2 m t (1-t^2) P ] / (1-t^2)^(m+2)
      const auto& P = a.gnum;
      int m = a.gden;
      std::vector<Rat> out(P.size() + 3, Rat(0));
      for (std::size_t i = 0; i < P.size(); ++i) {
        // -2 t P  -> degree i+1
        out[i + 1] += Rat(-2) * P[i];
        // 2 m t (1-t^2) P -> degrees i+1, i+3
        out[i + 1] += Rat(2 * m) * P[i];
        out[i + 3] -= Rat(2 * m) * P[i];
        // (1-t^2)^2 P' -> (1 - 2t^2 + t^4) * i * t^(i-1)
        if (i >= 1) {
          Rat d = Rat(static_cast<long>(i)) * P[i];
          out[i - 1] += d;
          out[i + 1] -= Rat(2) * d;
          out[i + 3] += d;
        }
      }
      return e_mul(e_gbump(*a.arg, std::move(out), m + 2), diff_axis(*a.arg, axis));
    }
    case AtomKind::Inv: {
      // d inv(e) = -inv(e)^2 e'
      Expr sq = e_pow(atom_expr(Atom(a)), 2);
      return e_neg(e_mul(sq, diff_axis(*a.arg, axis)));
    }
  }
  return Expr{};
}

Expr diff_axis(const Expr& e, int axis) {
  Poly acc;
  for (const auto& t : e.terms) {
    // product rule across the factors of the monomial
    for (std::size_t i = 0; i < t.mono.factors.size(); ++i) {
      const Factor& f = t.mono.factors[i];
      Monomial rest;
      for (std::size_t j = 0; j < t.mono.factors.size(); ++j) {
        if (j == i) {
          if (f.power > 1) rest.factors.push_back(Factor{f.atom, f.power - 1});
        } else {
          rest.factors.push_back(t.mono.factors[j]);
        }
      }
      Expr da = diff_atom(f.atom, axis);
      Rat c = t.coeff * Rat(f.power);
      for (const auto& dt : da.terms)
        add_into(acc, mono_mul(rest, dt.mono), c * dt.coeff);
    }
  }
  return emit(std::move(acc));
}

Expr diff(const Expr& e, const MultiIndex& p) {
  Expr r = e;
  for (std::size_t ax = 0; ax < p.p.size(); ++ax)
    for (int i = 0; i < p.p[ax]; ++i) r = diff_axis(r, static_cast<int>(ax) + 1);
  return r;
}

std::vector<MultiIndex> multi_indices_up_to(int n, int max_order, bool include_zero) {
  std::vector<MultiIndex> out;
  std::vector<int> cur(n, 0);
  // enumerate all vectors with sum <= max_order in lexicographic order
  auto rec = [&](auto&& self, int axis, int remaining) -> void {
    if (axis == n) {
      MultiIndex m(cur);
      if (include_zero || m.order() > 0) out.push_back(m);
      return;
    }
    for (int v = 0; v <= remaining; ++v) {
      cur[axis] = v;
      self(self, axis + 1, remaining - v);
    }
    cur[axis] = 0;
  };
  rec(rec, 0, max_order);
  return out;
}

// ---------------------------------------------------------------------------
// numeric evaluation
// ---------------------------------------------------------------------------

namespace {

// 64-node Gauss-Legendre rule on [-1,1]; computed once by Newton iteration.
struct Gauss64 {
  std::array<double, 64> x{}, w{};
  Gauss64() {
    const int n = 64;
    for (int i = 0; i < n / 2; ++i) {
      double t = std::cos(M_PI * (i + 0.75) / (n + 0.5));
      double p0 = 0, p1 = 0;
      for (int it = 0; it < 100; ++it) {
        p0 = 1.0;
        p1 = 0.0;
        for (int j = 0; j < n; ++j) {
          double p2 = p1;
          p1 = p0;
          p0 = ((2.0 * j + 1.0) * t * p1 - j * p2) / (j + 1);
        }
        double dp = n * (t * p0 - p1) / (t * t - 1.0);
        double dt = p0 / dp;
        t -= dt;
        if (std::abs(dt) < 1e-16) break;
      }
      p0 = 1.0;
      p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * t * p1 - j * p2) / (j + 1);
      }
      double dp = n * (t * p0 - p1) / (t * t - 1.0);
      x[i] = -t;
      x[n - 1 - i] = t;
      w[i] = w[n - 1 - i] = 2.0 / ((1.0 - t * t) * dp * dp);
    }
  }
};

double bump_scalar(double t) {
  double s = 1.0 - t * t;
  if (s <= 0) return 0.0;
  double u = 1.0 / s;
  if (u > 500.0) return 0.0;
  return std::exp(-u);
}

double sstep_scalar(double t) {
  if (t <= -1.0) return 0.0;
  if (t >= 1.0) return 1.0;
  static const Gauss64 g;
  double mid = (t - 1.0) / 2.0, half = (t + 1.0) / 2.0;
  double s = 0;
  for (int i = 0; i < 64; ++i) s += g.w[i] * bump_scalar(mid + half * g.x[i]);
  return s * half / bump_integral();
}

double eval_atom(const Atom& a, const std::vector<double>& x) {
  switch (a.kind) {
    case AtomKind::Var:
      return x.at(a.var - 1);
    case AtomKind::Exp:
      return std::exp(eval(*a.arg, x));
    case AtomKind::Sin:
      return std::sin(eval(*a.arg, x));
    case AtomKind::Cos:
      return std::cos(eval(*a.arg, x));
    case AtomKind::SStep:
      return sstep_scalar(eval(*a.arg, x));
    case AtomKind::GBump: {
      double t = eval(*a.arg, x);
      double s = 1.0 - t * t;
      if (s <= 0) return 0.0;
      double u = 1.0 / s;
      if (u > 500.0) return 0.0;
      double p = 0.0;
      for (std::size_t i = a.gnum.size(); i-- > 0;) p = p * t + to_double(a.gnum[i]);
      return std::exp(-u) * p / std::pow(s, a.gden);
    }
    case AtomKind::Inv:
      return 1.0 / eval(*a.arg, x);
  }
  return 0.0;
}

}  // namespace

double eval(const Expr& e, const std::vector<double>& x) {
  double s = 0.0;
  for (const auto& t : e.terms) {
    double m = to_double(t.coeff);
    for (const auto& f : t.mono.factors) {
      double v = eval_atom(f.atom, x);
      for (int i = 0; i < f.power; ++i) m *= v;
    }
    s += m;
  }
  return s;
}

double eval(const Expr& e, const std::vector<Rat>& x) {
  std::vector<double> xd(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) xd[i] = to_double(x[i]);
  return eval(e, xd);
}

// ---------------------------------------------------------------------------
// interval bounds
// ---------------------------------------------------------------------------

namespace {

Rat rat_from_double_down(double v) {
  for (int i = 0; i < 4; ++i) v = std::nextafter(v, -INFINITY);
  return Rat(v);
}
Rat rat_from_double_up(double v) {
  for (int i = 0; i < 4; ++i) v = std::nextafter(v, INFINITY);
  return Rat(v);
}

IV iv_add(const IV& a, const IV& b) {
  IV r;
  r.lo_inf = a.lo_inf || b.lo_inf;
  r.hi_inf = a.hi_inf || b.hi_inf;
  if (!r.lo_inf) r.lo = a.lo + b.lo;
  if (!r.hi_inf) r.hi = a.hi + b.hi;
  return r;
}

IV iv_scale(const Rat& c, const IV& a) {
  if (c == 0) return IV::point(Rat(0));
  IV r;
  if (c > 0) {
    r = a;
    if (!r.lo_inf) r.lo = c * a.lo;
    if (!r.hi_inf) r.hi = c * a.hi;
  } else {
    r.lo_inf = a.hi_inf;
    r.hi_inf = a.lo_inf;
    if (!r.lo_inf) r.lo = c * a.hi;
    if (!r.hi_inf) r.hi = c * a.lo;
  }
  return r;
}

IV iv_mul(const IV& a, const IV& b) {
  if (a.lo_inf || a.hi_inf || b.lo_inf || b.hi_inf) {
    // only resolve the easy all-positive/negative cases; otherwise whole line
    return IV::whole();
  }
  Rat c1 = a.lo * b.lo, c2 = a.lo * b.hi, c3 = a.hi * b.lo, c4 = a.hi * b.hi;
  Rat lo = std::min(std::min(c1, c2), std::min(c3, c4));
  Rat hi = std::max(std::max(c1, c2), std::max(c3, c4));
  return IV::of(lo, hi);
}

IV iv_pow(const IV& a, int n) {
  IV r = IV::point(Rat(1));
  for (int i = 0; i < n; ++i) r = iv_mul(r, a);
  return r;
}

IV atom_interval(const Atom& a, const std::vector<IV>& bounds) {
  switch (a.kind) {
    case AtomKind::Var: {
      int i = a.var - 1;
      if (i < 0 || i >= static_cast<int>(bounds.size())) return IV::whole();
      return bounds[i];
    }
    case AtomKind::Exp: {
      IV t = interval_eval(*a.arg, bounds);
      IV r;
      r.lo = Rat(0);
      r.lo_inf = false;
      r.hi_inf = true;
      if (!t.lo_inf) r.lo = rat_from_double_down(std::exp(to_double(t.lo)));
      if (r.lo < 0) r.lo = Rat(0);
      if (!t.hi_inf) {
        r.hi = rat_from_double_up(std::exp(to_double(t.hi)));
        r.hi_inf = false;
      }
      return r;
    }
    case AtomKind::Sin:
    case AtomKind::Cos:
      return IV::of(Rat(-1), Rat(1));
    case AtomKind::SStep: {
      IV t = interval_eval(*a.arg, bounds);
      if (t.ge(Rat(1))) return IV::point(Rat(1));
      if (t.le(Rat(-1))) return IV::point(Rat(0));
      return IV::of(Rat(0), Rat(1));
    }
    case AtomKind::GBump: {
      IV t = interval_eval(*a.arg, bounds);
      if (t.ge(Rat(1)) || t.le(Rat(-1))) return IV::point(Rat(0));
      // coarse bound: |P(t)| <= sum |p_i| on |t|<=1; B/(1-t^2)^m <= max(m^m e^-m, e^-1)
      Rat psum(0);
      for (const auto& c : a.gnum) psum += rat_abs(c);
      double env = a.gden == 0 ? std::exp(-1.0) : std::exp(a.gden * (std::log(static_cast<double>(a.gden)) - 1.0));
      Rat c = psum * rat_from_double_up(env * 2.0);
      return IV::of(-c, c);
    }
    case AtomKind::Inv: {
      IV t = interval_eval(*a.arg, bounds);
      if (!t.lo_inf && t.lo > 0) {
        IV r;
        r.lo = Rat(0);
        r.lo_inf = false;
        r.hi = Rat(1) / t.lo;
        r.hi_inf = false;
        if (!t.hi_inf) r.lo = Rat(1) / t.hi;
        return r;
      }
      if (!t.hi_inf && t.hi < 0) {
        IV r;
        r.hi = Rat(0);
        r.hi_inf = false;
        r.lo = Rat(1) / t.hi;
        r.lo_inf = false;
        if (!t.lo_inf) r.hi = Rat(1) / t.lo;
        return r;
      }
      return IV::whole();
    }
  }
  return IV::whole();
}

}  // namespace

IV interval_eval(const Expr& e, const std::vector<IV>& bounds) {
  IV acc = IV::point(Rat(0));
  for (const auto& t : e.terms) {
    IV m = IV::point(Rat(1));
    for (const auto& f : t.mono.factors) m = iv_mul(m, iv_pow(atom_interval(f.atom, bounds), f.power));
    acc = iv_add(acc, iv_scale(t.coeff, m));
  }
  return acc;
}

// ---------------------------------------------------------------------------
// region-aware simplification
// ---------------------------------------------------------------------------

Expr simplify_with_bounds(const Expr& e, const std::vector<IV>& bounds) {
  Poly acc;
  for (const auto& t : e.terms) {
    Expr termval = e_const(t.coeff);
    for (const auto& f : t.mono.factors) {
      Expr factor;
      bool replaced = false;
      if (f.atom.kind == AtomKind::SStep) {
        IV iv = interval_eval(*f.atom.arg, bounds);
        if (iv.ge(Rat(1))) {
          factor = e_const(Rat(1));
          replaced = true;
        } else if (iv.le(Rat(-1))) {
          factor = Expr{};
          replaced = true;
        }
      } else if (f.atom.kind == AtomKind::GBump) {
        IV iv = interval_eval(*f.atom.arg, bounds);
        if (iv.ge(Rat(1)) || iv.le(Rat(-1))) {
          factor = Expr{};
          replaced = true;
        }
      }
      if (!replaced) {
        Atom a = f.atom;
        factor = Expr{};
        factor.terms.push_back(Term{Monomial{{Factor{std::move(a), 1}}}, Rat(1)});
      }
      termval = e_mul(termval, e_pow(factor, f.power));
      if (termval.is_zero()) break;
    }
    for (const auto& tt : termval.terms) add_into(acc, tt.mono, tt.coeff);
  }
  return emit(std::move(acc));
}

bool literal_zero_with_bounds(const Expr& e, const std::vector<IV>& bounds) {
  if (e.is_zero()) return true;
  return simplify_with_bounds(e, bounds).is_zero();
}

namespace {

void collect_unguarded(const Expr& e, const std::vector<IV>& bounds, std::vector<std::string>& out) {
  for (const auto& t : e.terms)
    for (const auto& f : t.mono.factors) {
      if (f.atom.kind == AtomKind::Var) continue;
      collect_unguarded(*f.atom.arg, bounds, out);
      if (f.atom.kind == AtomKind::Inv) {
        IV iv = interval_eval(*f.atom.arg, bounds);
        if (!iv.excludes_zero()) out.push_back(print(f.atom));
      }
    }
}

}  // namespace

std::vector<std::string> unguarded_inv_atoms(const Expr& e, const std::vector<IV>& bounds) {
  std::vector<std::string> out;
  collect_unguarded(e, bounds, out);
  return out;
}

// ---------------------------------------------------------------------------
// printing
// ---------------------------------------------------------------------------

std::string print(const Atom& a) {
  switch (a.kind) {
    case AtomKind::Var:
      return "x" + std::to_string(a.var);
    case AtomKind::Exp:
      return "exp(" + print(*a.arg) + ")";
    case AtomKind::Sin:
      return "sin(" + print(*a.arg) + ")";
    case AtomKind::Cos:
      return "cos(" + print(*a.arg) + ")";
    case AtomKind::SStep:
      return "sstep(" + print(*a.arg) + ")";
    case AtomKind::GBump: {
      if (a.gden == 0 && a.gnum.size() == 1 && a.gnum[0] == 1) return "bump(" + print(*a.arg) + ")";
      std::string s = "gbump(" + print(*a.arg) + "; ";
      for (std::size_t i = 0; i < a.gnum.size(); ++i) s += (i ? "," : "") + rat_str(a.gnum[i]);
      return s + "; " + std::to_string(a.gden) + ")";
    }
    case AtomKind::Inv:
      return "inv(" + print(*a.arg) + ")";
  }
  return "?";
}

std::string print(const Expr& e) {
  if (e.terms.empty()) return "0";
  std::string s;
  bool first = true;
  for (const auto& t : e.terms) {
    Rat c = t.coeff;
    bool neg = c < 0;
    if (first) {
      if (neg) s += "-";
    } else {
      s += neg ? " - " : " + ";
    }
    Rat mag = neg ? Rat(-c) : c;
    // a leading "-" would bind to the first base only ('-'base in the
    // grammar), so spell the coefficient out for leading negative terms
    bool coeff_shown = (mag != 1) || t.mono.empty() || (first && neg);
    if (coeff_shown) s += rat_str(mag);
    bool need_star = coeff_shown;
    for (const auto& f : t.mono.factors) {
      if (need_star) s += "*";
      s += print(f.atom);
      if (f.power > 1) s += "^" + std::to_string(f.power);
      need_star = true;
    }
    first = false;
  }
  return s;
}

}  // namespace foamlab
