#pragma once

#include "foamlab/common.hpp"
#include "foamlab/rational.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace foamlab {

// ---------------------------------------------------------------------------
// Smooth scalar expressions over a rational box, kept in canonical
// sum-of-products form at all times: a sorted list of (monomial, rational
// coefficient) terms over atomic factors. Structural equality on canonical
// form is the equality used throughout the engine.
// ---------------------------------------------------------------------------

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

enum class AtomKind : int { Var = 0, Exp, Sin, Cos, SStep, GBump, Inv };

/// Atomic factor of a monomial. GBump(arg; P; m) denotes
///   exp(-1/(1-t^2)) * P(t) / (1-t^2)^m   for |t| < 1,   0 otherwise
/// with t the value of `arg`. The plain mollifier bump is P = {1}, m = 0.
/// The family is closed under differentiation, which is what keeps every
/// derivative of a net representative inside the fragment.
struct Atom {
  AtomKind kind = AtomKind::Var;
  int var = 0;            // Var: 1-based axis index
  ExprPtr arg;            // all other kinds
  std::vector<Rat> gnum;  // GBump: numerator polynomial, gnum[i] * t^i
  int gden = 0;           // GBump: denominator exponent m
};

struct Factor {
  Atom atom;
  int power = 1;
};

struct Monomial {
  std::vector<Factor> factors;  // sorted by atom order, powers >= 1
  bool empty() const { return factors.empty(); }
};

struct Term {
  Monomial mono;
  Rat coeff;
};

struct Expr {
  std::vector<Term> terms;  // sorted by monomial, unique, no zero coefficients

  bool is_zero() const { return terms.empty(); }
  bool is_constant() const { return terms.empty() || (terms.size() == 1 && terms[0].mono.empty()); }
  std::optional<Rat> constant_value() const {
    if (terms.empty()) return Rat(0);
    if (terms.size() == 1 && terms[0].mono.empty()) return terms[0].coeff;
    return std::nullopt;
  }
  /// Highest variable index used (0 if none).
  int max_var() const;
};

int compare(const Atom& a, const Atom& b);
int compare(const Monomial& a, const Monomial& b);
int compare(const Expr& a, const Expr& b);
inline bool operator==(const Expr& a, const Expr& b) { return compare(a, b) == 0; }
inline bool operator!=(const Expr& a, const Expr& b) { return compare(a, b) != 0; }

// -- constructors (all results canonical) ----------------------------------
Expr e_const(const Rat& c);
Expr e_var(int axis);  // 1-based
Expr e_add(const Expr& a, const Expr& b);
Expr e_sub(const Expr& a, const Expr& b);
Expr e_neg(const Expr& a);
Expr e_mul(const Expr& a, const Expr& b);
Expr e_scale(const Rat& c, const Expr& a);
Expr e_pow(const Expr& a, int n);  // n >= 0, products of sums are expanded
Expr e_exp(const Expr& a);
Expr e_sin(const Expr& a);
Expr e_cos(const Expr& a);
Expr e_bump(const Expr& a);
Expr e_sstep(const Expr& a);
Expr e_inv(const Expr& a);  // guarded reciprocal; guard is validated by the piecewise layer
Expr e_gbump(const Expr& a, std::vector<Rat> num, int den);

/// Frozen rational approximation of 1 / integral_{-1}^{1} exp(-1/(1-x^2)) dx,
/// accurate to ~3e-25. Appears as the normalized-bump coefficient in sstep'.
const Rat& bump_norm_reciprocal();
/// Same integral as a double (for numeric evaluation of sstep).
double bump_integral();

// -- calculus ----------------------------------------------------------------
Expr diff_axis(const Expr& e, int axis);
Expr diff(const Expr& e, const MultiIndex& p);

// -- numeric evaluation ------------------------------------------------------
double eval(const Expr& e, const std::vector<double>& x);
double eval(const Expr& e, const std::vector<Rat>& x);

// -- interval bounds ---------------------------------------------------------
/// Closed rational interval, optionally unbounded on either side.
struct IV {
  Rat lo, hi;
  bool lo_inf = false, hi_inf = false;

  static IV whole() { return IV{Rat(0), Rat(0), true, true}; }
  static IV point(const Rat& v) { return IV{v, v, false, false}; }
  static IV of(const Rat& a, const Rat& b) { return IV{a, b, false, false}; }
  bool ge(const Rat& c) const { return !lo_inf && lo >= c; }
  bool le(const Rat& c) const { return !hi_inf && hi <= c; }
  bool excludes_zero() const { return ge(Rat(1, 1000000000)) || le(Rat(-1, 1000000000)) || (!lo_inf && lo > 0) || (!hi_inf && hi < 0); }
};

/// Sound enclosure of e over the closed box `bounds` (one interval per axis).
IV interval_eval(const Expr& e, const std::vector<IV>& bounds);

// -- region-aware simplification --------------------------------------------
/// Substitutes forced sstep plateaus (arg >= 1 -> 1, arg <= -1 -> 0) and
/// vanished bump-family atoms (|arg| >= 1 -> 0) given per-axis bounds, then
/// re-canonicalizes. Sound: substitutions happen only when the bounds force
/// them on the whole box.
Expr simplify_with_bounds(const Expr& e, const std::vector<IV>& bounds);

/// True only if e is the zero polynomial after plateau substitution; false
/// is not evidence of nonvanishing.
bool literal_zero_with_bounds(const Expr& e, const std::vector<IV>& bounds);

/// Every Inv atom in e whose argument's enclosure over `bounds` does not
/// exclude zero (returned list is empty when all guards hold).
std::vector<std::string> unguarded_inv_atoms(const Expr& e, const std::vector<IV>& bounds);

// -- printing ----------------------------------------------------------------
std::string print(const Expr& e);
std::string print(const Atom& a);

}  // namespace foamlab
