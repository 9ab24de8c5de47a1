#pragma once

#include "foamlab/expr.hpp"

#include <memory>
#include <optional>
#include <string>

namespace foamlab {

// Raw expression AST as written, before canonicalization. Net templates keep
// the raw form so that the index symbol k can be substituted per instance.
struct RawExpr;
using RawPtr = std::shared_ptr<const RawExpr>;

struct RawExpr {
  enum class Kind { Const, K, Var, Add, Sub, Mul, Div, Neg, Pow, Call };
  Kind kind = Kind::Const;
  Rat value;        // Const
  int var = 0;      // Var
  int ipow = 0;     // Pow exponent
  std::string fn;   // Call: exp | sin | cos | bump | sstep | inv | gbump
  RawPtr a, b;
  std::vector<Rat> gnum;  // gbump coefficients
  int gden = 0;           // gbump denominator exponent
};

struct ParseOptions {
  bool allow_k = false;    // index symbol in net/shell templates
  bool allow_div = false;  // '/' as an operator (folded at instantiation)
  bool allow_inv = false;  // guarded reciprocal (validated against the piece region)
};

RawPtr parse_raw(const std::string& text, const ParseOptions& opts);

/// Instantiates a raw tree to a canonical Expr. `k` substitutes the index
/// symbol; required iff the tree mentions it. Division must fold to a
/// nonzero rational constant after substitution.
Expr raw_to_expr(const RawExpr& r, const std::optional<Rat>& k);

bool raw_mentions_k(const RawExpr& r);

/// The spec'd expression grammar: no division operator, no inv, no k.
Expr parse_expr(const std::string& text);

/// Same grammar plus inv(...) for piece bodies; the inv guard is validated
/// when the piecewise function is assembled.
Expr parse_piece_expr(const std::string& text);

/// Symbolic derivative of a raw tree along an axis; the index symbol k is a
/// constant. Keeps net templates closed under differentiation.
RawPtr raw_diff(const RawPtr& r, int axis);

/// Converts a canonical expression back to a raw tree (used when diagonal
/// nets join template algebra).
RawPtr raw_from_expr(const Expr& e);

RawPtr raw_const(const Rat& c);
RawPtr raw_binary(RawExpr::Kind kind, RawPtr a, RawPtr b);

}  // namespace foamlab
