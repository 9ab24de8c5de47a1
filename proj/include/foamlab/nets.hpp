#pragma once

#include "foamlab/descriptor.hpp"
#include "foamlab/expr.hpp"
#include "foamlab/ktemplate.hpp"
#include "foamlab/parser.hpp"
#include "foamlab/region.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace foamlab {

// ---------------------------------------------------------------------------
// Lambda-indexed nets of piecewise smooth expressions. All membership checks
// run along a countably co-final chain of the index set; a net is a template
// instantiable at every chain position, with exact rational substitution of
// the chain rate k (regions get k and 1/k, expressions get k).
// ---------------------------------------------------------------------------

enum class IndexKind { Naturals, CofinalMapped, ProductNN };

struct IndexSet {
  IndexKind kind = IndexKind::Naturals;
  std::vector<long long> chain;  // CofinalMapped: strictly increasing positive labels

  static IndexSet naturals() { return IndexSet{}; }
  static IndexSet cofinal_mapped(std::vector<long long> labels);
  static IndexSet product_nn() { return IndexSet{IndexKind::ProductNN, {}}; }

  /// Template rate at chain position m >= 1 (the `k` substituted into nets).
  /// Naturals: m. CofinalMapped: the m-th chain label (extended arithmetically
  /// beyond the given prefix). ProductNN: m, along the diagonal chain (m, m).
  Rat rate(int m) const;
  std::string label(int m) const;

  bool operator==(const IndexSet& o) const { return kind == o.kind && chain == o.chain; }
};

struct CofinalWitness {
  bool ok = false;
  std::string chain_desc;   // witness: description of the order-embedded chain
  std::string reason;       // refutation
};

/// Witness (a concrete co-final chain) or refutation per index-set kind.
CofinalWitness is_countably_cofinal(const IndexSet& idx);

// ---------------------------------------------------------------------------

struct Piece {
  RegionSet region;
  Expr expr;
};

/// Pieces are pairwise disjoint and jointly cover Omega (the last piece is
/// the materialized remainder). Smooth gluing across shared facets is the
/// constructor's numeric cross-check; inv guards are validated exactly
/// against each piece's bounds.
struct PiecewiseExpr {
  DomainPtr dom;
  std::vector<Piece> pieces;

  double eval_at(const Point& x) const;        // domain error outside Omega
  double eval_at(const std::vector<double>& x) const;
  const Expr& expr_at(const Point& x) const;
};

struct PiecewiseOptions {
  bool check_gluing = true;
  int gluing_samples = 100;
  double gluing_tol = 1e-8;
  unsigned long long seed = 0;
};

PiecewiseExpr make_piecewise(const DomainPtr& dom, std::vector<Piece> explicit_pieces,
                             Expr default_expr, const PiecewiseOptions& opts = {});

PiecewiseExpr pw_add(const PiecewiseExpr& a, const PiecewiseExpr& b);
PiecewiseExpr pw_mul(const PiecewiseExpr& a, const PiecewiseExpr& b);
PiecewiseExpr pw_neg(const PiecewiseExpr& a);
PiecewiseExpr pw_scale(const Rat& c, const PiecewiseExpr& a);
PiecewiseExpr pw_diff(const PiecewiseExpr& a, const MultiIndex& p);
bool pw_equal(const PiecewiseExpr& a, const PiecewiseExpr& b);  // structural, canonical
/// Union of piece regions whose expression is literally zero on the piece.
RegionSet pw_zero_region(const PiecewiseExpr& a);
bool pw_literal_zero(const PiecewiseExpr& a);

// ---------------------------------------------------------------------------

struct TemplatePiece {
  RegionTemplate region;
  RawPtr expr;
};

class Net {
 public:
  static Net from_template(IndexSet idx, DomainPtr dom, std::vector<TemplatePiece> pieces,
                           RawPtr default_expr, bool monotone_zero,
                           std::optional<RegionTemplate> zero_core = std::nullopt);
  static Net diagonal(IndexSet idx, PiecewiseExpr psi);

  const IndexSet& index_set() const;
  const DomainPtr& domain() const;
  bool monotone_zero_declared() const;

  /// Representative at chain position m >= 1 (memoized; thread-safe).
  const PiecewiseExpr& instantiate(int m) const;
  /// Union of piece regions with literally zero expressions at position m.
  const RegionSet& zero_region(int m) const;

  /// Template normal form: a list of (region template, raw expression)
  /// pieces that covers Omega at every instantiation. Exists for template
  /// and diagonal nets and anything composed from them; the normal form is
  /// how composite nets (sums, products, derivatives) expose their symbolic
  /// zero structure, including cancellations.
  std::optional<std::vector<TemplatePiece>> to_template() const;

  /// Declared or derived template T with T(rate(m)) contained in the zero
  /// region for the positions where it is checked; empty optional when the
  /// net has no usable template structure.
  std::optional<RegionTemplate> zero_core() const;

  /// Exact check that zero regions are non-decreasing along the chain up to
  /// M; throws ValidationError when the declaration is violated.
  void verify_monotone(int M) const;

  /// True when every instantiation is the same piecewise expression
  /// (diagonal nets and k-free templates).
  bool index_independent() const;

  bool same_index_space(const Net& o) const;

  struct Impl;
  std::shared_ptr<const Impl> impl;
};

Net net_add(const Net& u, const Net& v);
Net net_mul(const Net& u, const Net& v);
Net net_neg(const Net& u);
Net net_scale(const Rat& c, const Net& u);
Net net_diff(const Net& u, const MultiIndex& p);

/// The all-zero net (diagonal of the zero function).
Net net_zero(const IndexSet& idx, const DomainPtr& dom);
/// Diagonal of a constant.
Net net_const(const IndexSet& idx, const DomainPtr& dom, const Rat& c);

}  // namespace foamlab
