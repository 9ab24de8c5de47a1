#pragma once

#include "foamlab/region.hpp"

#include <optional>
#include <string>

namespace foamlab {

// ---------------------------------------------------------------------------
// Index templates: region constraints whose right-hand sides are affine in
// the chain index k and in 1/k. Instantiation at a concrete k is exact
// rational; for families that grow monotonically in k the union over all k
// is again polyhedral and is computed symbolically (constraints whose bound
// approaches its limit from inside become strict).
// ---------------------------------------------------------------------------

/// c0 + ck * k + cik / k
struct KLin {
  Rat c0, ck, cik;

  KLin() = default;
  explicit KLin(Rat constant) : c0(std::move(constant)) {}
  KLin(Rat a, Rat b, Rat c) : c0(std::move(a)), ck(std::move(b)), cik(std::move(c)) {}

  Rat at(const Rat& k) const { return c0 + ck * k + cik / k; }
  bool constant() const { return ck == 0 && cik == 0; }
  std::string str() const;
};

/// Parses an affine combination of rationals, k, and 1/k, e.g.
/// "1/2 - 1/k", "2*k", "-3/k + 1".
KLin parse_klin(const std::string& text);

struct ConstraintTemplate {
  std::vector<Rat> a;
  KLin b;
  bool strict = false;

  Constraint at(const Rat& k) const { return Constraint(a, b.at(k), strict); }
};

struct CellTemplate {
  std::vector<ConstraintTemplate> cons;
};

struct RegionTemplate {
  std::vector<CellTemplate> cells;

  bool empty() const { return cells.empty(); }
  RegionSet at(const DomainPtr& dom, const Rat& k) const;
  /// Interior per instance: all constraints strictified.
  RegionTemplate strictified() const;
  /// Union of two templates (cell lists concatenated).
  static RegionTemplate unite(const RegionTemplate& x, const RegionTemplate& y);
  /// Pairwise cell intersection.
  static RegionTemplate intersect(const RegionTemplate& x, const RegionTemplate& y);
  /// Symbolic complement (within Omega at instantiation time). Instance-wise:
  /// complement(at(k)) = complement_template().at(k) as point sets.
  RegionTemplate complement(int dim) const;

  /// The union over all k in N of the instances, valid when every instance
  /// family grows with k constraint-wise. Returns nullopt when some
  /// constraint tightens with k (non-monotone family) or mentions k itself
  /// with a sign that empties the limit only in degenerate ways we refuse.
  std::optional<RegionSet> monotone_limit(const DomainPtr& dom) const;

  std::string str() const;
};

/// Constraint list parser for manifests and tests. Grammar per line:
///   lincomb REL lincomb  with REL in { <=, <, >=, >, == }
/// where lincomb is an affine combination of x1..x3, rationals, k, 1/k.
/// Cells are separated by '|', constraints within a cell by ','.
RegionTemplate parse_region_template(const std::string& text, int dim);

/// Convenience: parse and instantiate a k-free region.
RegionSet parse_region(const std::string& text, const DomainPtr& dom);

}  // namespace foamlab
