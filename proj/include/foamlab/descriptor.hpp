#pragma once

#include "foamlab/ktemplate.hpp"
#include "foamlab/region.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string>

namespace foamlab {

// ---------------------------------------------------------------------------
// Classified singularity-set descriptors. An Exact descriptor is a finite
// polyhedral union; a CountableUnion enumerates polyhedral stages (the
// first-category and dense-countable tier); a CoverBased descriptor pairs a
// polyhedral core with finite box covers of arbitrarily small total volume
// (the compact measure-zero tier).
// ---------------------------------------------------------------------------

enum class SetClass { ClosedNowhereDense, FirstCategory, MeasureZero, General };
enum class DescKind { Exact, CountableUnion, CoverBased };

std::string set_class_name(SetClass c);

/// Stage enumerator for countable unions; stages are 1-based.
class Enumeration {
 public:
  virtual ~Enumeration() = default;
  virtual RegionSet stage(int i) const = 0;
  virtual std::string describe() const = 0;
};

using EnumPtr = std::shared_ptr<const Enumeration>;

/// All rational points of Omega, one point per stage (diagonal enumeration
/// of reduced fractions per axis). Dense in Omega.
EnumPtr enum_rationals(const DomainPtr& dom);
/// All dyadic points of Omega, one point per stage.
EnumPtr enum_dyadics(const DomainPtr& dom);
/// Explicit finite stage list; stages beyond the end are empty.
EnumPtr enum_list(const DomainPtr& dom, std::vector<RegionSet> stages);
/// a1, b1, a2, b2, ...
EnumPtr enum_interleave(const EnumPtr& a, const EnumPtr& b);

struct SetDescriptor {
  DescKind kind = DescKind::Exact;
  SetClass cls = SetClass::General;
  DomainPtr dom;
  std::string name;

  RegionSet exact;  // Exact region, or the core of a CoverBased descriptor
  EnumPtr en;       // CountableUnion
  std::function<RegionSet(const Rat& eps)> cover;  // CoverBased

  static SetDescriptor make_exact(RegionSet r, SetClass cls, std::string name = "");
  static SetDescriptor make_union(const DomainPtr& dom, EnumPtr en, SetClass cls,
                                  std::string name = "");
  static SetDescriptor make_cover(RegionSet core, std::string name = "");
};

/// Union of the first `depth` stages (the descriptor itself for Exact and
/// CoverBased kinds). Always a subset of the described set.
RegionSet truncation(const SetDescriptor& s, int depth);

/// Checks the class-tag invariants; throws ValidationError on violation.
/// CountableUnion stages are checked to `depth`; covers at eps = 1..2^-10.
void validate_descriptor(const SetDescriptor& s, int depth);

struct DenseVerdict {
  enum Kind { Confirmed, Refuted, Unknown } kind = Unknown;
  int depth = 0;
  std::optional<std::vector<AxisRange>> witness_box;  // Refuted: open box missing the complement
  std::string detail;
};

/// Is Omega \ S dense? Exact tier is decided exactly; countable unions are
/// confirmed to the inspected depth (refutation exhibits an open box covered
/// by finitely many stages).
DenseVerdict has_dense_complement(const SetDescriptor& s, int depth);

/// A descriptor containing the union of both inputs, in the joint class.
/// ClosedNowhereDense subsumes into FirstCategory; mixing the measure-zero
/// class with category classes is refused.
SetDescriptor family_union(const SetDescriptor& a, const SetDescriptor& b);

struct ResidualVerdict {
  enum Kind { NotResidual, ResidualWitness, Unknown } kind = Unknown;
  int depth = 0;
  std::string detail;
};

/// The 2.5-style smallness test: is S residual in the open set U?
/// FIRST_CATEGORY (and nowhere-dense) descriptors are never residual in any
/// open set; a ResidualWitness exhibits U \ S inside a first-category set.
ResidualVerdict is_residual_in(const SetDescriptor& s, const RegionSet& u, int depth);

/// Finite box cover of a degenerate polyhedral core with total volume <= eps
/// (uniform dyadic tiles). Throws when the core is full-dimensional.
RegionSet quadtree_cover(const RegionSet& core, const Rat& eps);

/// Sum of per-box volumes of a cover (cover measure, not union volume).
Rat cover_mass(const RegionSet& cover);

}  // namespace foamlab
