#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "foamlab/descriptor.hpp"

#include <memory>
#include <set>

using namespace foamlab;

namespace {

DomainPtr dom1() { return std::make_shared<const Domain>(Domain(1, {{Rat(0), Rat(1)}})); }
DomainPtr dom2() {
  return std::make_shared<const Domain>(Domain(2, {{Rat(0), Rat(1)}, {Rat(0), Rat(1)}}));
}

}  // namespace

TEST_CASE("rationals enumeration: point stages, dense, first stage hits midpoint") {
  auto d = dom1();
  auto en = enum_rationals(d);
  RegionSet s1 = en->stage(1);
  CHECK(s1.contains({Rat(1, 2)}));
  // stages are distinct points, all rational, all inside Omega
  std::set<std::string> seen;
  for (int i = 1; i <= 40; ++i) {
    RegionSet st = en->stage(i);
    auto p = region_sample(st);
    REQUIRE(p.has_value());
    CHECK((*p)[0] > 0);
    CHECK((*p)[0] < 1);
    CHECK(cell_affine_dim(st.cells[0]) == 0);
    seen.insert(rat_str((*p)[0]));
  }
  CHECK(seen.size() == 40);
}

TEST_CASE("descriptor validation per class") {
  auto d = dom1();
  // closed nowhere dense: a point
  auto pt = SetDescriptor::make_exact(region_point(d, {Rat(1, 2)}), SetClass::ClosedNowhereDense);
  validate_descriptor(pt, 8);

  // a half-open interval is not closed
  RegionSet half = parse_region("x1 >= 1/4, x1 < 1/2", d);
  auto bad = SetDescriptor::make_exact(half, SetClass::ClosedNowhereDense);
  CHECK_THROWS_AS(validate_descriptor(bad, 8), ValidationError);

  // full-dimensional: not nowhere dense
  RegionSet slab = parse_region("x1 >= 1/4, x1 <= 1/2", d);
  auto fat = SetDescriptor::make_exact(slab, SetClass::ClosedNowhereDense);
  CHECK_THROWS_AS(validate_descriptor(fat, 8), ValidationError);

  // first category: rationals enumeration validates
  auto rats = SetDescriptor::make_union(d, enum_rationals(d), SetClass::FirstCategory);
  validate_descriptor(rats, 16);

  // measure zero via covers of a degenerate core
  auto d2 = dom2();
  RegionSet line = parse_region("x1 - 1/2*x2 == 0", d2);
  auto m0 = SetDescriptor::make_cover(line, "shockline");
  validate_descriptor(m0, 8);
}

TEST_CASE("has_dense_complement") {
  auto d = dom1();
  // rationals: confirmed at any depth
  auto rats = SetDescriptor::make_union(d, enum_rationals(d), SetClass::FirstCategory);
  for (int depth : {1, 8, 64}) {
    auto v = has_dense_complement(rats, depth);
    CHECK(v.kind == DenseVerdict::Confirmed);
  }

  // a full box: refuted with a witness box
  RegionSet slab = parse_region("x1 >= 1/4, x1 <= 1/2", d);
  auto fat = SetDescriptor::make_exact(slab, SetClass::General);
  auto v = has_dense_complement(fat, 4);
  CHECK(v.kind == DenseVerdict::Refuted);
  REQUIRE(v.witness_box.has_value());
  RegionSet wb = region_box(d, *v.witness_box);
  CHECK(region_subset(wb, slab));

  // empty set: confirmed
  auto none = SetDescriptor::make_exact(region_empty(d), SetClass::ClosedNowhereDense);
  CHECK(has_dense_complement(none, 4).kind == DenseVerdict::Confirmed);

  // nowhere dense implies confirmed
  auto pt = SetDescriptor::make_exact(region_point(d, {Rat(1, 3)}), SetClass::ClosedNowhereDense);
  CHECK(has_dense_complement(pt, 4).kind == DenseVerdict::Confirmed);
}

TEST_CASE("family_union composes within a class") {
  auto d = dom1();
  auto p1 = SetDescriptor::make_exact(region_point(d, {Rat(1, 3)}), SetClass::ClosedNowhereDense);
  auto p2 = SetDescriptor::make_exact(region_point(d, {Rat(2, 3)}), SetClass::ClosedNowhereDense);
  auto u = family_union(p1, p2);
  CHECK(u.cls == SetClass::ClosedNowhereDense);
  CHECK(region_subset(p1.exact, u.exact));
  CHECK(region_subset(p2.exact, u.exact));
  validate_descriptor(u, 8);

  // interleaving keeps first category and both memberships
  auto rats = SetDescriptor::make_union(d, enum_rationals(d), SetClass::FirstCategory);
  auto dyad = SetDescriptor::make_union(d, enum_dyadics(d), SetClass::FirstCategory);
  auto fc = family_union(rats, dyad);
  CHECK(fc.cls == SetClass::FirstCategory);
  validate_descriptor(fc, 16);
  RegionSet t8r = truncation(rats, 8), t8d = truncation(dyad, 8), t16 = truncation(fc, 16);
  CHECK(region_subset(t8r, t16));
  CHECK(region_subset(t8d, t16));

  // nowhere dense subsumes into first category
  auto mix = family_union(p1, rats);
  CHECK(mix.cls == SetClass::FirstCategory);

  // measure-zero covers combine at eps/2 + eps/2
  auto d2 = dom2();
  auto m1 = SetDescriptor::make_cover(parse_region("x1 - 1/2*x2 == 0", d2));
  auto m2 = SetDescriptor::make_cover(parse_region("x1 == 3/4", d2));
  auto m = family_union(m1, m2);
  CHECK(m.cls == SetClass::MeasureZero);
  for (Rat eps(1); eps >= Rat(1, 1024); eps /= 2) CHECK(cover_mass(m.cover(eps)) <= eps);

  // incompatible classes are refused
  CHECK_THROWS_AS(family_union(m1, rats), ValidationError);
}

TEST_CASE("residual smallness test") {
  auto d = dom1();
  RegionSet u = parse_region("x1 > 1/4, x1 < 3/4", d);

  // first category descriptors are never residual (decided by tag)
  auto rats = SetDescriptor::make_union(d, enum_rationals(d), SetClass::FirstCategory);
  CHECK(is_residual_in(rats, u, 16).kind == ResidualVerdict::NotResidual);

  // Sigma = U itself (general tag) is residual: U \ Sigma is empty
  auto self = SetDescriptor::make_exact(u, SetClass::General);
  CHECK(is_residual_in(self, u, 8).kind == ResidualVerdict::ResidualWitness);

  // a single hyperplane with a general tag: survivor cells decide
  auto plane = SetDescriptor::make_exact(region_point(d, {Rat(1, 2)}), SetClass::General);
  CHECK(is_residual_in(plane, u, 8).kind == ResidualVerdict::NotResidual);

  // U must be open and nonempty
  RegionSet closed_u = parse_region("x1 >= 1/4, x1 <= 3/4", d);
  CHECK_THROWS_AS(is_residual_in(rats, closed_u, 4), ValidationError);
  CHECK_THROWS_AS(is_residual_in(rats, region_empty(d), 4), ValidationError);
}

TEST_CASE("quadtree covers shrink onto degenerate cores") {
  auto d2 = dom2();
  RegionSet line = parse_region("x1 - 1/2*x2 == 0", d2);
  for (Rat eps(1); eps >= Rat(1, 1024); eps /= 2) {
    RegionSet c = quadtree_cover(line, eps);
    CHECK(cover_mass(c) <= eps);
    CHECK(region_subset(line, c));
  }
  RegionSet fat = parse_region("x1 >= 1/4, x1 <= 1/2", dom1());
  CHECK_THROWS_AS(quadtree_cover(fat, Rat(1, 64)), ValidationError);
}

TEST_CASE("nowhere dense implies dense complement (property)") {
  auto d = dom1();
  RatRng rng(9);
  for (int i = 0; i < 20; ++i) {
    RegionSet pts = region_empty(d);
    int count = rng.uniform_int(1, 6);
    for (int j = 0; j < count; ++j)
      pts = region_union(pts, region_point(d, {rng.between(Rat(0), Rat(1))}));
    REQUIRE(is_nowhere_dense(pts));
    auto desc = SetDescriptor::make_exact(pts, SetClass::ClosedNowhereDense);
    CHECK(has_dense_complement(desc, 4).kind == DenseVerdict::Confirmed);
  }
}

TEST_CASE("k-template instantiation and monotone limits") {
  auto d = std::make_shared<const Domain>(Domain::symmetric(1));
  RegionTemplate t = parse_region_template("x1 >= 1/k | x1 <= -1/k", 1);
  RegionSet at4 = t.at(d, Rat(4));
  CHECK(at4.contains({Rat(1, 2)}));
  CHECK(at4.contains({Rat(1, 4)}));
  CHECK_FALSE(at4.contains({Rat(1, 8)}));

  auto lim = t.monotone_limit(d);
  REQUIRE(lim.has_value());
  CHECK(lim->contains({Rat(1, 1000)}));
  CHECK_FALSE(lim->contains({Rat(0)}));

  // instances are increasing and contained in the limit
  for (int k = 1; k < 8; ++k) {
    CHECK(region_subset(t.at(d, Rat(k)), t.at(d, Rat(k + 1))));
    CHECK(region_subset(t.at(d, Rat(k)), *lim));
  }

  // a tightening template has no monotone limit
  RegionTemplate shrink = parse_region_template("x1 >= 1 - 1/k", 1);
  CHECK_FALSE(shrink.monotone_limit(d).has_value());

  // k-linear parsing of mixed bounds
  RegionTemplate both = parse_region_template("x1 - 1/2*x2 >= 1/k", 2);
  auto d2 = std::make_shared<const Domain>(Domain::symmetric(2));
  RegionSet inst = both.at(d2, Rat(8));
  CHECK(inst.contains({Rat(1, 2), Rat(1, 4)}));
  CHECK_FALSE(inst.contains({Rat(0), Rat(0)}));
}
