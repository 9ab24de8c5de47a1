#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "foamlab/certificates.hpp"
#include "support/netgen.hpp"

#include <cmath>

using namespace foamlab;
using netgen::delta_shape;
using netgen::diagonal_expr;
using netgen::heaviside_shape;
using netgen::template_net;

namespace {

DomainPtr dom1() { return netgen::interval_sym(); }

SetDescriptor origin_sigma(const DomainPtr& d) {
  return SetDescriptor::make_exact(region_point(d, {Rat(0)}), SetClass::ClosedNowhereDense,
                                   "origin");
}

PointwiseCertificate delta_certificate(const DomainPtr& d) {
  PointwiseCertificate c;
  c.sigma = origin_sigma(d);
  c.shell_family = parse_region_template("x1 >= 1/k | x1 <= -1/k", 1);
  return c;
}

UniformCertificate plateau_certificate(const DomainPtr& d) {
  UniformCertificate c;
  c.gamma = region_point(d, {Rat(0)});
  c.patch_family = parse_region_template("x1 > 1/k | x1 < -1/k", 1);
  return c;
}

PointwiseCertificate whole_domain_certificate(const DomainPtr& d) {
  PointwiseCertificate c;
  c.sigma = SetDescriptor::make_exact(region_empty(d), SetClass::ClosedNowhereDense, "empty");
  c.shells.push_back(Shell{region_omega(d), 1});
  return c;
}

}  // namespace

TEST_CASE("zero net with the trivial certificate verifies") {
  auto d = dom1();
  Net zero = net_zero(IndexSet::naturals(), d);
  auto r = check_pointwise(zero, whole_domain_certificate(d), 16, 3);
  CHECK(r.kind == CheckResult::Verified);
  CHECK(r.depth == 16);
}

TEST_CASE("delta net is an ideal member: pointwise certificate verifies at any depth") {
  auto d = dom1();
  Net delta = delta_shape(IndexSet::naturals(), d);
  auto c = delta_certificate(d);
  for (int M : {4, 16, 48}) {
    auto r = check_pointwise(delta, c, M, 3);
    CHECK(r.kind == CheckResult::Verified);
  }
}

TEST_CASE("depth monotonicity: Verified(M) implies Verified(M') for M' <= M") {
  auto d = dom1();
  Net delta = delta_shape(IndexSet::naturals(), d);
  auto c = delta_certificate(d);
  REQUIRE(check_pointwise(delta, c, 32, 3).kind == CheckResult::Verified);
  for (int M : {1, 2, 5, 11, 31})
    CHECK(check_pointwise(delta, c, M, 3).kind == CheckResult::Verified);
}

TEST_CASE("an index-independent nonzero net refutes its certificate") {
  auto d = dom1();
  Net diag = diagonal_expr(IndexSet::naturals(), d, "bump(x1)");
  auto r = check_pointwise(diag, delta_certificate(d), 8, 3);
  REQUIRE(r.kind == CheckResult::Refuted);
  REQUIRE(r.witness.has_value());
  CHECK(r.witness->value > 1e-9);
  // the witness point genuinely carries a nonzero value for its index
  const PiecewiseExpr& inst = diag.instantiate(r.witness->mu);
  CHECK(std::abs(inst.eval_at(r.witness->x)) > 1e-9);
}

TEST_CASE("sub-tolerance nonvanishing yields Unknown, not Refuted") {
  auto d = dom1();
  Net tiny = diagonal_expr(IndexSet::naturals(), d, "1/1000000000000*bump(x1)");
  auto r = check_pointwise(tiny, delta_certificate(d), 6, 2);
  CHECK(r.kind == CheckResult::Unknown);
}

TEST_CASE("coverage gaps are a certificate error") {
  auto d = dom1();
  Net delta = delta_shape(IndexSet::naturals(), d);
  PointwiseCertificate gap;
  gap.sigma = origin_sigma(d);
  gap.shells.push_back(Shell{parse_region("x1 >= 1/2", d), 2});  // misses the left half
  CHECK_THROWS_AS(check_pointwise(delta, gap, 8, 3), ValidationError);

  PointwiseCertificate late;
  late.sigma = origin_sigma(d);
  late.shells.push_back(Shell{region_omega(d), 12});  // threshold beyond depth
  CHECK_THROWS_AS(check_pointwise(delta, late, 8, 3), ValidationError);
}

TEST_CASE("uniform certificate for the plateau net H^2 - H") {
  auto d = dom1();
  Net h = heaviside_shape(IndexSet::naturals(), d);
  Net h2mh = net_add(net_mul(h, h), net_neg(h));
  auto c = plateau_certificate(d);
  auto r = check_uniform(h2mh, c, 16);
  CHECK(r.kind == CheckResult::Verified);

  // gamma = a full box is malformed
  UniformCertificate bad = c;
  bad.gamma = parse_region("x1 >= -1/4, x1 <= 1/4", d);
  CHECK_THROWS_AS(check_uniform(h2mh, bad, 8), ValidationError);

  // zero net with the single whole-domain patch
  UniformCertificate whole;
  whole.gamma = region_empty(d);
  whole.patches.push_back(Patch{region_omega(d), 1});
  CHECK(check_uniform(net_zero(IndexSet::naturals(), d), whole, 8).kind == CheckResult::Verified);
}

TEST_CASE("derivative closure: derived certificates re-verify on net_diff") {
  auto d = dom1();
  MultiIndex d1({1});

  Net h = heaviside_shape(IndexSet::naturals(), d);
  Net h2mh = net_add(net_mul(h, h), net_neg(h));
  auto uc = plateau_certificate(d);
  auto uc2 = derive_uniform(uc, d1);
  CHECK(check_uniform(net_diff(h2mh, d1), uc2, 12).kind == CheckResult::Verified);

  Net delta = delta_shape(IndexSet::naturals(), d);
  auto pc = delta_certificate(d);
  for (int order = 1; order <= 3; ++order) {
    MultiIndex p({order});
    auto pc2 = derive_pointwise(pc, p);
    CHECK(check_pointwise(net_diff(delta, p), pc2, 12, 3).kind == CheckResult::Verified);
  }

  // a closed-shell certificate: interiors re-validate
  Net zero = net_zero(IndexSet::naturals(), d);
  PointwiseCertificate closed;
  closed.sigma = origin_sigma(d);
  closed.shells.push_back(Shell{parse_region("x1 >= 0", d), 1});
  closed.shells.push_back(Shell{parse_region("x1 <= 0", d), 1});
  auto opened = derive_pointwise(closed, d1);
  for (const auto& s : opened.shells) CHECK(region_is_open(s.region));
  CHECK(check_pointwise(net_diff(zero, d1), opened, 8, 2).kind == CheckResult::Verified);

  // zero-net certificate: interior of Omega is Omega, so it re-verifies unchanged
  auto trivial = derive_pointwise(whole_domain_certificate(d), d1);
  CHECK_FALSE(trivial.coverage_weakened);
  CHECK(check_pointwise(net_diff(zero, d1), trivial, 8, 2).kind == CheckResult::Verified);

  // genuinely lost coverage escalates to Unknown, not an error
  PointwiseCertificate fragile;
  fragile.sigma = SetDescriptor::make_exact(region_empty(d), SetClass::ClosedNowhereDense);
  fragile.shells.push_back(Shell{parse_region("x1 <= 0", d), 1});
  fragile.shells.push_back(Shell{parse_region("x1 >= 0", d), 1});
  REQUIRE(check_pointwise(zero, fragile, 8, 2).kind == CheckResult::Verified);
  auto shrunk = derive_pointwise(fragile, d1);
  auto esc = check_pointwise(net_diff(zero, d1), shrunk, 8, 2);
  CHECK(esc.kind == CheckResult::Unknown);
  CHECK(esc.detail.find("coverage") != std::string::npos);
}

TEST_CASE("derive keeps whole-domain coverage when shells are open") {
  auto d = dom1();
  Net zero = net_zero(IndexSet::naturals(), d);
  PointwiseCertificate c;
  c.sigma = origin_sigma(d);
  c.shells.push_back(Shell{region_omega(d), 1});  // Omega is open already
  auto c2 = derive_pointwise(c, MultiIndex({2}));
  CHECK_FALSE(c2.coverage_weakened);
  CHECK(check_pointwise(net_diff(zero, MultiIndex({2})), c2, 8, 3).kind == CheckResult::Verified);
}

TEST_CASE("compose_add: thresholds max out on intersections and the sum verifies") {
  auto d = dom1();
  PointwiseCertificate a, b;
  a.sigma = origin_sigma(d);
  a.shells.push_back(Shell{parse_region("x1 >= 0", d), 3});
  b.sigma = origin_sigma(d);
  b.shells.push_back(Shell{parse_region("x1 >= -1/2", d), 5});
  auto ab = compose_add(a, b, 8);
  REQUIRE(ab.shells.size() == 1);
  CHECK(ab.shells[0].lambda == 5);
  CHECK(region_equal(ab.shells[0].region, parse_region("x1 >= 0", d)));

  Net delta = delta_shape(IndexSet::naturals(), d);
  auto c = delta_certificate(d);
  auto cc = compose_add(c, c, 16);
  CHECK(check_pointwise(net_add(delta, delta), cc, 16, 3).kind == CheckResult::Verified);
}

TEST_CASE("compose_mul_ideal: x * delta stays in the ideal with the same certificate") {
  auto d = dom1();
  Net delta = delta_shape(IndexSet::naturals(), d);
  Net x_delta = net_mul(delta, diagonal_expr(IndexSet::naturals(), d, "x1"));
  auto c = compose_mul_ideal(delta_certificate(d), diagonal_expr(IndexSet::naturals(), d, "x1"));
  CHECK(check_pointwise(x_delta, c, 16, 3).kind == CheckResult::Verified);
}

TEST_CASE("nowhere-dense certificates convert to Baire-I certificates") {
  auto d = dom1();
  Net h = heaviside_shape(IndexSet::naturals(), d);
  Net h2mh = net_add(net_mul(h, h), net_neg(h));
  auto uc = plateau_certificate(d);
  REQUIRE(check_uniform(h2mh, uc, 12).kind == CheckResult::Verified);
  auto pc = uniform_to_pointwise(uc);
  CHECK(pc.sigma.cls == SetClass::FirstCategory);
  CHECK(check_pointwise(h2mh, pc, 12, 3).kind == CheckResult::Verified);
  CHECK(family_admits(IdealFamily::baire_i(), pc.sigma, 8));
  CHECK_FALSE(family_admits(IdealFamily::nd(), pc.sigma, 8));
}

TEST_CASE("family admission rules") {
  auto d = dom1();
  auto origin = origin_sigma(d);
  CHECK(family_admits(IdealFamily::nd(), origin, 8));
  CHECK(family_admits(IdealFamily::baire_i(), origin, 8));
  CHECK(family_admits(IdealFamily::m0(), origin, 8));  // a point has measure zero

  auto rats = SetDescriptor::make_union(d, enum_rationals(d), SetClass::FirstCategory, "rationals");
  CHECK_FALSE(family_admits(IdealFamily::nd(), rats, 8));
  CHECK(family_admits(IdealFamily::baire_i(), rats, 8));

  auto single = IdealFamily::single_set(rats);
  CHECK(family_admits(single, rats, 8));
  CHECK(family_admits(single, origin_sigma(d), 8) ==
        region_subset(origin.exact, truncation(rats, 64)));
}

TEST_CASE("neutrix condition") {
  auto d = dom1();
  auto idx = IndexSet::naturals();
  PiecewiseOptions opts;
  opts.check_gluing = false;

  // psi = bump(x1): nonzero at 0, refuted for every family
  PiecewiseExpr bump_psi = make_piecewise(d, {}, parse_expr("bump(x1)"), opts);
  for (auto f : {IdealFamily::nd(), IdealFamily::baire_i(), IdealFamily::m0()})
    CHECK(neutrix_check(bump_psi, f, 16));

  // psi = 0: member of the ideal and the zero class; consistent
  PiecewiseExpr zero_psi = make_piecewise(d, {}, Expr{}, opts);
  CHECK(neutrix_check(zero_psi, IdealFamily::nd(), 16));

  // 20 random nonzero piecewise functions all refute
  RatRng rng(77);
  const char* shapes[] = {"x1", "bump(x1)", "sstep(x1)", "sin(x1)", "x1^2 - 1/4",
                          "exp(x1)", "cos(2*x1)", "x1*bump(2*x1)"};
  for (int i = 0; i < 20; ++i) {
    std::string text = shapes[rng.uniform_int(0, 7)];
    Rat c = rng.small(4, 3);
    if (c == 0) c = Rat(1, 3);
    PiecewiseExpr psi = make_piecewise(d, {}, e_scale(c, parse_expr(text)), opts);
    CHECK(neutrix_check(psi, IdealFamily::baire_i(), 16, i));
  }
}

TEST_CASE("rationals sigma admits nets vanishing off shrinking balls") {
  auto d = dom1();
  // vanishes outside |x1| < 1/k, certified against the rationals enumeration
  Net u = delta_shape(IndexSet::naturals(), d);
  PointwiseCertificate c;
  c.sigma = SetDescriptor::make_union(d, enum_rationals(d), SetClass::FirstCategory, "rationals");
  c.shell_family = parse_region_template("x1 >= 1/k | x1 <= -1/k", 1);
  auto r = check_pointwise(u, c, 24, 3);
  CHECK(r.kind == CheckResult::Verified);
}
