#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "foamlab/collapse.hpp"
#include "foamlab/oracle.hpp"
#include "support/netgen.hpp"

#include <cmath>

using namespace foamlab;
using netgen::delta_shape;
using netgen::diagonal_expr;
using netgen::heaviside_shape;
using netgen::template_net;

namespace {

DomainPtr dom1() { return netgen::interval_sym(); }

SetDescriptor rationals_sigma(const DomainPtr& d) {
  return SetDescriptor::make_union(d, enum_rationals(d), SetClass::FirstCategory, "rationals");
}

PointwiseCertificate delta_cert_fc(const DomainPtr& d) {
  PointwiseCertificate c;
  c.sigma = rationals_sigma(d);
  c.shell_family = parse_region_template("x1 >= 1/k | x1 <= -1/k", 1);
  return c;
}

}  // namespace

TEST_CASE("stable zero profile is non-decreasing and matches the monotone shortcut") {
  auto d = dom1();
  Net mono = delta_shape(IndexSet::naturals(), d);
  auto p1 = StableZeroProfile::compute(mono, 12);
  for (int m = 1; m < 12; ++m) CHECK(region_subset(p1.at(m), p1.at(m + 1)));

  // same template without the declaration: tail intersections agree
  Net undeclared = template_net(IndexSet::naturals(), d,
                                {{"x1 >= 1/k", "0"}, {"x1 <= -1/k", "0"}}, "k*bump(k*x1)", false);
  auto p2 = StableZeroProfile::compute(undeclared, 12);
  for (int m = 1; m <= 12; ++m) CHECK(region_equal(p1.at(m), p2.at(m)));
}

TEST_CASE("find_uniform_patch: delta net on a clear window") {
  auto d = dom1();
  Net delta = delta_shape(IndexSet::naturals(), d);
  RegionSet a = parse_region("x1 > 1/4, x1 < 1/2", d);
  auto r = find_uniform_patch(delta, delta_cert_fc(d), a, nullptr, 16);
  REQUIRE(r.found);
  CHECK(r.nu == 4);  // zero_region(delta_k) contains {x1 >= 1/k} from k = 4 on
  CHECK(region_subset(a, r.region));
  CHECK(region_subset(r.region, region_closure(a)));
  // patch soundness: the patch sits inside every zero region from nu on
  for (int mu = r.nu; mu <= 16; ++mu) CHECK(region_subset(r.region, delta.zero_region(mu)));
}

TEST_CASE("find_uniform_patch: zero net immediately, nonvanishing never") {
  auto d = dom1();
  RegionSet a = parse_region("x1 > -1/2, x1 < 1/2", d);

  Net zero = net_zero(IndexSet::naturals(), d);
  PointwiseCertificate triv;
  triv.sigma = SetDescriptor::make_exact(region_empty(d), SetClass::ClosedNowhereDense);
  triv.shells.push_back(Shell{region_omega(d), 1});
  auto r = find_uniform_patch(zero, triv, a, nullptr, 8);
  REQUIRE(r.found);
  CHECK(r.nu == 1);
  CHECK(region_subset(a, r.region));

  Net diag = diagonal_expr(IndexSet::naturals(), d, "bump(x1)");
  auto nf = find_uniform_patch(diag, triv, a, nullptr, 8);
  CHECK_FALSE(nf.found);
  CHECK(nf.depth == 8);

  CHECK_THROWS_AS(find_uniform_patch(zero, triv, region_empty(d), nullptr, 8), ValidationError);
}

TEST_CASE("find_uniform_patch against a nonzero target") {
  auto d = dom1();
  Net h = heaviside_shape(IndexSet::naturals(), d);
  // target = constant 1: H_k - 1 vanishes on {x1 >= 1/k}
  PiecewiseOptions opts;
  opts.check_gluing = false;
  PiecewiseExpr one = make_piecewise(d, {}, e_const(Rat(1)), opts);
  RegionSet a = parse_region("x1 > 1/4, x1 < 3/4", d);
  PointwiseCertificate c;
  c.sigma = rationals_sigma(d);
  c.shell_family = parse_region_template("x1 >= 1/k", 1);
  auto r = find_uniform_patch(h, c, a, &one, 16);
  REQUIRE(r.found);
  CHECK(r.nu == 4);
}

TEST_CASE("collapse: delta net against the rationals sigma gives gamma = {0}") {
  auto d = dom1();
  Net delta = delta_shape(IndexSet::naturals(), d);
  auto rep = collapse(delta, delta_cert_fc(d), 32);
  CHECK(rep.exact);
  CHECK(rep.method == "template-limit");
  CHECK(rep.gamma_nowhere_dense);
  CHECK(rep.uniform_check.kind == CheckResult::Verified);
  CHECK(region_equal(rep.gamma, region_point(d, {Rat(0)})));
}

TEST_CASE("collapse: zero net collapses to the empty gamma") {
  auto d = dom1();
  Net zero = net_zero(IndexSet::naturals(), d);
  PointwiseCertificate c;
  c.sigma = rationals_sigma(d);
  c.shell_family = parse_region_template("0 <= 1", 1);  // whole domain every stage
  auto rep = collapse(zero, c, 16);
  CHECK(rep.gamma_nowhere_dense);
  CHECK(region_is_empty(rep.gamma));
  CHECK(rep.uniform_check.kind == CheckResult::Verified);
}

TEST_CASE("collapse: plateau net with a nowhere-dense sigma matches the hand certificate") {
  auto d = dom1();
  Net h = heaviside_shape(IndexSet::naturals(), d);
  Net h2mh = net_add(net_mul(h, h), net_neg(h));
  PointwiseCertificate c;
  c.sigma = SetDescriptor::make_exact(region_point(d, {Rat(0)}), SetClass::ClosedNowhereDense,
                                      "origin");
  c.shell_family = parse_region_template("x1 >= 1/k | x1 <= -1/k", 1);
  auto rep = collapse(h2mh, c, 24);
  CHECK(rep.exact);
  CHECK(rep.gamma_nowhere_dense);
  CHECK(region_equal(rep.gamma, region_point(d, {Rat(0)})));
  CHECK(rep.uniform_check.kind == CheckResult::Verified);
}

TEST_CASE("collapse: gamma is depth-independent past the stabilization index") {
  auto d = dom1();
  Net delta = delta_shape(IndexSet::naturals(), d);
  auto r1 = collapse(delta, delta_cert_fc(d), 16);
  auto r2 = collapse(delta, delta_cert_fc(d), 32);
  CHECK(region_equal(r1.gamma, r2.gamma));
}

TEST_CASE("collapse refuses invalid inputs") {
  auto d = dom1();
  Net diag = diagonal_expr(IndexSet::naturals(), d, "bump(x1)");
  CHECK_THROWS_AS(collapse(diag, delta_cert_fc(d), 8), ValidationError);

  // general-tagged sigma is not accepted
  Net delta = delta_shape(IndexSet::naturals(), d);
  PointwiseCertificate g;
  g.sigma = SetDescriptor::make_exact(region_point(d, {Rat(0)}), SetClass::General);
  g.shell_family = parse_region_template("x1 >= 1/k | x1 <= -1/k", 1);
  CHECK_THROWS_AS(collapse(delta, g, 8), ValidationError);
}

TEST_CASE("collapse: bogus declared core falls back to the greedy path") {
  auto d = dom1();
  ParseOptions po;
  po.allow_k = true;
  po.allow_div = true;
  std::vector<TemplatePiece> pieces;
  pieces.push_back(TemplatePiece{parse_region_template("x1 >= 1/k", 1), parse_raw("0", po)});
  pieces.push_back(TemplatePiece{parse_region_template("x1 <= -1/k", 1), parse_raw("0", po)});
  Net delta = Net::from_template(IndexSet::naturals(), d, std::move(pieces),
                                 parse_raw("k*bump(k*x1)", po), true,
                                 parse_region_template("x1 >= 0", 1));  // wrong core
  auto rep = collapse(delta, delta_cert_fc(d), 12);
  CHECK(rep.method == "greedy");
  CHECK_FALSE(rep.exact);
  // conservative gamma: contains the true singular point, stays thin
  CHECK(rep.gamma.contains({Rat(0)}));
  CHECK(rep.uniform_check.kind == CheckResult::Verified);
  RegionSet thin = parse_region("x1 >= -1/256, x1 <= 1/256", d);
  CHECK(region_subset(rep.gamma, thin));
}

TEST_CASE("synthesize: delta net in the nowhere-dense family") {
  auto d = dom1();
  Net delta = delta_shape(IndexSet::naturals(), d);
  auto c = synthesize_certificate(delta, IdealFamily::nd(), 24);
  REQUIRE(c.has_value());
  CHECK(c->sigma.cls == SetClass::ClosedNowhereDense);
  CHECK(region_equal(c->sigma.exact, region_point(d, {Rat(0)})));
  CHECK(check_pointwise(delta, *c, 24, 3).kind == CheckResult::Verified);
}

TEST_CASE("synthesize: nonvanishing diagonal has no certificate") {
  auto d = dom1();
  Net diag = diagonal_expr(IndexSet::naturals(), d, "bump(x1)");
  for (auto f : {IdealFamily::nd(), IdealFamily::baire_i(), IdealFamily::m0()})
    CHECK_FALSE(synthesize_certificate(diag, f, 12).has_value());
}

TEST_CASE("synthesize: shock residual in the measure-zero family") {
  auto d2 = std::make_shared<const Domain>(Domain(2, {{Rat(0), Rat(1)}, {Rat(0), Rat(1)}}));
  // Burgers shock u_k = sstep(k*(x1 - x2/2)) with plateaus 0/1
  Net u = template_net(IndexSet::naturals(), d2,
                       {{"x1 - 1/2*x2 >= 1/k", "1"}, {"x1 - 1/2*x2 <= -1/k", "0"}},
                       "sstep(k*(x1 - 1/2*x2))", true);
  // residual dt(u) + u*dx(u)
  Net residual = net_add(net_diff(u, MultiIndex({0, 1})),
                         net_mul(u, net_diff(u, MultiIndex({1, 0}))));
  auto c = synthesize_certificate(residual, IdealFamily::m0(), 16);
  REQUIRE(c.has_value());
  CHECK(c->sigma.cls == SetClass::MeasureZero);
  // the singular core is the shock line, exactly, with volume 0
  RegionSet line = parse_region("x1 - 1/2*x2 == 0", d2);
  CHECK(region_equal(c->sigma.exact, line));
  CHECK(region_volume(c->sigma.exact) == 0);
  // and in the nowhere-dense family too
  auto cn = synthesize_certificate(residual, IdealFamily::nd(), 16);
  REQUIRE(cn.has_value());
  CHECK(region_equal(cn->sigma.exact, line));
}

TEST_CASE("oracle: zero net is clean, delta bad points hug the origin") {
  auto d = dom1();
  Net zero = net_zero(IndexSet::naturals(), d);
  auto vz = brute_force_membership(zero, IdealFamily::nd(), Rat(1, 32), 8, 2);
  CHECK(vz.kind == OracleVerdict::NoCounterexample);
  CHECK(vz.stats.bad_points == 0);

  Net delta = delta_shape(IndexSet::naturals(), d);
  RegionSet origin = region_point(d, {Rat(0)});
  auto vd = brute_force_membership(delta, IdealFamily::nd(), Rat(1, 128), 64, 3, &origin);
  CHECK(vd.kind == OracleVerdict::NoCounterexample);
  CHECK(vd.stats.bad_points == 3);  // x = -1/128, 0, 1/128: exactly |x| < 1/64
  for (const auto& bp : vd.stats.bad) CHECK(rat_abs(bp.x[0]) < Rat(1, 64));

  // CSV: header plus one row per bad point
  std::string csv = oracle_csv(vd, 1);
  CHECK(csv.find("x1,min_mu,top_magnitude") == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
  CHECK(csv.find("NONE") != std::string::npos);
}

TEST_CASE("oracle: an index-independent nonzero net is a counterexample at its peak") {
  auto d = dom1();
  Net diag = diagonal_expr(IndexSet::naturals(), d, "bump(x1)");
  auto v = brute_force_membership(diag, IdealFamily::nd(), Rat(1, 32), 8, 2);
  CHECK(v.kind == OracleVerdict::Counterexample);
  REQUIRE(v.counterexample.has_value());
  CHECK((*v.counterexample)[0] == Rat(0));  // bump peaks at the origin
  CHECK(v.fraction > 0.5);
}

TEST_CASE("collapse gamma contains all oracle bad points within h") {
  auto d = dom1();
  Net delta = delta_shape(IndexSet::naturals(), d);
  auto rep = collapse(delta, delta_cert_fc(d), 64);
  Rat h(1, 128);
  auto v = brute_force_membership(delta, IdealFamily::baire_i(), h, 64, 3, &rep.gamma);
  CHECK(v.kind == OracleVerdict::NoCounterexample);
  RegionSet fat = region_fatten(rep.gamma, h);
  for (const auto& bp : v.stats.bad) CHECK(fat.contains(bp.x));
}
