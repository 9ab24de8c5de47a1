#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "foamlab/nets.hpp"
#include "support/netgen.hpp"
#include "support/oracles.hpp"

#include <cmath>

using namespace foamlab;
using netgen::delta_shape;
using netgen::diagonal_expr;
using netgen::heaviside_shape;
using netgen::template_net;

TEST_CASE("index sets: co-finality witnesses and refutations") {
  CHECK(is_countably_cofinal(IndexSet::naturals()).ok);
  CHECK(is_countably_cofinal(IndexSet::product_nn()).ok);

  auto powers = IndexSet::cofinal_mapped({2, 4, 8, 16, 32});
  CHECK(is_countably_cofinal(powers).ok);
  CHECK(powers.rate(3) == Rat(8));
  CHECK(powers.rate(7) == Rat(64));  // arithmetic extension past the prefix

  auto bad = IndexSet::cofinal_mapped({3, 2, 5});
  auto w = is_countably_cofinal(bad);
  CHECK_FALSE(w.ok);
  CHECK(w.reason.find("increasing") != std::string::npos);
}

TEST_CASE("delta-shape net: zero regions and evaluation") {
  auto dom = netgen::interval_sym();
  Net delta = delta_shape(IndexSet::naturals(), dom);
  for (int k : {2, 4, 8}) {
    RegionSet z = delta.zero_region(k);
    RegionSet expected = parse_region("x1 >= 1/" + std::to_string(k) +
                                          " | x1 <= -1/" + std::to_string(k),
                                      dom);
    CHECK(region_equal(z, expected));
    // eval sampling: vanishes on the zero region, positive at the center
    const PiecewiseExpr& inst = delta.instantiate(k);
    CHECK(inst.eval_at(Point{Rat(1, 2)}) == 0.0);
    CHECK(inst.eval_at(Point{Rat(-3, 4)}) == 0.0);
    CHECK(inst.eval_at(Point{Rat(0)}) == doctest::Approx(k * std::exp(-1.0)).epsilon(1e-10));
  }
  delta.verify_monotone(32);
}

TEST_CASE("net algebra: zero net absorbs, u - u vanishes literally") {
  auto dom = netgen::interval_sym();
  auto idx = IndexSet::naturals();
  Net u = delta_shape(idx, dom);
  Net zero = net_zero(idx, dom);

  Net prod = net_mul(u, zero);
  Net diffr = net_add(u, net_neg(u));
  for (int k = 1; k <= 32; ++k) {
    CHECK(pw_literal_zero(prod.instantiate(k)));
    CHECK(pw_literal_zero(diffr.instantiate(k)));
  }
}

TEST_CASE("zero region of a product contains the union of zero regions") {
  auto dom = netgen::interval_sym();
  auto idx = IndexSet::naturals();
  RatRng rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    int a = rng.uniform_int(1, 3), b = rng.uniform_int(1, 3);
    Net u = a == 1 ? delta_shape(idx, dom) : (a == 2 ? heaviside_shape(idx, dom) : diagonal_expr(idx, dom, "x1"));
    Net v = b == 1 ? delta_shape(idx, dom) : (b == 2 ? heaviside_shape(idx, dom) : diagonal_expr(idx, dom, "bump(x1)"));
    Net p = net_mul(u, v);
    int k = rng.uniform_int(1, 12);
    RegionSet uz = u.zero_region(k), vz = v.zero_region(k);
    CHECK(region_subset(region_union(uz, vz), p.zero_region(k)));
  }
}

TEST_CASE("termwise differentiation") {
  auto dom = netgen::interval_sym();
  auto idx = IndexSet::naturals();
  MultiIndex d1({1});

  Net zero = net_zero(idx, dom);
  CHECK(pw_literal_zero(net_diff(zero, d1).instantiate(5)));

  // interiors of zero regions persist under differentiation
  Net u = delta_shape(idx, dom);
  Net du = net_diff(u, d1);
  for (int k : {2, 4, 8}) {
    RegionSet inner = region_interior(u.zero_region(k));
    CHECK(region_subset(inner, du.zero_region(k)));
  }

  // diagonal nets: diff commutes with the diagonal
  PiecewiseOptions opts;
  opts.check_gluing = false;
  PiecewiseExpr psi = make_piecewise(dom, {}, parse_expr("sin(x1)*x1"), opts);
  Net diag = Net::diagonal(idx, psi);
  CHECK(pw_equal(net_diff(diag, d1).instantiate(3), pw_diff(psi, d1)));
}

TEST_CASE("heaviside-power nets vanish off the transition strip") {
  auto dom = netgen::interval_sym();
  auto idx = IndexSet::naturals();
  Net h = heaviside_shape(idx, dom);
  Net h2mh = net_add(net_mul(h, h), net_neg(h));
  for (int k : {2, 4, 16}) {
    RegionSet strip_complement = parse_region(
        "x1 >= 1/" + std::to_string(k) + " | x1 <= -1/" + std::to_string(k), dom);
    CHECK(region_subset(strip_complement, h2mh.zero_region(k)));
    // and the transition region is genuinely not literally zero
    CHECK_FALSE(pw_literal_zero(h2mh.instantiate(k)));
  }
}

TEST_CASE("diagonal of a nonzero function has empty zero region") {
  auto dom = netgen::interval_sym();
  Net diag = diagonal_expr(IndexSet::naturals(), dom, "bump(x1)");
  CHECK(region_is_empty(diag.zero_region(7)));
}

TEST_CASE("algebra laws hold instantiation-wise") {
  auto dom = netgen::interval_sym();
  auto idx = IndexSet::naturals();
  Net u = delta_shape(idx, dom);
  Net v = heaviside_shape(idx, dom);
  Net w = diagonal_expr(idx, dom, "x1 + 1/2");
  RatRng rng(29);
  for (int i = 0; i < 50; ++i) {
    int k = rng.uniform_int(1, 10);
    Point x{rng.between(Rat(-7, 8), Rat(7, 8))};
    double uv_w = net_mul(net_mul(u, v), w).instantiate(k).eval_at(x);
    double u_vw = net_mul(u, net_mul(v, w)).instantiate(k).eval_at(x);
    CHECK(std::abs(uv_w - u_vw) <= 1e-10 * std::max(1.0, std::abs(uv_w)));

    double uv = net_mul(u, v).instantiate(k).eval_at(x);
    double vu = net_mul(v, u).instantiate(k).eval_at(x);
    CHECK(std::abs(uv - vu) <= 1e-10 * std::max(1.0, std::abs(uv)));

    double dist_l = net_mul(u, net_add(v, w)).instantiate(k).eval_at(x);
    double dist_r = net_add(net_mul(u, v), net_mul(u, w)).instantiate(k).eval_at(x);
    CHECK(std::abs(dist_l - dist_r) <= 1e-10 * std::max(1.0, std::abs(dist_l)));
  }
}

TEST_CASE("diagonal is a homomorphism structurally") {
  auto dom = netgen::interval_sym();
  auto idx = IndexSet::naturals();
  PiecewiseOptions opts;
  opts.check_gluing = false;
  PiecewiseExpr psi = make_piecewise(dom, {}, parse_expr("sin(x1)"), opts);
  PiecewiseExpr phi = make_piecewise(dom, {}, parse_expr("x1^2 + 1/3"), opts);
  Net lhs = Net::diagonal(idx, pw_mul(psi, phi));
  Net rhs = net_mul(Net::diagonal(idx, psi), Net::diagonal(idx, phi));
  CHECK(pw_equal(lhs.instantiate(4), rhs.instantiate(4)));
}

TEST_CASE("monotone zero declaration is verified exactly") {
  auto dom = netgen::interval_sym();
  auto idx = IndexSet::naturals();
  Net good = delta_shape(idx, dom);
  good.verify_monotone(16);

  // a net whose zero region shrinks violates the declaration
  Net bad = template_net(idx, dom, {{"x1 >= 1 - 1/k", "0"}}, "bump(x1)", true);
  CHECK_THROWS_AS(bad.verify_monotone(8), ValidationError);
}

TEST_CASE("stable zero region under verified monotonicity") {
  auto dom = netgen::interval_sym();
  Net u = delta_shape(IndexSet::naturals(), dom);
  u.verify_monotone(16);
  // intersection of the tail equals the zero region at the base index
  for (int mu : {2, 5, 9}) {
    RegionSet tail = u.zero_region(mu);
    for (int nu = mu; nu <= 16; ++nu) tail = region_intersect(tail, u.zero_region(nu));
    CHECK(region_equal(tail, u.zero_region(mu)));
  }
}

TEST_CASE("product index set runs along the diagonal chain") {
  auto dom = netgen::interval_sym();
  Net u = delta_shape(IndexSet::product_nn(), dom);
  CHECK(u.index_set().label(3) == "(3,3)");
  RegionSet z = u.zero_region(3);
  CHECK(region_equal(z, parse_region("x1 >= 1/3 | x1 <= -1/3", dom)));
}

TEST_CASE("gluing violations are rejected") {
  auto dom = netgen::interval_sym();
  auto idx = IndexSet::naturals();
  // jump discontinuity
  Net jump = template_net(idx, dom, {{"x1 >= 0", "1"}}, "0", false);
  CHECK_THROWS_AS(jump.instantiate(1), ValidationError);
  // continuous but a kink in the first derivative
  Net kink = template_net(idx, dom, {{"x1 >= 0", "x1"}}, "0", false);
  CHECK_THROWS_AS(kink.instantiate(1), ValidationError);
  // smooth plateaus glue fine
  Net ok = heaviside_shape(idx, dom);
  CHECK_NOTHROW(ok.instantiate(2));
}

TEST_CASE("piece partitions: overlap is rejected, cover is materialized") {
  auto dom = netgen::interval_sym();
  std::vector<Piece> overlapping;
  overlapping.push_back(Piece{parse_region("x1 >= 0", dom), e_const(Rat(0))});
  overlapping.push_back(Piece{parse_region("x1 >= 1/2", dom), e_const(Rat(0))});
  CHECK_THROWS_AS(make_piecewise(dom, std::move(overlapping), Expr{}), ValidationError);

  std::vector<Piece> ok;
  ok.push_back(Piece{parse_region("x1 >= 1/2", dom), e_const(Rat(0))});
  PiecewiseOptions opts;
  opts.check_gluing = false;
  PiecewiseExpr pw = make_piecewise(dom, std::move(ok), e_const(Rat(1)), opts);
  RegionSet total = region_empty(dom);
  for (const auto& p : pw.pieces) total = region_union(total, p.region);
  CHECK(region_equal(total, region_omega(dom)));
}

TEST_CASE("inv guards validated against piece regions") {
  auto dom = netgen::interval_sym();
  std::vector<Piece> pieces;
  pieces.push_back(Piece{parse_region("x1 >= 1/2", dom), parse_piece_expr("inv(x1)")});
  PiecewiseOptions opts;
  opts.check_gluing = false;  // the reciprocal does not glue smoothly to 0; not the point here
  CHECK_NOTHROW(make_piecewise(dom, std::move(pieces), e_const(Rat(0)), opts));

  std::vector<Piece> bad;
  bad.push_back(Piece{parse_region("x1 >= -1/2", dom), parse_piece_expr("inv(x1)")});
  CHECK_THROWS_AS(make_piecewise(dom, std::move(bad), e_const(Rat(0)), opts), ValidationError);
}

TEST_CASE("zero cores: declared and derived templates") {
  auto dom = netgen::interval_sym();
  auto idx = IndexSet::naturals();
  Net delta = delta_shape(idx, dom);
  auto core = delta.zero_core();
  REQUIRE(core.has_value());
  for (int k = 1; k <= 8; ++k) CHECK(region_subset(core->at(dom, Rat(k)), delta.zero_region(k)));
  auto lim = core->monotone_limit(dom);
  REQUIRE(lim.has_value());
  CHECK_FALSE(lim->contains({Rat(0)}));
  CHECK(lim->contains({Rat(1, 1000)}));

  // products inherit the union of cores
  Net prod = net_mul(delta, heaviside_shape(idx, dom));
  auto pcore = prod.zero_core();
  REQUIRE(pcore.has_value());
  for (int k = 1; k <= 6; ++k) CHECK(region_subset(pcore->at(dom, Rat(k)), prod.zero_region(k)));
}
