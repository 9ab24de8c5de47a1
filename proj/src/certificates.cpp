#include "foamlab/certificates.hpp"

#include <algorithm>
#include <map>

namespace foamlab {

std::string IdealFamily::name() const {
  switch (kind) {
    case FamilyKind::ND:
      return "nd";
    case FamilyKind::BaireI:
      return "baire_i";
    case FamilyKind::M0:
      return "m0";
    case FamilyKind::SingleSet:
      return "single_set(" + (single ? single->name : std::string("?")) + ")";
  }
  return "?";
}

bool family_admits(const IdealFamily& f, const SetDescriptor& sigma, int depth) {
  switch (f.kind) {
    case FamilyKind::ND:
      return sigma.cls == SetClass::ClosedNowhereDense;
    case FamilyKind::BaireI:
      return sigma.cls == SetClass::ClosedNowhereDense || sigma.cls == SetClass::FirstCategory;
    case FamilyKind::M0: {
      if (sigma.cls == SetClass::MeasureZero) return true;
      // degenerate exact sets have measure zero regardless of their tag
      if (sigma.kind == DescKind::Exact) return region_volume(sigma.exact) == 0;
      return false;
    }
    case FamilyKind::SingleSet: {
      if (!f.single) return false;
      if (!sigma.name.empty() && sigma.name == f.single->name) return true;
      if (sigma.kind == DescKind::Exact)
        return region_subset(sigma.exact, truncation(*f.single, std::max(depth, 64)));
      return false;
    }
  }
  return false;
}

std::string Witness::str() const {
  std::string s = "x=(";
  for (std::size_t i = 0; i < x.size(); ++i) s += (i ? "," : "") + rat_str(x[i]);
  s += "), mu=" + std::to_string(mu) + ", p=" + p.str() + ", |value|=" + std::to_string(value);
  return s;
}

// ---------------------------------------------------------------------------
// shared checking machinery
// ---------------------------------------------------------------------------

namespace {

constexpr double kRefuteTol = 1e-9;

struct ZeroCache {
  const Net& u;
  std::map<int, RegionSet> star;

  explicit ZeroCache(const Net& net) : u(net) {}

  const RegionSet& regular_zero(int mu) {
    auto it = star.find(mu);
    if (it != star.end()) return it->second;
    RegionSet z = region_simplify(region_regular_part(u.zero_region(mu)));
    return star.emplace(mu, std::move(z)).first->second;
  }
};

// Search for a point of `bad` (sub-region of a shell that escaped the zero
// region) where some derivative up to order P stays above tolerance for some
// index in [mu_from, M]. Returns the refutation witness if found.
std::optional<Witness> hunt_refutation(const Net& u, const RegionSet& bad, int mu_from, int M,
                                       int P) {
  RatRng rng(0x5eedull);
  auto points = region_sample_many(bad, 24, rng);
  auto orders = multi_indices_up_to(u.domain()->n, P, true);
  for (int mu = mu_from; mu <= M; ++mu) {
    for (const auto& p : orders) {
      Net du = p.is_zero() ? u : net_diff(u, p);
      const PiecewiseExpr& inst = du.instantiate(mu);
      for (const auto& x : points) {
        double v = inst.eval_at(x);
        if (std::abs(v) > kRefuteTol) {
          Witness w;
          w.x = x;
          w.mu = mu;
          w.p = p;
          w.value = std::abs(v);
          return w;
        }
      }
    }
  }
  return std::nullopt;
}

// Shell-coverage audit. uncovered(d) = Omega minus explicit shells, family
// instances <= d, and the depth-d truncation of sigma. Coverage holds when
// the final uncovered region is empty or still strictly shrinking between
// M/2 and M (countable families cover only in the limit).
void audit_coverage(const Net& u, const PointwiseCertificate& c, int M) {
  const DomainPtr& dom = u.domain();
  RegionSet uncovered = region_omega(dom);
  for (const auto& s : c.shells) uncovered = region_simplify(region_difference(uncovered, s.region));
  if (c.sigma.kind != DescKind::CountableUnion)
    uncovered = region_simplify(region_difference(uncovered, c.sigma.exact));
  RegionSet at_half = uncovered;
  for (int d = 1; d <= M; ++d) {
    if (c.shell_family)
      uncovered = region_difference(uncovered, c.shell_family->at(dom, u.index_set().rate(d)));
    if (c.sigma.kind == DescKind::CountableUnion)
      uncovered = region_difference(uncovered, c.sigma.en->stage(d));
    uncovered = region_simplify(uncovered);
    if (uncovered.cells.size() > 2000)
      throw ValidationError("certificate coverage audit exceeded the cell budget");
    if (d == M / 2) at_half = uncovered;
  }
  if (region_is_empty(uncovered)) return;
  // strict shrinkage: uncovered(M) properly contained in uncovered(M/2)
  if (region_subset(uncovered, at_half) && !region_subset(at_half, uncovered)) return;
  // small depths may not show progress yet; probe ahead before rejecting
  RegionSet ahead = uncovered;
  for (int d = M + 1; d <= 2 * M + 4; ++d) {
    if (c.shell_family)
      ahead = region_difference(ahead, c.shell_family->at(dom, u.index_set().rate(d)));
    if (c.sigma.kind == DescKind::CountableUnion)
      ahead = region_difference(ahead, c.sigma.en->stage(d));
  }
  ahead = region_simplify(ahead);
  if (region_subset(ahead, uncovered) && !region_subset(uncovered, ahead)) return;
  throw ValidationError("coverage gap: shells together with sigma do not cover Omega at depth " +
                        std::to_string(M));
}

}  // namespace

// ---------------------------------------------------------------------------
// check_pointwise
// ---------------------------------------------------------------------------

CheckResult check_pointwise(const Net& u, const PointwiseCertificate& c, int M, int P) {
  const DomainPtr& dom = u.domain();
  if (M < 1) throw ValidationError("depth must be >= 1");
  auto cof = is_countably_cofinal(u.index_set());
  if (!cof.ok) throw ValidationError("index set is not countably co-final: " + cof.reason);

  validate_descriptor(c.sigma, std::min(M, 16));
  auto dense = has_dense_complement(c.sigma, std::min(M, 16));
  if (dense.kind != DenseVerdict::Confirmed)
    throw ValidationError("sigma does not have a dense complement");

  for (const auto& s : c.shells)
    if (s.lambda > M)
      throw ValidationError("shell threshold " + std::to_string(s.lambda) + " exceeds depth " +
                            std::to_string(M));

  try {
    audit_coverage(u, c, M);
  } catch (const ValidationError& e) {
    if (!c.derived) throw;
    CheckResult esc;
    esc.depth = M;
    esc.kind = CheckResult::Unknown;
    esc.detail = std::string("derived certificate lost coverage: ") + e.what();
    return esc;
  }

  CheckResult r;
  r.depth = M;
  if (c.coverage_weakened) {
    r.kind = CheckResult::Unknown;
    r.detail = "derived certificate lost shell coverage; escalated to Unknown";
    return r;
  }

  RegionSet sigma_trunc = region_simplify(truncation(c.sigma, M));
  ZeroCache zc(u);

  auto check_shell = [&](const RegionSet& region, int lambda) -> std::optional<CheckResult> {
    RegionSet live = region_simplify(region_difference(region, sigma_trunc));
    if (region_is_empty(live)) return std::nullopt;
    for (int mu = lambda; mu <= M; ++mu) {
      if (region_subset(live, zc.regular_zero(mu))) continue;
      RegionSet bad = region_simplify(region_difference(live, zc.regular_zero(mu)));
      CheckResult r2;
      r2.depth = M;
      if (auto w = hunt_refutation(u, bad, mu, M, P)) {
        r2.kind = CheckResult::Refuted;
        r2.witness = w;
        r2.detail = "shell containment fails and a derivative exceeds tolerance: " + w->str();
      } else {
        r2.kind = CheckResult::Unknown;
        r2.detail = "shell " + region.str() + " escapes the zero region at index " +
                    std::to_string(mu) + " but no numeric refutation was found";
      }
      return r2;
    }
    return std::nullopt;
  };

  for (const auto& s : c.shells)
    if (auto bad = check_shell(s.region, s.lambda)) return *bad;
  if (c.shell_family)
    for (int m = 1; m <= M; ++m)
      if (auto bad = check_shell(c.shell_family->at(dom, u.index_set().rate(m)), m)) return *bad;

  r.kind = CheckResult::Verified;
  r.detail = "every inspected shell is contained in the stable zero region";
  return r;
}

// ---------------------------------------------------------------------------
// check_uniform
// ---------------------------------------------------------------------------

CheckResult check_uniform(const Net& u, const UniformCertificate& c, int M) {
  const DomainPtr& dom = u.domain();
  if (M < 1) throw ValidationError("depth must be >= 1");
  if (!region_is_closed(c.gamma))
    throw ValidationError("malformed uniform certificate: gamma is not closed");
  if (!is_nowhere_dense(c.gamma))
    throw ValidationError("malformed uniform certificate: gamma is not nowhere dense");

  // patches must be open and must cover Omega \ Gamma exactly
  RegionSet cover = region_empty(dom);
  for (const auto& p : c.patches) {
    if (!region_is_open(p.region))
      throw ValidationError("uniform certificate patch is not open: " + p.region.str());
    cover = region_union(cover, p.region);
  }
  if (c.patch_family) {
    for (int m = 1; m <= M; ++m) {
      RegionSet inst = c.patch_family->at(dom, u.index_set().rate(m));
      if (!region_is_open(inst))
        throw ValidationError("patch family instance is not open at m=" + std::to_string(m));
      cover = region_union(cover, inst);
    }
    if (auto lim = c.patch_family->monotone_limit(dom)) cover = region_union(cover, *lim);
  }
  RegionSet rest = region_difference(region_complement(c.gamma), cover);
  if (!region_is_empty(rest))
    throw ValidationError("patches do not cover Omega \\ Gamma; uncovered: " +
                          region_simplify(rest).str());

  ZeroCache zc(u);
  CheckResult r;
  r.depth = M;

  auto check_patch = [&](const RegionSet& region, int lambda) -> std::optional<CheckResult> {
    if (region_is_empty(region)) return std::nullopt;
    int hi = lambda > M ? lambda + 2 : M;  // beyond-depth patches get a spot window
    for (int mu = lambda; mu <= hi; ++mu) {
      if (region_subset(region, zc.regular_zero(mu))) continue;
      RegionSet bad = region_simplify(region_difference(region, zc.regular_zero(mu)));
      CheckResult r2;
      r2.depth = M;
      if (auto w = hunt_refutation(u, bad, mu, std::max(M, mu), 1)) {
        r2.kind = CheckResult::Refuted;
        r2.witness = w;
        r2.detail = "patch escapes the zero region: " + w->str();
      } else {
        r2.kind = CheckResult::Unknown;
        r2.detail = "patch " + region.str() + " escapes the zero region at index " +
                    std::to_string(mu) + " but no numeric refutation was found";
      }
      return r2;
    }
    return std::nullopt;
  };

  for (const auto& p : c.patches)
    if (auto bad = check_patch(p.region, p.lambda)) return *bad;
  if (c.patch_family)
    for (int m = 1; m <= M; ++m)
      if (auto bad = check_patch(c.patch_family->at(dom, u.index_set().rate(m)), m)) return *bad;

  r.kind = CheckResult::Verified;
  r.detail = "gamma is closed nowhere dense and every patch sits in the stable zero region";
  return r;
}

// ---------------------------------------------------------------------------
// transformations
// ---------------------------------------------------------------------------

PointwiseCertificate derive_pointwise(const PointwiseCertificate& c, const MultiIndex& p) {
  (void)p;  // the transform is order-independent: interiors absorb any order
  PointwiseCertificate out = c;
  out.derived = true;
  bool emptied = false;
  for (auto& s : out.shells) {
    s.region = region_simplify(region_interior(s.region));
    if (region_is_empty(s.region)) emptied = true;
  }
  if (out.shell_family) out.shell_family = out.shell_family->strictified();
  out.shells.erase(std::remove_if(out.shells.begin(), out.shells.end(),
                                  [](const Shell& s) { return region_is_empty(s.region); }),
                   out.shells.end());
  if (emptied && out.shells.empty() && !out.shell_family) out.coverage_weakened = true;
  return out;
}

UniformCertificate derive_uniform(const UniformCertificate& c, const MultiIndex& p) {
  (void)p;  // patches are already open
  return c;
}

PointwiseCertificate compose_add(const PointwiseCertificate& c1, const PointwiseCertificate& c2,
                                 int M) {
  PointwiseCertificate out;
  out.sigma = family_union(c1.sigma, c2.sigma);

  const DomainPtr dom = c1.sigma.dom;
  auto add_pair = [&](const RegionSet& r1, int l1, const RegionSet& r2, int l2) {
    RegionSet r = region_simplify(region_intersect(r1, r2));
    if (region_is_empty(r)) return;
    out.shells.push_back(Shell{std::move(r), std::max(l1, l2)});
  };

  // explicit x explicit
  for (const auto& s1 : c1.shells)
    for (const auto& s2 : c2.shells) add_pair(s1.region, s1.lambda, s2.region, s2.lambda);

  // family x family stays symbolic: a point of T1(m) n T2(m) has threshold m
  // for both constituents
  if (c1.shell_family && c2.shell_family)
    out.shell_family = RegionTemplate::intersect(*c1.shell_family, *c2.shell_family);

  // explicit x family and family x explicit: instantiate the family side
  auto cross = [&](const std::vector<Shell>& shells, const RegionTemplate& fam) {
    for (const auto& s : shells)
      for (int m = 1; m <= M; ++m) add_pair(s.region, s.lambda, fam.at(dom, Rat(m)), m);
  };
  if (c2.shell_family) cross(c1.shells, *c2.shell_family);
  if (c1.shell_family) cross(c2.shells, *c1.shell_family);

  out.coverage_weakened = c1.coverage_weakened || c2.coverage_weakened;
  return out;
}

PointwiseCertificate compose_mul_ideal(const PointwiseCertificate& c, const Net& v) {
  // zero regions only grow under multiplication; the certificate carries over
  (void)v;
  return c;
}

PointwiseCertificate uniform_to_pointwise(const UniformCertificate& c) {
  PointwiseCertificate out;
  out.sigma = SetDescriptor::make_union(c.gamma.dom, enum_list(c.gamma.dom, {c.gamma}),
                                        SetClass::FirstCategory, "gamma_stage");
  for (const auto& p : c.patches) out.shells.push_back(Shell{p.region, p.lambda});
  out.shell_family = c.patch_family;
  return out;
}

bool neutrix_check(const PiecewiseExpr& psi, const IdealFamily& f, int M, std::uint64_t seed) {
  (void)f;  // a refutation point works against every dense-complement sigma
  (void)M;
  if (pw_literal_zero(psi)) return true;  // the diagonal is the zero class; consistent
  RatRng rng(seed + 0xabcdefull);
  for (const auto& piece : psi.pieces) {
    if (piece.expr.is_zero()) continue;
    auto pts = region_sample_many(piece.region, 64, rng);
    std::vector<double> xd(psi.dom->n);
    for (const auto& x : pts) {
      for (int i = 0; i < psi.dom->n; ++i) xd[i] = to_double(x[i]);
      if (std::abs(eval(piece.expr, xd)) > kRefuteTol) return true;
    }
  }
  return false;  // could not exhibit a nonzero value; no refutation produced
}

}  // namespace foamlab
