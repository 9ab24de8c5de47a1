#include "foamlab/collapse.hpp"

#include <algorithm>
#include <deque>

namespace foamlab {

StableZeroProfile StableZeroProfile::compute(const Net& u, int M) {
  StableZeroProfile p;
  p.depth = M;
  p.tail.resize(M);
  if (u.monotone_zero_declared()) {
    u.verify_monotone(M);
    for (int m = 1; m <= M; ++m) p.tail[m - 1] = u.zero_region(m);
    return p;
  }
  p.tail[M - 1] = region_simplify(u.zero_region(M));
  for (int m = M - 1; m >= 1; --m)
    p.tail[m - 1] = region_simplify(region_intersect(p.tail[m], u.zero_region(m)));
  return p;
}

PatchResult find_uniform_patch(const Net& u, const PointwiseCertificate& c, const RegionSet& A,
                               const PiecewiseExpr* target, int M) {
  (void)c;  // validity of the certificate is the caller's precondition
  if (region_is_empty(A) || !region_is_open(A))
    throw ValidationError("find_uniform_patch requires a nonempty open A");

  Net v = target ? net_add(u, net_neg(Net::diagonal(u.index_set(), *target))) : u;
  StableZeroProfile profile = StableZeroProfile::compute(v, M);

  RegionSet cla = region_simplify(region_closure(A));
  PatchResult r;
  r.depth = M;
  for (int m = 1; m <= M; ++m) {
    RegionSet t = region_intersect(profile.at(m), cla);
    if (region_is_empty(t)) continue;
    // relative interior of t within closure(A)
    RegionSet rel = region_difference(cla, region_closure(region_difference(cla, t)));
    if (!region_is_empty(rel)) {
      r.found = true;
      r.region = region_simplify(rel);
      r.nu = m;
      return r;
    }
  }
  return r;
}

namespace {

Rat max_extent(const RegionSet& a) {
  Rat w(0);
  for (const auto& c : a.cells) {
    auto bb = cell_bbox(c);
    for (const auto& r : bb) w = std::max(w, Rat(r.hi - r.lo));
  }
  return w;
}

// the greedy fallback: canonical-order worklist, dyadic refinement, floor
void greedy_patches(const Net& u, const PointwiseCertificate& c, int M,
                    std::vector<Patch>& patches, const Rat& floor_width) {
  std::deque<RegionSet> work;
  work.push_back(region_omega(u.domain()));
  int budget = 4096;
  while (!work.empty() && budget-- > 0) {
    RegionSet a = std::move(work.front());
    work.pop_front();
    if (region_is_empty(a)) continue;
    PatchResult r = find_uniform_patch(u, c, a, nullptr, M);
    if (r.found) {
      RegionSet v = region_simplify(region_interior(r.region));
      if (!region_is_empty(v)) {
        patches.push_back(Patch{v, r.nu});
        RegionSet rest = region_simplify(region_difference(a, region_closure(r.region)));
        for (const auto& cell : rest.cells) {
          RegionSet piece(a.dom);
          piece.cells.push_back(cell);
          piece = region_interior(piece);
          if (!region_is_empty(piece)) work.push_back(region_simplify(piece));
        }
        continue;
      }
    }
    // refine dyadically along the widest axis; cells below the floor join gamma
    if (max_extent(a) < floor_width) continue;
    for (const auto& cell : a.cells) {
      auto bb = cell_bbox(cell);
      if (bb.empty()) continue;
      int widest = 0;
      Rat w(0);
      for (std::size_t i = 0; i < bb.size(); ++i)
        if (bb[i].hi - bb[i].lo > w) {
          w = bb[i].hi - bb[i].lo;
          widest = static_cast<int>(i);
        }
      Rat mid = (bb[widest].lo + bb[widest].hi) / 2;
      std::vector<Rat> up(a.dom->n, Rat(0)), down(a.dom->n, Rat(0));
      up[widest] = Rat(1);
      down[widest] = Rat(-1);
      RegionSet base(a.dom);
      base.cells.push_back(cell);
      RegionSet left = region_intersect(base, region_from_cell(a.dom, {Constraint(up, mid, true)}));
      RegionSet right =
          region_intersect(base, region_from_cell(a.dom, {Constraint(down, Rat(-mid), true)}));
      for (auto* half : {&left, &right}) {
        RegionSet h = region_interior(*half);
        if (!region_is_empty(h)) work.push_back(region_simplify(h));
      }
    }
  }
}

}  // namespace

CollapseReport collapse(const Net& u, const PointwiseCertificate& c, int M) {
  auto cof = is_countably_cofinal(u.index_set());
  if (!cof.ok) throw ValidationError("collapse requires a countably co-final index set: " + cof.reason);
  if (c.sigma.cls != SetClass::FirstCategory && c.sigma.cls != SetClass::ClosedNowhereDense)
    throw ValidationError("collapse expects a first-category (or nowhere dense) sigma");
  CheckResult pre = check_pointwise(u, c, M, 3);
  if (pre.kind != CheckResult::Verified)
    throw ValidationError("collapse precondition failed: certificate not Verified(" +
                          std::to_string(M) + "): " + pre.detail);

  const DomainPtr& dom = u.domain();
  CollapseReport rep;
  rep.depth = M;

  // template path: exact gamma from the monotone limit of the zero core
  if (auto core = u.zero_core()) {
    bool sound = true;
    StableZeroProfile profile = StableZeroProfile::compute(u, M);
    for (int m = 1; m <= M && sound; ++m)
      sound = region_subset(core->at(dom, u.index_set().rate(m)), profile.at(m));
    if (sound) {
      RegionTemplate open_core = core->strictified();
      if (auto limit = open_core.monotone_limit(dom)) {
        RegionSet covered = *limit;
        for (int m = 1; m <= M; ++m)
          covered = region_union(covered, region_interior(core->at(dom, u.index_set().rate(m))));
        rep.gamma = region_simplify(region_difference(region_omega(dom), covered));
        rep.cert.gamma = rep.gamma;
        rep.cert.patch_family = open_core;
        rep.exact = true;
        rep.method = "template-limit";
        rep.gamma_nowhere_dense = is_nowhere_dense(rep.gamma);
        rep.uniform_check = check_uniform(u, rep.cert, M);
        rep.notes = "gamma from the symbolic union of interior zero-core instances";
        return rep;
      }
    }
  }

  // greedy fallback
  std::vector<Patch> patches;
  greedy_patches(u, c, M, patches, Rat(1, 1 << 10));
  RegionSet covered = region_empty(dom);
  for (const auto& p : patches) covered = region_union(covered, p.region);
  rep.gamma = region_simplify(region_difference(region_omega(dom), covered));
  rep.cert.gamma = rep.gamma;
  rep.cert.patches = patches;
  rep.exact = false;
  rep.method = "greedy";
  rep.gamma_nowhere_dense = is_nowhere_dense(rep.gamma);
  rep.uniform_check = check_uniform(u, rep.cert, M);
  rep.notes = "greedy patch exhaustion with dyadic refinement to width 2^-10";
  return rep;
}

std::optional<PointwiseCertificate> synthesize_certificate(const Net& u, const IdealFamily& f,
                                                           int M) {
  const DomainPtr& dom = u.domain();
  auto cof = is_countably_cofinal(u.index_set());
  if (!cof.ok) throw ValidationError("synthesis requires a countably co-final index set");

  StableZeroProfile profile = StableZeroProfile::compute(u, M);

  // validated zero-core template: instances must sit inside the stable profile
  std::optional<RegionTemplate> core = u.zero_core();
  if (core) {
    for (int m = 1; m <= M && core; ++m)
      if (!region_subset(core->at(dom, u.index_set().rate(m)), profile.at(m))) core.reset();
  }

  RegionSet sigma_region(dom);
  bool exact_sigma = false;
  if (core) {
    if (auto limit = core->monotone_limit(dom)) {
      sigma_region = region_simplify(region_difference(region_omega(dom), *limit));
      exact_sigma = true;
    }
  }
  if (!exact_sigma) {
    RegionSet covered = region_empty(dom);
    for (int m = 1; m <= M; ++m) covered = region_union(covered, profile.at(m));
    sigma_region = region_simplify(region_difference(region_omega(dom), covered));
  }
  RegionSet sigma_closed = region_simplify(region_closure(sigma_region));

  PointwiseCertificate cert;
  switch (f.kind) {
    case FamilyKind::ND: {
      if (!is_nowhere_dense(sigma_closed)) return std::nullopt;
      cert.sigma = SetDescriptor::make_exact(sigma_closed, SetClass::ClosedNowhereDense,
                                             "synthesized_nd");
      break;
    }
    case FamilyKind::BaireI: {
      if (!is_nowhere_dense(sigma_closed)) return std::nullopt;
      cert.sigma = SetDescriptor::make_union(dom, enum_list(dom, {sigma_closed}),
                                             SetClass::FirstCategory, "synthesized_fc");
      break;
    }
    case FamilyKind::M0: {
      bool degenerate = true;
      try {
        degenerate = region_volume(sigma_closed) == 0;
      } catch (const ValidationError&) {
        degenerate = false;  // full-dimensional non-box cells
      }
      if (!degenerate) return std::nullopt;
      cert.sigma = SetDescriptor::make_cover(sigma_closed, "synthesized_m0");
      break;
    }
    case FamilyKind::SingleSet: {
      if (!f.single) return std::nullopt;
      if (!region_subset(sigma_closed, truncation(*f.single, std::max(M, 64))))
        return std::nullopt;
      cert.sigma = *f.single;
      break;
    }
  }

  if (core) {
    cert.shell_family = core;
  } else {
    for (int m = 1; m <= M; ++m) {
      if (region_is_empty(profile.at(m))) continue;
      if (m > 1 && region_equal(profile.at(m), profile.at(m - 1))) continue;
      cert.shells.push_back(Shell{profile.at(m), m});
    }
    if (cert.shells.empty()) return std::nullopt;
  }

  CheckResult check = check_pointwise(u, cert, M, 3);
  if (check.kind != CheckResult::Verified) return std::nullopt;
  return cert;
}

}  // namespace foamlab
