#include "foamlab/descriptor.hpp"

#include <algorithm>

namespace foamlab {

std::string set_class_name(SetClass c) {
  switch (c) {
    case SetClass::ClosedNowhereDense:
      return "closed_nowhere_dense";
    case SetClass::FirstCategory:
      return "first_category";
    case SetClass::MeasureZero:
      return "measure_zero";
    case SetClass::General:
      return "general";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// enumerations
// ---------------------------------------------------------------------------

namespace {

// i-th element (1-based) of the diagonal enumeration of reduced fractions
// p/q in (0,1): q = 2, 3, ...; p coprime to q.
Rat unit_rational(int i) {
  int count = 0;
  for (int q = 2;; ++q) {
    for (int p = 1; p < q; ++p) {
      if (boost::multiprecision::gcd(Int(p), Int(q)) != 1) continue;
      if (++count == i) return Rat(p, q);
    }
  }
}

// i-th dyadic in (0,1): level l >= 1, odd numerators.
Rat unit_dyadic(int i) {
  int level = 1, width = 1;
  int idx = i - 1;
  while (idx >= width) {
    idx -= width;
    ++level;
    width *= 2;
  }
  return Rat(2 * idx + 1, Int(1) << level);
}

// Cantor-style unpairing for multi-axis point enumerations.
std::vector<int> unpair(int i, int n) {
  std::vector<int> out(n, 1);
  if (n == 1) {
    out[0] = i;
    return out;
  }
  if (n == 2) {
    // diagonal order: (1,1),(1,2),(2,1),(1,3),(2,2),(3,1),...
    int d = 2, k = i - 1;
    while (k >= d - 1) {
      k -= d - 1;
      ++d;
    }
    out[0] = 1 + k;
    out[1] = d - 1 - k;
    return out;
  }
  // n == 3: diagonal over (first, rest)
  int d = 2, k = i - 1;
  while (k >= d - 1) {
    k -= d - 1;
    ++d;
  }
  out[0] = 1 + k;
  auto rest = unpair(d - 1 - k, 2);
  out[1] = rest[0];
  out[2] = rest[1];
  return out;
}

class PointEnum : public Enumeration {
 public:
  PointEnum(DomainPtr dom, bool dyadic) : dom_(std::move(dom)), dyadic_(dyadic) {}

  RegionSet stage(int i) const override {
    auto idx = unpair(i, dom_->n);
    Point p(dom_->n);
    for (int a = 0; a < dom_->n; ++a) {
      Rat t = dyadic_ ? unit_dyadic(idx[a]) : unit_rational(idx[a]);
      p[a] = dom_->box[a].first + t * (dom_->box[a].second - dom_->box[a].first);
    }
    return region_point(dom_, p);
  }

  std::string describe() const override { return dyadic_ ? "dyadics" : "rationals"; }

 private:
  DomainPtr dom_;
  bool dyadic_;
};

class ListEnum : public Enumeration {
 public:
  ListEnum(DomainPtr dom, std::vector<RegionSet> stages)
      : dom_(std::move(dom)), stages_(std::move(stages)) {}

  RegionSet stage(int i) const override {
    if (i >= 1 && i <= static_cast<int>(stages_.size())) return stages_[i - 1];
    return region_empty(dom_);
  }

  std::string describe() const override {
    return "list(" + std::to_string(stages_.size()) + ")";
  }

 private:
  DomainPtr dom_;
  std::vector<RegionSet> stages_;
};

class InterleaveEnum : public Enumeration {
 public:
  InterleaveEnum(EnumPtr a, EnumPtr b) : a_(std::move(a)), b_(std::move(b)) {}

  RegionSet stage(int i) const override {
    return i % 2 == 1 ? a_->stage((i + 1) / 2) : b_->stage(i / 2);
  }

  std::string describe() const override {
    return "interleave(" + a_->describe() + ", " + b_->describe() + ")";
  }

 private:
  EnumPtr a_, b_;
};

}  // namespace

EnumPtr enum_rationals(const DomainPtr& dom) { return std::make_shared<PointEnum>(dom, false); }
EnumPtr enum_dyadics(const DomainPtr& dom) { return std::make_shared<PointEnum>(dom, true); }
EnumPtr enum_list(const DomainPtr& dom, std::vector<RegionSet> stages) {
  return std::make_shared<ListEnum>(dom, std::move(stages));
}
EnumPtr enum_interleave(const EnumPtr& a, const EnumPtr& b) {
  return std::make_shared<InterleaveEnum>(a, b);
}

// ---------------------------------------------------------------------------
// descriptors
// ---------------------------------------------------------------------------

SetDescriptor SetDescriptor::make_exact(RegionSet r, SetClass cls, std::string name) {
  SetDescriptor s;
  s.kind = DescKind::Exact;
  s.cls = cls;
  s.dom = r.dom;
  s.exact = std::move(r);
  s.name = std::move(name);
  return s;
}

SetDescriptor SetDescriptor::make_union(const DomainPtr& dom, EnumPtr en, SetClass cls,
                                        std::string name) {
  SetDescriptor s;
  s.kind = DescKind::CountableUnion;
  s.cls = cls;
  s.dom = dom;
  s.exact = region_empty(dom);
  s.en = std::move(en);
  s.name = std::move(name);
  return s;
}

SetDescriptor SetDescriptor::make_cover(RegionSet core, std::string name) {
  SetDescriptor s;
  s.kind = DescKind::CoverBased;
  s.cls = SetClass::MeasureZero;
  s.dom = core.dom;
  s.exact = core;
  s.name = std::move(name);
  s.cover = [core](const Rat& eps) { return quadtree_cover(core, eps); };
  return s;
}

RegionSet truncation(const SetDescriptor& s, int depth) {
  if (s.kind != DescKind::CountableUnion) return s.exact;
  RegionSet r = region_empty(s.dom);
  for (int i = 1; i <= depth; ++i) r = region_union(r, s.en->stage(i));
  return r;
}

void validate_descriptor(const SetDescriptor& s, int depth) {
  switch (s.cls) {
    case SetClass::ClosedNowhereDense: {
      if (s.kind != DescKind::Exact)
        throw ValidationError("closed_nowhere_dense requires an exact region");
      if (!region_is_closed(s.exact))
        throw ValidationError("closed_nowhere_dense region is not closed: " + s.exact.str());
      if (!is_nowhere_dense(s.exact))
        throw ValidationError("region is not nowhere dense: " + s.exact.str());
      break;
    }
    case SetClass::FirstCategory: {
      if (s.kind != DescKind::CountableUnion)
        throw ValidationError("first_category requires an enumerated union of stages");
      for (int i = 1; i <= depth; ++i) {
        RegionSet st = s.en->stage(i);
        if (!region_is_closed(st) || !is_nowhere_dense(st))
          throw ValidationError("first_category stage " + std::to_string(i) +
                                " is not closed nowhere dense");
      }
      break;
    }
    case SetClass::MeasureZero: {
      if (s.kind == DescKind::CoverBased) {
        if (!s.cover) throw ValidationError("measure_zero cover function missing");
        Rat eps(1);
        for (int j = 0; j <= 10; ++j, eps /= 2) {
          RegionSet c = s.cover(eps);
          if (cover_mass(c) > eps)
            throw ValidationError("cover mass exceeds eps = " + rat_str(eps));
          if (!region_subset(s.exact, c))
            throw ValidationError("cover does not contain the core at eps = " + rat_str(eps));
        }
      } else if (s.kind == DescKind::Exact) {
        if (region_volume(s.exact) != 0)
          throw ValidationError("measure_zero exact region has positive volume");
      } else {
        for (int i = 1; i <= depth; ++i)
          if (region_volume(s.en->stage(i)) != 0)
            throw ValidationError("measure_zero stage " + std::to_string(i) +
                                  " has positive volume");
      }
      break;
    }
    case SetClass::General:
      break;
  }
}

DenseVerdict has_dense_complement(const SetDescriptor& s, int depth) {
  if (depth < 1) throw ValidationError("depth must be >= 1");
  DenseVerdict v;
  v.depth = depth;
  if (s.kind == DescKind::Exact || s.kind == DescKind::CoverBased) {
    RegionSet inner = region_interior(s.exact);
    if (region_is_empty(inner)) {
      v.kind = DenseVerdict::Confirmed;
      v.detail = "interior is empty (decided exactly)";
    } else {
      v.kind = DenseVerdict::Refuted;
      v.witness_box = open_box_inside(inner);
      v.detail = "region has nonempty interior";
    }
    return v;
  }
  RegionSet trunc = truncation(s, depth);
  RegionSet inner = region_interior(trunc);
  if (!region_is_empty(inner)) {
    v.kind = DenseVerdict::Refuted;
    v.witness_box = open_box_inside(inner);
    v.detail = "an open box is covered by the first " + std::to_string(depth) + " stages";
    return v;
  }
  v.kind = DenseVerdict::Confirmed;
  v.detail = "confirmed to depth " + std::to_string(depth);
  return v;
}

namespace {

EnumPtr as_enumeration(const SetDescriptor& s) {
  if (s.kind == DescKind::CountableUnion) return s.en;
  return enum_list(s.dom, {s.exact});
}

}  // namespace

SetDescriptor family_union(const SetDescriptor& a, const SetDescriptor& b) {
  if (!(*a.dom == *b.dom)) throw ValidationError("family_union across domains");
  auto cat = [](SetClass c) {
    return c == SetClass::ClosedNowhereDense || c == SetClass::FirstCategory;
  };
  std::string name = a.name.empty() || b.name.empty() ? "" : a.name + "+" + b.name;
  if (a.cls == SetClass::ClosedNowhereDense && b.cls == SetClass::ClosedNowhereDense)
    return SetDescriptor::make_exact(region_union(a.exact, b.exact), SetClass::ClosedNowhereDense,
                                     name);
  if (cat(a.cls) && cat(b.cls))
    return SetDescriptor::make_union(a.dom, enum_interleave(as_enumeration(a), as_enumeration(b)),
                                     SetClass::FirstCategory, name);
  if (a.cls == SetClass::MeasureZero && b.cls == SetClass::MeasureZero) {
    if (a.kind == DescKind::CoverBased && b.kind == DescKind::CoverBased) {
      SetDescriptor s;
      s.kind = DescKind::CoverBased;
      s.cls = SetClass::MeasureZero;
      s.dom = a.dom;
      s.exact = region_union(a.exact, b.exact);
      s.name = name;
      auto ca = a.cover, cb = b.cover;
      s.cover = [ca, cb](const Rat& eps) { return region_union(ca(eps / 2), cb(eps / 2)); };
      return s;
    }
    if (a.kind == DescKind::Exact && b.kind == DescKind::Exact)
      return SetDescriptor::make_exact(region_union(a.exact, b.exact), SetClass::MeasureZero, name);
    return SetDescriptor::make_union(a.dom, enum_interleave(as_enumeration(a), as_enumeration(b)),
                                     SetClass::MeasureZero, name);
  }
  if (a.cls == SetClass::General && b.cls == SetClass::General && a.kind == DescKind::Exact &&
      b.kind == DescKind::Exact)
    return SetDescriptor::make_exact(region_union(a.exact, b.exact), SetClass::General, name);
  throw ValidationError("family_union: incompatible classes " + set_class_name(a.cls) + " and " +
                        set_class_name(b.cls));
}

ResidualVerdict is_residual_in(const SetDescriptor& s, const RegionSet& u, int depth) {
  if (region_is_empty(u) || !region_is_open(u))
    throw ValidationError("is_residual_in requires a nonempty open U");
  ResidualVerdict v;
  v.depth = depth;
  if (s.cls == SetClass::ClosedNowhereDense || s.cls == SetClass::FirstCategory) {
    // a first-category set cannot be residual in any open subset of a Baire
    // space; decided by class tag
    v.kind = ResidualVerdict::NotResidual;
    v.detail = "class " + set_class_name(s.cls) + " is never residual in an open set";
    return v;
  }
  RegionSet trunc = truncation(s, depth);
  RegionSet rest = region_difference(u, trunc);
  if (is_nowhere_dense(rest)) {
    v.kind = ResidualVerdict::ResidualWitness;
    v.detail = "U minus the depth-" + std::to_string(depth) +
               " truncation is nowhere dense, so U \\ S sits inside a first-category set";
    return v;
  }
  RegionSet survivor = region_difference(u, region_closure(trunc));
  for (const auto& c : region_simplify(survivor).cells) {
    if (cell_affine_dim(c) == u.dom->n) {
      v.kind = ResidualVerdict::NotResidual;
      v.detail = "a full-dimensional cell of U survives the truncated stages' closures";
      return v;
    }
  }
  v.kind = ResidualVerdict::Unknown;
  v.detail = "undecided at depth " + std::to_string(depth);
  return v;
}

// ---------------------------------------------------------------------------
// covers
// ---------------------------------------------------------------------------

RegionSet quadtree_cover(const RegionSet& core, const Rat& eps) {
  const DomainPtr& dom = core.dom;
  int n = dom->n;
  RegionSet simple = region_simplify(core);
  if (simple.cells.empty()) return region_empty(dom);

  Rat omega_vol(1);
  for (int i = 0; i < n; ++i) omega_vol *= dom->box[i].second - dom->box[i].first;

  struct Tile {
    std::vector<AxisRange> box;
  };
  std::vector<Tile> tiles{Tile{}};
  tiles[0].box.resize(n);
  for (int i = 0; i < n; ++i)
    tiles[0].box[i] = AxisRange{dom->box[i].first, dom->box[i].second, false, false};

  Rat tile_vol = omega_vol;
  for (int level = 0; level <= 16; ++level) {
    if (Rat(static_cast<long>(tiles.size())) * tile_vol <= eps) break;
    if (level == 16)
      throw ValidationError("no small cover found: core is not measure-zero representable");
    std::vector<Tile> next;
    for (const auto& t : tiles) {
      // split every axis at its midpoint
      std::vector<std::pair<AxisRange, AxisRange>> halves(n);
      for (int i = 0; i < n; ++i) {
        Rat mid = (t.box[i].lo + t.box[i].hi) / 2;
        halves[i] = {AxisRange{t.box[i].lo, mid, false, false},
                     AxisRange{mid, t.box[i].hi, false, false}};
      }
      for (int mask = 0; mask < (1 << n); ++mask) {
        Tile child;
        child.box.resize(n);
        for (int i = 0; i < n; ++i)
          child.box[i] = (mask >> i) & 1 ? halves[i].second : halves[i].first;
        RegionSet childbox = region_box(dom, child.box);
        if (!region_is_empty(region_intersect(childbox, simple))) next.push_back(std::move(child));
      }
    }
    tiles = std::move(next);
    tile_vol /= Rat(1 << n);
    if (tiles.empty()) break;
  }

  RegionSet out = region_empty(dom);
  for (const auto& t : tiles) out = region_union(out, region_box(dom, t.box));
  return out;
}

Rat cover_mass(const RegionSet& cover) {
  Rat total(0);
  for (const auto& c : cover.cells) {
    if (cell_empty(c)) continue;
    if (!cell_is_axis_box(c)) throw ValidationError("cover cells must be axis boxes");
    auto bb = cell_bbox(c);
    Rat v(1);
    for (const auto& r : bb) v *= r.hi - r.lo;
    total += v;
  }
  return total;
}

}  // namespace foamlab
