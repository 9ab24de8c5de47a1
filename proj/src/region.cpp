#include "foamlab/region.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace foamlab {

// ---------------------------------------------------------------------------
// constraints
// ---------------------------------------------------------------------------

Constraint Constraint::flipped() const {
  // complement of a.x <= b is -a.x < -b; complement of a.x < b is -a.x <= -b
  std::vector<Rat> na(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) na[i] = -a[i];
  return Constraint(std::move(na), Rat(-b), !strict);
}

bool Constraint::trivial() const {
  for (const auto& c : a)
    if (c != 0) return false;
  return strict ? b > 0 : b >= 0;
}

bool Constraint::infeasible() const {
  for (const auto& c : a)
    if (c != 0) return false;
  return strict ? b <= 0 : b < 0;
}

void Constraint::normalize() {
  Int num_gcd(0), den_lcm(1);
  for (const auto& c : a) {
    if (c == 0) continue;
    num_gcd = boost::multiprecision::gcd(num_gcd, boost::multiprecision::abs(rat_num(c)));
    den_lcm = boost::multiprecision::lcm(den_lcm, rat_den(c));
  }
  if (num_gcd == 0) return;  // constant constraint, leave as marker
  Rat scale(den_lcm, num_gcd);
  for (auto& c : a) c *= scale;
  b *= scale;
}

static int cmp_rat(const Rat& x, const Rat& y) { return x < y ? -1 : (y < x ? 1 : 0); }

static int cmp_constraint(const Constraint& x, const Constraint& y) {
  if (x.a.size() != y.a.size()) return x.a.size() < y.a.size() ? -1 : 1;
  for (std::size_t i = 0; i < x.a.size(); ++i)
    if (int c = cmp_rat(x.a[i], y.a[i])) return c;
  if (int c = cmp_rat(x.b, y.b)) return c;
  if (x.strict != y.strict) return x.strict ? -1 : 1;
  return 0;
}

void Cell::add(Constraint c) {
  c.normalize();
  if (c.trivial()) return;
  // dominated-constraint pruning: same normal keeps only the tightest bound
  for (auto& ex : cons) {
    if (ex.a == c.a) {
      if (c.b < ex.b || (c.b == ex.b && c.strict && !ex.strict)) ex = c;
      return;
    }
  }
  cons.push_back(std::move(c));
}

bool Cell::contains(const Point& x) const {
  for (const auto& c : cons) {
    Rat dot(0);
    for (int i = 0; i < n; ++i) dot += c.a[i] * x[i];
    if (c.strict ? !(dot < c.b) : !(dot <= c.b)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Fourier-Motzkin
// ---------------------------------------------------------------------------

namespace {

// Eliminates variable `var` (0-based). Returns false if an infeasible
// constant constraint shows up.
bool fm_eliminate(std::vector<Constraint>& cons, int var) {
  std::vector<Constraint> zero, lower, upper;
  for (auto& c : cons) {
    if (c.infeasible()) return false;
    if (c.trivial()) continue;
    if (c.a[var] == 0)
      zero.push_back(std::move(c));
    else if (c.a[var] > 0)
      upper.push_back(std::move(c));
    else
      lower.push_back(std::move(c));
  }
  std::vector<Constraint> out = std::move(zero);
  for (const auto& l : lower)
    for (const auto& u : upper) {
      Rat cl = -l.a[var];  // > 0
      Rat cu = u.a[var];   // > 0
      std::vector<Rat> na(l.a.size());
      for (std::size_t i = 0; i < na.size(); ++i) na[i] = cl * u.a[i] + cu * l.a[i];
      Constraint combined(std::move(na), cl * u.b + cu * l.b, l.strict || u.strict);
      combined.normalize();
      if (combined.infeasible()) return false;
      if (combined.trivial()) continue;
      bool dominated = false;
      for (auto& ex : out) {
        if (ex.a == combined.a) {
          if (combined.b < ex.b || (combined.b == ex.b && combined.strict && !ex.strict)) ex = combined;
          dominated = true;
          break;
        }
      }
      if (!dominated) out.push_back(std::move(combined));
    }
  cons = std::move(out);
  return true;
}

// 1-variable range extraction from constraints mentioning only `var`.
std::optional<AxisRange> one_var_range(const std::vector<Constraint>& cons, int var,
                                       const Rat& fallback_lo, const Rat& fallback_hi) {
  AxisRange r{fallback_lo, fallback_hi, true, true};
  for (const auto& c : cons) {
    if (c.infeasible()) return std::nullopt;
    if (c.trivial()) continue;
    const Rat& coef = c.a[var];
    if (coef == 0) continue;
    Rat bound = c.b / coef;
    if (coef > 0) {
      if (bound < r.hi || (bound == r.hi && c.strict)) {
        r.hi = bound;
        r.hi_strict = c.strict;
      }
    } else {
      if (bound > r.lo || (bound == r.lo && c.strict)) {
        r.lo = bound;
        r.lo_strict = c.strict;
      }
    }
  }
  if (r.empty()) return std::nullopt;
  return r;
}

}  // namespace

bool cell_empty(const Cell& c) {
  std::vector<Constraint> work = c.cons;
  for (const auto& con : work)
    if (con.infeasible()) return true;
  for (int v = c.n - 1; v >= 0; --v)
    if (!fm_eliminate(work, v)) return true;
  for (const auto& con : work)
    if (con.infeasible()) return true;
  return false;
}

namespace {

std::optional<Point> cell_sample_impl(const Cell& c, RatRng* rng) {
  std::vector<std::vector<Constraint>> stage(c.n);
  stage[c.n - 1] = c.cons;
  for (int v = c.n - 1; v >= 1; --v) {
    std::vector<Constraint> next = stage[v];
    if (!fm_eliminate(next, v)) return std::nullopt;
    stage[v - 1] = std::move(next);
  }
  {
    std::vector<Constraint> final0 = stage[0];
    if (!fm_eliminate(final0, 0)) return std::nullopt;
    for (const auto& con : final0)
      if (con.infeasible()) return std::nullopt;
  }
  Point x(c.n);
  const Rat wide(1000000000);
  for (int v = 0; v < c.n; ++v) {
    std::vector<Constraint> sub;
    for (const auto& con : stage[v]) {
      Constraint s = con;
      Rat shift(0);
      for (int j = 0; j < v; ++j) {
        shift += s.a[j] * x[j];
        s.a[j] = Rat(0);
      }
      s.b -= shift;
      sub.push_back(std::move(s));
    }
    auto r = one_var_range(sub, v, -wide, wide);
    if (!r) return std::nullopt;
    if (r->lo == r->hi) {
      x[v] = r->lo;
    } else if (rng) {
      // stay away from open endpoints by sampling the middle half
      Rat quarter = (r->hi - r->lo) / 4;
      x[v] = rng->between(r->lo + quarter / 2, r->hi - quarter / 2);
    } else {
      x[v] = (r->lo + r->hi) / 2;
    }
  }
  return x;
}

}  // namespace

std::optional<Point> cell_sample_random(const Cell& c, RatRng& rng) {
  return cell_sample_impl(c, &rng);
}

std::optional<Point> cell_sample(const Cell& c) { return cell_sample_impl(c, nullptr); }

int cell_affine_dim(const Cell& c) {
  if (cell_empty(c)) return -1;
  std::vector<std::vector<Rat>> normals;
  for (const auto& con : c.cons) {
    if (con.strict) continue;  // strict faces of a nonempty cell are never tight everywhere
    Cell probe = c;
    probe.cons.push_back(con.strictified());
    if (cell_empty(probe)) normals.push_back(con.a);
  }
  // rational Gaussian elimination for the rank of the forced normals
  int rank = 0;
  int n = c.n;
  std::vector<std::vector<Rat>> rows = std::move(normals);
  for (int col = 0; col < n && rank < static_cast<int>(rows.size()); ++col) {
    int pivot = -1;
    for (int r = rank; r < static_cast<int>(rows.size()); ++r)
      if (rows[r][col] != 0) {
        pivot = r;
        break;
      }
    if (pivot < 0) continue;
    std::swap(rows[rank], rows[pivot]);
    for (int r = 0; r < static_cast<int>(rows.size()); ++r) {
      if (r == rank || rows[r][col] == 0) continue;
      Rat f = rows[r][col] / rows[rank][col];
      for (int j = 0; j < n; ++j) rows[r][j] -= f * rows[rank][j];
    }
    ++rank;
  }
  return n - rank;
}

std::vector<AxisRange> cell_bbox(const Cell& c) {
  std::vector<AxisRange> out;
  const Rat wide(1000000000);
  for (int axis = 0; axis < c.n; ++axis) {
    std::vector<Constraint> work = c.cons;
    for (int v = c.n - 1; v >= 0; --v) {
      if (v == axis) continue;
      fm_eliminate(work, v);
    }
    auto r = one_var_range(work, axis, -wide, wide);
    if (!r) return {};  // empty cell
    out.push_back(*r);
  }
  return out;
}

Cell cell_intersect(const Cell& a, const Cell& b) {
  Cell r = a;
  for (const auto& con : b.cons) r.add(con);
  return r;
}

bool cell_is_axis_box(const Cell& c) {
  for (const auto& con : c.cons) {
    int nz = 0;
    for (const auto& v : con.a)
      if (v != 0) ++nz;
    if (nz > 1) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// region construction
// ---------------------------------------------------------------------------

namespace {

std::vector<Constraint> omega_constraints(const Domain& d) {
  std::vector<Constraint> out;
  for (int i = 0; i < d.n; ++i) {
    std::vector<Rat> lo(d.n, Rat(0)), hi(d.n, Rat(0));
    lo[i] = Rat(-1);
    hi[i] = Rat(1);
    out.emplace_back(std::move(lo), Rat(-d.box[i].first), true);  // -x_i < -lo
    out.emplace_back(std::move(hi), d.box[i].second, true);       // x_i < hi
  }
  return out;
}

// True when Omega itself implies the half-space (sup of a.x over the open box
// is <= b; the sup is not attained, so equality is fine for both relations).
bool omega_implies(const Domain& d, const Constraint& c) {
  Rat sup(0);
  for (int i = 0; i < d.n; ++i) sup += c.a[i] > 0 ? c.a[i] * d.box[i].second : c.a[i] * d.box[i].first;
  return sup <= c.b;
}

void check_same_domain(const RegionSet& a, const RegionSet& b) {
  if (!a.dom || !b.dom || !(*a.dom == *b.dom))
    throw ValidationError("region operation across different domains");
}

std::string cell_key(const Cell& c) {
  std::string s;
  for (const auto& con : c.cons) s += constraint_str(con) + ";";
  return s;
}

Cell sorted_cell(Cell c) {
  std::sort(c.cons.begin(), c.cons.end(),
            [](const Constraint& x, const Constraint& y) { return cmp_constraint(x, y) < 0; });
  return c;
}

}  // namespace

RegionSet region_omega(const DomainPtr& dom) {
  RegionSet r(dom);
  Cell c(dom->n);
  for (auto& con : omega_constraints(*dom)) c.add(std::move(con));
  r.cells.push_back(std::move(c));
  return r;
}

RegionSet region_empty(const DomainPtr& dom) { return RegionSet(dom); }

RegionSet region_from_cell(const DomainPtr& dom, const std::vector<Constraint>& cons) {
  RegionSet r(dom);
  Cell c(dom->n);
  for (auto& con : omega_constraints(*dom)) c.add(std::move(con));
  for (const auto& con : cons) {
    if (static_cast<int>(con.a.size()) != dom->n)
      throw ValidationError("constraint dimension mismatch");
    c.add(con);
  }
  if (!cell_empty(c)) r.cells.push_back(std::move(c));
  return r;
}

RegionSet region_point(const DomainPtr& dom, const Point& x) {
  std::vector<Constraint> cons;
  for (int i = 0; i < dom->n; ++i) {
    std::vector<Rat> up(dom->n, Rat(0)), down(dom->n, Rat(0));
    up[i] = Rat(1);
    down[i] = Rat(-1);
    cons.emplace_back(std::move(up), x[i], false);
    cons.emplace_back(std::move(down), Rat(-x[i]), false);
  }
  return region_from_cell(dom, cons);
}

RegionSet region_box(const DomainPtr& dom, const std::vector<AxisRange>& ranges) {
  std::vector<Constraint> cons;
  for (int i = 0; i < dom->n; ++i) {
    std::vector<Rat> up(dom->n, Rat(0)), down(dom->n, Rat(0));
    up[i] = Rat(1);
    down[i] = Rat(-1);
    cons.emplace_back(std::move(up), ranges[i].hi, ranges[i].hi_strict);
    cons.emplace_back(std::move(down), Rat(-ranges[i].lo), ranges[i].lo_strict);
  }
  return region_from_cell(dom, cons);
}

bool RegionSet::contains(const Point& x) const {
  for (const auto& c : cells)
    if (c.contains(x)) return true;
  return false;
}

// ---------------------------------------------------------------------------
// set operations
// ---------------------------------------------------------------------------

RegionSet region_union(const RegionSet& a, const RegionSet& b) {
  check_same_domain(a, b);
  RegionSet r = a;
  r.cells.insert(r.cells.end(), b.cells.begin(), b.cells.end());
  return r;
}

RegionSet region_intersect(const RegionSet& a, const RegionSet& b) {
  check_same_domain(a, b);
  RegionSet r(a.dom);
  for (const auto& ca : a.cells)
    for (const auto& cb : b.cells) {
      Cell c = cell_intersect(ca, cb);
      if (!cell_empty(c)) r.cells.push_back(std::move(c));
    }
  return r;
}

namespace {

// a \ b as a disjoint list of cells ("first violated constraint" peeling);
// constraints implied by Omega are skipped since a stays inside Omega.
std::vector<Cell> cell_difference(const Cell& a, const Cell& b, const Domain& dom) {
  std::vector<Cell> out;
  Cell acc = a;
  for (const auto& con : b.cons) {
    if (omega_implies(dom, con)) continue;
    Cell piece = acc;
    piece.add(con.flipped());
    if (!cell_empty(piece)) out.push_back(std::move(piece));
    acc.add(con);
  }
  return out;
}

}  // namespace

RegionSet region_difference(const RegionSet& a, const RegionSet& b) {
  check_same_domain(a, b);
  std::vector<Cell> work = a.cells;
  for (const auto& cb : b.cells) {
    std::vector<Cell> next;
    for (const auto& ca : work) {
      auto pieces = cell_difference(ca, cb, *a.dom);
      next.insert(next.end(), pieces.begin(), pieces.end());
    }
    work = std::move(next);
    if (work.empty()) break;
  }
  RegionSet r(a.dom);
  r.cells = std::move(work);
  return r;
}

RegionSet region_complement(const RegionSet& a) {
  return region_difference(region_omega(a.dom), a);
}

RegionSet region_closure(const RegionSet& a) {
  RegionSet r(a.dom);
  auto omega = omega_constraints(*a.dom);
  for (const auto& c : a.cells) {
    if (cell_empty(c)) continue;
    Cell w(c.n);
    for (const auto& con : c.cons) w.add(con.weakened());
    for (const auto& con : omega) w.add(con);  // closure in R^n, then clip back to Omega
    if (!cell_empty(w)) r.cells.push_back(std::move(w));
  }
  return r;
}

RegionSet region_interior(const RegionSet& a) {
  return region_complement(region_closure(region_complement(a)));
}

RegionSet region_simplify(const RegionSet& a) {
  RegionSet r(a.dom);
  std::set<std::string> seen;
  for (const auto& c : a.cells) {
    if (cell_empty(c)) continue;
    Cell s = sorted_cell(c);
    std::string key = cell_key(s);
    if (seen.insert(key).second) r.cells.push_back(std::move(s));
  }
  std::sort(r.cells.begin(), r.cells.end(),
            [](const Cell& x, const Cell& y) { return cell_key(x) < cell_key(y); });
  return r;
}

RegionSet region_regular_part(const RegionSet& a) {
  RegionSet r(a.dom);
  auto omega = omega_constraints(*a.dom);
  for (const auto& c : a.cells) {
    Cell inner(c.n);
    for (const auto& con : c.cons) inner.add(con.strictified());
    if (cell_empty(inner)) continue;
    Cell w(c.n);
    for (const auto& con : inner.cons) w.add(con.weakened());
    for (const auto& con : omega) w.add(con);
    r.cells.push_back(std::move(w));
  }
  return r;
}

bool region_is_empty(const RegionSet& a) {
  for (const auto& c : a.cells)
    if (!cell_empty(c)) return false;
  return true;
}

namespace {

bool cell_minus_region_empty(const Cell& a, const std::vector<Cell>& cells, std::size_t from,
                             const Domain& dom) {
  if (cell_empty(a)) return true;
  if (from == cells.size()) return false;
  for (const auto& piece : cell_difference(a, cells[from], dom))
    if (!cell_minus_region_empty(piece, cells, from + 1, dom)) return false;
  return true;
}

}  // namespace

bool region_subset(const RegionSet& a, const RegionSet& b) {
  check_same_domain(a, b);
  for (const auto& ca : a.cells)
    if (!cell_minus_region_empty(ca, b.cells, 0, *a.dom)) return false;
  return true;
}

bool region_equal(const RegionSet& a, const RegionSet& b) {
  return region_subset(a, b) && region_subset(b, a);
}

bool region_is_open(const RegionSet& a) { return region_equal(a, region_interior(a)); }
bool region_is_closed(const RegionSet& a) { return region_equal(a, region_closure(a)); }

std::optional<Point> region_sample(const RegionSet& a) {
  for (const auto& c : a.cells)
    if (auto p = cell_sample(c)) return p;
  return std::nullopt;
}

bool is_nowhere_dense(const RegionSet& a) {
  RegionSet cl = region_closure(region_simplify(a));
  for (const auto& c : cl.cells)
    if (cell_affine_dim(c) == a.dom->n) return false;
  return true;
}

// ---------------------------------------------------------------------------
// volume
// ---------------------------------------------------------------------------

Rat region_volume(const RegionSet& a) {
  int n = a.dom->n;
  std::vector<Cell> boxes;
  for (const auto& c : a.cells) {
    if (cell_empty(c)) continue;
    if (cell_affine_dim(c) < n) continue;  // degenerate cells have exact volume 0
    if (!cell_is_axis_box(c))
      throw ValidationError("volume: full-dimensional cells must be axis-aligned boxes");
    boxes.push_back(c);
  }
  if (boxes.empty()) return Rat(0);
  // coordinate sweep: breakpoints per axis, midpoint membership per grid cell
  std::vector<std::vector<Rat>> cuts(n);
  for (const auto& c : boxes) {
    auto bb = cell_bbox(c);
    for (int i = 0; i < n; ++i) {
      cuts[i].push_back(bb[i].lo);
      cuts[i].push_back(bb[i].hi);
    }
  }
  for (auto& v : cuts) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  }
  Rat total(0);
  std::vector<std::size_t> idx(n, 0);
  auto rec = [&](auto&& self, int axis, Rat vol, Point& mid) -> void {
    if (axis == n) {
      for (const auto& c : boxes)
        if (c.contains(mid)) {
          total += vol;
          return;
        }
      return;
    }
    for (std::size_t i = 0; i + 1 < cuts[axis].size(); ++i) {
      Rat w = cuts[axis][i + 1] - cuts[axis][i];
      if (w == 0) continue;
      mid[axis] = (cuts[axis][i] + cuts[axis][i + 1]) / 2;
      self(self, axis + 1, vol * w, mid);
    }
  };
  Point mid(n);
  rec(rec, 0, Rat(1), mid);
  return total;
}

// ---------------------------------------------------------------------------
// auxiliary geometry
// ---------------------------------------------------------------------------

std::optional<std::vector<AxisRange>> open_box_inside(const RegionSet& open_region) {
  int n = open_region.dom->n;
  for (const auto& c : open_region.cells) {
    Cell inner(c.n);
    for (const auto& con : c.cons) inner.add(con.strictified());
    auto p = cell_sample(inner);
    if (!p) continue;
    // largest L-inf margin before any constraint of the open cell is hit
    Rat r(-1);
    for (const auto& con : inner.cons) {
      Rat dot(0), norm1(0);
      for (int i = 0; i < n; ++i) {
        dot += con.a[i] * (*p)[i];
        norm1 += rat_abs(con.a[i]);
      }
      if (norm1 == 0) continue;
      Rat slack = (con.b - dot) / norm1;
      if (r < 0 || slack < r) r = slack;
    }
    if (r <= 0) continue;
    r /= 2;
    std::vector<AxisRange> box(n);
    for (int i = 0; i < n; ++i) box[i] = AxisRange{(*p)[i] - r, (*p)[i] + r, true, true};
    return box;
  }
  return std::nullopt;
}

RegionSet region_fatten(const RegionSet& a, const Rat& pad) {
  RegionSet r(a.dom);
  for (const auto& c : a.cells) {
    if (cell_empty(c)) continue;
    Cell f(c.n);
    for (const auto& con : c.cons) {
      Rat norm1(0);
      for (const auto& v : con.a) norm1 += rat_abs(v);
      f.add(Constraint(con.a, con.b + pad * norm1, con.strict));
    }
    r.cells.push_back(std::move(f));
  }
  return r;
}

std::vector<IV> region_axis_bounds(const RegionSet& a) {
  int n = a.dom->n;
  std::vector<IV> out;
  bool any = false;
  std::vector<Rat> lo(n), hi(n);
  for (const auto& c : a.cells) {
    auto bb = cell_bbox(c);
    if (bb.empty()) continue;
    for (int i = 0; i < n; ++i) {
      if (!any) {
        lo[i] = bb[i].lo;
        hi[i] = bb[i].hi;
      } else {
        lo[i] = std::min(lo[i], bb[i].lo);
        hi[i] = std::max(hi[i], bb[i].hi);
      }
    }
    any = true;
  }
  if (!any) {
    for (int i = 0; i < n; ++i) out.push_back(IV::of(a.dom->box[i].first, a.dom->box[i].second));
    return out;
  }
  for (int i = 0; i < n; ++i) out.push_back(IV::of(lo[i], hi[i]));
  return out;
}

std::vector<Point> region_sample_many(const RegionSet& a, int want, RatRng& rng) {
  std::vector<Point> out;
  for (const auto& c : a.cells) {
    if (static_cast<int>(out.size()) >= want) break;
    if (auto p = cell_sample(c)) out.push_back(*p);
  }
  int guard = want * 40;
  while (static_cast<int>(out.size()) < want && guard-- > 0) {
    for (const auto& c : a.cells) {
      auto bb = cell_bbox(c);
      if (bb.empty()) continue;
      Point p(a.dom->n);
      for (int i = 0; i < a.dom->n; ++i) p[i] = rng.between(bb[i].lo, bb[i].hi);
      if (c.contains(p)) out.push_back(p);
      if (static_cast<int>(out.size()) >= want) break;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// printing
// ---------------------------------------------------------------------------

std::string constraint_str(const Constraint& c) {
  std::string s;
  bool first = true;
  for (std::size_t i = 0; i < c.a.size(); ++i) {
    if (c.a[i] == 0) continue;
    Rat v = c.a[i];
    if (first) {
      if (v < 0) s += "-";
    } else {
      s += v < 0 ? " - " : " + ";
    }
    Rat mag = v < 0 ? Rat(-v) : v;
    if (mag != 1) s += rat_str(mag) + "*";
    s += "x" + std::to_string(i + 1);
    first = false;
  }
  if (first) s += "0";
  s += c.strict ? " < " : " <= ";
  s += rat_str(c.b);
  return s;
}

std::string RegionSet::str() const {
  if (cells.empty()) return "{}";
  std::string s;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) s += " | ";
    s += "{";
    for (std::size_t j = 0; j < cells[i].cons.size(); ++j) {
      if (j) s += ", ";
      s += constraint_str(cells[i].cons[j]);
    }
    s += "}";
  }
  return s;
}

}  // namespace foamlab
