#pragma once

#include "foamlab/common.hpp"
#include "foamlab/expr.hpp"  // IV
#include "foamlab/rational.hpp"

#include <optional>
#include <string>
#include <vector>

namespace foamlab {

// ---------------------------------------------------------------------------
// Exact rational polyhedral set calculus inside the open box Omega. A Cell is
// a conjunction of half-space constraints (weak or strict), always clipped to
// Omega; a RegionSet is a finite union of cells. Emptiness, containment,
// interior, closure, affine dimension and volume are all decided exactly.
// ---------------------------------------------------------------------------

/// a . x <= b (weak) or a . x < b (strict); `a` is kept primitive-integer.
struct Constraint {
  std::vector<Rat> a;
  Rat b;
  bool strict = false;

  Constraint() = default;
  Constraint(std::vector<Rat> coeffs, Rat rhs, bool is_strict)
      : a(std::move(coeffs)), b(std::move(rhs)), strict(is_strict) {}

  Constraint flipped() const;    // the complementary half-space (negated, strictness toggled)
  Constraint weakened() const { return Constraint(a, b, false); }
  Constraint strictified() const { return Constraint(a, b, true); }
  bool trivial() const;          // 0 <= b with b >= 0 (or 0 < b with b > 0)
  bool infeasible() const;       // 0 <= b with b < 0 (or 0 < b with b <= 0)
  void normalize();              // scale so that a is a primitive integer vector
  bool same_halfspace(const Constraint& o) const { return a == o.a && b == o.b && strict == o.strict; }
};

using Point = std::vector<Rat>;

struct Cell {
  int n = 1;
  std::vector<Constraint> cons;

  Cell() = default;
  explicit Cell(int dim) : n(dim) {}

  void add(Constraint c);
  bool contains(const Point& x) const;
};

/// Per-axis exact range of a cell: [lo, hi] with openness flags.
struct AxisRange {
  Rat lo, hi;
  bool lo_strict = false, hi_strict = false;
  bool empty() const { return lo > hi || (lo == hi && (lo_strict || hi_strict)); }
};

// -- cell-level primitives ----------------------------------------------------
bool cell_empty(const Cell& c);
std::optional<Point> cell_sample(const Cell& c);             // relative-interior-ish point
/// Random point of the cell (exact member, random within the feasible ranges
/// axis by axis). Works for degenerate cells, where rejection sampling fails.
std::optional<Point> cell_sample_random(const Cell& c, RatRng& rng);
int cell_affine_dim(const Cell& c);                          // -1 when empty
std::vector<AxisRange> cell_bbox(const Cell& c);             // exact per-axis ranges (cell nonempty)
Cell cell_intersect(const Cell& a, const Cell& b);
bool cell_is_axis_box(const Cell& c);

struct RegionSet {
  DomainPtr dom;
  std::vector<Cell> cells;  // union; may overlap

  RegionSet() = default;
  explicit RegionSet(DomainPtr d) : dom(std::move(d)) {}

  int dim() const { return dom ? dom->n : 0; }
  bool is_empty_syntactic() const { return cells.empty(); }
  bool contains(const Point& x) const;
  std::string str() const;
};

/// Omega itself, as a region (one cell holding only the box constraints).
RegionSet region_omega(const DomainPtr& dom);
RegionSet region_empty(const DomainPtr& dom);
/// A cell from raw constraints, clipped to Omega.
RegionSet region_from_cell(const DomainPtr& dom, const std::vector<Constraint>& cons);
/// Single point (degenerate cell).
RegionSet region_point(const DomainPtr& dom, const Point& x);
/// Axis-aligned box with per-axis closedness.
RegionSet region_box(const DomainPtr& dom, const std::vector<AxisRange>& ranges);

// -- set operations (all exact, all relative to Omega) -------------------------
RegionSet region_union(const RegionSet& a, const RegionSet& b);
RegionSet region_intersect(const RegionSet& a, const RegionSet& b);
RegionSet region_complement(const RegionSet& a);              // Omega \ a
RegionSet region_difference(const RegionSet& a, const RegionSet& b);
RegionSet region_closure(const RegionSet& a);                 // closure in R^n, clipped to Omega
RegionSet region_interior(const RegionSet& a);                // interior relative to Omega
RegionSet region_simplify(const RegionSet& a);                // drop empty cells, dedup constraints
/// Union of cl(int(cell)) over cells: the full-dimensional regular part, on
/// which literal vanishing propagates to all derivative orders.
RegionSet region_regular_part(const RegionSet& a);

bool region_is_empty(const RegionSet& a);
bool region_subset(const RegionSet& a, const RegionSet& b);
bool region_equal(const RegionSet& a, const RegionSet& b);
bool region_is_open(const RegionSet& a);
bool region_is_closed(const RegionSet& a);
std::optional<Point> region_sample(const RegionSet& a);

/// Exactly true iff every cell of the closure has affine dimension < n.
bool is_nowhere_dense(const RegionSet& a);

/// Exact rational volume. Full-dimensional cells must be axis boxes;
/// degenerate cells (affine dimension < n) contribute exactly 0.
Rat region_volume(const RegionSet& a);

/// An open axis box inside the (open) region, when the region has interior.
std::optional<std::vector<AxisRange>> open_box_inside(const RegionSet& open_region);

/// Enlarges every cell by `pad` in the L-infinity sense (outer approximation;
/// used only for reported oracle-vs-certificate comparisons).
RegionSet region_fatten(const RegionSet& a, const Rat& pad);

/// Closed-hull per-axis intervals of a region (for interval evaluation).
std::vector<IV> region_axis_bounds(const RegionSet& a);

/// Deterministic sample points inside a region: cell samples plus jittered
/// lattice points, capped at `want`.
std::vector<Point> region_sample_many(const RegionSet& a, int want, RatRng& rng);

std::string constraint_str(const Constraint& c);

}  // namespace foamlab
