#include "foamlab/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <thread>

namespace foamlab {

namespace {

constexpr double kOracleTol = 1e-9;

struct FastConstraint {
  std::vector<double> a;
  double b;
  bool strict;
  const Constraint* exact;
};

struct FastPiece {
  std::vector<std::vector<FastConstraint>> cells;
  const Expr* expr;
};

struct FastInstance {
  std::vector<FastPiece> pieces;
};

FastInstance compile(const PiecewiseExpr& pw) {
  FastInstance out;
  for (const auto& piece : pw.pieces) {
    FastPiece fp;
    fp.expr = &piece.expr;
    for (const auto& cell : piece.region.cells) {
      std::vector<FastConstraint> fc;
      for (const auto& con : cell.cons) {
        FastConstraint f;
        f.b = to_double(con.b);
        f.strict = con.strict;
        f.exact = &con;
        for (const auto& v : con.a) f.a.push_back(to_double(v));
        fc.push_back(std::move(f));
      }
      fp.cells.push_back(std::move(fc));
    }
    out.pieces.push_back(std::move(fp));
  }
  return out;
}

// double-first membership with an exact fallback near constraint boundaries
bool fast_contains(const FastPiece& p, const std::vector<double>& xd, const Point& xr) {
  for (const auto& cell : p.cells) {
    bool ok = true;
    for (const auto& con : cell) {
      double dot = 0;
      for (std::size_t i = 0; i < con.a.size(); ++i) dot += con.a[i] * xd[i];
      double slack = con.b - dot;
      if (slack > 1e-12) continue;
      if (slack < -1e-12) {
        ok = false;
        break;
      }
      // boundary case: decide exactly
      Rat rdot(0);
      for (std::size_t i = 0; i < con.exact->a.size(); ++i) rdot += con.exact->a[i] * xr[i];
      if (con.strict ? !(rdot < con.exact->b) : !(rdot <= con.exact->b)) {
        ok = false;
        break;
      }
    }
    if (ok) return true;
  }
  return false;
}

double eval_fast(const FastInstance& inst, const std::vector<double>& xd, const Point& xr) {
  for (const auto& piece : inst.pieces)
    if (fast_contains(piece, xd, xr)) return eval(*piece.expr, xd);
  return 0.0;  // grid points are interior, so this only happens on rounding slivers
}

int worker_count() {
  const char* env = std::getenv("FOAMLAB_THREADS");
  unsigned hw = std::thread::hardware_concurrency();
  int n = env ? std::atoi(env) : static_cast<int>(hw ? hw : 1);
  return std::max(1, std::min(n, 16));
}

}  // namespace

OracleVerdict brute_force_membership(const Net& u, const IdealFamily& f, const Rat& h, int M,
                                     int P, const RegionSet* reference) {
  if (h > Rat(1, 8)) throw ValidationError("oracle grid step must be <= 1/8");
  const DomainPtr& dom = u.domain();
  int n = dom->n;

  // derivative nets, order 0 first
  auto orders = multi_indices_up_to(n, P, true);
  std::vector<Net> derivs;
  for (const auto& p : orders) derivs.push_back(p.is_zero() ? u : net_diff(u, p));

  // per index: compiled instances of each derivative
  std::vector<std::vector<FastInstance>> table(M + 1);
  for (int nu = 1; nu <= M; ++nu)
    for (const auto& d : derivs) table[nu].push_back(compile(d.instantiate(nu)));

  // rational grid, interior points only
  std::vector<std::vector<Rat>> axes(n);
  for (int i = 0; i < n; ++i) {
    for (Rat x = dom->box[i].first + h; x < dom->box[i].second; x += h) axes[i].push_back(x);
  }
  std::vector<Point> grid;
  {
    Point cur(n);
    auto rec = [&](auto&& self, int axis) -> void {
      if (axis == n) {
        grid.push_back(cur);
        return;
      }
      for (const auto& v : axes[axis]) {
        cur[axis] = v;
        self(self, axis + 1);
      }
    };
    rec(rec, 0);
  }

  struct PointOutcome {
    bool bad = false;
    double worst = 0;
  };
  std::vector<PointOutcome> outcomes(grid.size());

  auto run_range = [&](std::size_t from, std::size_t to) {
    std::vector<double> xd(n);
    for (std::size_t gi = from; gi < to; ++gi) {
      const Point& x = grid[gi];
      for (int i = 0; i < n; ++i) xd[i] = to_double(x[i]);
      // scan from the top of the chain for the first dirty index
      double top_worst = 0;
      bool top_recorded = false;
      bool bad = false;
      for (int nu = M; nu >= 1; --nu) {
        double worst = 0;
        for (const auto& inst : table[nu]) worst = std::max(worst, std::abs(eval_fast(inst, xd, x)));
        if (!top_recorded) {
          top_worst = worst;
          top_recorded = true;
        }
        if (worst > kOracleTol) {
          bad = nu == M;
          break;
        }
      }
      outcomes[gi].bad = bad;
      outcomes[gi].worst = top_worst;
    }
  };

  int workers = worker_count();
  if (workers <= 1 || grid.size() < 256) {
    run_range(0, grid.size());
  } else {
    std::vector<std::thread> pool;
    std::size_t chunk = (grid.size() + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      std::size_t from = w * chunk, to = std::min(grid.size(), (w + 1) * chunk);
      if (from >= to) break;
      pool.emplace_back(run_range, from, to);
    }
    for (auto& t : pool) t.join();
  }

  OracleVerdict v;
  v.stats.grid_points = static_cast<long long>(grid.size());
  RegionSet fat = reference ? region_fatten(*reference, h) : RegionSet(dom);
  std::optional<Point> worst_outside;
  double worst_outside_val = -1;
  std::optional<Point> worst_overall;
  double worst_overall_val = -1;
  long long outside = 0;
  for (std::size_t gi = 0; gi < grid.size(); ++gi) {
    if (!outcomes[gi].bad) continue;
    ++v.stats.bad_points;
    if (v.stats.bad.size() < 10000)
      v.stats.bad.push_back(OracleBadPoint{grid[gi], outcomes[gi].worst});
    if (outcomes[gi].worst > worst_overall_val) {
      worst_overall_val = outcomes[gi].worst;
      worst_overall = grid[gi];
    }
    if (reference && !fat.contains(grid[gi])) {
      ++outside;
      if (outcomes[gi].worst > worst_outside_val) {
        worst_outside_val = outcomes[gi].worst;
        worst_outside = grid[gi];
      }
    }
  }
  v.stats.bad_fraction =
      grid.empty() ? 0 : static_cast<double>(v.stats.bad_points) / static_cast<double>(grid.size());
  v.fraction = v.stats.bad_fraction;

  char buf[160];
  if (reference) {
    if (outside == 0) {
      v.kind = OracleVerdict::NoCounterexample;
      std::snprintf(buf, sizeof(buf),
                    "%lld bad of %lld grid points, all within h of the reference set",
                    v.stats.bad_points, v.stats.grid_points);
      v.detail = buf;
    } else {
      v.kind = OracleVerdict::Counterexample;
      v.counterexample = worst_outside;
      std::snprintf(buf, sizeof(buf), "%lld bad points escape the h-fattened reference set",
                    outside);
      v.detail = buf;
    }
  } else {
    // no reference: report the fraction a thin singular set would permit
    if (f.kind == FamilyKind::M0) {
      double bad_volume = static_cast<double>(v.stats.bad_points) * std::pow(to_double(h), n);
      bool small = bad_volume <= 1.0 / 1024.0 + to_double(h);
      v.kind = small ? OracleVerdict::NoCounterexample : OracleVerdict::Counterexample;
      std::snprintf(buf, sizeof(buf), "bad volume %.6g vs measure-zero budget 2^-10 + h",
                    bad_volume);
      v.detail = buf;
    } else {
      bool small = v.stats.bad_fraction <= 0.05;
      v.kind = small ? OracleVerdict::NoCounterexample : OracleVerdict::Counterexample;
      std::snprintf(buf, sizeof(buf), "bad fraction %.6g (reported, not asserted)",
                    v.stats.bad_fraction);
      v.detail = buf;
    }
    if (v.kind == OracleVerdict::Counterexample) v.counterexample = worst_overall;
  }
  return v;
}

std::string oracle_csv(const OracleVerdict& v, int dim) {
  std::string out;
  for (int i = 0; i < dim; ++i) out += (i ? "," : "") + std::string("x") + std::to_string(i + 1);
  out += ",min_mu,top_magnitude\r\n";
  char buf[64];
  for (const auto& bp : v.stats.bad) {
    for (int i = 0; i < dim; ++i) {
      std::snprintf(buf, sizeof(buf), "%.12g", to_double(bp.x[i]));
      out += (i ? "," : "") + std::string(buf);
    }
    std::snprintf(buf, sizeof(buf), "%.12g", bp.worst);
    out += ",NONE," + std::string(buf) + "\r\n";
  }
  return out;
}

}  // namespace foamlab
