#include "foamlab/nets.hpp"

#include <algorithm>
#include <map>
#include <mutex>

namespace foamlab {

// ---------------------------------------------------------------------------
// index sets
// ---------------------------------------------------------------------------

IndexSet IndexSet::cofinal_mapped(std::vector<long long> labels) {
  IndexSet s;
  s.kind = IndexKind::CofinalMapped;
  s.chain = std::move(labels);
  return s;
}

Rat IndexSet::rate(int m) const {
  if (m < 1) throw ValidationError("chain positions are 1-based");
  switch (kind) {
    case IndexKind::Naturals:
    case IndexKind::ProductNN:
      return Rat(m);
    case IndexKind::CofinalMapped: {
      auto w = is_countably_cofinal(*this);
      if (!w.ok) throw ValidationError("index set rejected: " + w.reason);
      int len = static_cast<int>(chain.size());
      if (m <= len) return Rat(chain[m - 1]);
      // extend the explicit prefix arithmetically with its last gap
      long long gap = len >= 2 ? chain[len - 1] - chain[len - 2] : 1;
      return Rat(chain[len - 1] + gap * (m - len));
    }
  }
  return Rat(m);
}

std::string IndexSet::label(int m) const {
  switch (kind) {
    case IndexKind::Naturals:
      return std::to_string(m);
    case IndexKind::CofinalMapped:
      return rat_str(rate(m));
    case IndexKind::ProductNN:
      return "(" + std::to_string(m) + "," + std::to_string(m) + ")";
  }
  return "?";
}

CofinalWitness is_countably_cofinal(const IndexSet& idx) {
  CofinalWitness w;
  switch (idx.kind) {
    case IndexKind::Naturals:
      w.ok = true;
      w.chain_desc = "identity chain m -> m";
      return w;
    case IndexKind::ProductNN:
      w.ok = true;
      w.chain_desc = "diagonal chain m -> (m,m); (a,b) <= (max(a,b),max(a,b)) componentwise";
      return w;
    case IndexKind::CofinalMapped: {
      if (idx.chain.empty()) {
        w.reason = "empty chain";
        return w;
      }
      long long prev = 0;
      for (std::size_t i = 0; i < idx.chain.size(); ++i) {
        if (idx.chain[i] < 1) {
          w.reason = "chain labels must be positive (label " + std::to_string(idx.chain[i]) + ")";
          return w;
        }
        if (i > 0 && idx.chain[i] <= prev) {
          w.reason = "chain is not strictly increasing at position " + std::to_string(i + 1);
          return w;
        }
        prev = idx.chain[i];
      }
      w.ok = true;
      w.chain_desc = "explicit chain of " + std::to_string(idx.chain.size()) +
                     " labels, extended arithmetically";
      return w;
    }
  }
  w.reason = "unknown index kind";
  return w;
}

// ---------------------------------------------------------------------------
// piecewise expressions
// ---------------------------------------------------------------------------

namespace {

std::string piece_sort_key(const Piece& p) { return region_simplify(p.region).str(); }

void sort_pieces(std::vector<Piece>& pieces) {
  std::stable_sort(pieces.begin(), pieces.end(), [](const Piece& a, const Piece& b) {
    return piece_sort_key(a) < piece_sort_key(b);
  });
}

Expr simplify_on(const Expr& e, const RegionSet& r) {
  if (e.is_zero() || region_is_empty(r)) return e;
  return simplify_with_bounds(e, region_axis_bounds(r));
}

void validate_inv_guards(const Expr& e, const RegionSet& r) {
  auto bad = unguarded_inv_atoms(e, region_axis_bounds(r));
  if (!bad.empty())
    throw ValidationError("inv guard not satisfied on piece " + r.str() + ": " + bad.front());
}

void check_gluing(const DomainPtr& dom, const std::vector<Piece>& pieces,
                  const PiecewiseOptions& opts) {
  RatRng rng(opts.seed + 0x9e3779b9ull);
  int n = dom->n;
  for (std::size_t i = 0; i < pieces.size(); ++i)
    for (std::size_t j = i + 1; j < pieces.size(); ++j) {
      if (pieces[i].expr == pieces[j].expr) continue;
      RegionSet facet = region_simplify(region_intersect(region_closure(pieces[i].region),
                                                         region_closure(pieces[j].region)));
      if (region_is_empty(facet)) continue;
      for (const auto& cell : facet.cells) {
        int want = cell_affine_dim(cell) <= 0 ? 1 : opts.gluing_samples;
        for (int s = 0; s < want; ++s) {
          auto p = cell_sample_random(cell, rng);
          if (!p) break;
          std::vector<double> x(n);
          for (int a = 0; a < n; ++a) x[a] = to_double((*p)[a]);
          double vi = eval(pieces[i].expr, x), vj = eval(pieces[j].expr, x);
          double scale = std::max({1.0, std::abs(vi), std::abs(vj)});
          if (std::abs(vi - vj) > opts.gluing_tol * scale)
            throw ValidationError("piece gluing violated: values differ by " +
                                  std::to_string(std::abs(vi - vj)) + " at a shared facet");
          for (int a = 1; a <= n; ++a) {
            double di = eval(diff_axis(pieces[i].expr, a), x);
            double dj = eval(diff_axis(pieces[j].expr, a), x);
            double dscale = std::max({1.0, std::abs(di), std::abs(dj)});
            if (std::abs(di - dj) > opts.gluing_tol * dscale)
              throw ValidationError("piece gluing violated: derivative mismatch at a shared facet");
          }
        }
      }
    }
}

}  // namespace

PiecewiseExpr make_piecewise(const DomainPtr& dom, std::vector<Piece> explicit_pieces,
                             Expr default_expr, const PiecewiseOptions& opts) {
  for (auto& p : explicit_pieces) {
    if (!(*p.region.dom == *dom)) throw ValidationError("piece region in a different domain");
    p.region = region_simplify(p.region);
  }
  for (std::size_t i = 0; i < explicit_pieces.size(); ++i)
    for (std::size_t j = i + 1; j < explicit_pieces.size(); ++j)
      if (!region_is_empty(region_intersect(explicit_pieces[i].region, explicit_pieces[j].region)))
        throw ValidationError("pieces overlap");

  RegionSet covered = region_empty(dom);
  for (const auto& p : explicit_pieces) covered = region_union(covered, p.region);
  RegionSet rest = region_simplify(region_complement(covered));

  PiecewiseExpr out;
  out.dom = dom;
  for (auto& p : explicit_pieces) {
    if (region_is_empty(p.region)) continue;
    Expr e = simplify_on(p.expr, p.region);
    validate_inv_guards(e, p.region);
    out.pieces.push_back(Piece{std::move(p.region), std::move(e)});
  }
  if (!region_is_empty(rest)) {
    Expr e = simplify_on(default_expr, rest);
    validate_inv_guards(e, rest);
    out.pieces.push_back(Piece{std::move(rest), std::move(e)});
  }
  if (out.pieces.empty()) throw ValidationError("piecewise function with no pieces");
  sort_pieces(out.pieces);
  if (opts.check_gluing) check_gluing(dom, out.pieces, opts);
  return out;
}

const Expr& PiecewiseExpr::expr_at(const Point& x) const {
  for (const auto& p : pieces)
    if (p.region.contains(x)) return p.expr;
  throw ValidationError("point outside Omega");
}

double PiecewiseExpr::eval_at(const Point& x) const {
  const Expr& e = expr_at(x);
  std::vector<double> xd(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) xd[i] = to_double(x[i]);
  return eval(e, xd);
}

double PiecewiseExpr::eval_at(const std::vector<double>& x) const {
  Point p(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) p[i] = Rat(x[i]);
  return eval_at(p);
}

namespace {

PiecewiseExpr pw_combine(const PiecewiseExpr& a, const PiecewiseExpr& b,
                         Expr (*op)(const Expr&, const Expr&)) {
  if (!(*a.dom == *b.dom)) throw ValidationError("piecewise combination across domains");
  PiecewiseExpr out;
  out.dom = a.dom;
  for (const auto& pa : a.pieces)
    for (const auto& pb : b.pieces) {
      RegionSet r = region_simplify(region_intersect(pa.region, pb.region));
      if (region_is_empty(r)) continue;
      Expr e = simplify_on(op(pa.expr, pb.expr), r);
      out.pieces.push_back(Piece{std::move(r), std::move(e)});
    }
  sort_pieces(out.pieces);
  return out;
}

}  // namespace

PiecewiseExpr pw_add(const PiecewiseExpr& a, const PiecewiseExpr& b) {
  return pw_combine(a, b, e_add);
}
PiecewiseExpr pw_mul(const PiecewiseExpr& a, const PiecewiseExpr& b) {
  return pw_combine(a, b, e_mul);
}

PiecewiseExpr pw_neg(const PiecewiseExpr& a) { return pw_scale(Rat(-1), a); }

PiecewiseExpr pw_scale(const Rat& c, const PiecewiseExpr& a) {
  PiecewiseExpr out;
  out.dom = a.dom;
  for (const auto& p : a.pieces) out.pieces.push_back(Piece{p.region, e_scale(c, p.expr)});
  return out;
}

PiecewiseExpr pw_diff(const PiecewiseExpr& a, const MultiIndex& p) {
  PiecewiseExpr out;
  out.dom = a.dom;
  for (const auto& pc : a.pieces)
    out.pieces.push_back(Piece{pc.region, simplify_on(diff(pc.expr, p), pc.region)});
  return out;
}

bool pw_equal(const PiecewiseExpr& a, const PiecewiseExpr& b) {
  if (!(*a.dom == *b.dom) || a.pieces.size() != b.pieces.size()) return false;
  for (std::size_t i = 0; i < a.pieces.size(); ++i) {
    if (!(a.pieces[i].expr == b.pieces[i].expr)) return false;
    if (!region_equal(a.pieces[i].region, b.pieces[i].region)) return false;
  }
  return true;
}

RegionSet pw_zero_region(const PiecewiseExpr& a) {
  RegionSet z = region_empty(a.dom);
  for (const auto& p : a.pieces)
    if (p.expr.is_zero() || literal_zero_with_bounds(p.expr, region_axis_bounds(p.region)))
      z = region_union(z, p.region);
  return region_simplify(z);
}

bool pw_literal_zero(const PiecewiseExpr& a) {
  for (const auto& p : a.pieces)
    if (!(p.expr.is_zero() || literal_zero_with_bounds(p.expr, region_axis_bounds(p.region))))
      return false;
  return true;
}

// ---------------------------------------------------------------------------
// nets
// ---------------------------------------------------------------------------

struct Net::Impl {
  enum class Kind { Template, Diagonal, Add, Mul, Scale, Diff } kind = Kind::Template;
  IndexSet idx;
  DomainPtr dom;

  // Template
  std::vector<TemplatePiece> tpieces;
  RawPtr tdefault;
  bool monotone = false;
  std::optional<RegionTemplate> declared_core;

  // Diagonal
  std::optional<PiecewiseExpr> psi;

  // derived
  std::vector<Net> args;
  Rat factor;
  MultiIndex p;

  mutable std::mutex mu;
  mutable std::map<int, std::shared_ptr<const PiecewiseExpr>> inst_cache;
  mutable std::map<int, std::shared_ptr<const RegionSet>> zero_cache;
  mutable int monotone_verified_to = 0;
};

const IndexSet& Net::index_set() const { return impl->idx; }
const DomainPtr& Net::domain() const { return impl->dom; }

bool Net::monotone_zero_declared() const {
  switch (impl->kind) {
    case Impl::Kind::Template:
      return impl->monotone;
    case Impl::Kind::Diagonal:
      return true;  // constant in the index
    default: {
      for (const auto& a : impl->args)
        if (!a.monotone_zero_declared()) return false;
      return true;
    }
  }
}

bool Net::same_index_space(const Net& o) const {
  return impl->idx == o.impl->idx && *impl->dom == *o.impl->dom;
}

Net Net::from_template(IndexSet idx, DomainPtr dom, std::vector<TemplatePiece> pieces,
                       RawPtr default_expr, bool monotone_zero,
                       std::optional<RegionTemplate> zero_core) {
  auto impl = std::make_shared<Impl>();
  impl->kind = Impl::Kind::Template;
  impl->idx = std::move(idx);
  impl->dom = std::move(dom);
  impl->tpieces = std::move(pieces);
  impl->tdefault = std::move(default_expr);
  impl->monotone = monotone_zero;
  impl->declared_core = std::move(zero_core);
  Net n;
  n.impl = std::move(impl);
  return n;
}

Net Net::diagonal(IndexSet idx, PiecewiseExpr psi) {
  auto impl = std::make_shared<Impl>();
  impl->kind = Impl::Kind::Diagonal;
  impl->idx = std::move(idx);
  impl->dom = psi.dom;
  impl->psi = std::move(psi);
  Net n;
  n.impl = std::move(impl);
  return n;
}

namespace {

Net make_derived(Net::Impl::Kind kind, std::vector<Net> args, Rat factor = Rat(0),
                 MultiIndex p = MultiIndex()) {
  auto impl = std::make_shared<Net::Impl>();
  impl->kind = kind;
  impl->idx = args[0].index_set();
  impl->dom = args[0].domain();
  impl->args = std::move(args);
  impl->factor = std::move(factor);
  impl->p = std::move(p);
  Net n;
  n.impl = std::move(impl);
  return n;
}

}  // namespace

Net net_add(const Net& u, const Net& v) {
  if (!u.same_index_space(v)) throw ValidationError("net_add: index set or domain mismatch");
  return make_derived(Net::Impl::Kind::Add, {u, v});
}

Net net_mul(const Net& u, const Net& v) {
  if (!u.same_index_space(v)) throw ValidationError("net_mul: index set or domain mismatch");
  return make_derived(Net::Impl::Kind::Mul, {u, v});
}

Net net_scale(const Rat& c, const Net& u) { return make_derived(Net::Impl::Kind::Scale, {u}, c); }
Net net_neg(const Net& u) { return net_scale(Rat(-1), u); }

Net net_diff(const Net& u, const MultiIndex& p) {
  return make_derived(Net::Impl::Kind::Diff, {u}, Rat(0), p);
}

Net net_zero(const IndexSet& idx, const DomainPtr& dom) { return net_const(idx, dom, Rat(0)); }

Net net_const(const IndexSet& idx, const DomainPtr& dom, const Rat& c) {
  PiecewiseOptions opts;
  opts.check_gluing = false;
  return Net::diagonal(idx, make_piecewise(dom, {}, e_const(c), opts));
}

const PiecewiseExpr& Net::instantiate(int m) const {
  {
    std::lock_guard<std::mutex> lock(impl->mu);
    auto it = impl->inst_cache.find(m);
    if (it != impl->inst_cache.end()) return *it->second;
  }
  std::shared_ptr<const PiecewiseExpr> result;
  switch (impl->kind) {
    case Impl::Kind::Template: {
      Rat k = impl->idx.rate(m);
      std::vector<Piece> pieces;
      for (const auto& tp : impl->tpieces)
        pieces.push_back(Piece{tp.region.at(impl->dom, k), raw_to_expr(*tp.expr, k)});
      Expr def = impl->tdefault ? raw_to_expr(*impl->tdefault, k) : Expr{};
      result = std::make_shared<const PiecewiseExpr>(
          make_piecewise(impl->dom, std::move(pieces), std::move(def)));
      break;
    }
    case Impl::Kind::Diagonal:
      result = std::make_shared<const PiecewiseExpr>(*impl->psi);
      break;
    case Impl::Kind::Add:
      result = std::make_shared<const PiecewiseExpr>(
          pw_add(impl->args[0].instantiate(m), impl->args[1].instantiate(m)));
      break;
    case Impl::Kind::Mul:
      result = std::make_shared<const PiecewiseExpr>(
          pw_mul(impl->args[0].instantiate(m), impl->args[1].instantiate(m)));
      break;
    case Impl::Kind::Scale:
      result = std::make_shared<const PiecewiseExpr>(
          pw_scale(impl->factor, impl->args[0].instantiate(m)));
      break;
    case Impl::Kind::Diff:
      result =
          std::make_shared<const PiecewiseExpr>(pw_diff(impl->args[0].instantiate(m), impl->p));
      break;
  }
  std::lock_guard<std::mutex> lock(impl->mu);
  auto [pos, inserted] = impl->inst_cache.emplace(m, std::move(result));
  (void)inserted;
  return *pos->second;
}

const RegionSet& Net::zero_region(int m) const {
  {
    std::lock_guard<std::mutex> lock(impl->mu);
    auto it = impl->zero_cache.find(m);
    if (it != impl->zero_cache.end()) return *it->second;
  }
  auto z = std::make_shared<const RegionSet>(pw_zero_region(instantiate(m)));
  std::lock_guard<std::mutex> lock(impl->mu);
  auto [pos, inserted] = impl->zero_cache.emplace(m, std::move(z));
  (void)inserted;
  return *pos->second;
}

std::optional<std::vector<TemplatePiece>> Net::to_template() const {
  switch (impl->kind) {
    case Impl::Kind::Template: {
      std::vector<TemplatePiece> nf = impl->tpieces;
      RegionTemplate covered;
      for (const auto& tp : impl->tpieces)
        covered = RegionTemplate::unite(covered, tp.region);
      RegionTemplate rest = covered.complement(impl->dom->n);
      nf.push_back(TemplatePiece{std::move(rest),
                                 impl->tdefault ? impl->tdefault : raw_const(Rat(0))});
      return nf;
    }
    case Impl::Kind::Diagonal: {
      std::vector<TemplatePiece> nf;
      for (const auto& pc : impl->psi->pieces) {
        RegionTemplate rt;
        for (const auto& cell : pc.region.cells) {
          CellTemplate ct;
          for (const auto& con : cell.cons) {
            ConstraintTemplate t;
            t.a = con.a;
            t.b = KLin(con.b);
            t.strict = con.strict;
            ct.cons.push_back(std::move(t));
          }
          rt.cells.push_back(std::move(ct));
        }
        nf.push_back(TemplatePiece{std::move(rt), raw_from_expr(pc.expr)});
      }
      return nf;
    }
    case Impl::Kind::Add:
    case Impl::Kind::Mul: {
      auto a = impl->args[0].to_template();
      auto b = impl->args[1].to_template();
      if (!a || !b) return std::nullopt;
      std::vector<TemplatePiece> nf;
      auto op = impl->kind == Impl::Kind::Add ? RawExpr::Kind::Add : RawExpr::Kind::Mul;
      for (const auto& pa : *a)
        for (const auto& pb : *b)
          nf.push_back(TemplatePiece{RegionTemplate::intersect(pa.region, pb.region),
                                     raw_binary(op, pa.expr, pb.expr)});
      return nf;
    }
    case Impl::Kind::Scale: {
      auto a = impl->args[0].to_template();
      if (!a) return std::nullopt;
      for (auto& p : *a)
        p.expr = raw_binary(RawExpr::Kind::Mul, raw_const(impl->factor), p.expr);
      return a;
    }
    case Impl::Kind::Diff: {
      auto a = impl->args[0].to_template();
      if (!a) return std::nullopt;
      for (auto& piece : *a) {
        RawPtr e = piece.expr;
        for (std::size_t ax = 0; ax < impl->p.p.size(); ++ax)
          for (int i = 0; i < impl->p.p[ax]; ++i) e = raw_diff(e, static_cast<int>(ax) + 1);
        piece.expr = std::move(e);
      }
      return a;
    }
  }
  return std::nullopt;
}

std::optional<RegionTemplate> Net::zero_core() const {
  if (impl->kind == Impl::Kind::Template && impl->declared_core) return impl->declared_core;
  auto nf = to_template();
  if (!nf) return std::nullopt;
  // a normal-form piece joins the core when its instantiations are literally
  // zero at sample positions; users of the core re-verify exactly per index
  RegionTemplate core;
  for (const auto& tp : *nf) {
    bool zero = true;
    bool ever_nonempty = false;
    for (int m : {1, 2, 3, 5, 8}) {
      Rat k = impl->idx.rate(m);
      RegionSet r = tp.region.at(impl->dom, k);
      if (region_is_empty(r)) continue;
      ever_nonempty = true;
      Expr e = raw_to_expr(*tp.expr, k);
      if (!literal_zero_with_bounds(e, region_axis_bounds(r))) {
        zero = false;
        break;
      }
    }
    if (zero && ever_nonempty) core = RegionTemplate::unite(core, tp.region);
  }
  if (core.cells.empty()) return std::nullopt;
  return core;
}

void Net::verify_monotone(int M) const {
  if (!monotone_zero_declared()) return;
  {
    std::lock_guard<std::mutex> lock(impl->mu);
    if (impl->monotone_verified_to >= M) return;
  }
  for (int m = 1; m < M; ++m) {
    if (!region_subset(zero_region(m), zero_region(m + 1)))
      throw ValidationError("monotone_zero declared but zero_region(" + std::to_string(m) +
                            ") is not contained in zero_region(" + std::to_string(m + 1) + ")");
  }
  std::lock_guard<std::mutex> lock(impl->mu);
  impl->monotone_verified_to = std::max(impl->monotone_verified_to, M);
}

bool Net::index_independent() const {
  switch (impl->kind) {
    case Impl::Kind::Diagonal:
      return true;
    case Impl::Kind::Template: {
      for (const auto& tp : impl->tpieces) {
        if (raw_mentions_k(*tp.expr)) return false;
        for (const auto& cell : tp.region.cells)
          for (const auto& con : cell.cons)
            if (!con.b.constant()) return false;
      }
      if (impl->tdefault && raw_mentions_k(*impl->tdefault)) return false;
      return true;
    }
    default:
      for (const auto& a : impl->args)
        if (!a.index_independent()) return false;
      return true;
  }
}

}  // namespace foamlab
