#pragma once

#include "foamlab/rational.hpp"

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace foamlab {

/// Manifest or expression text failed to parse. Exit code 2 from the CLI.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string msg, std::size_t pos = std::string::npos)
      : std::runtime_error(pos == std::string::npos
                               ? msg
                               : msg + " (at offset " + std::to_string(pos) + ")"),
        position(pos) {}
  std::size_t position;
};

/// Inputs parsed but violate a contract (dimension mismatch, malformed
/// certificate, bad region, ...). Exit code 3 from the CLI.
class ValidationError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// The engine contradicted itself (e.g. an equality certificate and a
/// counterexample for the same pair). Exit code 4 from the CLI.
class InternalError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// The ambient open box Omega = prod_i (lo_i, hi_i), 1 <= n <= 3.
struct Domain {
  int n = 1;
  std::vector<std::pair<Rat, Rat>> box;  // n open intervals

  Domain() = default;
  Domain(int dim, std::vector<std::pair<Rat, Rat>> b) : n(dim), box(std::move(b)) {
    if (n < 1 || n > 3 || static_cast<int>(box.size()) != n)
      throw ValidationError("domain: dimension must be 1..3 with one interval per axis");
    for (auto& [lo, hi] : box)
      if (!(lo < hi)) throw ValidationError("domain: empty box interval");
  }

  static Domain unit_interval() { return Domain(1, {{Rat(0), Rat(1)}}); }
  static Domain symmetric(int dim) {
    std::vector<std::pair<Rat, Rat>> b(dim, {Rat(-1), Rat(1)});
    return Domain(dim, std::move(b));
  }

  bool operator==(const Domain& o) const { return n == o.n && box == o.box; }
};

using DomainPtr = std::shared_ptr<const Domain>;

/// Differentiation orders per axis; |p| = total order.
struct MultiIndex {
  std::vector<int> p;

  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> orders) : p(std::move(orders)) {
    for (int v : p)
      if (v < 0) throw ValidationError("multi-index orders must be non-negative");
  }
  static MultiIndex zero(int n) { return MultiIndex(std::vector<int>(n, 0)); }
  static MultiIndex axis(int n, int axis, int order = 1) {
    std::vector<int> v(n, 0);
    v.at(axis - 1) = order;
    return MultiIndex(v);
  }

  int order() const {
    int s = 0;
    for (int v : p) s += v;
    return s;
  }
  bool is_zero() const { return order() == 0; }
  bool operator==(const MultiIndex& o) const { return p == o.p; }

  std::string str() const {
    std::string s = "(";
    for (std::size_t i = 0; i < p.size(); ++i) s += (i ? "," : "") + std::to_string(p[i]);
    return s + ")";
  }
};

/// All multi-indices over n axes with 1 <= |p| <= max_order, in
/// lexicographic order (used by checks and the grid oracle).
std::vector<MultiIndex> multi_indices_up_to(int n, int max_order, bool include_zero = false);

}  // namespace foamlab
