#pragma once

// Shared net builders for the test suites.

#include "foamlab/nets.hpp"

#include <string>
#include <utility>
#include <vector>

namespace netgen {

using namespace foamlab;

inline DomainPtr interval_sym() {
  return std::make_shared<const Domain>(Domain::symmetric(1));
}
inline DomainPtr square_unit() {
  return std::make_shared<const Domain>(Domain(2, {{Rat(0), Rat(1)}, {Rat(0), Rat(1)}}));
}

inline Net template_net(const IndexSet& idx, const DomainPtr& dom,
                        const std::vector<std::pair<std::string, std::string>>& pieces,
                        const std::string& default_expr, bool monotone_zero) {
  ParseOptions po;
  po.allow_k = true;
  po.allow_div = true;
  po.allow_inv = true;
  std::vector<TemplatePiece> tps;
  for (const auto& [r, e] : pieces)
    tps.push_back(TemplatePiece{parse_region_template(r, dom->n), parse_raw(e, po)});
  return Net::from_template(idx, dom, std::move(tps), parse_raw(default_expr, po), monotone_zero);
}

/// k * bump(k*x1) with literal-zero outer pieces (unnormalized delta shape).
inline Net delta_shape(const IndexSet& idx, const DomainPtr& dom) {
  return template_net(idx, dom,
                      {{"x1 >= 1/k", "0"}, {"x1 <= -1/k", "0"}},
                      "k*bump(k*x1)", true);
}

/// sstep(k*x1) with literal plateaus.
inline Net heaviside_shape(const IndexSet& idx, const DomainPtr& dom) {
  return template_net(idx, dom,
                      {{"x1 >= 1/k", "1"}, {"x1 <= -1/k", "0"}},
                      "sstep(k*x1)", true);
}

inline Net diagonal_expr(const IndexSet& idx, const DomainPtr& dom, const std::string& text) {
  PiecewiseOptions opts;
  opts.check_gluing = false;
  return Net::diagonal(idx, make_piecewise(dom, {}, parse_piece_expr(text), opts));
}

}  // namespace netgen
