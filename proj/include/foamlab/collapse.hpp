#pragma once

#include "foamlab/certificates.hpp"

#include <optional>
#include <string>
#include <vector>

namespace foamlab {

// ---------------------------------------------------------------------------
// Constructive collapse: upgrade a pointwise (first-category) certificate to
// a uniform (closed nowhere dense) one. On nets with monotone zero templates
// the gamma is exact and depth-independent; otherwise a greedy patch
// exhaustion with dyadic refinement produces a conservative gamma.
// ---------------------------------------------------------------------------

/// S_m = intersection of zero_region(u, nu) over m <= nu <= M; non-decreasing
/// in m by construction. Under a verified monotone_zero declaration the tail
/// intersection is just zero_region(u, m).
struct StableZeroProfile {
  int depth = 0;
  std::vector<RegionSet> tail;  // tail[m-1] = S_m

  static StableZeroProfile compute(const Net& u, int M);
  const RegionSet& at(int m) const { return tail.at(m - 1); }
};

struct PatchResult {
  bool found = false;
  RegionSet region;  // relatively open subset of closure(A)
  int nu = 0;
  int depth = 0;
};

/// Lemma-1 step: the first index m <= M whose stable zero profile of
/// (u - diagonal target) restricted to closure(A) has nonempty relative
/// interior; returns that interior and the index.
PatchResult find_uniform_patch(const Net& u, const PointwiseCertificate& c, const RegionSet& A,
                               const PiecewiseExpr* target, int M);

struct CollapseReport {
  RegionSet gamma;
  UniformCertificate cert;
  int depth = 0;
  bool gamma_nowhere_dense = false;
  bool exact = false;        // template-limit path (monotone nets)
  std::string method;        // "template-limit" or "greedy"
  CheckResult uniform_check;
  std::string notes;
};

/// Theorem-2.2 engine. Requires a countably co-final index set and a
/// certificate with first-category (or nowhere-dense) sigma that verifies at
/// depth M.
CollapseReport collapse(const Net& u, const PointwiseCertificate& c, int M);

/// Certificate inference for fragment nets: shells from the stable zero
/// profile, sigma from the template limit when available (exact) or the
/// depth-M profile complement otherwise, classified into the family.
/// Returns nothing when the residual set cannot be classified or the
/// certificate fails to verify.
std::optional<PointwiseCertificate> synthesize_certificate(const Net& u, const IdealFamily& f,
                                                           int M);

}  // namespace foamlab
