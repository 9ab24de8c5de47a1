#pragma once

#include "foamlab/descriptor.hpp"
#include "foamlab/nets.hpp"

#include <optional>
#include <string>
#include <vector>

namespace foamlab {

// ---------------------------------------------------------------------------
// Machine-checkable ideal-membership certificates. A pointwise certificate
// pairs a singularity descriptor Sigma with shells (region, threshold):
// off Sigma, every shell point is claimed literally zero from its threshold
// on. A uniform certificate pairs a closed nowhere dense Gamma with open
// patches. Checking is exact region containment in syntactic zero regions;
// numerics only ever produce refutation witnesses, never confirmations.
// ---------------------------------------------------------------------------

enum class FamilyKind { ND, BaireI, M0, SingleSet };

struct IdealFamily {
  FamilyKind kind = FamilyKind::ND;
  std::optional<SetDescriptor> single;

  static IdealFamily nd() { return IdealFamily{FamilyKind::ND, std::nullopt}; }
  static IdealFamily baire_i() { return IdealFamily{FamilyKind::BaireI, std::nullopt}; }
  static IdealFamily m0() { return IdealFamily{FamilyKind::M0, std::nullopt}; }
  static IdealFamily single_set(SetDescriptor s) { return IdealFamily{FamilyKind::SingleSet, std::move(s)}; }

  std::string name() const;
};

/// Does the family admit this singularity descriptor (so that a certificate
/// over it proves membership in the family's ideal)?
bool family_admits(const IdealFamily& f, const SetDescriptor& sigma, int depth);

struct Shell {
  RegionSet region;
  int lambda = 1;
};

struct PointwiseCertificate {
  SetDescriptor sigma;
  std::vector<Shell> shells;                    // explicit shells
  std::optional<RegionTemplate> shell_family;   // templated family (R(m), m), m = 1, 2, ...
  bool coverage_weakened = false;               // set when a derived certificate lost coverage
  bool derived = false;                         // produced by derive_pointwise; coverage failures
                                                // escalate to Unknown instead of erroring
};

struct Patch {
  RegionSet region;
  int lambda = 1;
};

struct UniformCertificate {
  RegionSet gamma;
  std::vector<Patch> patches;
  std::optional<RegionTemplate> patch_family;
};

struct Witness {
  Point x;
  int mu = 0;
  MultiIndex p;
  double value = 0;
  std::string str() const;
};

struct CheckResult {
  enum Kind { Verified, Refuted, Unknown } kind = Unknown;
  int depth = 0;
  std::optional<Witness> witness;
  std::string detail;
  bool verified() const { return kind == Verified; }
};

/// Checks the asymptotic-vanishing certificate to depth M, derivative order
/// P. Throws ValidationError on malformed certificates (coverage gaps,
/// inadmissible sigma, shell thresholds beyond M).
CheckResult check_pointwise(const Net& u, const PointwiseCertificate& c, int M, int P);

/// Checks the locally-uniform certificate to depth M. Gamma must be closed
/// nowhere dense; patches open; patches must cover Omega \ Gamma exactly.
CheckResult check_uniform(const Net& u, const UniformCertificate& c, int M);

/// Transforms a certificate for u into one for net_diff(u, p): shell regions
/// shrink to their interiors (uniform patches are already open). If the
/// shrink breaks shell coverage the result carries coverage_weakened and
/// check_pointwise reports Unknown instead of Verified.
PointwiseCertificate derive_pointwise(const PointwiseCertificate& c, const MultiIndex& p);
UniformCertificate derive_uniform(const UniformCertificate& c, const MultiIndex& p);

/// Certificate for u + v from certificates of u and v: Sigma'' =
/// family_union, shell thresholds combine by max on intersections.
PointwiseCertificate compose_add(const PointwiseCertificate& c1, const PointwiseCertificate& c2,
                                 int M);

/// Certificate for u * v where only u is known to be in the ideal:
/// multiplying by an arbitrary net can only grow zero regions, so the
/// certificate carries over unchanged.
PointwiseCertificate compose_mul_ideal(const PointwiseCertificate& c, const Net& v);

/// Every valid uniform (nowhere-dense) certificate is a Baire-I pointwise
/// certificate with a single-stage first-category Sigma.
PointwiseCertificate uniform_to_pointwise(const UniformCertificate& c);

/// The off-diagonal condition for one diagonal representative: true when
/// either psi is literally zero (the diagonal is the zero class) or a
/// sampled point refutes every possible certificate (psi continuous and
/// nonzero somewhere forces a nonzero value off any dense-complement Sigma).
bool neutrix_check(const PiecewiseExpr& psi, const IdealFamily& f, int M,
                   std::uint64_t seed = 0);

}  // namespace foamlab
