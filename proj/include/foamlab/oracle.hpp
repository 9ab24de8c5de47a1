#pragma once

#include "foamlab/certificates.hpp"

#include <optional>
#include <string>
#include <vector>

namespace foamlab {

// ---------------------------------------------------------------------------
// Independent grid oracle: scans a rational grid and, per point, searches for
// the minimal index from which all derivatives up to order P stay below
// tolerance along the rest of the chain. Bad points (no such index) are
// compared against a degenerate reference set when one is known.
// ---------------------------------------------------------------------------

struct OracleBadPoint {
  Point x;
  double worst = 0;  // max |D^p u_M(x)| over |p| <= P at the top index
};

struct OracleStats {
  long long grid_points = 0;
  long long bad_points = 0;
  double bad_fraction = 0;
  std::vector<OracleBadPoint> bad;                 // capped listing
  std::vector<std::pair<Point, int>> minimal_mu;   // full grid: minimal index or -1
};

struct OracleVerdict {
  enum Kind { NoCounterexample, Counterexample } kind = NoCounterexample;
  OracleStats stats;
  std::optional<Point> counterexample;  // worst offending bad point
  double fraction = 0;
  std::string detail;
};

/// Grid membership oracle. `reference` (optional) is a degenerate set the bad
/// points must hug (within L-infinity distance h); without it the verdict
/// falls back to a reported bad-point fraction. Parallelizes across grid
/// chunks with a deterministic ordered merge (FOAMLAB_THREADS caps workers).
OracleVerdict brute_force_membership(const Net& u, const IdealFamily& f, const Rat& h, int M,
                                     int P, const RegionSet* reference = nullptr);

/// CSV rendering of the oracle bad-point table (RFC-4180 style, decimal
/// coordinates with 12 significant digits).
std::string oracle_csv(const OracleVerdict& v, int dim);

}  // namespace foamlab
