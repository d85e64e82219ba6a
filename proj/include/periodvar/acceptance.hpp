#pragma once

// The acceptance suite: one self-contained check per criterion, each
// reporting a pass flag and a JSON detail document. Everything random is
// drawn from a generator seeded by the caller, so reports are reproducible.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "periodvar/io.hpp"

namespace periodvar::acceptance {

constexpr std::uint64_t default_seed = 20240917;

struct CriterionResult {
  std::string id;
  std::string name;
  std::string claim;
  bool pass = false;
  io::Json detail;
};

/// Ids in run order.
const std::vector<std::string>& criterion_ids();

/// Throws ArgumentError for an unknown id. Numerical exceptions inside a
/// criterion are caught and reported as a failure with the message.
CriterionResult run_criterion(const std::string& id, std::uint64_t seed = default_seed);

io::Json to_json(const CriterionResult& r);

// Sampling helpers shared with the CLI and the tests.

/// Branch points uniform in [-2, 2]^2 with pairwise distance >= min_separation.
/// With with_infinity the finite count is 2g + 1, otherwise 2g + 2.
HyperellipticCurve random_curve(int g, bool with_infinity, std::mt19937_64& rng, double min_separation = 0.25);

/// X + iY with X entries in [-1/2, 1/2] and Y = A A^T / g + y_min I.
SiegelPoint random_siegel_point(int g, std::mt19937_64& rng, double y_min = 0.8);

/// Seeded genus-4 hyperelliptic curve whose period matrix has
/// lambda_min(Im tau) >= min_imag, redrawing otherwise.
struct Genus4Sample {
  HyperellipticCurve curve;
  SiegelPoint tau;
  int draws = 0;
};
Genus4Sample genus4_hyperelliptic(std::mt19937_64& rng, double min_imag = 0.3);

/// tau + size * S / |S| for a random complex symmetric S, redrawn until Im stays positive.
SiegelPoint perturb(const SiegelPoint& tau, double size, std::mt19937_64& rng);

}  // namespace periodvar::acceptance
