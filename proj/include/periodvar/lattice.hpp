#pragma once

// Even positive definite lattices given by a Gram matrix and optional glue
// cosets, short-vector enumeration, and Siegel theta series
//   Theta_L(T) = sum over g-tuples (x_1..x_g) of exp(pi i sum_{p,q} <x_p, x_q> T_pq).

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "periodvar/theta.hpp"

namespace periodvar {

struct LatticeSpec {
  std::string name;
  Eigen::MatrixXi gram;
  /// Coset representatives in basis coordinates, stored doubled (so half
  /// integers become integers). The zero coset is implicit.
  std::vector<Eigen::VectorXi> glue_doubled;

  int rank() const { return static_cast<int>(gram.rows()); }

  static LatticeSpec e8();
  static LatticeSpec d16_plus();
  /// "E8" or "D16+"
  static LatticeSpec by_name(const std::string& name);

  /// Checks symmetry, even diagonal, positive definiteness and integrality
  /// of the glued lattice; throws ArgumentError otherwise.
  void validate() const;
  /// Determinant of the glued lattice: det(gram) / (number of cosets)^2.
  double determinant() const;
};

struct LatticeVectors {
  int rank = 0;
  std::vector<std::int8_t> doubled;  // rank entries per vector, basis coordinates times 2
  std::vector<std::int16_t> gram_times;  // rank entries per vector: gram * (2 x)
  std::vector<int> norms;                // <x, x>
  std::size_t size() const { return norms.size(); }
  /// Vectors per norm value.
  std::vector<std::size_t> norm_counts() const;
};

/// All lattice vectors with <x, x> <= bound, sorted by norm.
LatticeVectors enumerate_vectors(const LatticeSpec& lattice, int bound);

struct LatticeThetaOptions {
  int bound = 6;                  // sum of the norms of a tuple
  bool allow_expensive = false;   // lifts the degree <= 2 guard for rank >= 16
  double tail_warning = 1e-8;
};

struct LatticeThetaResult {
  Complex value;
  double tail_estimate = 0.0;   // volume estimate of the neglected terms
  bool truncation_warning = false;
  std::size_t vectors = 0;
};

LatticeThetaResult lattice_theta(const LatticeSpec& lattice, const SiegelPoint& T,
                                 const LatticeThetaOptions& options = {});

}  // namespace periodvar
