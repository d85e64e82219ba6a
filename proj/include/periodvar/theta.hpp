#pragma once

// Siegel theta constants with characteristics, the theta-constant
// expressions of the E8, E8 + E8 and D16+ theta series, the Schottky form,
// the Siegel Phi operator and the elliptic j-invariant.
//
// Convention: theta[eps; delta](T) = sum_{n in Z^g}
//   exp(pi i (n + eps/2)^T T (n + eps/2) + pi i (n + eps/2)^T delta).

#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "periodvar/hyperelliptic.hpp"

namespace periodvar {

struct SiegelPoint {
  CMatrix T;

  SiegelPoint() = default;
  /// Validates symmetry (1e-12 relative) and Im T > 0.
  explicit SiegelPoint(CMatrix t);

  int g() const { return static_cast<int>(T.rows()); }
  double min_imag_eigenvalue() const;

  static SiegelPoint block_diagonal(const SiegelPoint& tau, Complex corner);
};

struct ThetaCharacteristic {
  std::vector<int> eps;    // entries 0 or 1
  std::vector<int> delta;  // entries 0 or 1

  int g() const { return static_cast<int>(eps.size()); }
  int parity() const;      // eps . delta mod 2
  bool even() const { return parity() == 0; }
};

/// All characteristics with eps.delta even; eps-major, first entry most significant.
std::vector<ThetaCharacteristic> even_characteristics(int g);
std::vector<ThetaCharacteristic> all_characteristics(int g);

struct ThetaOptions {
  double tol = 1e-14;  // bound on the neglected tail of each series
  int max_radius = 60;
  bool reduce = true;  // LLL-reduce Im T first where the result is invariant
};

/// Number of lattice shells summed in each direction for the given Im T.
int theta_radius(const SiegelPoint& T, const ThetaOptions& options = {});

Complex theta_constant(const ThetaCharacteristic& ch, const SiegelPoint& T, const ThetaOptions& options = {});

/// All 4^g theta constants, indexed by eps_index * 2^g + delta_index where an
/// index reads its vector as a binary number, first entry most significant.
std::vector<Complex> all_theta_constants(const SiegelPoint& T, const ThetaOptions& options = {});

std::size_t characteristic_index(const ThetaCharacteristic& ch);

/// GL_g(Z) reduction of Im T: returns U unimodular with U^T Im(T) U LLL-reduced.
Eigen::MatrixXi lll_reduce(const Eigen::MatrixXd& gram);

enum class LatticeFamily { e8, e8_squared, d16_plus };

const char* to_string(LatticeFamily family);

/// 2^{-g} sum theta^8 (E8), 2^{-2g} (sum theta^8)^2 (E8 + E8) and
/// 2^{-g} sum theta^16 (D16+), sums over even characteristics.
Complex theta_series_via_constants(LatticeFamily family, const SiegelPoint& T, const ThetaOptions& options = {});

struct SchottkyValue {
  Complex value;  // E8 + E8 term minus D16+ term
  Complex e8_squared;
  Complex d16_plus;
  double scale = 0.0;  // max of the two term magnitudes
  double relative() const { return scale == 0.0 ? 0.0 : std::abs(value) / scale; }
};

SchottkyValue schottky_form(const SiegelPoint& T, const ThetaOptions& options = {});

using SiegelForm = std::function<Complex(const SiegelPoint&)>;

struct PhiResult {
  Complex value;
  std::vector<double> t_list;
  std::vector<Complex> values;
  std::vector<double> differences;  // |values[i+1] - values[i]|
};

/// Evaluates `form` at blockdiag(tau, i t) for t in t_list (increasing, last
/// >= 10). Throws DiagnosticFailure unless the successive differences
/// decrease, up to a noise floor of max(absolute_noise, 1e-12 * largest |value|).
PhiResult siegel_phi(const SiegelForm& form, const SiegelPoint& tau, const std::vector<double>& t_list,
                     double absolute_noise = 0.0);

/// 32 (theta2^8 + theta3^8 + theta4^8)^3 / (theta2 theta3 theta4)^8
Complex j_invariant(const SiegelPoint& tau, const ThetaOptions& options = {});

}  // namespace periodvar
