#include "periodvar/theta.hpp"

#include <bit>
#include <cmath>
#include <numbers>

#include "periodvar/errors.hpp"
#include "periodvar/summation.hpp"

namespace periodvar {

SiegelPoint::SiegelPoint(CMatrix t) : T(std::move(t)) {
  if (T.rows() < 1 || T.rows() != T.cols()) throw ArgumentError("Siegel point: T must be square and nonempty");
  if (!T.allFinite()) throw ArgumentError("Siegel point: non-finite entry");
  if ((T - T.transpose()).norm() > 1e-12 * T.norm()) throw ArgumentError("Siegel point: T is not symmetric");
  T = 0.5 * (T + T.transpose()).eval();
  if (!(min_imag_eigenvalue() > 0.0)) throw DomainError("Siegel point: Im T is not positive definite");
}

double SiegelPoint::min_imag_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T.imag());
  return es.eigenvalues().minCoeff();
}

SiegelPoint SiegelPoint::block_diagonal(const SiegelPoint& tau, Complex corner) {
  const int g = tau.g();
  CMatrix t = CMatrix::Zero(g + 1, g + 1);
  t.topLeftCorner(g, g) = tau.T;
  t(g, g) = corner;
  return SiegelPoint(t);
}

int ThetaCharacteristic::parity() const {
  if (eps.size() != delta.size()) throw ArgumentError("characteristic: eps and delta differ in length");
  int s = 0;
  for (std::size_t i = 0; i < eps.size(); ++i) s += eps[i] * delta[i];
  return s % 2;
}

namespace {

std::vector<int> bits_of(std::size_t index, int g) {
  std::vector<int> v(g);
  for (int i = 0; i < g; ++i) v[i] = static_cast<int>((index >> (g - 1 - i)) & 1u);
  return v;
}

std::size_t index_of(const std::vector<int>& bits) {
  std::size_t idx = 0;
  for (int b : bits) {
    if (b != 0 && b != 1) throw ArgumentError("characteristic entries must be 0 or 1");
    idx = (idx << 1) | static_cast<std::size_t>(b);
  }
  return idx;
}

}  // namespace

std::vector<ThetaCharacteristic> all_characteristics(int g) {
  if (g < 1 || g > 12) throw ArgumentError("characteristics: g must be in 1..12");
  const std::size_t n = std::size_t{1} << g;
  std::vector<ThetaCharacteristic> out;
  for (std::size_t e = 0; e < n; ++e)
    for (std::size_t d = 0; d < n; ++d) out.push_back({bits_of(e, g), bits_of(d, g)});
  return out;
}

std::vector<ThetaCharacteristic> even_characteristics(int g) {
  std::vector<ThetaCharacteristic> out;
  for (auto& ch : all_characteristics(g))
    if (ch.even()) out.push_back(std::move(ch));
  return out;
}

std::size_t characteristic_index(const ThetaCharacteristic& ch) {
  if (ch.eps.size() != ch.delta.size()) throw ArgumentError("characteristic: eps and delta differ in length");
  return (index_of(ch.eps) << ch.eps.size()) | index_of(ch.delta);
}

int theta_radius(const SiegelPoint& T, const ThetaOptions& options) {
  // Terms are summed over m = 2n + eps with |m|_inf <= M. A term with
  // |m|_inf = j has modulus at most exp(-pi lambda_min j^2 / 4).
  const double lambda = T.min_imag_eigenvalue();
  const int g = T.g();
  const int cap = 2 * options.max_radius + 1;
  auto tail = [&](int m) {
    double s = 0.0;
    for (int j = m + 1; j <= m + 400; ++j) {
      const double shell = std::pow(2.0 * j + 1, g) - std::pow(2.0 * j - 1, g);
      const double term = shell * std::exp(-std::numbers::pi * lambda * j * j / 4.0);
      s += term;
      if (term < 1e-30 * s) break;
    }
    return s;
  };
  for (int m = 1; m <= cap; ++m)
    if (tail(m) < options.tol) return m;
  throw TruncationError("theta: summation radius exceeds the cap; Im T is too close to degenerate");
}

std::vector<Complex> all_theta_constants(const SiegelPoint& T, const ThetaOptions& options) {
  const int g = T.g();
  if (g > 8) throw ArgumentError("theta constants: degree too large");
  const int radius = theta_radius(T, options);
  const std::size_t nchar = std::size_t{1} << g;
  std::vector<CompensatedSum> sums(nchar * nchar);
  // i^k for the delta phase exp(pi i m.delta / 2)
  const Complex ipow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  const Complex quarter_pi_i{0.0, 0.25 * std::numbers::pi};

  std::vector<int> m(g, -radius);
  while (true) {
    Complex q = 0.0;
    for (int p = 0; p < g; ++p) {
      q += static_cast<double>(m[p] * m[p]) * T.T(p, p);
      for (int r = p + 1; r < g; ++r) q += 2.0 * static_cast<double>(m[p] * m[r]) * T.T(p, r);
    }
    const Complex term = std::exp(quarter_pi_i * q);
    std::size_t e = 0;
    for (int p = 0; p < g; ++p) e = (e << 1) | static_cast<std::size_t>(m[p] & 1);
    for (std::size_t d = 0; d < nchar; ++d) {
      int dot = 0;
      for (int p = 0; p < g; ++p)
        if ((d >> (g - 1 - p)) & 1u) dot += m[p];
      sums[e * nchar + d] += term * ipow[((dot % 4) + 4) % 4];
    }
    int p = g - 1;
    while (p >= 0 && m[p] == radius) m[p--] = -radius;
    if (p < 0) break;
    ++m[p];
  }
  std::vector<Complex> out;
  for (const auto& s : sums) out.push_back(s.value());
  return out;
}

Complex theta_constant(const ThetaCharacteristic& ch, const SiegelPoint& T, const ThetaOptions& options) {
  if (ch.g() != T.g()) throw ArgumentError("theta_constant: characteristic and T differ in degree");
  const int g = T.g();
  const int radius = theta_radius(T, options);
  const Complex pi_i{0.0, std::numbers::pi};
  Eigen::VectorXd shift(g), delta(g);
  for (int p = 0; p < g; ++p) {
    shift(p) = 0.5 * ch.eps[p];
    delta(p) = ch.delta[p];
  }
  // n + eps/2 with |2n + eps|_inf <= radius
  const int lo = -(radius + 1) / 2;
  std::vector<int> n(g, lo);
  auto in_range = [&](int k, int e) { return std::abs(2 * k + e) <= radius; };
  CompensatedSum sum;
  while (true) {
    bool ok = true;
    for (int p = 0; p < g; ++p) ok = ok && in_range(n[p], ch.eps[p]);
    if (ok) {
      Eigen::VectorXd x(g);
      for (int p = 0; p < g; ++p) x(p) = n[p] + shift(p);
      const Complex q = x.cast<Complex>().dot(T.T * x.cast<Complex>());
      sum += std::exp(pi_i * (q + x.dot(delta)));
    }
    int p = g - 1;
    while (p >= 0 && n[p] >= -lo) n[p--] = lo;
    if (p < 0) break;
    ++n[p];
  }
  return sum.value();
}

Eigen::MatrixXi lll_reduce(const Eigen::MatrixXd& gram) {
  const int g = static_cast<int>(gram.rows());
  Eigen::MatrixXi u = Eigen::MatrixXi::Identity(g, g);
  auto current = [&]() {
    const Eigen::MatrixXd ud = u.cast<double>();
    return Eigen::MatrixXd(ud.transpose() * gram * ud);
  };
  int k = 1;
  int guard = 0;
  while (k < g && guard++ < 10000) {
    Eigen::MatrixXd b = current();
    // Gram-Schmidt coefficients from the Gram matrix
    Eigen::MatrixXd mu = Eigen::MatrixXd::Zero(g, g);
    Eigen::VectorXd bstar(g);
    for (int i = 0; i < g; ++i) {
      for (int j = 0; j < i; ++j) {
        double s = b(i, j);
        for (int l = 0; l < j; ++l) s -= mu(j, l) * mu(i, l) * bstar(l);
        mu(i, j) = s / bstar(j);
      }
      double s = b(i, i);
      for (int l = 0; l < i; ++l) s -= mu(i, l) * mu(i, l) * bstar(l);
      bstar(i) = s;
    }
    for (int j = k - 1; j >= 0; --j) {
      const double r = std::round(mu(k, j));
      if (r != 0.0) {
        u.col(k) -= static_cast<int>(r) * u.col(j);
        for (int l = 0; l <= j; ++l) mu(k, l) -= r * (l == j ? 1.0 : mu(j, l));
      }
    }
    if (bstar(k) >= (0.99 - mu(k, k - 1) * mu(k, k - 1)) * bstar(k - 1)) {
      ++k;
    } else {
      u.col(k).swap(u.col(k - 1));
      k = std::max(k - 1, 1);
    }
  }
  return u;
}

const char* to_string(LatticeFamily family) {
  switch (family) {
    case LatticeFamily::e8: return "E8";
    case LatticeFamily::e8_squared: return "E8+E8";
    case LatticeFamily::d16_plus: return "D16+";
  }
  return "?";
}

namespace {

SiegelPoint reduced(const SiegelPoint& T, const ThetaOptions& options) {
  if (!options.reduce || T.g() == 1) return T;
  const Eigen::MatrixXi u = lll_reduce(T.T.imag());
  const CMatrix uc = u.cast<double>().cast<Complex>();
  return SiegelPoint(CMatrix(uc.transpose() * T.T * uc));
}

struct PowerSums {
  Complex s8 = 0.0, s16 = 0.0;
};

PowerSums even_power_sums(const SiegelPoint& T, const ThetaOptions& options) {
  const SiegelPoint r = reduced(T, options);
  const auto th = all_theta_constants(r, options);
  const int g = r.g();
  const std::size_t n = std::size_t{1} << g;
  PowerSums s;
  for (std::size_t e = 0; e < n; ++e)
    for (std::size_t d = 0; d < n; ++d) {
      if (std::popcount(e & d) % 2 != 0) continue;
      const Complex t2 = th[e * n + d] * th[e * n + d];
      const Complex t4 = t2 * t2;
      const Complex t8 = t4 * t4;
      s.s8 += t8;
      s.s16 += t8 * t8;
    }
  return s;
}

}  // namespace

Complex theta_series_via_constants(LatticeFamily family, const SiegelPoint& T, const ThetaOptions& options) {
  const auto s = even_power_sums(T, options);
  const double inv = std::ldexp(1.0, -T.g());
  switch (family) {
    case LatticeFamily::e8: return inv * s.s8;
    case LatticeFamily::e8_squared: return inv * inv * s.s8 * s.s8;
    case LatticeFamily::d16_plus: return inv * s.s16;
  }
  throw ArgumentError("unknown lattice family");
}

SchottkyValue schottky_form(const SiegelPoint& T, const ThetaOptions& options) {
  const auto s = even_power_sums(T, options);
  const double inv = std::ldexp(1.0, -T.g());
  SchottkyValue v;
  v.e8_squared = inv * inv * s.s8 * s.s8;
  v.d16_plus = inv * s.s16;
  v.value = v.e8_squared - v.d16_plus;
  v.scale = std::max(std::abs(v.e8_squared), std::abs(v.d16_plus));
  return v;
}

PhiResult siegel_phi(const SiegelForm& form, const SiegelPoint& tau, const std::vector<double>& t_list,
                     double absolute_noise) {
  if (t_list.size() < 2) throw ArgumentError("siegel_phi: need at least two t values");
  for (std::size_t i = 1; i < t_list.size(); ++i)
    if (!(t_list[i] > t_list[i - 1])) throw ArgumentError("siegel_phi: t values must be increasing");
  if (!(t_list.front() > 0.0)) throw ArgumentError("siegel_phi: t values must be positive");
  if (!(t_list.back() >= 10.0)) throw ArgumentError("siegel_phi: the last t value must be at least 10");
  PhiResult r;
  r.t_list = t_list;
  double largest = 0.0;
  for (double t : t_list) {
    r.values.push_back(form(SiegelPoint::block_diagonal(tau, Complex(0.0, t))));
    largest = std::max(largest, std::abs(r.values.back()));
  }
  for (std::size_t i = 1; i < r.values.size(); ++i) r.differences.push_back(std::abs(r.values[i] - r.values[i - 1]));
  const double floor = std::max(absolute_noise, 1e-12 * largest);
  for (std::size_t i = 1; i < r.differences.size(); ++i)
    if (r.differences[i] > r.differences[i - 1] + floor)
      throw DiagnosticFailure("siegel_phi: values at blockdiag(tau, i t) do not settle as t grows");
  r.value = r.values.back();
  return r;
}

Complex j_invariant(const SiegelPoint& tau, const ThetaOptions& options) {
  if (tau.g() != 1) throw DomainError("j_invariant: degree must be 1");
  const auto th = all_theta_constants(tau, options);
  // index eps * 2 + delta
  const Complex t3 = th[0], t4 = th[1], t2 = th[2];
  auto p8 = [](Complex z) {
    const Complex z2 = z * z, z4 = z2 * z2;
    return z4 * z4;
  };
  const Complex s = p8(t2) + p8(t3) + p8(t4);
  return 32.0 * s * s * s / p8(t2 * t3 * t4);
}

}  // namespace periodvar
