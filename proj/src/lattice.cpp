#include "periodvar/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "periodvar/errors.hpp"
#include "periodvar/summation.hpp"

namespace periodvar {

LatticeSpec LatticeSpec::e8() {
  LatticeSpec l;
  l.name = "E8";
  l.gram = 2 * Eigen::MatrixXi::Identity(8, 8);
  // Bourbaki labelling: chain 1-3-4-5-6-7-8 with 2 attached to 4.
  const int edges[7][2] = {{1, 3}, {3, 4}, {4, 5}, {5, 6}, {6, 7}, {7, 8}, {2, 4}};
  for (const auto& e : edges) {
    l.gram(e[0] - 1, e[1] - 1) = -1;
    l.gram(e[1] - 1, e[0] - 1) = -1;
  }
  return l;
}

LatticeSpec LatticeSpec::d16_plus() {
  constexpr int n = 16;
  // D16 basis e_i - e_{i+1} (i < 16) and e_15 + e_16, glued by (1/2, ..., 1/2).
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n, n);  // rows are basis vectors
  for (int i = 0; i + 1 < n; ++i) {
    b(i, i) = 1.0;
    b(i, i + 1) = -1.0;
  }
  b(n - 1, n - 2) = 1.0;
  b(n - 1, n - 1) = 1.0;
  LatticeSpec l;
  l.name = "D16+";
  l.gram = (b * b.transpose()).array().round().cast<int>();
  const Eigen::VectorXd half = Eigen::VectorXd::Constant(n, 0.5);
  const Eigen::VectorXd coords = b.transpose().fullPivLu().solve(half);
  l.glue_doubled.push_back((2.0 * coords).array().round().cast<int>());
  return l;
}

LatticeSpec LatticeSpec::by_name(const std::string& name) {
  if (name == "E8") return e8();
  if (name == "D16+" || name == "D16plus") return d16_plus();
  throw ArgumentError("unknown lattice '" + name + "' (expected E8 or D16+)");
}

void LatticeSpec::validate() const {
  const int r = rank();
  if (r < 1 || gram.cols() != r) throw ArgumentError("lattice: Gram matrix must be square and nonempty");
  if (gram != gram.transpose()) throw ArgumentError("lattice: Gram matrix is not symmetric");
  for (int i = 0; i < r; ++i)
    if (gram(i, i) % 2 != 0) throw ArgumentError("lattice: Gram matrix has an odd diagonal entry");
  Eigen::LLT<Eigen::MatrixXd> llt(gram.cast<double>());
  if (llt.info() != Eigen::Success) throw ArgumentError("lattice: Gram matrix is not positive definite");
  for (std::size_t a = 0; a < glue_doubled.size(); ++a) {
    const auto& c = glue_doubled[a];
    if (c.size() != r) throw ArgumentError("lattice: glue vector has the wrong length");
    const Eigen::VectorXi gc = gram * c;
    for (int j = 0; j < r; ++j)
      if (gc(j) % 2 != 0) throw ArgumentError("lattice: glue vector has non-integral inner products");
    if ((c.dot(gc)) % 8 != 0) throw ArgumentError("lattice: glue vector has odd or non-integral norm");
    for (std::size_t b = 0; b < a; ++b)
      if ((glue_doubled[b].dot(gc)) % 4 != 0) throw ArgumentError("lattice: glue vectors pair non-integrally");
  }
}

double LatticeSpec::determinant() const {
  const double k = static_cast<double>(glue_doubled.size() + 1);
  return gram.cast<double>().determinant() / (k * k);
}

std::vector<std::size_t> LatticeVectors::norm_counts() const {
  std::vector<std::size_t> counts;
  for (int n : norms) {
    if (static_cast<std::size_t>(n) >= counts.size()) counts.resize(n + 1, 0);
    ++counts[n];
  }
  return counts;
}

namespace {

struct Enumerator {
  int r;
  Eigen::MatrixXd q;  // xGx = sum_i q_ii (x_i + sum_{j>i} q_ij x_j)^2
  const Eigen::MatrixXi& gram;
  int bound;
  Eigen::VectorXi coset;  // doubled
  Eigen::VectorXi x2;     // doubled coordinates being built
  std::vector<std::int8_t>* coords;
  std::vector<int>* norms;

  void recurse(int i, double remaining) {
    if (i < 0) {
      const int norm2 = x2.dot(gram * x2);  // 4 <x, x>
      if (norm2 % 4 != 0) throw ArgumentError("lattice: vector with non-integral norm");
      if (norm2 / 4 > bound) return;
      for (int j = 0; j < r; ++j) {
        if (std::abs(x2(j)) > 127) throw ArgumentError("enumerate_vectors: coordinates out of storage range");
        coords->push_back(static_cast<std::int8_t>(x2(j)));
      }
      norms->push_back(norm2 / 4);
      return;
    }
    double center = 0.0;
    for (int j = i + 1; j < r; ++j) center -= q(i, j) * 0.5 * x2(j);
    const double rad = std::sqrt(std::max(remaining, 0.0) / q(i, i)) + 1e-9;
    const double off = 0.5 * coset(i);
    const long lo = static_cast<long>(std::ceil(center - rad - off));
    const long hi = static_cast<long>(std::floor(center + rad - off));
    for (long k = lo; k <= hi; ++k) {
      const double xi = static_cast<double>(k) + off;
      const double d = xi - center;
      const double rem = remaining - q(i, i) * d * d;
      if (rem < -1e-9) continue;
      x2(i) = static_cast<int>(2 * k + coset(i));
      recurse(i - 1, rem);
    }
    x2(i) = 0;
  }
};

}  // namespace

LatticeVectors enumerate_vectors(const LatticeSpec& lattice, int bound) {
  lattice.validate();
  if (bound < 0) throw ArgumentError("enumerate_vectors: bound must be non-negative");
  const int r = lattice.rank();
  Eigen::MatrixXd q = lattice.gram.cast<double>();
  for (int i = 0; i < r; ++i) {
    for (int j = i + 1; j < r; ++j) {
      q(j, i) = q(i, j);
      q(i, j) /= q(i, i);
    }
    for (int k = i + 1; k < r; ++k)
      for (int l = k; l < r; ++l) q(k, l) -= q(k, i) * q(i, l);
  }
  // Rough count from the volume of the ball; refuse enumerations that would
  // not fit in memory.
  const double expected = std::exp(0.5 * r * std::log(std::numbers::pi * bound) - std::lgamma(0.5 * r + 1.0)) /
                          std::sqrt(lattice.determinant());
  if (expected > 5e7) throw ArgumentError("enumerate_vectors: bound too large for this lattice");

  std::vector<std::int8_t> coords;
  std::vector<int> norms;
  std::vector<Eigen::VectorXi> cosets{Eigen::VectorXi::Zero(r)};
  for (const auto& c : lattice.glue_doubled) cosets.push_back(c);
  for (const auto& c : cosets) {
    Enumerator e{r, q, lattice.gram, bound, c, Eigen::VectorXi::Zero(r), &coords, &norms};
    e.recurse(r - 1, static_cast<double>(bound) + 1e-9);
  }
  std::vector<std::size_t> order(norms.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return norms[a] < norms[b]; });

  LatticeVectors v;
  v.rank = r;
  v.doubled.reserve(coords.size());
  v.gram_times.reserve(coords.size());
  v.norms.reserve(norms.size());
  Eigen::VectorXi x2(r);
  for (std::size_t idx : order) {
    for (int i = 0; i < r; ++i) x2(i) = coords[idx * r + i];
    const Eigen::VectorXi gx = lattice.gram * x2;
    for (int i = 0; i < r; ++i) {
      v.doubled.push_back(static_cast<std::int8_t>(x2(i)));
      if (std::abs(gx(i)) > 32767) throw ArgumentError("enumerate_vectors: coordinates out of storage range");
      v.gram_times.push_back(static_cast<std::int16_t>(gx(i)));
    }
    v.norms.push_back(norms[idx]);
  }
  return v;
}

namespace {

struct TupleSum {
  const LatticeVectors& vecs;
  int g;
  int bound;
  std::vector<std::size_t> prefix;  // prefix[n] = number of vectors with norm <= n
  std::vector<std::vector<Complex>> diag;  // diag[p][n] = exp(pi i n T_pp)
  std::vector<std::vector<std::vector<Complex>>> off;  // off[p][q][ip + bound] = exp(2 pi i ip T_pq)
  std::vector<std::size_t> chosen;

  int inner(std::size_t a, std::size_t b) const {
    const int r = vecs.rank;
    const std::int8_t* x = &vecs.doubled[a * r];
    const std::int16_t* y = &vecs.gram_times[b * r];
    int s = 0;
    for (int i = 0; i < r; ++i) s += x[i] * y[i];
    return s / 4;
  }

  Complex sum(int p, int remaining, Complex weight) {
    const std::size_t end = prefix[remaining];
    CompensatedSum total;
    for (std::size_t a = 0; a < end; ++a) {
      const int n = vecs.norms[a];
      Complex w = weight * diag[p][n];
      for (int q = 0; q < p; ++q) w *= off[q][p][inner(chosen[q], a) + bound];
      if (p + 1 == g) {
        total += w;
      } else {
        chosen[p] = a;
        total += sum(p + 1, remaining - n, w);
      }
    }
    return total.value();
  }
};

double log_ball_volume(int d) {
  return 0.5 * d * std::log(std::numbers::pi) - std::lgamma(0.5 * d + 1.0);
}

}  // namespace

LatticeThetaResult lattice_theta(const LatticeSpec& lattice, const SiegelPoint& T, const LatticeThetaOptions& options) {
  const int g = T.g();
  if (lattice.rank() >= 16 && g > 2 && !options.allow_expensive)
    throw ArgumentError("lattice_theta: degree > 2 for a rank >= 16 lattice needs allow_expensive");
  if (options.bound < 0 || options.bound > 64) throw ArgumentError("lattice_theta: bound must be in 0..64");
  const auto vecs = enumerate_vectors(lattice, options.bound);

  TupleSum ts{vecs, g, options.bound, {}, {}, {}, std::vector<std::size_t>(g, 0)};
  ts.prefix.assign(options.bound + 1, 0);
  for (int n = 0; n <= options.bound; ++n)
    ts.prefix[n] = static_cast<std::size_t>(
        std::upper_bound(vecs.norms.begin(), vecs.norms.end(), n) - vecs.norms.begin());
  const Complex pi_i{0.0, std::numbers::pi};
  ts.diag.assign(g, std::vector<Complex>(options.bound + 1));
  ts.off.assign(g, std::vector<std::vector<Complex>>(g, std::vector<Complex>(2 * options.bound + 1)));
  for (int p = 0; p < g; ++p) {
    for (int n = 0; n <= options.bound; ++n) ts.diag[p][n] = std::exp(pi_i * static_cast<double>(n) * T.T(p, p));
    for (int q = p + 1; q < g; ++q)
      for (int ip = -options.bound; ip <= options.bound; ++ip)
        ts.off[p][q][ip + options.bound] = std::exp(2.0 * pi_i * static_cast<double>(ip) * T.T(p, q));
  }

  LatticeThetaResult res;
  res.value = ts.sum(0, options.bound, 1.0);
  res.vectors = vecs.size();

  // Tuples of total norm B number about vol(ball of radius sqrt(B)) / det^{g/2}
  // in dimension rank * g; each has modulus at most exp(-pi lambda_min B).
  const int d = lattice.rank() * g;
  const double lambda = T.min_imag_eigenvalue();
  const double log_det = 0.5 * g * std::log(lattice.determinant());
  auto log_count = [&](double b) { return log_ball_volume(d) + 0.5 * d * std::log(b) - log_det; };
  for (int b = options.bound + 1; b <= options.bound + 2000; ++b) {
    const double shell = std::exp(log_count(b)) - std::exp(log_count(std::max(b - 1, 0)));
    const double term = shell * std::exp(-std::numbers::pi * lambda * b);
    res.tail_estimate += term;
    if (b > options.bound + 10 && term < 1e-30 * res.tail_estimate) break;
  }
  res.truncation_warning = res.tail_estimate > options.tail_warning;
  return res;
}

}  // namespace periodvar
