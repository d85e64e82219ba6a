#include "periodvar/exact_span.hpp"

#include <algorithm>
#include <future>
#include <optional>
#include <random>

#include <Eigen/Dense>

namespace periodvar {

namespace {

void check_dimension(int n, int minimum, const char* what) {
  if (n < minimum) throw ArgumentError(std::string(what) + ": dimension too small");
}

// Reduced row echelon form in place; returns pivot column of each pivot row.
std::vector<std::size_t> row_reduce(std::vector<RationalVector>& rows) {
  std::vector<std::size_t> pivots;
  if (rows.empty()) return pivots;
  const std::size_t cols = rows.front().size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows.size(); ++c) {
    std::size_t pivot = r;
    while (pivot < rows.size() && sgn(rows[pivot][c]) == 0) ++pivot;
    if (pivot == rows.size()) continue;
    std::swap(rows[r], rows[pivot]);
    const Rational inv = 1 / rows[r][c];
    for (std::size_t j = c; j < cols; ++j) rows[r][j] *= inv;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == r || sgn(rows[i][c]) == 0) continue;
      const Rational factor = rows[i][c];
      for (std::size_t j = c; j < cols; ++j) rows[i][j] -= factor * rows[r][j];
    }
    pivots.push_back(c);
    ++r;
  }
  rows.resize(r);
  return pivots;
}

// Rank modulo the prime 2^61 - 1, or nullopt when some denominator vanishes
// there. Reduction mod p can only lower the rank, so this is a lower bound
// for the rank over Q.
std::optional<std::size_t> modular_rank(const std::vector<RationalVector>& rows) {
  constexpr std::uint64_t p = (std::uint64_t{1} << 61) - 1;
  const auto mul = [](std::uint64_t a, std::uint64_t b) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % p);
  };
  const auto inverse = [&](std::uint64_t a) {
    std::uint64_t result = 1, e = p - 2;
    for (; e; e >>= 1, a = mul(a, a))
      if (e & 1) result = mul(result, a);
    return result;
  };
  const std::size_t cols = rows.front().size();
  std::vector<std::vector<std::uint64_t>> m(rows.size(), std::vector<std::uint64_t>(cols));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols; ++j) {
      const auto& q = rows[i][j];
      const std::uint64_t den = mpz_fdiv_ui(q.get_den_mpz_t(), p);
      if (den == 0) return std::nullopt;
      m[i][j] = mul(mpz_fdiv_ui(q.get_num_mpz_t(), p), inverse(den));
    }
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < m.size(); ++c) {
    std::size_t pivot = r;
    while (pivot < m.size() && m[pivot][c] == 0) ++pivot;
    if (pivot == m.size()) continue;
    std::swap(m[r], m[pivot]);
    const std::uint64_t inv = inverse(m[r][c]);
    for (std::size_t j = c; j < cols; ++j) m[r][j] = mul(m[r][j], inv);
    for (std::size_t i = r + 1; i < m.size(); ++i) {
      const std::uint64_t f = m[i][c];
      if (f == 0) continue;
      for (std::size_t j = c; j < cols; ++j) m[i][j] = (m[i][j] + p - mul(f, m[r][j])) % p;
    }
    ++r;
  }
  return r;
}

template <class T>
void check_vectors(const std::vector<std::vector<T>>& vectors, const char* what) {
  if (vectors.empty()) throw ArgumentError(std::string(what) + ": no vectors");
  const auto g = vectors.front().size();
  if (g == 0) throw ArgumentError(std::string(what) + ": zero-dimensional vectors");
  for (const auto& v : vectors)
    if (v.size() != g) throw ArgumentError(std::string(what) + ": mismatched vector dimensions");
}

Eigen::MatrixXcd to_eigen(const std::vector<ComplexVector>& rows) {
  Eigen::MatrixXcd m(rows.size(), rows.empty() ? 0 : rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != static_cast<std::size_t>(m.cols()))
      throw ArgumentError("complex_rank: mixed dimensions");
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
  }
  return m;
}

Rational random_rational(std::mt19937_64& rng, int bound) {
  std::uniform_int_distribution<long> num(-bound, bound);
  std::uniform_int_distribution<long> den(1, bound);
  Rational q(num(rng), den(rng));
  q.canonicalize();
  return q;
}

std::uint64_t trial_seed(std::uint64_t seed, int trial) {
  // splitmix64 step keyed by the trial index
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(trial + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::size_t vector_rank(const std::vector<RationalVector>& vectors) {
  return rational_rank(vectors);
}

std::vector<SymMatrix<Rational>> sigma_family(const std::vector<RationalVector>& w, SigmaForm form) {
  const int n = static_cast<int>(w.size());
  std::vector<SymMatrix<Rational>> family;
  family.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (int k = 1; k <= n; ++k)
    for (int l = k + 1; l <= n; ++l) family.push_back(sigma_tensor(w, k, l, form));
  return family;
}

SigmaTrial run_sigma_trial(int n, int g, bool zero_sum, std::uint64_t seed,
                           const SigmaSpanOptions& options) {
  std::mt19937_64 rng(seed);
  const std::size_t expected_vectors =
      zero_sum ? static_cast<std::size_t>(n - 1) : static_cast<std::size_t>(std::min(n, g));
  for (int attempt = 0; attempt <= options.max_redraws; ++attempt) {
    std::vector<RationalVector> w(n, RationalVector(g));
    const int drawn = zero_sum ? n - 1 : n;
    for (int i = 0; i < drawn; ++i)
      for (int c = 0; c < g; ++c) w[i][c] = random_rational(rng, options.bound);
    if (zero_sum)
      for (int c = 0; c < g; ++c) {
        Rational s = 0;
        for (int i = 0; i < n - 1; ++i) s -= w[i][c];
        w[n - 1][c] = s;
      }
    const std::size_t vr = vector_rank(w);
    if (vr != expected_vectors) continue;
    SigmaTrial trial;
    trial.vector_rank = vr;
    trial.redraws = attempt;
    trial.rank = span_rank(sigma_family(w, options.form));
    return trial;
  }
  throw NumericalError("verify_sigma_span: degenerate samples exceeded the redraw cap");
}

}  // namespace

SymTensor::SymTensor(int n) : n_(n), coeffs_(basis_size(n < 0 ? 0 : n)) {
  check_dimension(n, 1, "SymTensor");
}

std::size_t SymTensor::index(int k, int l) const {
  if (k > l) std::swap(k, l);
  if (k < 1 || l > n_) throw ArgumentError("SymTensor: index out of range");
  const std::size_t a = static_cast<std::size_t>(k - 1);
  return a * n_ - a * (a - 1) / 2 + static_cast<std::size_t>(l - k);
}

bool SymTensor::is_zero() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](const Rational& q) { return sgn(q) == 0; });
}

SymTensor& SymTensor::operator+=(const SymTensor& other) {
  if (other.n_ != n_) throw ArgumentError("SymTensor: dimension mismatch");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
  return *this;
}

SymTensor& SymTensor::operator-=(const SymTensor& other) {
  if (other.n_ != n_) throw ArgumentError("SymTensor: dimension mismatch");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
  return *this;
}

SymTensor& SymTensor::operator*=(const Rational& scalar) {
  for (auto& c : coeffs_) c *= scalar;
  return *this;
}

SymTensor SymTensor::monomial(int n, int k, int l) {
  SymTensor t(n);
  t.set(k, l, 1);
  return t;
}

SymTensor tau_tensor(int k, int l, int n) {
  check_dimension(n, 2, "tau_tensor");
  if (k < 1 || l > n || k >= l) throw ArgumentError("tau_tensor: need 1 <= k < l <= n");
  SymTensor t(n);
  for (int j = 1; j <= n; ++j) t.set(j, j, 1);  // p_2
  t.set(k, k, 0);
  t.set(l, l, 0);
  t.set(k, l, 1);
  return t;
}

SymTensor e1_times(int i, int n) {
  check_dimension(n, 1, "e1_times");
  if (i < 1 || i > n) throw ArgumentError("e1_times: index out of range");
  SymTensor t(n);
  for (int j = 1; j <= n; ++j) t.add(j, i, 1);
  return t;
}

const char* to_string(SigmaForm form) {
  return form == SigmaForm::symmetric_product ? "symmetric_product" : "period_tensor";
}

template <class T>
SymMatrix<T> sigma_tensor(const std::vector<std::vector<T>>& vectors, int k, int l, SigmaForm form) {
  check_vectors(vectors, "sigma_tensor");
  const int n = static_cast<int>(vectors.size());
  if (n < 3) throw ArgumentError("sigma_tensor: need n >= 3");
  if (k < 1 || l > n || k >= l) throw ArgumentError("sigma_tensor: need 1 <= k < l <= n");
  auto m = SymMatrix<T>::symmetric_outer(vectors[k - 1], vectors[l - 1]);
  if (form == SigmaForm::symmetric_product) m *= T(1) / T(2);
  for (int j = 1; j <= n; ++j) {
    if (j == k || j == l) continue;
    m += SymMatrix<T>::outer_square(vectors[j - 1]);
  }
  return m;
}

template SymMatrix<Rational> sigma_tensor(const std::vector<RationalVector>&, int, int, SigmaForm);
template SymMatrix<Complex> sigma_tensor(const std::vector<ComplexVector>&, int, int, SigmaForm);

SymMatrix<Rational> project(const SymTensor& tensor, const std::vector<RationalVector>& vectors) {
  check_vectors(vectors, "project");
  if (static_cast<int>(vectors.size()) != tensor.dim())
    throw ArgumentError("project: need one vector per basis element");
  const int n = tensor.dim();
  SymMatrix<Rational> out(static_cast<int>(vectors.front().size()));
  for (int k = 1; k <= n; ++k) {
    for (int l = k; l <= n; ++l) {
      const Rational& c = tensor.coeff(k, l);
      if (sgn(c) == 0) continue;
      if (k == l) {
        out += c * SymMatrix<Rational>::outer_square(vectors[k - 1]);
      } else {
        out += Rational(c / 2) * SymMatrix<Rational>::symmetric_outer(vectors[k - 1], vectors[l - 1]);
      }
    }
  }
  return out;
}

std::size_t rational_rank(std::vector<RationalVector> rows) {
  if (rows.empty()) return 0;
  const auto cols = rows.front().size();
  for (const auto& r : rows)
    if (r.size() != cols) throw ArgumentError("rational_rank: mixed dimensions");
  // A full rank mod p is a certificate; anything less needs exact elimination.
  const auto fast = modular_rank(rows);
  if (fast && *fast == std::min<std::size_t>(rows.size(), cols)) return *fast;
  return row_reduce(rows).size();
}

std::size_t complex_rank(const std::vector<ComplexVector>& rows, FloatRankConfig config) {
  if (rows.empty()) return 0;
  const Eigen::MatrixXcd m = to_eigen(rows);
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(m);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  std::size_t rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > config.relative_threshold * s(0)) ++rank;
  return rank;
}

std::size_t span_rank(const std::vector<SymTensor>& tensors) {
  if (tensors.empty()) return 0;
  std::vector<RationalVector> rows;
  rows.reserve(tensors.size());
  for (const auto& t : tensors) {
    if (t.dim() != tensors.front().dim()) throw ArgumentError("span_rank: mixed dimensions");
    rows.emplace_back(t.coefficients().begin(), t.coefficients().end());
  }
  return rational_rank(std::move(rows));
}

std::size_t span_rank(const std::vector<SymMatrix<Rational>>& tensors, RankMode mode,
                      FloatRankConfig config) {
  if (tensors.empty()) return 0;
  for (const auto& t : tensors)
    if (t.size() != tensors.front().size()) throw ArgumentError("span_rank: mixed dimensions");
  if (mode == RankMode::exact) {
    std::vector<RationalVector> rows;
    for (const auto& t : tensors) rows.emplace_back(t.packed().begin(), t.packed().end());
    return rational_rank(std::move(rows));
  }
  std::vector<ComplexVector> rows;
  for (const auto& t : tensors) {
    ComplexVector r;
    for (const auto& q : t.packed()) r.emplace_back(q.get_d());
    rows.push_back(std::move(r));
  }
  return complex_rank(rows, config);
}

std::size_t span_rank(const std::vector<SymMatrix<Complex>>& tensors, FloatRankConfig config) {
  if (tensors.empty()) return 0;
  std::vector<ComplexVector> rows;
  for (const auto& t : tensors) {
    if (t.size() != tensors.front().size()) throw ArgumentError("span_rank: mixed dimensions");
    rows.emplace_back(t.packed().begin(), t.packed().end());
  }
  return complex_rank(rows, config);
}

TauIndependenceReport verify_tau_independence(int n) {
  check_dimension(n, 2, "verify_tau_independence");
  std::vector<SymTensor> taus;
  for (int k = 1; k <= n; ++k)
    for (int l = k + 1; l <= n; ++l) taus.push_back(tau_tensor(k, l, n));
  TauIndependenceReport r;
  r.n = n;
  r.rank = span_rank(taus);
  r.expected = static_cast<std::size_t>(n) * (n - 1) / 2;
  r.pass = r.rank == r.expected;
  return r;
}

DirectSumReport verify_direct_sum_e1V(int n) {
  check_dimension(n, 2, "verify_direct_sum_e1V");
  std::vector<SymTensor> all;
  for (int k = 1; k <= n; ++k)
    for (int l = k + 1; l <= n; ++l) all.push_back(tau_tensor(k, l, n));
  for (int i = 1; i <= n; ++i) all.push_back(e1_times(i, n));
  DirectSumReport r;
  r.n = n;
  r.rank_union = span_rank(all);
  r.expected = SymTensor::basis_size(n);
  r.pass = r.rank_union == r.expected;
  return r;
}

SigmaSpanReport verify_sigma_span(int n, int g, int trials, bool zero_sum, std::uint64_t seed,
                                  const SigmaSpanOptions& options) {
  if (n < 3) throw ArgumentError("verify_sigma_span: need n >= 3");
  if (g < n) throw ArgumentError("verify_sigma_span: need n <= g");
  if (trials < 1) throw ArgumentError("verify_sigma_span: need at least one trial");
  if (options.bound < 1) throw ArgumentError("verify_sigma_span: bound must be positive");

  SigmaSpanReport report;
  report.n = n;
  report.g = g;
  report.zero_sum = zero_sum;
  report.form = options.form;
  report.expected = static_cast<std::size_t>(n) * (n - 1) / 2;

  // Each trial owns an RNG derived from (seed, trial), so scheduling cannot
  // change the outcome.
  std::vector<std::future<SigmaTrial>> pending;
  for (int t = 0; t < trials; ++t) {
    const auto policy = options.parallel ? std::launch::async : std::launch::deferred;
    pending.push_back(std::async(policy, run_sigma_trial, n, g, zero_sum, trial_seed(seed, t),
                                 std::cref(options)));
  }
  for (auto& f : pending) report.trials.push_back(f.get());
  report.pass = std::all_of(report.trials.begin(), report.trials.end(),
                            [&](const SigmaTrial& t) { return t.rank == report.expected; });
  return report;
}

SigmaSampleRank sigma_span_rank(const std::vector<RationalVector>& vectors, SigmaForm form) {
  check_vectors(vectors, "sigma_span_rank");
  const int n = static_cast<int>(vectors.size());
  const int g = static_cast<int>(vectors.front().size());
  if (n < 3) throw ArgumentError("sigma_span_rank: need n >= 3");
  bool sums_to_zero = true;
  for (int c = 0; c < g && sums_to_zero; ++c) {
    Rational s = 0;
    for (const auto& w : vectors) s += w[c];
    sums_to_zero = sgn(s) == 0;
  }
  SigmaSampleRank r;
  r.vector_rank = vector_rank(vectors);
  r.expected_vector_rank =
      sums_to_zero ? static_cast<std::size_t>(n - 1) : static_cast<std::size_t>(std::min(n, g));
  r.degenerate = r.vector_rank < r.expected_vector_rank;
  r.rank = span_rank(sigma_family(vectors, form));
  return r;
}

std::vector<SymMatrix<Rational>> quadrics_through(const std::vector<RationalVector>& points) {
  check_vectors(points, "quadrics_through");
  const int g = static_cast<int>(points.front().size());
  const std::size_t unknowns = SymTensor::basis_size(g);
  // Unknowns are the packed entries Q_pq (p <= q); v^T Q v weights the
  // off-diagonal ones twice.
  std::vector<RationalVector> rows;
  for (const auto& v : points) {
    RationalVector row;
    row.reserve(unknowns);
    for (int p = 0; p < g; ++p)
      for (int q = p; q < g; ++q) row.push_back(p == q ? Rational(v[p] * v[p]) : Rational(2 * v[p] * v[q]));
    rows.push_back(std::move(row));
  }
  const auto pivots = row_reduce(rows);
  std::vector<bool> is_pivot(unknowns, false);
  for (auto c : pivots) is_pivot[c] = true;

  std::vector<SymMatrix<Rational>> basis;
  for (std::size_t free = 0; free < unknowns; ++free) {
    if (is_pivot[free]) continue;
    RationalVector x(unknowns);
    x[free] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = -rows[r][free];
    SymMatrix<Rational> q(g);
    std::size_t idx = 0;
    for (int p = 0; p < g; ++p)
      for (int c = p; c < g; ++c) q.set(p, c, x[idx++]);
    basis.push_back(std::move(q));
  }
  return basis;
}

std::vector<SymMatrix<Complex>> quadrics_through(const std::vector<ComplexVector>& points,
                                                 FloatRankConfig config) {
  check_vectors(points, "quadrics_through");
  const int g = static_cast<int>(points.front().size());
  const auto unknowns = static_cast<Eigen::Index>(SymTensor::basis_size(g));
  Eigen::MatrixXcd m(static_cast<Eigen::Index>(points.size()), unknowns);
  for (std::size_t i = 0; i < points.size(); ++i) {
    Eigen::Index idx = 0;
    for (int p = 0; p < g; ++p)
      for (int q = p; q < g; ++q)
        m(i, idx++) = p == q ? points[i][p] * points[i][p] : 2.0 * points[i][p] * points[i][q];
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double smax = s.size() > 0 ? s(0) : 0.0;
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > config.relative_threshold * smax) ++rank;
  std::vector<SymMatrix<Complex>> basis;
  const auto& v = svd.matrixV();
  for (Eigen::Index col = rank; col < unknowns; ++col) {
    SymMatrix<Complex> q(g);
    Eigen::Index idx = 0;
    for (int p = 0; p < g; ++p)
      for (int c = p; c < g; ++c) q.set(p, c, v(idx++, col));
    basis.push_back(std::move(q));
  }
  return basis;
}

Rational trace_pairing(const SymMatrix<Rational>& quadric, const SymMatrix<Rational>& sigma) {
  if (quadric.size() != sigma.size()) throw ArgumentError("trace_pairing: size mismatch");
  Rational s = 0;
  for (int p = 0; p < quadric.size(); ++p)
    for (int q = 0; q < quadric.size(); ++q) s += quadric(p, q) * sigma(q, p);
  return s;
}

Complex trace_pairing(const SymMatrix<Complex>& quadric, const SymMatrix<Complex>& sigma) {
  if (quadric.size() != sigma.size()) throw ArgumentError("trace_pairing: size mismatch");
  Complex s = 0;
  for (int p = 0; p < quadric.size(); ++p)
    for (int q = 0; q < quadric.size(); ++q) s += quadric(p, q) * sigma(q, p);
  return s;
}

Rational evaluate_quadric(const SymMatrix<Rational>& quadric, const RationalVector& v) {
  if (static_cast<int>(v.size()) != quadric.size()) throw ArgumentError("evaluate_quadric: size mismatch");
  Rational s = 0;
  for (int p = 0; p < quadric.size(); ++p)
    for (int q = 0; q < quadric.size(); ++q) s += v[p] * quadric(p, q) * v[q];
  return s;
}

Complex evaluate_quadric(const SymMatrix<Complex>& quadric, const ComplexVector& v) {
  if (static_cast<int>(v.size()) != quadric.size()) throw ArgumentError("evaluate_quadric: size mismatch");
  Complex s = 0;
  for (int p = 0; p < quadric.size(); ++p)
    for (int q = 0; q < quadric.size(); ++q) s += v[p] * quadric(p, q) * v[q];
  return s;
}

}  // namespace periodvar
