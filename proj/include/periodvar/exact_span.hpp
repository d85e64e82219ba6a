#pragma once

// Exact linear algebra on symmetric squares: the tau tensors in Sym^2 of the
// permutation representation, the sigma family built from n vectors, rank
// checks over Q, and spaces of quadrics through point sets.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <gmpxx.h>

#include "periodvar/errors.hpp"

namespace periodvar {

using Rational = mpq_class;
using Complex = std::complex<double>;

/// Element of Sym^2 V for V = Q^n with basis v_1..v_n, stored as coefficients
/// of the monomials v_k v_l (k <= l). Indices are 1-based.
class SymTensor {
 public:
  explicit SymTensor(int n);

  int dim() const { return n_; }
  static std::size_t basis_size(int n) { return static_cast<std::size_t>(n) * (n + 1) / 2; }

  const Rational& coeff(int k, int l) const { return coeffs_[index(k, l)]; }
  void set(int k, int l, const Rational& value) { coeffs_[index(k, l)] = value; }
  void add(int k, int l, const Rational& value) { coeffs_[index(k, l)] += value; }

  std::span<const Rational> coefficients() const { return coeffs_; }
  bool is_zero() const;

  SymTensor& operator+=(const SymTensor& other);
  SymTensor& operator-=(const SymTensor& other);
  SymTensor& operator*=(const Rational& scalar);

  friend SymTensor operator+(SymTensor a, const SymTensor& b) { return a += b; }
  friend SymTensor operator-(SymTensor a, const SymTensor& b) { return a -= b; }
  friend SymTensor operator*(const Rational& s, SymTensor a) { return a *= s; }
  friend bool operator==(const SymTensor& a, const SymTensor& b) {
    return a.n_ == b.n_ && a.coeffs_ == b.coeffs_;
  }

  /// The monomial v_k v_l.
  static SymTensor monomial(int n, int k, int l);

 private:
  std::size_t index(int k, int l) const;

  int n_;
  std::vector<Rational> coeffs_;
};

/// Symmetric g x g matrix with packed upper-triangular storage, so symmetry
/// holds by construction. Entry indices are 0-based.
template <class T>
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(int g) : g_(g), packed_(static_cast<std::size_t>(g) * (g + 1) / 2, T(0)) {
    if (g < 1) throw ArgumentError("SymMatrix: size must be positive");
  }

  int size() const { return g_; }

  const T& operator()(int p, int q) const { return packed_[index(p, q)]; }
  void set(int p, int q, const T& v) { packed_[index(p, q)] = v; }
  void add(int p, int q, const T& v) { packed_[index(p, q)] += v; }

  /// Upper-triangular entries in row-major order; a linear isomorphism onto
  /// the space of symmetric matrices.
  std::span<const T> packed() const { return packed_; }

  SymMatrix& operator+=(const SymMatrix& o) {
    check_same(o);
    for (std::size_t i = 0; i < packed_.size(); ++i) packed_[i] += o.packed_[i];
    return *this;
  }
  SymMatrix& operator-=(const SymMatrix& o) {
    check_same(o);
    for (std::size_t i = 0; i < packed_.size(); ++i) packed_[i] -= o.packed_[i];
    return *this;
  }
  SymMatrix& operator*=(const T& s) {
    for (auto& v : packed_) v *= s;
    return *this;
  }
  friend SymMatrix operator+(SymMatrix a, const SymMatrix& b) { return a += b; }
  friend SymMatrix operator-(SymMatrix a, const SymMatrix& b) { return a -= b; }
  friend SymMatrix operator*(const T& s, SymMatrix a) { return a *= s; }
  friend bool operator==(const SymMatrix& a, const SymMatrix& b) {
    return a.g_ == b.g_ && a.packed_ == b.packed_;
  }

  /// a (x) a
  static SymMatrix outer_square(std::span<const T> a) {
    SymMatrix m(static_cast<int>(a.size()));
    for (int p = 0; p < m.g_; ++p)
      for (int q = p; q < m.g_; ++q) m.set(p, q, a[p] * a[q]);
    return m;
  }

  /// a (x) b + b (x) a
  static SymMatrix symmetric_outer(std::span<const T> a, std::span<const T> b) {
    if (a.size() != b.size()) throw ArgumentError("symmetric_outer: dimension mismatch");
    SymMatrix m(static_cast<int>(a.size()));
    for (int p = 0; p < m.g_; ++p)
      for (int q = p; q < m.g_; ++q) m.set(p, q, a[p] * b[q] + b[p] * a[q]);
    return m;
  }

 private:
  std::size_t index(int p, int q) const {
    if (p > q) std::swap(p, q);
    if (p < 0 || q >= g_) throw ArgumentError("SymMatrix: index out of range");
    return static_cast<std::size_t>(p) * g_ - static_cast<std::size_t>(p) * (p - 1) / 2 + (q - p);
  }
  void check_same(const SymMatrix& o) const {
    if (o.g_ != g_) throw ArgumentError("SymMatrix: size mismatch");
  }

  int g_ = 0;
  std::vector<T> packed_;
};

using RationalVector = std::vector<Rational>;
using ComplexVector = std::vector<Complex>;

/// tau_{kl} = v_k v_l - v_k^2 - v_l^2 + sum_j v_j^2, for 1 <= k < l <= n.
SymTensor tau_tensor(int k, int l, int n);

/// e_1 v_i = (v_1 + ... + v_n) v_i.
SymTensor e1_times(int i, int n);

/// How the Sym^2 element w_k w_l + sum_{j != k,l} w_j^2 is written as a
/// symmetric matrix.
enum class SigmaForm {
  /// w_k w_l -> (w_k (x) w_l + w_l (x) w_k) / 2 and w_j^2 -> w_j (x) w_j.
  /// This is the image of tau_{kl} under v_i -> w_i.
  symmetric_product,
  /// w_k (x) w_l + w_l (x) w_k + sum w_j (x) w_j, the normalisation in which
  /// the first-order period variation tensors are written.
  period_tensor,
};

const char* to_string(SigmaForm form);

template <class T>
SymMatrix<T> sigma_tensor(const std::vector<std::vector<T>>& vectors, int k, int l,
                          SigmaForm form = SigmaForm::period_tensor);

extern template SymMatrix<Rational> sigma_tensor(const std::vector<RationalVector>&, int, int,
                                                 SigmaForm);
extern template SymMatrix<Complex> sigma_tensor(const std::vector<ComplexVector>&, int, int,
                                                SigmaForm);

/// Image of a tensor in Sym^2 V under the linear map v_i -> w_i, in the
/// symmetric_product convention.
SymMatrix<Rational> project(const SymTensor& tensor, const std::vector<RationalVector>& vectors);

struct FloatRankConfig {
  double relative_threshold = 1e-8;  // singular values below this * largest are zero
};

enum class RankMode { exact, floating };

std::size_t rational_rank(std::vector<RationalVector> rows);
std::size_t complex_rank(const std::vector<ComplexVector>& rows, FloatRankConfig config = {});

std::size_t span_rank(const std::vector<SymTensor>& tensors);
std::size_t span_rank(const std::vector<SymMatrix<Rational>>& tensors,
                      RankMode mode = RankMode::exact, FloatRankConfig config = {});
std::size_t span_rank(const std::vector<SymMatrix<Complex>>& tensors, FloatRankConfig config = {});

struct TauIndependenceReport {
  int n = 0;
  std::size_t rank = 0;
  std::size_t expected = 0;
  bool pass = false;
};

struct DirectSumReport {
  int n = 0;
  std::size_t rank_union = 0;
  std::size_t expected = 0;
  bool pass = false;
};

struct SigmaTrial {
  std::size_t rank = 0;
  std::size_t vector_rank = 0;
  int redraws = 0;
};

struct SigmaSpanReport {
  int n = 0;
  int g = 0;
  bool zero_sum = false;
  SigmaForm form = SigmaForm::symmetric_product;
  std::vector<SigmaTrial> trials;
  std::size_t expected = 0;
  bool pass = false;
};

/// Rank of the sigma family for caller-supplied vectors. `degenerate` is set
/// when the vectors span less than min(n, g) (or n - 1 when they sum to zero).
struct SigmaSampleRank {
  std::size_t rank = 0;
  std::size_t vector_rank = 0;
  std::size_t expected_vector_rank = 0;
  bool degenerate = false;
};

TauIndependenceReport verify_tau_independence(int n);
DirectSumReport verify_direct_sum_e1V(int n);

struct SigmaSpanOptions {
  SigmaForm form = SigmaForm::symmetric_product;
  int max_redraws = 16;
  int bound = 1000;  // |numerator|, denominator <= bound
  bool parallel = true;
};

SigmaSpanReport verify_sigma_span(int n, int g, int trials, bool zero_sum, std::uint64_t seed,
                                  const SigmaSpanOptions& options = {});

SigmaSampleRank sigma_span_rank(const std::vector<RationalVector>& vectors,
                                SigmaForm form = SigmaForm::symmetric_product);

/// Basis of {Q symmetric : v^T Q v = 0 for all points v}.
std::vector<SymMatrix<Rational>> quadrics_through(const std::vector<RationalVector>& points);
std::vector<SymMatrix<Complex>> quadrics_through(const std::vector<ComplexVector>& points,
                                                 FloatRankConfig config = {});

/// Pairing of a quadric with a point of Sym^2: trace(Q sigma).
Rational trace_pairing(const SymMatrix<Rational>& quadric, const SymMatrix<Rational>& sigma);
Complex trace_pairing(const SymMatrix<Complex>& quadric, const SymMatrix<Complex>& sigma);

/// v^T Q v
Rational evaluate_quadric(const SymMatrix<Rational>& quadric, const RationalVector& v);
Complex evaluate_quadric(const SymMatrix<Complex>& quadric, const ComplexVector& v);

}  // namespace periodvar
