#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "khop/exact.hpp"

namespace khop::algebra {

// Dense univariate polynomial in q. Trailing zero coefficients are trimmed,
// so degree() is exact; the zero polynomial has no stored coefficients.
template <typename T>
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<T> coeffs) : c_(std::move(coeffs)) { trim(); }

  static Polynomial constant(T v) {
    std::vector<T> c;
    c.push_back(std::move(v));
    return Polynomial(std::move(c));
  }

  static Polynomial monomial(T coeff, std::size_t power) {
    std::vector<T> c(power + 1);
    c[power] = std::move(coeff);
    return Polynomial(std::move(c));
  }

  bool is_zero() const { return c_.empty(); }
  std::size_t degree() const { return c_.empty() ? 0 : c_.size() - 1; }
  const std::vector<T>& coefficients() const { return c_; }

  // Coefficient of q^i; zero beyond the stored degree.
  const T& coeff(std::size_t i) const {
    static const T zero{};
    return i < c_.size() ? c_[i] : zero;
  }

  Polynomial& operator+=(const Polynomial& o) {
    if (c_.size() < o.c_.size()) c_.resize(o.c_.size());
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
    trim();
    return *this;
  }

  Polynomial& operator-=(const Polynomial& o) {
    if (c_.size() < o.c_.size()) c_.resize(o.c_.size());
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
    trim();
    return *this;
  }

  friend Polynomial operator+(Polynomial a, const Polynomial& b) {
    a += b;
    return a;
  }

  friend Polynomial operator-(Polynomial a, const Polynomial& b) {
    a -= b;
    return a;
  }

  Polynomial operator*(const Polynomial& o) const {
    if (is_zero() || o.is_zero()) return Polynomial{};
    std::vector<T> out(c_.size() + o.c_.size() - 1);
    for (std::size_t i = 0; i < c_.size(); ++i) {
      for (std::size_t j = 0; j < o.c_.size(); ++j) {
        out[i + j] += c_[i] * o.c_[j];
      }
    }
    return Polynomial(std::move(out));
  }

  Polynomial& operator*=(const T& s) {
    for (T& v : c_) v *= s;
    trim();
    return *this;
  }

  // Multiplication by q^s.
  Polynomial shifted(std::size_t s) const {
    if (is_zero()) return Polynomial{};
    std::vector<T> out(c_.size() + s);
    for (std::size_t i = 0; i < c_.size(); ++i) out[i + s] = c_[i];
    return Polynomial(std::move(out));
  }

  // Coefficient sum, i.e. the value at q = 1.
  T evaluate_at_one() const {
    T acc{};
    for (const T& v : c_) acc += v;
    return acc;
  }

  Polynomial reversed() const {
    std::vector<T> out(c_.rbegin(), c_.rend());
    return Polynomial(std::move(out));
  }

  void truncate_degree(std::size_t max_degree) {
    if (c_.size() > max_degree + 1) c_.resize(max_degree + 1);
    trim();
  }

  bool operator==(const Polynomial& o) const { return c_ == o.c_; }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }

  std::vector<T> c_;
};

using QPolynomial = Polynomial<BigInt>;
using QRationalPolynomial = Polynomial<Rational>;

// Gaussian binomial coefficient as a polynomial in q, degree r(m-r).
// Built by the q-Pascal recurrence, so all intermediate values are
// polynomials with integer coefficients.
QPolynomial q_binomial(int m, int r);

// Divide every coefficient by den, producing canonical rationals.
QRationalPolynomial normalized(const QPolynomial& p, const BigInt& den);

// Divide every integer coefficient exactly by s; throws if any coefficient
// is not divisible.
QPolynomial exact_scalar_div(const QPolynomial& p, const BigInt& s);

// Truncated bivariate series in (u, q): coefficients for u^i q^j with
// i <= u_bound, j <= q_bound. Everything beyond the bounds is dropped by
// construction, and reads beyond the bounds throw rather than return zero.
class UQSeries {
 public:
  UQSeries(std::size_t u_bound, std::size_t q_bound);

  static UQSeries one(std::size_t u_bound, std::size_t q_bound);

  std::size_t u_bound() const { return umax_; }
  std::size_t q_bound() const { return qmax_; }

  const BigInt& coefficient(std::size_t u_power, std::size_t q_power) const;

  // The coefficient of u^{u_power} as a polynomial in q.
  QPolynomial u_slice(std::size_t u_power) const;

  // *= (1 - u q^s)^(-e), expanded with binomial-series coefficients
  // C(n + e - 1, n) and truncated to the series bounds.
  void multiply_geometric_factor(long long s, long long e);

 private:
  BigInt& at(std::size_t u, std::size_t q) { return c_[u * (qmax_ + 1) + q]; }
  const BigInt& at(std::size_t u, std::size_t q) const {
    return c_[u * (qmax_ + 1) + q];
  }

  std::size_t umax_;
  std::size_t qmax_;
  std::vector<BigInt> c_;
};

// Truncated product over t of (1 - u q^{part_set[t]})^(-exponents[t]).
// The u^r q^n coefficient counts (with binomial multiplicity weights) the
// multisets of r parts drawn from part_set summing to n.
UQSeries restricted_partition_gf(std::span<const long long> part_set,
                                 std::span<const long long> exponents,
                                 std::size_t u_bound, std::size_t q_bound);

}  // namespace khop::algebra
