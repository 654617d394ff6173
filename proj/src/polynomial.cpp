#include "khop/polynomial.hpp"

#include <stdexcept>
#include <string>

namespace khop::algebra {

QPolynomial q_binomial(int m, int r) {
  if (m < 0 || r < 0 || r > m) {
    throw std::invalid_argument("q_binomial: need 0 <= r <= m, got m=" +
                                std::to_string(m) + " r=" + std::to_string(r));
  }
  // row[j] = q-binomial(i, j) while sweeping i upward.
  std::vector<QPolynomial> row{QPolynomial::constant(BigInt(1))};
  for (int i = 1; i <= m; ++i) {
    int jmax = std::min(i, r);
    std::vector<QPolynomial> next(static_cast<std::size_t>(jmax) + 1);
    next[0] = QPolynomial::constant(BigInt(1));
    for (int j = 1; j <= jmax; ++j) {
      QPolynomial v = row[static_cast<std::size_t>(j - 1)];
      if (j < static_cast<int>(row.size())) {
        v += row[static_cast<std::size_t>(j)].shifted(static_cast<std::size_t>(j));
      }
      next[static_cast<std::size_t>(j)] = std::move(v);
    }
    row = std::move(next);
  }
  return row[static_cast<std::size_t>(r)];
}

QRationalPolynomial normalized(const QPolynomial& p, const BigInt& den) {
  if (den == 0) throw std::invalid_argument("normalized: zero denominator");
  std::vector<Rational> out;
  out.reserve(p.coefficients().size());
  for (const BigInt& c : p.coefficients()) {
    out.push_back(make_rational(c, den));
  }
  return QRationalPolynomial(std::move(out));
}

QPolynomial exact_scalar_div(const QPolynomial& p, const BigInt& s) {
  if (s == 0) throw std::invalid_argument("exact_scalar_div: zero divisor");
  std::vector<BigInt> out;
  out.reserve(p.coefficients().size());
  for (const BigInt& c : p.coefficients()) {
    BigInt q, r;
    mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(), c.get_mpz_t(), s.get_mpz_t());
    if (r != 0) {
      throw std::invalid_argument("exact_scalar_div: remainder survives");
    }
    out.push_back(std::move(q));
  }
  return QPolynomial(std::move(out));
}

UQSeries::UQSeries(std::size_t u_bound, std::size_t q_bound)
    : umax_(u_bound), qmax_(q_bound), c_((u_bound + 1) * (q_bound + 1)) {}

UQSeries UQSeries::one(std::size_t u_bound, std::size_t q_bound) {
  UQSeries s(u_bound, q_bound);
  s.at(0, 0) = 1;
  return s;
}

const BigInt& UQSeries::coefficient(std::size_t u_power,
                                    std::size_t q_power) const {
  if (u_power > umax_ || q_power > qmax_) {
    throw std::out_of_range("UQSeries::coefficient: power beyond truncation (u=" +
                            std::to_string(u_power) + ", q=" +
                            std::to_string(q_power) + ")");
  }
  return at(u_power, q_power);
}

QPolynomial UQSeries::u_slice(std::size_t u_power) const {
  if (u_power > umax_) {
    throw std::out_of_range("UQSeries::u_slice: power beyond truncation");
  }
  std::vector<BigInt> out(qmax_ + 1);
  for (std::size_t q = 0; q <= qmax_; ++q) out[q] = at(u_power, q);
  return QPolynomial(std::move(out));
}

void UQSeries::multiply_geometric_factor(long long s, long long e) {
  if (s < 0) throw std::invalid_argument("multiply_geometric_factor: s < 0");
  if (e < 1) throw std::invalid_argument("multiply_geometric_factor: e < 1");
  // beyond the q bound only the n = 0 term survives, i.e. the factor is 1
  if (static_cast<unsigned long long>(s) > qmax_) return;
  // Binomial-series weights C(n + e - 1, n) for the u^n q^{n s} terms.
  std::vector<BigInt> weight(umax_ + 1);
  for (std::size_t n = 0; n <= umax_; ++n) {
    weight[n] = binomial(static_cast<unsigned long>(n + static_cast<std::size_t>(e) - 1),
                         static_cast<unsigned long>(n));
  }
  std::vector<BigInt> out((umax_ + 1) * (qmax_ + 1));
  for (std::size_t u = 0; u <= umax_; ++u) {
    for (std::size_t q = 0; q <= qmax_; ++q) {
      BigInt acc = at(u, q);  // n = 0 term
      for (std::size_t n = 1; n <= u; ++n) {
        std::size_t qs = n * static_cast<std::size_t>(s);
        if (qs > q) break;
        acc += weight[n] * at(u - n, q - qs);
      }
      out[u * (qmax_ + 1) + q] = std::move(acc);
    }
  }
  c_ = std::move(out);
}

UQSeries restricted_partition_gf(std::span<const long long> part_set,
                                 std::span<const long long> exponents,
                                 std::size_t u_bound, std::size_t q_bound) {
  if (part_set.size() != exponents.size()) {
    throw std::invalid_argument(
        "restricted_partition_gf: part set and exponents differ in length");
  }
  for (long long p : part_set) {
    if (p < 0) {
      throw std::invalid_argument("restricted_partition_gf: negative part");
    }
  }
  for (long long e : exponents) {
    if (e < 1) {
      throw std::invalid_argument("restricted_partition_gf: exponent < 1");
    }
  }
  UQSeries series = UQSeries::one(u_bound, q_bound);
  for (std::size_t t = 0; t < part_set.size(); ++t) {
    series.multiply_geometric_factor(part_set[t], exponents[t]);
  }
  return series;
}

}  // namespace khop::algebra
