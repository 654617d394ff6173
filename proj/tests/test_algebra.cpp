#include <doctest.h>

#include <array>
#include <vector>

#include "khop/lattice.hpp"
#include "khop/polynomial.hpp"

using namespace khop;
using algebra::BigInt;
using algebra::QPolynomial;
using algebra::Rational;

namespace {

QPolynomial poly(std::vector<long> coeffs) {
  std::vector<BigInt> c;
  c.reserve(coeffs.size());
  for (long v : coeffs) c.emplace_back(v);
  return QPolynomial(std::move(c));
}

// 1 - q^e
QPolynomial one_minus_qpow(std::size_t e) {
  std::vector<BigInt> c(e + 1);
  c[0] = 1;
  c[e] = -1;
  return QPolynomial(std::move(c));
}

}  // namespace

TEST_CASE("exact rational helpers") {
  Rational half = algebra::make_rational(BigInt(3), BigInt(6));
  CHECK(half.get_num() == 1);
  CHECK(half.get_den() == 2);
  Rational neg = algebra::make_rational(BigInt(1), BigInt(-2));
  CHECK(neg.get_den() == 2);
  CHECK(neg.get_num() == -1);
  CHECK_THROWS_AS(algebra::make_rational(BigInt(1), BigInt(0)),
                  std::invalid_argument);
  CHECK(algebra::binomial(14, 7) == 3432);
  CHECK(algebra::multinomial(std::array{5, 5, 5}) == 756756);
  CHECK(algebra::multinomial(std::array{4, 4, 4}) == 34650);
}

TEST_CASE("polynomial ring basics") {
  QPolynomial a = poly({1, 1});
  CHECK(a * a == poly({1, 2, 1}));
  CHECK((a + poly({0, -1})) == poly({1}));
  CHECK(a.shifted(2) == poly({0, 0, 1, 1}));
  CHECK(poly({1, 2, 3}).reversed() == poly({3, 2, 1}));
  CHECK(poly({}).is_zero());
  CHECK((poly({1, -1}) + poly({-1, 1})).is_zero());
  CHECK(poly({5, 5}).evaluate_at_one() == 10);

  CHECK(algebra::exact_scalar_div(poly({2, 4}), BigInt(2)) == poly({1, 2}));
  CHECK_THROWS_AS(algebra::exact_scalar_div(poly({3}), BigInt(2)),
                  std::invalid_argument);

  algebra::QRationalPolynomial norm = normalized(poly({1, 2}), BigInt(4));
  CHECK(norm.coeff(0) == algebra::make_rational(BigInt(1), BigInt(4)));
  CHECK(norm.coeff(1) == algebra::make_rational(BigInt(1), BigInt(2)));
}

TEST_CASE("q-binomial frozen expansions") {
  CHECK(algebra::q_binomial(4, 2) == poly({1, 1, 2, 1, 1}));
  CHECK(algebra::q_binomial(7, 0) == poly({1}));
  CHECK(algebra::q_binomial(3, 3) == poly({1}));
  CHECK(algebra::q_binomial(14, 7).evaluate_at_one() == 3432);
  CHECK(algebra::q_binomial(6, 3).evaluate_at_one() == 20);
  CHECK_THROWS_AS(algebra::q_binomial(3, 4), std::invalid_argument);
  CHECK_THROWS_AS(algebra::q_binomial(-1, 0), std::invalid_argument);
  CHECK_THROWS_AS(algebra::q_binomial(3, -1), std::invalid_argument);
}

TEST_CASE("q-Pascal recurrence") {
  for (int m = 2; m <= 12; ++m) {
    for (int r = 1; r < m; ++r) {
      QPolynomial lhs = algebra::q_binomial(m, r);
      QPolynomial rhs = algebra::q_binomial(m - 1, r - 1) +
                        algebra::q_binomial(m - 1, r).shifted(
                            static_cast<std::size_t>(r));
      CHECK(lhs == rhs);
    }
  }
}

TEST_CASE("q-binomial symmetry, palindromes, degree and q=1") {
  for (int m = 1; m <= 10; ++m) {
    for (int r = 0; r <= m; ++r) {
      QPolynomial qb = algebra::q_binomial(m, r);
      CHECK(qb == algebra::q_binomial(m, m - r));
      CHECK(qb == qb.reversed());
      CHECK(qb.degree() == static_cast<std::size_t>(r * (m - r)));
      CHECK(qb.evaluate_at_one() ==
            algebra::binomial(static_cast<unsigned long>(m),
                              static_cast<unsigned long>(r)));
    }
  }
  CHECK((algebra::q_binomial(5, 2) - algebra::q_binomial(5, 2).reversed())
            .is_zero());
}

TEST_CASE("q-binomial against the quotient form") {
  // (m r)_q * prod_{i=1..r} (1-q^i) == prod_{i=0..r-1} (1-q^{m-i})
  for (int m = 1; m <= 10; ++m) {
    for (int r = 0; r <= m; ++r) {
      QPolynomial lhs = algebra::q_binomial(m, r);
      QPolynomial num = poly({1});
      for (int i = 1; i <= r; ++i) {
        lhs = lhs * one_minus_qpow(static_cast<std::size_t>(i));
        num = num * one_minus_qpow(static_cast<std::size_t>(m - i + 1));
      }
      CHECK(lhs == num);
    }
  }
}

TEST_CASE("q-binomial coefficients equal the enumeration oracle") {
  for (int a = 1; a <= 5; ++a) {
    for (int b = 1; b <= 5; ++b) {
      QPolynomial qb = algebra::q_binomial(a + b, a);
      auto hist =
          lattice::brute_force_volume_distribution(lattice::MVector({a, b}));
      CHECK(qb.degree() == static_cast<std::size_t>(hist.rbegin()->first));
      for (std::size_t n = 0; n <= qb.degree(); ++n) {
        auto it = hist.find(static_cast<long long>(n));
        std::uint64_t count = it == hist.end() ? 0 : it->second;
        CHECK(qb.coeff(n) == BigInt(static_cast<unsigned long>(count)));
      }
    }
  }
}

TEST_CASE("restricted partition gf reproduces the q-binomial slice") {
  for (auto [m1, m2] : {std::pair{3, 4}, std::pair{2, 2}, std::pair{5, 5}}) {
    std::vector<long long> parts(static_cast<std::size_t>(m1) + 1);
    for (int t = 0; t <= m1; ++t) parts[static_cast<std::size_t>(t)] = t;
    std::vector<long long> exps(parts.size(), 1);
    algebra::UQSeries gf = algebra::restricted_partition_gf(
        parts, exps, static_cast<std::size_t>(m2),
        static_cast<std::size_t>(m1 * m2));
    CHECK(gf.u_slice(static_cast<std::size_t>(m2)) ==
          algebra::q_binomial(m1 + m2, m1));
  }
}

TEST_CASE("restricted partition gf honors an explicit truncation") {
  std::vector<long long> parts{0, 1, 2};
  std::vector<long long> exps{1, 1, 1};
  algebra::UQSeries gf = algebra::restricted_partition_gf(parts, exps, 2, 3);
  algebra::QPolynomial qb = algebra::q_binomial(4, 2);  // degree 4
  algebra::QPolynomial slice = gf.u_slice(2);
  CHECK(slice.degree() == 3);
  for (std::size_t n = 0; n <= 3; ++n) {
    CHECK(slice.coeff(n) == qb.coeff(n));
  }

  // a factor whose part exceeds the q bound contributes only its unit term
  std::vector<long long> far{9};
  std::vector<long long> one_exp{1};
  algebra::UQSeries unit = algebra::restricted_partition_gf(far, one_exp, 2, 3);
  CHECK(unit.coefficient(0, 0) == 1);
  CHECK(unit.u_slice(1).is_zero());
}

TEST_CASE("restricted partition gf basic series facts") {
  // 1/(1-u): every u power has coefficient 1 at q^0
  std::vector<long long> zero{0};
  std::vector<long long> one{1};
  algebra::UQSeries s = algebra::restricted_partition_gf(zero, one, 6, 3);
  for (std::size_t r = 0; r <= 6; ++r) {
    CHECK(s.coefficient(r, 0) == 1);
    CHECK(s.u_slice(r) == poly({1}));
  }

  // 1/(1-u q^3): [u^1 q^3] = 1, [u^1 q^2] = 0, [u^0 q^0] = 1
  std::vector<long long> three{3};
  algebra::UQSeries t = algebra::restricted_partition_gf(three, one, 2, 8);
  CHECK(t.coefficient(0, 0) == 1);
  CHECK(t.coefficient(1, 3) == 1);
  CHECK(t.coefficient(1, 2) == 0);
  CHECK(t.coefficient(2, 6) == 1);
}

TEST_CASE("restricted partition gf with exponent weights") {
  // part set (0,2,4,7,10) with exponents (3,1,2,1,2): the u^4 q^20
  // coefficient counts weighted 4-part multisets summing to 20.
  std::vector<long long> parts{0, 2, 4, 7, 10};
  std::vector<long long> exps{3, 1, 2, 1, 2};
  algebra::UQSeries gf = algebra::restricted_partition_gf(parts, exps, 4, 40);

  // independent oracle: enumerate multiplicity vectors directly
  BigInt expected = 0;
  std::array<int, 5> n{};
  for (n[0] = 0; n[0] <= 4; ++n[0])
    for (n[1] = 0; n[1] + n[0] <= 4; ++n[1])
      for (n[2] = 0; n[2] + n[1] + n[0] <= 4; ++n[2])
        for (n[3] = 0; n[3] + n[2] + n[1] + n[0] <= 4; ++n[3]) {
          n[4] = 4 - n[0] - n[1] - n[2] - n[3];
          long long total = 0;
          BigInt weight = 1;
          for (std::size_t t = 0; t < 5; ++t) {
            total += n[t] * parts[t];
            weight *= algebra::binomial(
                static_cast<unsigned long>(n[t] + exps[t] - 1),
                static_cast<unsigned long>(n[t]));
          }
          if (total == 20) expected += weight;
        }
  CHECK(expected == 26);
  CHECK(gf.coefficient(4, 20) == expected);
}

TEST_CASE("uq series bounds are enforced") {
  std::vector<long long> zero{0};
  std::vector<long long> one{1};
  algebra::UQSeries s = algebra::restricted_partition_gf(zero, one, 3, 5);
  CHECK_THROWS_AS(s.coefficient(4, 0), std::out_of_range);
  CHECK_THROWS_AS(s.coefficient(0, 6), std::out_of_range);
  CHECK_THROWS_AS(s.u_slice(4), std::out_of_range);

  std::vector<long long> two_parts{0, 1};
  CHECK_THROWS_AS(algebra::restricted_partition_gf(two_parts, one, 3, 5),
                  std::invalid_argument);
  std::vector<long long> bad_exp{0};
  CHECK_THROWS_AS(algebra::restricted_partition_gf(zero, bad_exp, 3, 5),
                  std::invalid_argument);
  std::vector<long long> neg{-1};
  CHECK_THROWS_AS(algebra::restricted_partition_gf(neg, one, 3, 5),
                  std::invalid_argument);
}
