#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace khop::algebra {

// Exact arbitrary-precision integers and rationals. Rationals are kept
// canonical: lowest terms, positive denominator.
using BigInt = mpz_class;
using Rational = mpq_class;

// num/den reduced to canonical form; den must be nonzero.
Rational make_rational(BigInt num, BigInt den);

BigInt binomial(unsigned long n, unsigned long k);

BigInt factorial(unsigned long n);

// Number of distinct arrangements of a multiset whose letter counts are
// group_sizes. All counts must be non-negative.
BigInt multinomial(std::span<const int> group_sizes);

double to_double(const Rational& r);

std::string to_string(const BigInt& v);

}  // namespace khop::algebra
