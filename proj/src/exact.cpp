#include "khop/exact.hpp"

#include <stdexcept>

namespace khop::algebra {

Rational make_rational(BigInt num, BigInt den) {
  if (den == 0) {
    throw std::invalid_argument("make_rational: zero denominator");
  }
  Rational r(std::move(num), std::move(den));
  r.canonicalize();
  return r;
}

BigInt binomial(unsigned long n, unsigned long k) {
  BigInt out;
  mpz_bin_uiui(out.get_mpz_t(), n, k);
  return out;
}

BigInt factorial(unsigned long n) {
  BigInt out;
  mpz_fac_ui(out.get_mpz_t(), n);
  return out;
}

BigInt multinomial(std::span<const int> group_sizes) {
  unsigned long total = 0;
  for (int g : group_sizes) {
    if (g < 0) {
      throw std::invalid_argument("multinomial: negative group size");
    }
    total += static_cast<unsigned long>(g);
  }
  BigInt out = factorial(total);
  for (int g : group_sizes) {
    out /= factorial(static_cast<unsigned long>(g));
  }
  return out;
}

double to_double(const Rational& r) { return r.get_d(); }

std::string to_string(const BigInt& v) { return v.get_str(); }

}  // namespace khop::algebra
