#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "khop/exact.hpp"
#include "khop/lattice.hpp"
#include "khop/polynomial.hpp"

namespace khop::engine {

// Hop count k plus the k-1 lens occupancies m_1..m_{k-1} the distribution is
// conditioned on. k = 1 has no occupancies.
struct HopConfig {
  int k = 1;
  std::vector<int> m;

  HopConfig(int k_, std::vector<int> m_);
  lattice::MVector m_vector() const { return lattice::MVector(m); }
  algebra::BigInt path_multinomial() const { return algebra::multinomial(m); }
  algebra::BigInt max_path_count() const;  // product of the occupancies
};

// Exact probability mass function over path counts. Probabilities are
// positive canonical rationals summing to exactly 1.
class ExactDistribution {
 public:
  explicit ExactDistribution(std::map<std::int64_t, algebra::Rational> probs);
  static ExactDistribution point_mass(std::int64_t n);

  const std::map<std::int64_t, algebra::Rational>& probabilities() const {
    return p_;
  }
  algebra::Rational probability(std::int64_t n) const;
  std::int64_t max_support() const { return p_.rbegin()->first; }
  algebra::Rational sum() const;

 private:
  std::map<std::int64_t, algebra::Rational> p_;
};

// Floating-point distribution on counts 0..p.size()-1 (Poisson laws and
// Poisson mixtures, where probabilities are transcendental).
struct RealDistribution {
  std::vector<double> p;

  double sum() const;
  double mean() const;
};

struct EngineOptions {
  std::uint64_t budget = lattice::kDefaultEnumerationBudget;
  int threads = 1;
};

// Number of distinct lattice paths realizing one restricted partition of the
// volume: product over part values t of
// C(part_mults[t] + sum_l prefix_mults[l][t], part_mults[t]).
// All vectors must share one length.
algebra::BigInt partition_degeneracy(
    const lattice::MultiplicityVector& part_mults,
    std::span<const lattice::MultiplicityVector> prefix_mults);

// Histogram of the k-hop path count over the uniform lattice-path ensemble,
// as exact integer weights summing to multinomial(m_1+...+m_{k-1}; m).
// For k >= 3 this equals the brute-force volume histogram of the full
// (k-1)-dimensional box; it is computed by the lattice-path sum: prefix paths
// over directions 1..k-2 crossed with weakly increasing part tuples, each
// weighted by its partition degeneracy.
std::map<std::int64_t, algebra::BigInt> path_count_histogram(
    const HopConfig& cfg, const EngineOptions& opts = {});

// Exact p.m.f. of the k-hop path count conditioned on the occupancies.
ExactDistribution path_count_pmf(const HopConfig& cfg,
                                 const EngineOptions& opts = {});

// Exact p.g.f. of the k-hop path count: coefficient of q^n is P(count = n).
// Computed by the independent generating-function route (truncated products
// of geometric factors), not by wrapping path_count_pmf.
algebra::QRationalPolynomial path_count_pgf(const HopConfig& cfg,
                                            const EngineOptions& opts = {});

// k = 3 closed form: normalized Gaussian binomial (m1+m2 choose m1)_q.
ExactDistribution three_hop_pmf(int m1, int m2);

// k = 2 law under Poisson occupancies: Poisson(lambda * (2 r0 - 1)),
// truncated so the discarded tail mass is below 1e-12.
RealDistribution two_hop_distribution(double lambda, double r0);

// Distribution of the k-hop path count with Poisson(lambda * |lens|)
// occupancies: mixture of the conditioned p.m.f.s over the occupancy
// lattice, truncated so each coordinate discards tail mass < eps/(k-1).
RealDistribution poisson_mixture(int k, double lambda, double r0, double eps,
                                 const EngineOptions& opts = {});

// Exact mean and variance.
std::pair<algebra::Rational, algebra::Rational> distribution_moments(
    const ExactDistribution& d);

// Validates 1/k < r0 < 1/(k-1); throws std::invalid_argument otherwise.
void require_valid_range(int k, double r0);

}  // namespace khop::engine
