#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "khop/distribution.hpp"
#include "khop/rgg.hpp"

namespace khop::harness {

// Reference probabilities on integer support, ascending in n. When built
// from an exact distribution the mean is computed rationally and rounded
// once, not accumulated in floating point.
struct ReferencePmf {
  std::vector<std::pair<std::int64_t, double>> entries;
  std::optional<double> exact_mean;

  double mean() const;
};

ReferencePmf to_reference(const engine::ExactDistribution& d);
ReferencePmf to_reference(const engine::RealDistribution& d);

// Half the L1 distance between the reference and the empirical frequencies.
double total_variation(const ReferencePmf& ref, const sim::Histogram& hist);

struct ChiSquareResult {
  double statistic = 0;
  int dof = 0;
  double p_value = 1;
};

// Goodness-of-fit statistic with adjacent support pooled until every bin's
// expected count reaches min_expected. Observed mass on zero-probability
// support makes the statistic infinite (p = 0).
ChiSquareResult chi_square_pooled(const ReferencePmf& ref,
                                  const sim::Histogram& hist,
                                  double min_expected = 5.0);

// Upper regularized incomplete gamma Q(a, x); the chi-square tail
// probability is Q(dof/2, statistic/2).
double regularized_gamma_q(double a, double x);

struct ComparisonReport {
  double tv = 0;
  ChiSquareResult chi;
  double exact_mean = 0;
  double empirical_mean = 0;
  std::uint64_t trials = 0;

  struct Row {
    std::int64_t n = 0;
    double exact = 0;
    double empirical = 0;
  };
  std::vector<Row> rows;

  bool passed(double tv_max, double p_min) const {
    return tv <= tv_max && chi.p_value >= p_min;
  }
};

ComparisonReport compare_distributions(const ReferencePmf& ref,
                                       const sim::Histogram& hist,
                                       double min_expected = 5.0);

// Draws i.i.d. samples from the reference itself by CDF inversion, one
// trial_stream per trial: the self-test mode, which calibrates the
// goodness-of-fit machinery under the null hypothesis.
sim::Histogram sample_from_reference(const ReferencePmf& ref,
                                     std::uint64_t trials, std::uint64_t seed);

}  // namespace khop::harness
