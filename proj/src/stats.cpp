#include "khop/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace khop::harness {

double ReferencePmf::mean() const {
  if (exact_mean.has_value()) return *exact_mean;
  double s = 0;
  for (const auto& [n, p] : entries) s += static_cast<double>(n) * p;
  return s;
}

ReferencePmf to_reference(const engine::ExactDistribution& d) {
  ReferencePmf ref;
  ref.entries.reserve(d.probabilities().size());
  for (const auto& [n, p] : d.probabilities()) {
    ref.entries.emplace_back(n, algebra::to_double(p));
  }
  ref.exact_mean = algebra::to_double(engine::distribution_moments(d).first);
  return ref;
}

ReferencePmf to_reference(const engine::RealDistribution& d) {
  ReferencePmf ref;
  for (std::size_t n = 0; n < d.p.size(); ++n) {
    if (d.p[n] > 0) ref.entries.emplace_back(static_cast<std::int64_t>(n), d.p[n]);
  }
  return ref;
}

namespace {

// Empirical frequencies keyed by int64 support. Histogram keys beyond int64
// cannot match any reference entry; their mass is returned separately.
struct EmpiricalView {
  std::map<std::int64_t, double> freq;
  double unrepresentable = 0;
};

EmpiricalView empirical_view(const sim::Histogram& hist) {
  if (hist.trials == 0) {
    throw std::invalid_argument("empirical histogram has no trials");
  }
  EmpiricalView view;
  for (const auto& [n, c] : hist.counts) {
    double f = static_cast<double>(c) / static_cast<double>(hist.trials);
    if (n.fits_slong_p()) {
      view.freq[static_cast<std::int64_t>(n.get_si())] += f;
    } else {
      view.unrepresentable += f;
    }
  }
  return view;
}

}  // namespace

double total_variation(const ReferencePmf& ref, const sim::Histogram& hist) {
  EmpiricalView view = empirical_view(hist);
  double l1 = view.unrepresentable;
  for (const auto& [n, p] : ref.entries) {
    auto it = view.freq.find(n);
    double f = it == view.freq.end() ? 0.0 : it->second;
    l1 += std::abs(p - f);
    if (it != view.freq.end()) view.freq.erase(it);
  }
  for (const auto& [n, f] : view.freq) l1 += f;  // mass outside the support
  return l1 / 2.0;
}

namespace {

// Lower regularized incomplete gamma by series expansion; x < a + 1.
double gamma_p_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int i = 0; i < 10000; ++i) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::abs(del) < std::abs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Upper regularized incomplete gamma by Lentz continued fraction; x >= a + 1.
double gamma_q_cf(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 10000; ++i) {
    double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) break;
  }
  return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace

double regularized_gamma_q(double a, double x) {
  if (a <= 0 || x < 0 || !std::isfinite(a)) {
    throw std::invalid_argument("regularized_gamma_q: need a > 0, x >= 0");
  }
  if (!std::isfinite(x)) return 0.0;
  if (x == 0) return 1.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_cf(a, x);
}

ChiSquareResult chi_square_pooled(const ReferencePmf& ref,
                                  const sim::Histogram& hist,
                                  double min_expected) {
  EmpiricalView view = empirical_view(hist);
  const double n_trials = static_cast<double>(hist.trials);

  // mass observed where the reference puts zero probability
  double impossible = view.unrepresentable;
  for (const auto& [n, f] : view.freq) {
    bool known = std::binary_search(
        ref.entries.begin(), ref.entries.end(),
        std::pair<std::int64_t, double>(n, 0.0),
        [](const auto& a, const auto& b) { return a.first < b.first; });
    if (!known) impossible += f;
  }
  if (impossible > 0) {
    return ChiSquareResult{std::numeric_limits<double>::infinity(), 0, 0.0};
  }

  // pool adjacent support until each bin expects at least min_expected
  std::vector<std::pair<double, double>> bins;  // (expected, observed)
  double exp_acc = 0, obs_acc = 0;
  for (const auto& [n, p] : ref.entries) {
    exp_acc += p * n_trials;
    auto it = view.freq.find(n);
    obs_acc += (it == view.freq.end() ? 0.0 : it->second) * n_trials;
    if (exp_acc >= min_expected) {
      bins.emplace_back(exp_acc, obs_acc);
      exp_acc = obs_acc = 0;
    }
  }
  if (exp_acc > 0 || obs_acc > 0) {
    if (bins.empty()) {
      bins.emplace_back(exp_acc, obs_acc);
    } else {
      bins.back().first += exp_acc;
      bins.back().second += obs_acc;
    }
  }

  double stat = 0;
  for (const auto& [expected, observed] : bins) {
    double diff = observed - expected;
    stat += diff * diff / expected;
  }
  int dof = static_cast<int>(bins.size()) - 1;
  double p = dof >= 1 ? regularized_gamma_q(dof / 2.0, stat / 2.0)
                      : (stat == 0 ? 1.0 : 0.0);
  return ChiSquareResult{stat, dof, p};
}

ComparisonReport compare_distributions(const ReferencePmf& ref,
                                       const sim::Histogram& hist,
                                       double min_expected) {
  ComparisonReport report;
  report.tv = total_variation(ref, hist);
  report.chi = chi_square_pooled(ref, hist, min_expected);
  report.exact_mean = ref.mean();
  report.trials = hist.trials;

  EmpiricalView view = empirical_view(hist);
  double emp_mean = 0;
  for (const auto& [n, f] : view.freq) emp_mean += static_cast<double>(n) * f;
  report.empirical_mean = emp_mean;

  std::map<std::int64_t, ComparisonReport::Row> rows;
  for (const auto& [n, p] : ref.entries) rows[n] = {n, p, 0.0};
  for (const auto& [n, f] : view.freq) {
    auto [it, inserted] = rows.try_emplace(n, ComparisonReport::Row{n, 0.0, 0.0});
    it->second.empirical = f;
  }
  report.rows.reserve(rows.size());
  for (const auto& [n, row] : rows) report.rows.push_back(row);
  return report;
}

sim::Histogram sample_from_reference(const ReferencePmf& ref,
                                     std::uint64_t trials,
                                     std::uint64_t seed) {
  if (ref.entries.empty()) {
    throw std::invalid_argument("sample_from_reference: empty reference");
  }
  std::vector<double> cdf;
  cdf.reserve(ref.entries.size());
  double acc = 0;
  for (const auto& [n, p] : ref.entries) {
    acc += p;
    cdf.push_back(acc);
  }
  sim::Histogram hist;
  for (std::uint64_t t = 0; t < trials; ++t) {
    sim::SplitMix64 rng = sim::trial_stream(seed, t);
    double u = rng.next_double() * acc;
    std::size_t idx = static_cast<std::size_t>(
        std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
    if (idx >= ref.entries.size()) idx = ref.entries.size() - 1;
    hist.add(algebra::BigInt(
        static_cast<long>(ref.entries[idx].first)));
  }
  return hist;
}

}  // namespace khop::harness
