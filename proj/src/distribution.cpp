#include "khop/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>

namespace khop::engine {

using algebra::BigInt;
using algebra::Rational;

HopConfig::HopConfig(int k_, std::vector<int> m_) : k(k_), m(std::move(m_)) {
  if (k < 1) throw std::invalid_argument("HopConfig: k must be >= 1");
  if (m.size() != static_cast<std::size_t>(k - 1)) {
    throw std::invalid_argument("HopConfig: k=" + std::to_string(k) +
                                " needs exactly " + std::to_string(k - 1) +
                                " occupancies, got " + std::to_string(m.size()));
  }
  for (int v : m) {
    if (v < 1) {
      throw std::invalid_argument("HopConfig: occupancies must be >= 1");
    }
  }
}

BigInt HopConfig::max_path_count() const {
  BigInt p = 1;
  for (int v : m) p *= v;
  return p;
}

ExactDistribution::ExactDistribution(std::map<std::int64_t, Rational> probs)
    : p_(std::move(probs)) {
  Rational total(0);
  for (auto it = p_.begin(); it != p_.end();) {
    if (it->second < 0) {
      throw std::invalid_argument("ExactDistribution: negative probability");
    }
    if (it->second == 0) {
      it = p_.erase(it);
      continue;
    }
    total += it->second;
    ++it;
  }
  if (p_.empty() || total != 1) {
    throw std::invalid_argument(
        "ExactDistribution: probabilities must sum to exactly 1");
  }
}

ExactDistribution ExactDistribution::point_mass(std::int64_t n) {
  std::map<std::int64_t, Rational> p;
  p[n] = Rational(1);
  return ExactDistribution(std::move(p));
}

Rational ExactDistribution::probability(std::int64_t n) const {
  auto it = p_.find(n);
  return it == p_.end() ? Rational(0) : it->second;
}

Rational ExactDistribution::sum() const {
  Rational total(0);
  for (const auto& [n, p] : p_) total += p;
  return total;
}

double RealDistribution::sum() const {
  double s = 0;
  for (double v : p) s += v;
  return s;
}

double RealDistribution::mean() const {
  double s = 0;
  for (std::size_t n = 0; n < p.size(); ++n) s += static_cast<double>(n) * p[n];
  return s;
}

BigInt partition_degeneracy(
    const lattice::MultiplicityVector& part_mults,
    std::span<const lattice::MultiplicityVector> prefix_mults) {
  const std::size_t len = part_mults.counts.size();
  for (const auto& pm : prefix_mults) {
    if (pm.counts.size() != len) {
      throw std::invalid_argument("partition_degeneracy: length mismatch");
    }
  }
  BigInt out = 1;
  for (std::size_t t = 0; t < len; ++t) {
    int c = part_mults.counts[t];
    if (c == 0) continue;  // C(x, 0) = 1
    long long extra = 0;
    for (const auto& pm : prefix_mults) extra += pm.counts[t];
    out *= algebra::binomial(static_cast<unsigned long>(c + extra),
                             static_cast<unsigned long>(c));
  }
  return out;
}

namespace {

// Everything the inner sum depends on: the volume sequence of the prefix
// path and the per-value sums of its complement multiplicity vectors.
// Prefixes sharing a key contribute identical inner sums, so results are
// memoized on it.
struct PrefixKey {
  std::vector<long long> s;
  std::vector<long long> sum_pre;

  bool operator<(const PrefixKey& o) const {
    if (s != o.s) return s < o.s;
    return sum_pre < o.sum_pre;
  }
};

PrefixKey prefix_key(const lattice::LatticePath& pre, int k) {
  PrefixKey key;
  key.s = lattice::volume_sequence(pre).values;
  key.sum_pre.assign(key.s.size(), 0);
  for (int l = 1; l <= k - 3; ++l) {
    lattice::MultiplicityVector mv =
        lattice::multiplicities(lattice::projection_partition(pre, k - 2, l));
    for (std::size_t t = 0; t < mv.counts.size(); ++t) {
      key.sum_pre[t] += mv.counts[t];
    }
  }
  return key;
}

// Walks every weakly increasing tuple of r parts in [0, bound]: the 2d
// lattice paths of the inner rectangle, represented by their partitions.
template <typename Visit>
void for_each_part_tuple(int bound, int r, Visit visit) {
  std::vector<int> parts(static_cast<std::size_t>(r), 0);
  for (;;) {
    visit(parts);
    int j = r - 1;
    while (j >= 0 && parts[static_cast<std::size_t>(j)] == bound) --j;
    if (j < 0) break;
    int v = parts[static_cast<std::size_t>(j)] + 1;
    for (int i = j; i < r; ++i) parts[static_cast<std::size_t>(i)] = v;
  }
}

std::map<std::int64_t, BigInt> inner_weighted_counts(const PrefixKey& key,
                                                     int r) {
  const int bound = static_cast<int>(key.s.size()) - 1;
  std::vector<long long> mult(static_cast<std::size_t>(bound) + 1);
  std::map<std::int64_t, BigInt> out;
  for_each_part_tuple(bound, r, [&](const std::vector<int>& parts) {
    std::fill(mult.begin(), mult.end(), 0);
    long long n = 0;
    for (int v : parts) {
      ++mult[static_cast<std::size_t>(v)];
      n += key.s[static_cast<std::size_t>(v)];
    }
    BigInt w = 1;
    for (int t = 0; t <= bound; ++t) {
      long long c = mult[static_cast<std::size_t>(t)];
      if (c == 0) continue;
      w *= algebra::binomial(
          static_cast<unsigned long>(c + key.sum_pre[static_cast<std::size_t>(t)]),
          static_cast<unsigned long>(c));
    }
    out[n] += w;
  });
  return out;
}

struct PrefixSetup {
  lattice::MVector prefix_m;
  int inner_parts;  // m_{k-1}
};

PrefixSetup prefix_setup(const HopConfig& cfg, std::uint64_t budget) {
  std::vector<int> prefix_extents(cfg.m.begin(), cfg.m.end() - 1);
  lattice::MVector prefix_m{std::move(prefix_extents)};
  int bound = cfg.m[static_cast<std::size_t>(cfg.k - 3)];
  int r = cfg.m[static_cast<std::size_t>(cfg.k - 2)];
  BigInt work = prefix_m.path_count() *
                algebra::binomial(static_cast<unsigned long>(bound + r),
                                  static_cast<unsigned long>(r));
  if (work > BigInt(static_cast<unsigned long>(budget))) {
    throw BudgetExceededError("distribution needs " + work.get_str() +
                              " path evaluations, budget is " +
                              std::to_string(budget));
  }
  return PrefixSetup{std::move(prefix_m), r};
}

// Runs fn over every prefix word, across opts.threads disjoint sub-ranges;
// Partial is merged associatively in sub-range order.
template <typename Partial, typename Consume, typename Merge>
Partial over_prefixes(const lattice::MVector& prefix_m,
                      const EngineOptions& opts, Consume consume,
                      Merge merge) {
  lattice::PathStream stream(prefix_m, opts.budget);
  int threads = std::max(1, opts.threads);
  if (threads == 1 || stream.size() < 64) {
    return consume(std::move(stream));
  }
  std::vector<lattice::PathStream> parts = stream.split(threads);
  std::vector<Partial> partial(parts.size());
  std::vector<std::thread> workers;
  workers.reserve(parts.size());
  for (std::size_t i = 0; i < parts.size(); ++i) {
    workers.emplace_back([&, i] { partial[i] = consume(std::move(parts[i])); });
  }
  for (std::thread& t : workers) t.join();
  Partial acc{};
  for (Partial& p : partial) merge(acc, p);
  return acc;
}

}  // namespace

std::map<std::int64_t, BigInt> path_count_histogram(const HopConfig& cfg,
                                                    const EngineOptions& opts) {
  if (cfg.k == 1) return {{1, BigInt(1)}};
  if (cfg.k == 2) return {{cfg.m[0], BigInt(1)}};

  PrefixSetup setup = prefix_setup(cfg, opts.budget);

  std::map<PrefixKey, std::map<std::int64_t, BigInt>> cache;
  std::mutex cache_mu;
  auto lookup = [&](const PrefixKey& key) {
    {
      std::lock_guard lock(cache_mu);
      auto it = cache.find(key);
      if (it != cache.end()) return it->second;
    }
    std::map<std::int64_t, BigInt> value =
        inner_weighted_counts(key, setup.inner_parts);
    std::lock_guard lock(cache_mu);
    return cache.emplace(key, std::move(value)).first->second;
  };

  using Buckets = std::map<std::int64_t, BigInt>;
  auto consume = [&](lattice::PathStream stream) {
    Buckets acc;
    std::vector<int> word;
    while (stream.next(word)) {
      lattice::LatticePath pre(word, setup.prefix_m);
      Buckets part = lookup(prefix_key(pre, cfg.k));
      for (const auto& [n, w] : part) acc[n] += w;
    }
    return acc;
  };
  auto merge = [](Buckets& acc, const Buckets& p) {
    for (const auto& [n, w] : p) acc[n] += w;
  };
  return over_prefixes<Buckets>(setup.prefix_m, opts, consume, merge);
}

ExactDistribution path_count_pmf(const HopConfig& cfg,
                                 const EngineOptions& opts) {
  std::map<std::int64_t, BigInt> counts = path_count_histogram(cfg, opts);
  BigInt total = cfg.path_multinomial();
  BigInt check = 0;
  std::map<std::int64_t, Rational> probs;
  for (const auto& [n, c] : counts) {
    check += c;
    probs[n] = algebra::make_rational(c, total);
  }
  if (check != total) {
    throw std::logic_error(
        "path_count_pmf: degeneracy weights do not partition the ensemble");
  }
  return ExactDistribution(std::move(probs));
}

algebra::QRationalPolynomial path_count_pgf(const HopConfig& cfg,
                                            const EngineOptions& opts) {
  using algebra::QPolynomial;
  if (cfg.k == 1) {
    return normalized(QPolynomial::monomial(BigInt(1), 1), BigInt(1));
  }
  if (cfg.k == 2) {
    return normalized(
        QPolynomial::monomial(BigInt(1), static_cast<std::size_t>(cfg.m[0])),
        BigInt(1));
  }

  PrefixSetup setup = prefix_setup(cfg, opts.budget);
  BigInt max_n = cfg.max_path_count();
  if (!max_n.fits_ulong_p()) {
    throw BudgetExceededError("pgf: series bound does not fit a machine word");
  }
  const std::size_t q_bound = max_n.get_ui();
  const std::size_t u_bound = static_cast<std::size_t>(setup.inner_parts);
  BigInt cells = setup.prefix_m.path_count();
  cells *= static_cast<unsigned long>(u_bound + 1);
  cells *= BigInt(static_cast<unsigned long>(q_bound)) + 1;
  if (cells > BigInt(static_cast<unsigned long>(opts.budget))) {
    throw BudgetExceededError("pgf needs " + cells.get_str() +
                              " series cells, budget is " +
                              std::to_string(opts.budget));
  }

  std::map<PrefixKey, QPolynomial> cache;
  std::mutex cache_mu;
  auto lookup = [&](const PrefixKey& key) {
    {
      std::lock_guard lock(cache_mu);
      auto it = cache.find(key);
      if (it != cache.end()) return it->second;
    }
    std::vector<long long> exps(key.sum_pre.size());
    for (std::size_t t = 0; t < exps.size(); ++t) exps[t] = 1 + key.sum_pre[t];
    algebra::UQSeries gf =
        algebra::restricted_partition_gf(key.s, exps, u_bound, q_bound);
    QPolynomial value = gf.u_slice(u_bound);
    std::lock_guard lock(cache_mu);
    return cache.emplace(key, std::move(value)).first->second;
  };

  auto consume = [&](lattice::PathStream stream) {
    QPolynomial acc;
    std::vector<int> word;
    while (stream.next(word)) {
      lattice::LatticePath pre(word, setup.prefix_m);
      acc += lookup(prefix_key(pre, cfg.k));
    }
    return acc;
  };
  auto merge = [](QPolynomial& acc, const QPolynomial& p) { acc += p; };
  QPolynomial total =
      over_prefixes<QPolynomial>(setup.prefix_m, opts, consume, merge);
  return normalized(total, cfg.path_multinomial());
}

ExactDistribution three_hop_pmf(int m1, int m2) {
  if (m1 < 1 || m2 < 1) {
    throw std::invalid_argument("three_hop_pmf: occupancies must be >= 1");
  }
  algebra::QPolynomial qb =
      algebra::q_binomial(m1 + m2, m1);
  BigInt total = algebra::binomial(static_cast<unsigned long>(m1 + m2),
                                   static_cast<unsigned long>(m1));
  std::map<std::int64_t, Rational> probs;
  const std::vector<BigInt>& c = qb.coefficients();
  for (std::size_t n = 0; n < c.size(); ++n) {
    if (c[n] == 0) continue;
    probs[static_cast<std::int64_t>(n)] = algebra::make_rational(c[n], total);
  }
  return ExactDistribution(std::move(probs));
}

void require_valid_range(int k, double r0) {
  if (k < 1) throw std::invalid_argument("hop count must be >= 1");
  double lo = 1.0 / k;
  double hi = (k == 1) ? std::numeric_limits<double>::infinity()
                       : 1.0 / (k - 1);
  if (!(r0 > lo && r0 < hi)) {
    throw std::invalid_argument(
        "connection range r0=" + std::to_string(r0) +
        " must satisfy 1/k < r0 < 1/(k-1) for k=" + std::to_string(k));
  }
}

namespace {

// p.m.f. entries 0..M where M is the smallest cutoff with tail mass below
// tail_bound.
std::vector<double> poisson_pmf_truncated(double mean, double tail_bound) {
  if (mean < 0) throw std::invalid_argument("poisson: negative mean");
  if (!(tail_bound > 0)) throw std::invalid_argument("poisson: tail bound <= 0");
  std::vector<double> p;
  double term = std::exp(-mean);
  if (term == 0.0) {
    throw std::invalid_argument("poisson: mean too large for truncation");
  }
  double cum = term;
  p.push_back(term);
  std::size_t n = 0;
  while (cum < 1.0 - tail_bound) {
    ++n;
    term *= mean / static_cast<double>(n);
    p.push_back(term);
    cum += term;
    if (term == 0.0) break;
  }
  return p;
}

}  // namespace

RealDistribution two_hop_distribution(double lambda, double r0) {
  require_valid_range(2, r0);
  if (lambda < 0) throw std::invalid_argument("negative density");
  return RealDistribution{
      poisson_pmf_truncated(lambda * (2.0 * r0 - 1.0), 1e-12)};
}

RealDistribution poisson_mixture(int k, double lambda, double r0, double eps,
                                 const EngineOptions& opts) {
  require_valid_range(k, r0);
  if (!(eps > 0)) throw std::invalid_argument("poisson_mixture: eps must be > 0");
  if (lambda < 0) throw std::invalid_argument("negative density");
  if (k == 1) return RealDistribution{{0.0, 1.0}};

  const int lenses = k - 1;
  double mu = lambda * (k * r0 - 1.0);
  std::vector<double> w = poisson_pmf_truncated(mu, eps / lenses);
  const int cutoff = static_cast<int>(w.size()) - 1;

  double max_n = std::pow(static_cast<double>(cutoff), lenses);
  if (max_n > 1e8) {
    throw BudgetExceededError("poisson_mixture: truncated support too large");
  }
  std::vector<double> out(static_cast<std::size_t>(max_n) + 1, 0.0);

  std::vector<int> mvec(static_cast<std::size_t>(lenses), 0);
  for (;;) {
    double weight = 1;
    bool empty_lens = false;
    for (int v : mvec) {
      weight *= w[static_cast<std::size_t>(v)];
      if (v == 0) empty_lens = true;
    }
    if (weight > 0) {
      if (empty_lens) {
        out[0] += weight;  // a missing lens occupant breaks every path
      } else if (k == 3) {
        // same distribution as path_count_pmf (cross-checked in tests), but
        // the q-binomial recurrence is far cheaper over the whole lattice
        ExactDistribution pmf = three_hop_pmf(mvec[0], mvec[1]);
        for (const auto& [n, pr] : pmf.probabilities()) {
          out[static_cast<std::size_t>(n)] += weight * algebra::to_double(pr);
        }
      } else {
        ExactDistribution pmf = path_count_pmf(HopConfig(k, mvec), opts);
        for (const auto& [n, pr] : pmf.probabilities()) {
          out[static_cast<std::size_t>(n)] += weight * algebra::to_double(pr);
        }
      }
    }
    std::size_t j = 0;
    while (j < mvec.size() && mvec[j] == cutoff) {
      mvec[j] = 0;
      ++j;
    }
    if (j == mvec.size()) break;
    ++mvec[j];
  }
  while (out.size() > 1 && out.back() == 0.0) out.pop_back();
  return RealDistribution{std::move(out)};
}

std::pair<Rational, Rational> distribution_moments(const ExactDistribution& d) {
  Rational mean(0), second(0);
  for (const auto& [n, p] : d.probabilities()) {
    Rational np = p * static_cast<long>(n);
    mean += np;
    second += np * static_cast<long>(n);
  }
  Rational variance = second - mean * mean;
  return {mean, variance};
}

}  // namespace khop::engine
