#include "khop/rgg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <thread>

#include "khop/distribution.hpp"

namespace khop::sim {

using algebra::BigInt;

Lens lens_interval(int k, int j, double r0) {
  engine::require_valid_range(k, r0);
  if (j < 1 || j > k - 1) {
    throw std::invalid_argument("lens_interval: j must be in 1..k-1, got " +
                                std::to_string(j));
  }
  return Lens{j, 1.0 - (k - j) * r0, j * r0};
}

void GeometryConfig::validate() const {
  engine::require_valid_range(k, r0);
  if (trials < 1) throw std::invalid_argument("GeometryConfig: trials must be >= 1");
  if (m.has_value()) {
    if (m->size() != static_cast<std::size_t>(k - 1)) {
      throw std::invalid_argument(
          "GeometryConfig: conditioned mode needs exactly k-1 occupancies");
    }
    for (int v : *m) {
      if (v < 0) {
        throw std::invalid_argument("GeometryConfig: negative occupancy");
      }
    }
  } else if (lambda < 0) {
    throw std::invalid_argument("GeometryConfig: negative density");
  }
  if (sample_full_interval && lambda < 0) {
    throw std::invalid_argument("GeometryConfig: negative density");
  }
}

std::uint64_t sample_poisson(SplitMix64& rng, double mean) {
  if (mean < 0) throw std::invalid_argument("sample_poisson: negative mean");
  if (mean == 0) return 0;
  double base = std::exp(-mean);
  if (base == 0.0) {
    throw std::invalid_argument("sample_poisson: mean too large");
  }
  double u = rng.next_double();
  double term = base;
  double cum = term;
  std::uint64_t n = 0;
  while (u > cum) {
    ++n;
    term *= mean / static_cast<double>(n);
    cum += term;
    if (term == 0.0) break;  // u in the numerically unreachable tail
  }
  return n;
}

namespace {

std::vector<double> uniform_points(SplitMix64& rng, double lo, double hi,
                                   std::uint64_t n) {
  std::vector<double> pts(n);
  for (double& p : pts) p = rng.next_uniform(lo, hi);
  std::sort(pts.begin(), pts.end());
  return pts;
}

}  // namespace

RggInstance sample_instance(const GeometryConfig& cfg, SplitMix64& rng) {
  cfg.validate();
  RggInstance inst;
  inst.k = cfg.k;
  inst.r0 = cfg.r0;
  inst.lens_points.reserve(static_cast<std::size_t>(cfg.k - 1));
  for (int j = 1; j <= cfg.k - 1; ++j) {
    Lens lens = lens_interval(cfg.k, j, cfg.r0);
    std::uint64_t n = cfg.m.has_value()
                          ? static_cast<std::uint64_t>(
                                (*cfg.m)[static_cast<std::size_t>(j - 1)])
                          : sample_poisson(rng, cfg.lambda * lens.width());
    inst.lens_points.push_back(uniform_points(rng, lens.lo, lens.hi, n));
  }
  if (cfg.sample_full_interval) {
    // the k gaps of [0,1] left uncovered by the lenses
    double cursor = 0.0;
    std::vector<double> outside;
    for (int j = 1; j <= cfg.k - 1; ++j) {
      Lens lens = lens_interval(cfg.k, j, cfg.r0);
      std::uint64_t n = sample_poisson(rng, cfg.lambda * (lens.lo - cursor));
      std::vector<double> pts = uniform_points(rng, cursor, lens.lo, n);
      outside.insert(outside.end(), pts.begin(), pts.end());
      cursor = lens.hi;
    }
    std::uint64_t n = sample_poisson(rng, cfg.lambda * (1.0 - cursor));
    std::vector<double> pts = uniform_points(rng, cursor, 1.0, n);
    outside.insert(outside.end(), pts.begin(), pts.end());
    inst.outside_points = std::move(outside);
  }
  return inst;
}

namespace {

// Layered DP: c(v) = sum of c(u) over previous-lens points u with
// v - u < r0. Lens lists are sorted, so eligible u form a suffix and one
// suffix-sum sweep per lens suffices. Returns false on 64-bit overflow.
bool layered_dp_u64(const RggInstance& inst, std::uint64_t& out) {
  const int layers = inst.k - 1;
  std::vector<std::uint64_t> counts(inst.lens_points[0].size(), 1);
  for (int j = 1; j < layers; ++j) {
    const std::vector<double>& prev = inst.lens_points[static_cast<std::size_t>(j - 1)];
    const std::vector<double>& cur = inst.lens_points[static_cast<std::size_t>(j)];
    // suffix[i] = counts[i] + ... + counts.back()
    std::vector<std::uint64_t> suffix(prev.size() + 1, 0);
    for (std::size_t i = prev.size(); i-- > 0;) {
      if (__builtin_add_overflow(suffix[i + 1], counts[i], &suffix[i])) {
        return false;
      }
    }
    std::vector<std::uint64_t> next(cur.size());
    std::size_t lo = 0;
    for (std::size_t i = 0; i < cur.size(); ++i) {
      while (lo < prev.size() && !(cur[i] - prev[lo] < inst.r0)) ++lo;
      next[i] = suffix[lo];
    }
    counts = std::move(next);
  }
  std::uint64_t total = 0;
  for (std::uint64_t c : counts) {
    if (__builtin_add_overflow(total, c, &total)) return false;
  }
  out = total;
  return true;
}

BigInt layered_dp_big(const RggInstance& inst) {
  const int layers = inst.k - 1;
  std::vector<BigInt> counts(inst.lens_points[0].size(), BigInt(1));
  for (int j = 1; j < layers; ++j) {
    const std::vector<double>& prev = inst.lens_points[static_cast<std::size_t>(j - 1)];
    const std::vector<double>& cur = inst.lens_points[static_cast<std::size_t>(j)];
    std::vector<BigInt> suffix(prev.size() + 1, BigInt(0));
    for (std::size_t i = prev.size(); i-- > 0;) {
      suffix[i] = suffix[i + 1] + counts[i];
    }
    std::vector<BigInt> next(cur.size());
    std::size_t lo = 0;
    for (std::size_t i = 0; i < cur.size(); ++i) {
      while (lo < prev.size() && !(cur[i] - prev[lo] < inst.r0)) ++lo;
      next[i] = suffix[lo];
    }
    counts = std::move(next);
  }
  BigInt total = 0;
  for (const BigInt& c : counts) total += c;
  return total;
}

}  // namespace

BigInt count_k_hop_paths(const RggInstance& inst) {
  if (inst.k < 1) throw std::invalid_argument("count_k_hop_paths: k < 1");
  if (inst.k == 1) return BigInt(inst.r0 > 1.0 ? 1 : 0);
  if (inst.lens_points.size() != static_cast<std::size_t>(inst.k - 1)) {
    throw std::invalid_argument("count_k_hop_paths: expected k-1 lens lists");
  }
  for (const auto& lens : inst.lens_points) {
    if (lens.empty()) return BigInt(0);
  }
  std::uint64_t fast = 0;
  if (layered_dp_u64(inst, fast)) {
    return BigInt(static_cast<unsigned long>(fast));
  }
  return layered_dp_big(inst);
}

BigInt count_k_hop_paths_exhaustive(const RggInstance& inst) {
  std::vector<double> verts;
  verts.push_back(0.0);
  for (const auto& lens : inst.lens_points) {
    verts.insert(verts.end(), lens.begin(), lens.end());
  }
  verts.insert(verts.end(), inst.outside_points.begin(),
               inst.outside_points.end());
  verts.push_back(1.0);
  const std::size_t n = verts.size();
  const std::size_t target = n - 1;  // vertex 1
  std::vector<char> visited(n, 0);
  BigInt found = 0;

  auto dfs = [&](auto&& self, std::size_t v, int hops_left) -> void {
    if (hops_left == 0) {
      if (v == target) found += 1;
      return;
    }
    for (std::size_t u = 0; u < n; ++u) {
      if (visited[u]) continue;
      if (!(std::abs(verts[v] - verts[u]) < inst.r0)) continue;
      visited[u] = 1;
      self(self, u, hops_left - 1);
      visited[u] = 0;
    }
  };
  visited[0] = 1;
  dfs(dfs, 0, inst.k);
  return found;
}

void Histogram::add(const BigInt& n) {
  ++counts[n];
  ++trials;
}

void Histogram::merge(const Histogram& other) {
  for (const auto& [n, c] : other.counts) counts[n] += c;
  trials += other.trials;
}

Histogram run_trials(const GeometryConfig& cfg, int threads) {
  cfg.validate();
  auto consume = [&cfg](std::uint64_t first, std::uint64_t count) {
    Histogram h;
    for (std::uint64_t t = first; t < first + count; ++t) {
      SplitMix64 rng = trial_stream(cfg.seed, t);
      RggInstance inst = sample_instance(cfg, rng);
      h.add(count_k_hop_paths(inst));
    }
    return h;
  };

  if (threads <= 1 || cfg.trials < 1024) {
    return consume(0, cfg.trials);
  }
  std::uint64_t per = cfg.trials / static_cast<std::uint64_t>(threads);
  std::uint64_t extra = cfg.trials % static_cast<std::uint64_t>(threads);
  std::vector<Histogram> partial(static_cast<std::size_t>(threads));
  std::vector<std::thread> workers;
  std::uint64_t first = 0;
  for (int i = 0; i < threads; ++i) {
    std::uint64_t count = per + (static_cast<std::uint64_t>(i) < extra ? 1 : 0);
    workers.emplace_back([&partial, &consume, i, first, count] {
      partial[static_cast<std::size_t>(i)] = consume(first, count);
    });
    first += count;
  }
  for (std::thread& t : workers) t.join();
  Histogram total;
  for (const Histogram& h : partial) total.merge(h);
  return total;
}

}  // namespace khop::sim
