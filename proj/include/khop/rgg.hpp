#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "khop/exact.hpp"
#include "khop/rng.hpp"

namespace khop::sim {

// Interval the j-th intermediate vertex of any k-hop endpoint path must
// occupy: (1 - (k-j) r0, j r0), width k r0 - 1.
struct Lens {
  int j = 0;
  double lo = 0;
  double hi = 0;

  double width() const { return hi - lo; }
};

Lens lens_interval(int k, int j, double r0);

struct GeometryConfig {
  int k = 3;
  double r0 = 0;
  // Conditioned mode: exactly m[j] uniform points per lens. Poisson mode
  // (m absent): occupancies drawn Poisson(lambda * lens width).
  std::optional<std::vector<int>> m;
  double lambda = 0;
  std::uint64_t trials = 1;
  std::uint64_t seed = 0;
  // Also samples Poisson(lambda) points outside the lenses. Such points can
  // never sit on a k-hop endpoint path, which the exhaustive counter
  // verifies; the default skips them.
  bool sample_full_interval = false;

  void validate() const;
};

// One sampled point configuration. Endpoints 0 and 1 are implicit vertices.
struct RggInstance {
  int k = 0;
  double r0 = 0;
  std::vector<std::vector<double>> lens_points;  // sorted, one list per lens
  std::vector<double> outside_points;            // sorted, may be empty
};

RggInstance sample_instance(const GeometryConfig& cfg, SplitMix64& rng);

// Number of simple k-edge paths between the endpoint vertices, by the
// layered DP over lens occupants. Counts are 64-bit with overflow detection
// escalating to arbitrary precision.
algebra::BigInt count_k_hop_paths(const RggInstance& inst);

// Depth-first enumeration of simple k-edge paths over the full vertex set
// and adjacency |x - y| < r0, with no lens-layer shortcut. Oracle for
// count_k_hop_paths.
algebra::BigInt count_k_hop_paths_exhaustive(const RggInstance& inst);

struct Histogram {
  std::map<algebra::BigInt, std::uint64_t> counts;
  std::uint64_t trials = 0;

  void add(const algebra::BigInt& n);
  void merge(const Histogram& other);
};

// Histogram of count_k_hop_paths over cfg.trials independent instances.
// Trial t draws from trial_stream(cfg.seed, t), so the result is identical
// for any thread count.
Histogram run_trials(const GeometryConfig& cfg, int threads = 1);

// Poisson sample by CDF inversion; exact and reproducible. mean <= ~700.
std::uint64_t sample_poisson(SplitMix64& rng, double mean);

}  // namespace khop::sim
