#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "khop/rgg.hpp"

using namespace khop;
using algebra::BigInt;
using sim::GeometryConfig;
using sim::RggInstance;

namespace {

GeometryConfig poisson_cfg(int k, double r0, double lambda,
                           std::uint64_t seed) {
  GeometryConfig cfg;
  cfg.k = k;
  cfg.r0 = r0;
  cfg.lambda = lambda;
  cfg.seed = seed;
  return cfg;
}

}  // namespace

TEST_CASE("lens intervals") {
  sim::Lens l1 = sim::lens_interval(3, 1, 0.35);
  CHECK(l1.lo == doctest::Approx(0.30));
  CHECK(l1.hi == doctest::Approx(0.35));
  CHECK(l1.width() == doctest::Approx(0.05));
  sim::Lens l2 = sim::lens_interval(3, 2, 0.35);
  CHECK(l2.lo == doctest::Approx(0.65));
  CHECK(l2.hi == doctest::Approx(0.70));
  for (int j = 1; j <= 3; ++j) {
    CHECK(sim::lens_interval(4, j, 0.27).width() == doctest::Approx(0.08));
  }
  CHECK_THROWS_AS(sim::lens_interval(3, 0, 0.35), std::invalid_argument);
  CHECK_THROWS_AS(sim::lens_interval(3, 3, 0.35), std::invalid_argument);
  CHECK_THROWS_AS(sim::lens_interval(3, 1, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(sim::lens_interval(3, 1, 1.0 / 3.0), std::invalid_argument);
}

TEST_CASE("lenses are disjoint and increasing over the whole valid range") {
  for (int k = 2; k <= 6; ++k) {
    double lo = 1.0 / k, hi = 1.0 / (k - 1);
    for (double f : {0.05, 0.25, 0.5, 0.75, 0.95}) {
      double r0 = lo + f * (hi - lo);
      double prev_hi = 0.0;
      for (int j = 1; j <= k - 1; ++j) {
        sim::Lens lens = sim::lens_interval(k, j, r0);
        CHECK(lens.lo > prev_hi);
        CHECK(lens.hi > lens.lo);
        CHECK(lens.hi < 1.0);
        prev_hi = lens.hi;
      }
    }
  }
}

TEST_CASE("config validation") {
  GeometryConfig cfg = poisson_cfg(3, 0.35, 10.0, 1);
  CHECK_NOTHROW(cfg.validate());
  cfg.r0 = 0.6;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.r0 = 0.35;
  cfg.trials = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.trials = 1;
  cfg.m = std::vector<int>{1, 2, 3};
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.m = std::vector<int>{1, 2};
  CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("sampling determinism and placement") {
  GeometryConfig cfg;
  cfg.k = 4;
  cfg.r0 = 0.27;
  cfg.m = std::vector<int>{7, 7, 7};
  cfg.seed = 99;

  sim::SplitMix64 a = sim::trial_stream(99, 0);
  sim::SplitMix64 b = sim::trial_stream(99, 0);
  RggInstance ia = sim::sample_instance(cfg, a);
  RggInstance ib = sim::sample_instance(cfg, b);
  CHECK(ia.lens_points == ib.lens_points);  // bit-identical replay

  REQUIRE(ia.lens_points.size() == 3);
  for (int j = 1; j <= 3; ++j) {
    const auto& pts = ia.lens_points[static_cast<std::size_t>(j - 1)];
    sim::Lens lens = sim::lens_interval(4, j, 0.27);
    CHECK(pts.size() == 7);
    CHECK(std::is_sorted(pts.begin(), pts.end()));
    for (double p : pts) {
      CHECK(p >= lens.lo);
      CHECK(p < lens.hi);
    }
  }

  sim::SplitMix64 c = sim::trial_stream(99, 1);
  RggInstance ic = sim::sample_instance(cfg, c);
  CHECK(ia.lens_points != ic.lens_points);  // distinct trial stream

  GeometryConfig empty = poisson_cfg(3, 0.35, 0.0, 1);
  sim::SplitMix64 d = sim::trial_stream(1, 0);
  RggInstance ie = sim::sample_instance(empty, d);
  CHECK(ie.lens_points[0].empty());
  CHECK(ie.lens_points[1].empty());
}

TEST_CASE("poisson sampler") {
  sim::SplitMix64 rng(7);
  CHECK(sim::sample_poisson(rng, 0.0) == 0);
  CHECK_THROWS_AS(sim::sample_poisson(rng, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(sim::sample_poisson(rng, 800.0), std::invalid_argument);

  double acc = 0;
  const int reps = 20000;
  for (int i = 0; i < reps; ++i) {
    acc += static_cast<double>(sim::sample_poisson(rng, 3.0));
  }
  CHECK(acc / reps == doctest::Approx(3.0).epsilon(0.03));
}

TEST_CASE("path counting on hand-built instances") {
  // k=2: every lens occupant is one path
  RggInstance two;
  two.k = 2;
  two.r0 = 0.6;
  two.lens_points = {{0.45, 0.5, 0.55}};
  CHECK(sim::count_k_hop_paths(two) == 3);
  CHECK(sim::count_k_hop_paths_exhaustive(two) == 3);

  // empty lens kills every path
  RggInstance gap;
  gap.k = 3;
  gap.r0 = 0.35;
  gap.lens_points = {{0.32}, {}};
  CHECK(sim::count_k_hop_paths(gap) == 0);
  CHECK(sim::count_k_hop_paths_exhaustive(gap) == 0);

  // k=1 endpoints connect only when r0 exceeds the domain length
  RggInstance direct;
  direct.k = 1;
  direct.r0 = 1.5;
  CHECK(sim::count_k_hop_paths(direct) == 1);
  CHECK(sim::count_k_hop_paths_exhaustive(direct) == 1);
}

TEST_CASE("figure-style configurations reproduce the captioned counts") {
  // three hops: per-node contributions 3+2+1+1 = 7
  RggInstance three;
  three.k = 3;
  three.r0 = 0.35;
  three.lens_points = {{0.310, 0.320, 0.330},
                       {0.655, 0.665, 0.671, 0.675}};
  CHECK(sim::count_k_hop_paths(three) == 7);
  CHECK(sim::count_k_hop_paths_exhaustive(three) == 7);

  // four hops: last-lens contributions 10+10+0+0 = 20
  RggInstance four;
  four.k = 4;
  four.r0 = 0.27;
  four.lens_points = {
      {0.260, 0.261, 0.262, 0.263, 0.264},
      {0.490, 0.491, 0.492, 0.493, 0.494},
      {0.7625, 0.7626, 0.780, 0.781}};
  CHECK(sim::count_k_hop_paths(four) == 20);
  CHECK(sim::count_k_hop_paths_exhaustive(four) == 20);
}

TEST_CASE("layered DP equals exhaustive DFS on random instances") {
  struct Setup {
    int k;
    double r0;
    double lambda;
  };
  for (const Setup& s :
       {Setup{3, 0.35, 60.0}, Setup{4, 0.27, 40.0}, Setup{5, 0.21, 60.0}}) {
    GeometryConfig cfg = poisson_cfg(s.k, s.r0, s.lambda, 2024);
    for (std::uint64_t t = 0; t < 100; ++t) {
      sim::SplitMix64 rng = sim::trial_stream(cfg.seed + s.k, t);
      RggInstance inst = sim::sample_instance(cfg, rng);
      CHECK(sim::count_k_hop_paths(inst) ==
            sim::count_k_hop_paths_exhaustive(inst));
    }
  }
}

TEST_CASE("points outside the lenses never contribute") {
  for (int k : {3, 4, 5}) {
    double r0 = k == 3 ? 0.35 : (k == 4 ? 0.27 : 0.21);
    GeometryConfig cfg = poisson_cfg(k, r0, 30.0, 555);
    cfg.sample_full_interval = true;
    for (std::uint64_t t = 0; t < 50; ++t) {
      sim::SplitMix64 rng = sim::trial_stream(cfg.seed + k, t);
      RggInstance inst = sim::sample_instance(cfg, rng);
      CHECK(!inst.outside_points.empty());
      // DFS sees every sampled point; the DP only the lens occupants.
      CHECK(sim::count_k_hop_paths(inst) ==
            sim::count_k_hop_paths_exhaustive(inst));
    }
  }
}

TEST_CASE("adding a point never decreases the count") {
  GeometryConfig cfg = poisson_cfg(4, 0.27, 30.0, 77);
  for (std::uint64_t t = 0; t < 100; ++t) {
    sim::SplitMix64 rng = sim::trial_stream(77, t);
    RggInstance inst = sim::sample_instance(cfg, rng);
    BigInt before = sim::count_k_hop_paths(inst);
    int j = static_cast<int>(rng.next() % 3);
    sim::Lens lens = sim::lens_interval(4, j + 1, 0.27);
    auto& pts = inst.lens_points[static_cast<std::size_t>(j)];
    pts.push_back(rng.next_uniform(lens.lo, lens.hi));
    std::sort(pts.begin(), pts.end());
    CHECK(sim::count_k_hop_paths(inst) >= before);
  }
}

TEST_CASE("adjacency depends only on the within-lens offset order") {
  GeometryConfig cfg = poisson_cfg(4, 0.27, 50.0, 31);
  sim::SplitMix64 rng = sim::trial_stream(31, 0);
  RggInstance inst = sim::sample_instance(cfg, rng);
  for (int j = 1; j <= 2; ++j) {
    sim::Lens lj = sim::lens_interval(4, j, 0.27);
    sim::Lens lj1 = sim::lens_interval(4, j + 1, 0.27);
    for (double u : inst.lens_points[static_cast<std::size_t>(j - 1)]) {
      for (double v : inst.lens_points[static_cast<std::size_t>(j)]) {
        bool adjacent = std::abs(u - v) < inst.r0;
        bool offset_order = (v - lj1.lo) < (u - lj.lo);
        CHECK(adjacent == offset_order);
      }
    }
  }
}

TEST_CASE("64-bit overflow escalates to exact arithmetic") {
  const int k = 12;
  const double r0 = 0.088;  // 1/12 < r0 < 1/11
  RggInstance inst;
  inst.k = k;
  inst.r0 = r0;
  for (int j = 1; j <= k - 1; ++j) {
    sim::Lens lens = sim::lens_interval(k, j, r0);
    // every lens pair fully adjacent: offsets strictly decrease with j
    double offset = 1e-4 * static_cast<double>(k - j);
    inst.lens_points.push_back(
        std::vector<double>(64, lens.lo + offset));
  }
  BigInt expected;
  mpz_ui_pow_ui(expected.get_mpz_t(), 64, 11);  // 2^66, beyond uint64
  CHECK(sim::count_k_hop_paths(inst) == expected);
}

TEST_CASE("run_trials determinism, merging and edge cases") {
  GeometryConfig cfg;
  cfg.k = 3;
  cfg.r0 = 0.35;
  cfg.m = std::vector<int>{3, 3};
  cfg.trials = 2000;
  cfg.seed = 5;

  sim::Histogram serial = sim::run_trials(cfg, 1);
  sim::Histogram again = sim::run_trials(cfg, 1);
  sim::Histogram parallel = sim::run_trials(cfg, 4);
  CHECK(serial.trials == 2000);
  CHECK(serial.counts == again.counts);
  CHECK(serial.counts == parallel.counts);
  CHECK(parallel.trials == 2000);

  std::uint64_t total = 0;
  for (const auto& [n, c] : serial.counts) total += c;
  CHECK(total == serial.trials);

  GeometryConfig one = cfg;
  one.trials = 1;
  CHECK(sim::run_trials(one).counts.size() == 1);

  GeometryConfig empty = poisson_cfg(3, 0.35, 0.0, 9);
  empty.trials = 50;
  sim::Histogram h = sim::run_trials(empty);
  CHECK(h.counts.size() == 1);
  CHECK(h.counts.at(BigInt(0)) == 50);
}
