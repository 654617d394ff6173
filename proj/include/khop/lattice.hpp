#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "khop/errors.hpp"
#include "khop/exact.hpp"

namespace khop::lattice {

inline constexpr std::uint64_t kDefaultEnumerationBudget = 10'000'000;

// Lattice extents m_1..m_d, one per step direction. Every extent >= 1.
class MVector {
 public:
  explicit MVector(std::vector<int> extents);

  int dimension() const { return static_cast<int>(extents_.size()); }
  int extent(int direction) const;  // 1-based
  int total_steps() const;
  const std::vector<int>& extents() const { return extents_; }

  // Number of lattice paths, i.e. multiset permutations of the step labels.
  algebra::BigInt path_count() const;
  // Product of the extents: the maximum attainable volume.
  algebra::BigInt extent_product() const;

  bool operator==(const MVector& o) const { return extents_ == o.extents_; }

 private:
  std::vector<int> extents_;
};

// A lattice path from the origin to the far corner of the box described by
// m: a word over direction labels 1..d in which label i occurs exactly
// m_i times.
class LatticePath {
 public:
  LatticePath(std::vector<int> steps, MVector m);
  // Infers the extents from the word; every label 1..max must occur.
  static LatticePath from_steps(std::vector<int> steps);

  int dimension() const { return m_.dimension(); }
  const MVector& m() const { return m_; }
  const std::vector<int>& steps() const { return steps_; }

 private:
  std::vector<int> steps_;
  MVector m_;
};

// Weakly increasing parts, each in [0, part_bound].
struct IntegerPartition {
  std::vector<int> parts;
  int part_bound = 0;
};

// counts[v] = number of parts equal to v, for v in 0..part_bound.
struct MultiplicityVector {
  std::vector<int> counts;
};

// Nested cumulative volume sequence of a path: entry t is the volume of the
// sub-configuration truncated after the t-th step in the last direction.
// First entry always 0; weakly increasing.
struct VolumeSequence {
  std::vector<long long> values;
};

// The partition whose t-th part counts direction-a steps strictly before the
// t-th direction-b step. Has m_b parts bounded by m_a. Swapping the argument
// order yields the complementary diagram.
IntegerPartition projection_partition(const LatticePath& p, int a, int b);

MultiplicityVector multiplicities(const IntegerPartition& p);

// See VolumeSequence. For a 1-dimensional path this is (0, 1, ..., m_1);
// in higher dimension entry t folds the adjacent projections
// pi_{1,2}, ..., pi_{d-1,d}: S_d(t) = sum_{i<=t} S_{d-1}[pi_{d-1,d}(i)].
VolumeSequence volume_sequence(const LatticePath& p);

// Chain count: the number of index tuples (t_1,...,t_d) whose steps occur in
// strictly increasing position order across directions 1..d. Zero for d = 1.
long long volume(const LatticePath& p);

// Same chain-count DP on a raw step word with d directions.
long long volume_of_word(std::span<const int> steps, int d);

// The sub-path formed by the steps with direction <= dims.
LatticePath prefix_path(const LatticePath& p, int dims);

long long dot(const VolumeSequence& s, const MultiplicityVector& mult);

// Streams every multiset permutation of the step labels exactly once, in
// lexicographic order. Supports splitting the remaining range into disjoint
// lexicographic sub-ranges so consumers can enumerate in parallel.
class PathStream {
 public:
  explicit PathStream(MVector m,
                      std::uint64_t budget = kDefaultEnumerationBudget);

  // Paths remaining in this range.
  std::uint64_t size() const { return remaining_; }

  // Copies the next word into out; false once the range is exhausted.
  bool next(std::vector<int>& out);

  std::vector<PathStream> split(int pieces) const;

 private:
  PathStream(MVector m, std::uint64_t first_rank, std::uint64_t count);

  MVector m_;
  std::uint64_t next_rank_;
  std::uint64_t remaining_;
  std::vector<int> current_;
  bool primed_ = false;
};

// Histogram of volume over every path of the box: the brute-force oracle for
// the exact distributions. Throws BudgetExceededError when the path count
// exceeds the budget.
std::map<long long, std::uint64_t> brute_force_volume_distribution(
    const MVector& m, std::uint64_t budget = kDefaultEnumerationBudget,
    int threads = 1);

}  // namespace khop::lattice
