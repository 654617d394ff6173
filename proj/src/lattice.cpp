#include "khop/lattice.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>
#include <thread>

namespace khop::lattice {

using algebra::BigInt;

MVector::MVector(std::vector<int> extents) : extents_(std::move(extents)) {
  if (extents_.empty()) {
    throw std::invalid_argument("MVector: dimension must be >= 1");
  }
  for (int e : extents_) {
    if (e < 1) {
      throw std::invalid_argument("MVector: every extent must be >= 1, got " +
                                  std::to_string(e));
    }
  }
}

int MVector::extent(int direction) const {
  if (direction < 1 || direction > dimension()) {
    throw std::invalid_argument("MVector: direction out of range");
  }
  return extents_[static_cast<std::size_t>(direction - 1)];
}

int MVector::total_steps() const {
  return std::accumulate(extents_.begin(), extents_.end(), 0);
}

BigInt MVector::path_count() const { return algebra::multinomial(extents_); }

BigInt MVector::extent_product() const {
  BigInt p = 1;
  for (int e : extents_) p *= e;
  return p;
}

namespace {

std::vector<int> count_labels(const std::vector<int>& steps, int d) {
  std::vector<int> counts(static_cast<std::size_t>(d), 0);
  for (int s : steps) {
    if (s < 1 || s > d) {
      throw std::invalid_argument("LatticePath: step label out of range");
    }
    ++counts[static_cast<std::size_t>(s - 1)];
  }
  return counts;
}

}  // namespace

LatticePath::LatticePath(std::vector<int> steps, MVector m)
    : steps_(std::move(steps)), m_(std::move(m)) {
  if (count_labels(steps_, m_.dimension()) != m_.extents()) {
    throw std::invalid_argument("LatticePath: step counts disagree with extents");
  }
}

LatticePath LatticePath::from_steps(std::vector<int> steps) {
  if (steps.empty()) {
    throw std::invalid_argument("LatticePath: empty step word");
  }
  int d = *std::max_element(steps.begin(), steps.end());
  std::vector<int> counts = count_labels(steps, d);
  return LatticePath(std::move(steps), MVector(std::move(counts)));
}

IntegerPartition projection_partition(const LatticePath& p, int a, int b) {
  int d = p.dimension();
  if (a < 1 || a > d || b < 1 || b > d) {
    throw std::invalid_argument("projection_partition: direction out of range");
  }
  if (a == b) {
    throw std::invalid_argument("projection_partition: directions must differ");
  }
  IntegerPartition out;
  out.part_bound = p.m().extent(a);
  out.parts.reserve(static_cast<std::size_t>(p.m().extent(b)));
  int seen_a = 0;
  for (int s : p.steps()) {
    if (s == a) ++seen_a;
    if (s == b) out.parts.push_back(seen_a);
  }
  return out;
}

MultiplicityVector multiplicities(const IntegerPartition& p) {
  MultiplicityVector out;
  out.counts.assign(static_cast<std::size_t>(p.part_bound) + 1, 0);
  for (int v : p.parts) {
    if (v < 0 || v > p.part_bound) {
      throw std::invalid_argument("multiplicities: part outside [0, bound]");
    }
    ++out.counts[static_cast<std::size_t>(v)];
  }
  return out;
}

VolumeSequence volume_sequence(const LatticePath& p) {
  int d = p.dimension();
  std::vector<long long> s(static_cast<std::size_t>(p.m().extent(1)) + 1);
  std::iota(s.begin(), s.end(), 0LL);
  for (int j = 2; j <= d; ++j) {
    IntegerPartition proj = projection_partition(p, j - 1, j);
    std::vector<long long> next(static_cast<std::size_t>(p.m().extent(j)) + 1, 0);
    long long acc = 0;
    for (std::size_t t = 0; t < proj.parts.size(); ++t) {
      acc += s[static_cast<std::size_t>(proj.parts[t])];
      next[t + 1] = acc;
    }
    s = std::move(next);
  }
  return VolumeSequence{std::move(s)};
}

long long volume_of_word(std::span<const int> steps, int d) {
  if (d < 1) throw std::invalid_argument("volume_of_word: dimension < 1");
  if (d == 1) return 0;
  // chains[i] = chains over directions 1..i ending at a step already seen.
  std::vector<long long> chains(static_cast<std::size_t>(d) + 1, 0);
  chains[0] = 1;  // sentinel so label-1 steps extend an empty chain
  for (int s : steps) {
    chains[static_cast<std::size_t>(s)] += chains[static_cast<std::size_t>(s - 1)];
  }
  return chains[static_cast<std::size_t>(d)];
}

long long volume(const LatticePath& p) {
  return volume_of_word(p.steps(), p.dimension());
}

LatticePath prefix_path(const LatticePath& p, int dims) {
  if (dims < 1 || dims > p.dimension()) {
    throw std::invalid_argument("prefix_path: dims out of range");
  }
  std::vector<int> steps;
  for (int s : p.steps()) {
    if (s <= dims) steps.push_back(s);
  }
  std::vector<int> extents(p.m().extents().begin(),
                           p.m().extents().begin() + dims);
  return LatticePath(std::move(steps), MVector(std::move(extents)));
}

long long dot(const VolumeSequence& s, const MultiplicityVector& mult) {
  if (s.values.size() != mult.counts.size()) {
    throw std::invalid_argument("dot: sequence lengths differ (" +
                                std::to_string(s.values.size()) + " vs " +
                                std::to_string(mult.counts.size()) + ")");
  }
  long long acc = 0;
  for (std::size_t i = 0; i < s.values.size(); ++i) {
    acc += s.values[i] * mult.counts[i];
  }
  return acc;
}

namespace {

// Lexicographic rank -> multiset permutation.
std::vector<int> unrank_word(const MVector& m, std::uint64_t rank) {
  std::vector<int> counts = m.extents();
  int n = m.total_steps();
  std::vector<int> word;
  word.reserve(static_cast<std::size_t>(n));
  BigInt r(static_cast<unsigned long>(rank));
  for (int pos = 0; pos < n; ++pos) {
    for (int label = 1; label <= m.dimension(); ++label) {
      int& c = counts[static_cast<std::size_t>(label - 1)];
      if (c == 0) continue;
      --c;
      BigInt completions = algebra::multinomial(counts);
      if (r < completions) {
        word.push_back(label);
        break;
      }
      r -= completions;
      ++c;
    }
  }
  return word;
}

}  // namespace

PathStream::PathStream(MVector m, std::uint64_t budget) : m_(std::move(m)) {
  BigInt total = m_.path_count();
  if (total > BigInt(static_cast<unsigned long>(budget))) {
    throw BudgetExceededError("path enumeration needs " + total.get_str() +
                              " paths, budget is " + std::to_string(budget));
  }
  next_rank_ = 0;
  remaining_ = total.get_ui();
}

PathStream::PathStream(MVector m, std::uint64_t first_rank, std::uint64_t count)
    : m_(std::move(m)), next_rank_(first_rank), remaining_(count) {}

bool PathStream::next(std::vector<int>& out) {
  if (remaining_ == 0) return false;
  if (!primed_) {
    current_ = unrank_word(m_, next_rank_);
    primed_ = true;
  } else {
    std::next_permutation(current_.begin(), current_.end());
  }
  ++next_rank_;
  --remaining_;
  out = current_;
  return true;
}

std::vector<PathStream> PathStream::split(int pieces) const {
  if (pieces < 1) throw std::invalid_argument("PathStream::split: pieces < 1");
  std::uint64_t per =
      remaining_ / static_cast<std::uint64_t>(pieces);
  std::uint64_t extra = remaining_ % static_cast<std::uint64_t>(pieces);
  std::vector<PathStream> out;
  std::uint64_t rank = next_rank_;
  for (int i = 0; i < pieces; ++i) {
    std::uint64_t count = per + (static_cast<std::uint64_t>(i) < extra ? 1 : 0);
    if (count == 0) continue;
    out.push_back(PathStream(m_, rank, count));
    rank += count;
  }
  return out;
}

std::map<long long, std::uint64_t> brute_force_volume_distribution(
    const MVector& m, std::uint64_t budget, int threads) {
  PathStream stream(m, budget);
  int d = m.dimension();

  auto consume = [d](PathStream s) {
    std::map<long long, std::uint64_t> hist;
    std::vector<int> word;
    while (s.next(word)) {
      ++hist[volume_of_word(word, d)];
    }
    return hist;
  };

  if (threads <= 1 || stream.size() < 4096) {
    return consume(std::move(stream));
  }

  std::vector<PathStream> parts = stream.split(threads);
  std::vector<std::map<long long, std::uint64_t>> partial(parts.size());
  std::vector<std::thread> workers;
  workers.reserve(parts.size());
  for (std::size_t i = 0; i < parts.size(); ++i) {
    workers.emplace_back(
        [&, i] { partial[i] = consume(std::move(parts[i])); });
  }
  for (std::thread& t : workers) t.join();

  std::map<long long, std::uint64_t> hist;
  for (const auto& p : partial) {
    for (const auto& [n, c] : p) hist[n] += c;
  }
  return hist;
}

}  // namespace khop::lattice
