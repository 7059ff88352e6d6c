#pragma once

// Set partitions of the site set {0, ..., n-1}, enumerated as restricted-growth
// strings with an exact number of classes.

#include <algorithm>
#include <cstdint>
#include <iterator>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace entanglemeter {

/// Hard cap on sites for bitmask-indexed partitions.
inline constexpr int kMaxPartitionSites = 24;

/// A k-block set partition of {0..n-1}. Blocks are sorted internally and
/// ordered by their minimum element, so equal partitions compare equal.
class Partition {
 public:
  Partition() = default;

  explicit Partition(std::vector<std::vector<int>> blocks) : blocks_(std::move(blocks)) {
    int n = 0;
    for (auto& b : blocks_) {
      if (b.empty()) throw std::invalid_argument("Partition: empty block");
      std::sort(b.begin(), b.end());
      n += static_cast<int>(b.size());
    }
    if (blocks_.empty()) throw std::invalid_argument("Partition: no blocks");
    if (n > kMaxPartitionSites) throw std::invalid_argument("Partition: too many sites");
    std::vector<bool> seen(n, false);
    for (const auto& b : blocks_) {
      for (int s : b) {
        if (s < 0 || s >= n) {
          throw std::invalid_argument("Partition: blocks must cover {1.." + std::to_string(n) +
                                      "} exactly, found index " + std::to_string(s + 1));
        }
        if (seen[s]) {
          throw std::invalid_argument("Partition: index " + std::to_string(s + 1) +
                                      " appears in more than one block");
        }
        seen[s] = true;
      }
    }
    std::sort(blocks_.begin(), blocks_.end(),
              [](const auto& x, const auto& y) { return x.front() < y.front(); });
    sites_ = n;
  }

  /// Builds a partition from a restricted-growth string (labels[i] = block of site i).
  static Partition from_labels(const std::vector<int>& labels) {
    int k = 0;
    for (int l : labels) k = std::max(k, l + 1);
    std::vector<std::vector<int>> blocks(k);
    for (int i = 0; i < static_cast<int>(labels.size()); ++i) blocks[labels[i]].push_back(i);
    return Partition(std::move(blocks));
  }

  /// Parses "1,3|2|4" (1-based indices, comma within a block, pipe between blocks).
  static Partition parse(std::string_view text) {
    std::vector<std::vector<int>> blocks(1);
    std::string number;
    auto flush = [&] {
      if (number.empty()) throw std::invalid_argument("Partition: malformed text '" + std::string(text) + "'");
      std::size_t used = 0;
      int v = 0;
      try {
        v = std::stoi(number, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != number.size() || v < 1) {
        throw std::invalid_argument("Partition: bad index '" + number + "' in '" + std::string(text) + "'");
      }
      blocks.back().push_back(v - 1);
      number.clear();
    };
    for (char c : text) {
      if (c == ' ') continue;
      if (c == ',') {
        flush();
      } else if (c == '|') {
        flush();
        blocks.emplace_back();
      } else {
        number.push_back(c);
      }
    }
    flush();
    return Partition(std::move(blocks));
  }

  int sites() const { return sites_; }
  int size() const { return static_cast<int>(blocks_.size()); }
  const std::vector<int>& block(int t) const { return blocks_.at(t); }
  const std::vector<std::vector<int>>& blocks() const { return blocks_; }

  /// Bitmask of block t (bit i set iff site i is in the block).
  std::uint32_t mask(int t) const {
    std::uint32_t m = 0;
    for (int s : blocks_.at(t)) m |= std::uint32_t{1} << s;
    return m;
  }

  std::string to_string() const {
    std::string out;
    for (std::size_t t = 0; t < blocks_.size(); ++t) {
      if (t) out += '|';
      for (std::size_t j = 0; j < blocks_[t].size(); ++j) {
        if (j) out += ',';
        out += std::to_string(blocks_[t][j] + 1);
      }
    }
    return out;
  }

  bool operator==(const Partition&) const = default;

 private:
  std::vector<std::vector<int>> blocks_;
  int sites_ = 0;
};

namespace detail {

// Advances a restricted-growth string with exactly k classes to its lexicographic
// successor. Returns false when `labels` was the last one.
inline bool next_rgs(std::vector<int>& labels, int k) {
  const int n = static_cast<int>(labels.size());
  std::vector<int> prefix_max(n);
  prefix_max[0] = labels[0];
  for (int i = 1; i < n; ++i) prefix_max[i] = std::max(prefix_max[i - 1], labels[i]);

  for (int i = n - 1; i >= 1; --i) {
    const int before = prefix_max[i - 1];
    const int limit = std::min(k - 1, before + 1);
    const int remaining = n - 1 - i;
    for (int v = labels[i] + 1; v <= limit; ++v) {
      const int m = std::max(before, v);
      const int need = k - 1 - m;
      if (need > remaining) continue;
      labels[i] = v;
      const int zeros = remaining - need;
      for (int j = 0; j < zeros; ++j) labels[i + 1 + j] = 0;
      for (int j = 0; j < need; ++j) labels[i + 1 + zeros + j] = m + 1 + j;
      return true;
    }
  }
  return false;
}

}  // namespace detail

/// Lazy, deterministic range over every k-block partition of {0..n-1}
/// (lexicographic order of restricted-growth strings).
class KPartitions {
 public:
  class iterator {
   public:
    using iterator_category = std::input_iterator_tag;
    using value_type = Partition;
    using difference_type = std::ptrdiff_t;
    using pointer = const Partition*;
    using reference = const Partition&;

    iterator() = default;
    iterator(int n, int k) : k_(k), labels_(n, 0), done_(false) {
      for (int j = 1; j < k; ++j) labels_[n - k + j] = j;
      current_ = Partition::from_labels(labels_);
    }

    reference operator*() const { return current_; }
    pointer operator->() const { return &current_; }
    const std::vector<int>& labels() const { return labels_; }

    iterator& operator++() {
      if (detail::next_rgs(labels_, k_)) {
        current_ = Partition::from_labels(labels_);
      } else {
        done_ = true;
      }
      return *this;
    }
    void operator++(int) { ++*this; }

    friend bool operator==(const iterator& it, std::default_sentinel_t) { return it.done_; }

   private:
    int k_ = 0;
    std::vector<int> labels_;
    Partition current_;
    bool done_ = true;
  };

  KPartitions(int n, int k) : n_(n), k_(k) {
    if (n < 1 || n > kMaxPartitionSites) throw std::invalid_argument("k_partitions: n out of range");
    if (k < 1 || k > n) {
      throw std::invalid_argument("k_partitions: k must satisfy 1 <= k <= n (got k=" + std::to_string(k) +
                                  ", n=" + std::to_string(n) + ")");
    }
  }

  iterator begin() const { return iterator(n_, k_); }
  std::default_sentinel_t end() const { return {}; }

 private:
  int n_;
  int k_;
};

inline KPartitions k_partitions(int n, int k) { return KPartitions(n, k); }

/// All 2^(n-1) - 1 unordered bipartitions; identical to k_partitions(n, 2).
inline KPartitions bipartitions(int n) {
  if (n < 2) throw std::invalid_argument("bipartitions: n must be >= 2");
  return KPartitions(n, 2);
}

/// Stirling number of the second kind, S(n, k), for 0 <= k <= n <= 20.
inline std::uint64_t stirling2(int n, int k) {
  if (n < 0 || k < 0 || k > n) throw std::invalid_argument("stirling2: need 0 <= k <= n");
  if (n > 20) throw std::overflow_error("stirling2: n > 20 not supported");
  std::vector<std::vector<std::uint64_t>> s(n + 1, std::vector<std::uint64_t>(n + 1, 0));
  s[0][0] = 1;
  for (int i = 1; i <= n; ++i) {
    for (int j = 1; j <= i; ++j) s[i][j] = static_cast<std::uint64_t>(j) * s[i - 1][j] + s[i - 1][j - 1];
  }
  return s[n][k];
}

}  // namespace entanglemeter
