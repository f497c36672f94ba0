#pragma once

#include <json.hpp>

#include <functional>
#include <span>
#include <vector>

namespace imlab {

/// Sorted list of variable-slot ids (1-based). Diverse blocks hold no repeats.
using Block = std::vector<int>;

/// Canonical block order: larger blocks first, ties broken lexicographically.
bool block_less(const Block& a, const Block& b);

/// A partition of the doubled multiset {1,1,...,n,n}.
///
/// Instances are always canonical: every block is sorted and the block list
/// follows `block_less`. Construction validates that each slot id 1..n
/// appears exactly twice across the blocks.
class Partition {
public:
  Partition() = default;

  /// Validates and canonicalizes. Throws DomainError on empty blocks, ids
  /// outside 1..n, or any id whose total multiplicity is not two.
  static Partition from_blocks(std::vector<Block> blocks, int n);

  const std::vector<Block>& blocks() const { return blocks_; }
  int n() const { return n_; }
  int k() const { return static_cast<int>(blocks_.size()); }
  /// Number of block values that occur exactly twice.
  int s() const { return s_; }
  bool is_diverse() const;
  int min_block_size() const;

  friend bool operator==(const Partition&, const Partition&) = default;
  friend bool operator<(const Partition& a, const Partition& b);

private:
  std::vector<Block> blocks_;
  int n_ = 0;
  int s_ = 0;
};

inline constexpr int kMaxEnumerationSlots = 8;
inline constexpr int kMaxBruteForceSlots = 5;

/// Every diverse partition of {1,1,...,n,n} whose blocks have at least
/// `min_block_size` elements, sorted and duplicate free.
///
/// Slots are inserted one at a time; the two copies of slot i go to two
/// distinct targets among the existing blocks and fresh blocks. Blocks with
/// equal content are interchangeable, so only the first (or first two) of
/// each content class is offered, which makes the output duplicate free
/// without a global set.
std::vector<Partition> enumerate_diverse(int n, int min_block_size = 1);

/// Independent oracle for `enumerate_diverse(n, 1)`: walks all set
/// partitions of the 2n positions, projects to slot ids, keeps the diverse
/// ones and dedupes.
std::vector<Partition> brute_force_diverse(int n);

/// s(pi): the number of distinct block values occurring exactly twice.
int identical_pair_count(const Partition& p);

/// Calls `visit` with a restricted growth string for every set partition of
/// {0..m-1}; `labels[i]` is the block index of element i.
void for_each_set_partition(int m, const std::function<void(std::span<const int> labels)>& visit);

nlohmann::json to_json(const Partition& p);
/// Inverse of `to_json`; n is the largest slot id present.
Partition partition_from_json(const nlohmann::json& j);

} // namespace imlab
