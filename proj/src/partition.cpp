#include "imlab/partition.hpp"

#include "imlab/errors.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>

namespace imlab {

bool block_less(const Block& a, const Block& b) {
  if (a.size() != b.size()) return a.size() > b.size();
  return a < b;
}

bool operator<(const Partition& a, const Partition& b) {
  if (a.n_ != b.n_) return a.n_ < b.n_;
  return std::lexicographical_compare(a.blocks_.begin(), a.blocks_.end(), b.blocks_.begin(),
                                      b.blocks_.end(), block_less);
}

Partition Partition::from_blocks(std::vector<Block> blocks, int n) {
  if (n < 1) throw DomainError("partition: n must be positive");
  std::vector<int> count(static_cast<std::size_t>(n) + 1, 0);
  for (auto& b : blocks) {
    if (b.empty()) throw DomainError("partition: empty block");
    std::sort(b.begin(), b.end());
    for (int id : b) {
      if (id < 1 || id > n) throw DomainError("partition: slot id " + std::to_string(id) + " outside 1.." + std::to_string(n));
      ++count[static_cast<std::size_t>(id)];
    }
  }
  for (int id = 1; id <= n; ++id) {
    if (count[static_cast<std::size_t>(id)] != 2)
      throw DomainError("partition: slot " + std::to_string(id) + " must appear exactly twice");
  }
  std::sort(blocks.begin(), blocks.end(), block_less);

  Partition p;
  p.blocks_ = std::move(blocks);
  p.n_ = n;
  p.s_ = identical_pair_count(p);
  return p;
}

bool Partition::is_diverse() const {
  return std::all_of(blocks_.begin(), blocks_.end(), [](const Block& b) {
    return std::adjacent_find(b.begin(), b.end()) == b.end();
  });
}

int Partition::min_block_size() const {
  int m = 0;
  for (const auto& b : blocks_) {
    int sz = static_cast<int>(b.size());
    if (m == 0 || sz < m) m = sz;
  }
  return m;
}

int identical_pair_count(const Partition& p) {
  int s = 0;
  const auto& bs = p.blocks();
  for (std::size_t i = 0; i < bs.size();) {
    std::size_t j = i;
    while (j < bs.size() && bs[j] == bs[i]) ++j;
    if (j - i == 2) ++s;
    i = j;
  }
  return s;
}

namespace {

void check_min_block_size(int min_block_size) {
  if (min_block_size != 1 && min_block_size != 2)
    throw DomainError("min_block_size must be 1 or 2");
}

struct DiverseBuilder {
  int n;
  int min_block_size;
  std::vector<Block> blocks;
  std::vector<Partition> out;

  void emit() {
    for (const auto& b : blocks)
      if (static_cast<int>(b.size()) < min_block_size) return;
    out.push_back(Partition::from_blocks(blocks, n));
  }

  void place(int slot) {
    if (slot > n) {
      emit();
      return;
    }
    // Content classes: first index of each distinct block value, and the
    // second index when that value occurs twice. Blocks never contain `slot`
    // yet, so every existing block is an admissible target.
    std::vector<int> first;
    std::vector<int> second;
    for (int i = 0; i < static_cast<int>(blocks.size()); ++i) {
      int prev = -1;
      for (int j = 0; j < i; ++j) {
        if (blocks[static_cast<std::size_t>(j)] == blocks[static_cast<std::size_t>(i)]) {
          prev = j;
          break;
        }
      }
      if (prev < 0) {
        first.push_back(i);
      } else {
        bool has_second = false;
        for (int idx : second)
          if (blocks[static_cast<std::size_t>(idx)] == blocks[static_cast<std::size_t>(i)]) has_second = true;
        if (!has_second) second.push_back(i);
      }
    }

    auto recurse_with = [&](int a, int b) {
      // a, b: block indices or -1 for a fresh block (b may be -1 twice).
      std::size_t old_size = blocks.size();
      if (a >= 0) blocks[static_cast<std::size_t>(a)].push_back(slot);
      else blocks.push_back({slot});
      if (b >= 0) blocks[static_cast<std::size_t>(b)].push_back(slot);
      else blocks.push_back({slot});
      place(slot + 1);
      blocks.resize(old_size);
      if (a >= 0) blocks[static_cast<std::size_t>(a)].pop_back();
      if (b >= 0) blocks[static_cast<std::size_t>(b)].pop_back();
    };

    // Two different content classes.
    for (std::size_t x = 0; x < first.size(); ++x)
      for (std::size_t y = x + 1; y < first.size(); ++y) recurse_with(first[x], first[y]);
    // Both copies into the two equal blocks of one class.
    for (int idx : second) {
      for (int f : first)
        if (blocks[static_cast<std::size_t>(f)] == blocks[static_cast<std::size_t>(idx)]) recurse_with(f, idx);
    }
    // One existing class plus a fresh block.
    for (int f : first) recurse_with(f, -1);
    // Two fresh blocks.
    recurse_with(-1, -1);
  }
};

} // namespace

std::vector<Partition> enumerate_diverse(int n, int min_block_size) {
  if (n < 1 || n > kMaxEnumerationSlots)
    throw SizeLimitError("enumerate_diverse: n must be in 1.." + std::to_string(kMaxEnumerationSlots));
  check_min_block_size(min_block_size);
  DiverseBuilder builder{n, min_block_size, {}, {}};
  builder.place(1);
  std::sort(builder.out.begin(), builder.out.end());
  return std::move(builder.out);
}

void for_each_set_partition(int m, const std::function<void(std::span<const int>)>& visit) {
  if (m <= 0) return;
  std::vector<int> labels(static_cast<std::size_t>(m), 0);
  std::vector<int> max_prefix(static_cast<std::size_t>(m), 0);
  // Restricted growth strings in lexicographic order.
  while (true) {
    visit(labels);
    int i = m - 1;
    while (i > 0 && labels[static_cast<std::size_t>(i)] > max_prefix[static_cast<std::size_t>(i - 1)]) --i;
    if (i == 0) return;
    ++labels[static_cast<std::size_t>(i)];
    int mx = std::max(max_prefix[static_cast<std::size_t>(i - 1)], labels[static_cast<std::size_t>(i)]);
    max_prefix[static_cast<std::size_t>(i)] = mx;
    for (int j = i + 1; j < m; ++j) {
      labels[static_cast<std::size_t>(j)] = 0;
      max_prefix[static_cast<std::size_t>(j)] = mx;
    }
  }
}

std::vector<Partition> brute_force_diverse(int n) {
  if (n < 1 || n > kMaxBruteForceSlots)
    throw SizeLimitError("brute_force_diverse: n must be in 1.." + std::to_string(kMaxBruteForceSlots));
  std::set<Partition> found;
  const int m = 2 * n;
  for_each_set_partition(m, [&](std::span<const int> labels) {
    int k = 1 + *std::max_element(labels.begin(), labels.end());
    std::vector<Block> blocks(static_cast<std::size_t>(k));
    // Positions 2i-2 and 2i-1 (0-based) both carry slot id i.
    for (int pos = 0; pos < m; ++pos) blocks[static_cast<std::size_t>(labels[static_cast<std::size_t>(pos)])].push_back(pos / 2 + 1);
    Partition p = Partition::from_blocks(std::move(blocks), n);
    if (p.is_diverse()) found.insert(std::move(p));
  });
  return {found.begin(), found.end()};
}

nlohmann::json to_json(const Partition& p) {
  return nlohmann::json{{"blocks", p.blocks()}, {"s", p.s()}};
}

Partition partition_from_json(const nlohmann::json& j) {
  if (!j.contains("blocks") || !j.at("blocks").is_array())
    throw ValidationError("blocks: expected an array of integer arrays");
  std::vector<Block> blocks;
  int n = 0;
  for (const auto& b : j.at("blocks")) {
    if (!b.is_array()) throw ValidationError("blocks: expected an array of integer arrays");
    Block block;
    for (const auto& id : b) {
      if (!id.is_number_integer()) throw ValidationError("blocks: slot ids must be integers");
      block.push_back(id.get<int>());
      n = std::max(n, block.back());
    }
    blocks.push_back(std::move(block));
  }
  Partition p = Partition::from_blocks(std::move(blocks), n);
  if (j.contains("s") && j.at("s").get<int>() != p.s())
    throw ValidationError("s: does not match the identical-pair count of blocks");
  return p;
}

} // namespace imlab
