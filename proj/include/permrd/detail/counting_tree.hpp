#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace permrd::detail {

// Binary indexed counting structure over slots 1..size. Supports point
// increments, prefix counts and "k-th occupied slot" queries, all O(log n).
class CountingTree {
 public:
  explicit CountingTree(std::size_t size) : tree_(size + 1, 0) {}

  std::size_t size() const noexcept { return tree_.size() - 1; }

  void add(std::size_t slot, std::int32_t delta) noexcept {
    for (; slot < tree_.size(); slot += slot & (~slot + 1)) tree_[slot] += delta;
  }

  // Number of marks in slots 1..slot.
  std::int64_t prefix(std::size_t slot) const noexcept {
    std::int64_t total = 0;
    for (; slot > 0; slot -= slot & (~slot + 1)) total += tree_[slot];
    return total;
  }

  // Smallest slot whose prefix count reaches `rank` (1-based). Requires
  // 1 <= rank <= prefix(size()).
  std::size_t kth(std::int64_t rank) const noexcept {
    std::size_t pos = 0;
    for (std::size_t step = std::bit_floor(size()); step > 0; step >>= 1) {
      const std::size_t next = pos + step;
      if (next < tree_.size() && tree_[next] < rank) {
        pos = next;
        rank -= tree_[next];
      }
    }
    return pos + 1;
  }

  // Marks every slot once, in O(n). Only valid on an empty tree.
  void fill_ones() noexcept {
    for (std::size_t i = 1; i < tree_.size(); ++i) {
      tree_[i] += 1;
      const std::size_t parent = i + (i & (~i + 1));
      if (parent < tree_.size()) tree_[parent] += tree_[i];
    }
  }

 private:
  std::vector<std::int32_t> tree_;
};

}  // namespace permrd::detail
