#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace escdb {

/// Open-addressing hash index from a 64-bit key to the build rows carrying
/// it. Each distinct key owns one slot; rows sharing a key are chained in
/// ascending row order so probing is deterministic.
class JoinHashTable {
 public:
  static constexpr std::uint32_t kEnd = UINT32_MAX;

  /// `keys[i]` is the key of `rows[i]`; rows whose key is NULL must not be passed.
  JoinHashTable(std::span<const std::uint32_t> rows, std::span<const std::int64_t> keys);

  /// Position of the first entry with `key`, or kEnd.
  std::uint32_t find(std::int64_t key) const {
    if (mask_ == 0) return kEnd;
    for (std::size_t slot = hash(key) & mask_;; slot = (slot + 1) & mask_) {
      const auto head = heads_[slot];
      if (head == kEnd) return kEnd;
      if (keys_[head] == key) return head;
    }
  }
  std::uint32_t next(std::uint32_t entry) const { return next_[entry]; }
  std::uint32_t row(std::uint32_t entry) const { return rows_[entry]; }

  std::size_t size() const { return rows_.size(); }
  std::size_t distinct_keys() const { return distinct_; }

  static std::uint64_t hash(std::int64_t key) {
    auto x = static_cast<std::uint64_t>(key);
    x ^= x >> 33;
    x *= 0xff51afd7ed558ccdULL;
    x ^= x >> 33;
    x *= 0xc4ceb9fe1a85ec53ULL;
    x ^= x >> 33;
    return x;
  }

 private:
  std::vector<std::uint32_t> rows_;
  std::vector<std::int64_t> keys_;
  std::vector<std::uint32_t> next_;
  std::vector<std::uint32_t> heads_;
  std::size_t mask_ = 0;
  std::size_t distinct_ = 0;
};

}  // namespace escdb
