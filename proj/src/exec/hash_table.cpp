#include "escdb/exec/hash_table.hpp"

#include <bit>

#include "escdb/error.hpp"

namespace escdb {

JoinHashTable::JoinHashTable(std::span<const std::uint32_t> rows, std::span<const std::int64_t> keys)
    : rows_(rows.begin(), rows.end()), keys_(keys.begin(), keys.end()), next_(rows.size(), kEnd) {
  if (rows.size() != keys.size()) throw Error(ErrorCode::LengthMismatch, "hash table rows and keys differ in length");
  if (rows.empty()) return;
  if (rows.size() >= kEnd) throw Error(ErrorCode::ExecutionError, "build side too large for the hash table");

  // Load factor stays at or below 0.7 even if every key is distinct.
  const auto capacity = std::bit_ceil(static_cast<std::size_t>(static_cast<double>(rows.size()) / 0.7) + 1);
  heads_.assign(capacity, kEnd);
  mask_ = capacity - 1;

  // Inserting back to front leaves each chain in ascending entry order.
  for (auto e = static_cast<std::uint32_t>(rows.size()); e-- > 0;) {
    const auto key = keys_[e];
    auto slot = hash(key) & mask_;
    while (heads_[slot] != kEnd && keys_[heads_[slot]] != key) slot = (slot + 1) & mask_;
    if (heads_[slot] == kEnd) ++distinct_;
    next_[e] = heads_[slot];
    heads_[slot] = e;
  }
}

}  // namespace escdb
