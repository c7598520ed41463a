#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "escdb/storage/types.hpp"

namespace escdb {

/// Bijection between distinct strings and codes 0..size()-1, assigned in
/// insertion order.
class Dictionary {
 public:
  std::int64_t encode(std::string_view value);
  std::optional<std::int64_t> find(std::string_view value) const;
  const std::string& decode(std::int64_t code) const;
  std::size_t size() const { return strings_.size(); }

 private:
  struct Hash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const { return std::hash<std::string_view>{}(s); }
  };
  std::vector<std::string> strings_;
  std::unordered_map<std::string, std::int64_t, Hash, std::equal_to<>> codes_;
};

class Column {
 public:
  Column(std::string name, ColumnType type, std::shared_ptr<Dictionary> dictionary = nullptr);

  const std::string& name() const { return name_; }
  void rename(std::string name) { name_ = std::move(name); }
  const ColumnType& type() const { return type_; }
  std::size_t size() const { return values_.size(); }

  std::span<const std::int64_t> values() const { return values_; }
  std::int64_t value(std::size_t row) const { return values_[row]; }
  bool is_null(std::size_t row) const { return has_nulls_ && null_mask_[row] != 0; }
  bool has_nulls() const { return has_nulls_; }
  std::span<const std::uint8_t> null_mask() const { return null_mask_; }

  /// Shared with every column derived from this one (temp tables, results).
  const std::shared_ptr<Dictionary>& dictionary() const { return dictionary_; }

  void push_back(std::int64_t value);
  void push_null();
  void reserve(std::size_t rows);

  /// Copies the given rows into a new column with the same name, type and dictionary.
  Column gather(std::span<const std::uint32_t> rows) const;

  /// Human-readable rendering of one cell (decoded text, ISO date, scaled decimal).
  std::string format(std::size_t row) const;

 private:
  std::string name_;
  ColumnType type_;
  std::vector<std::int64_t> values_;
  std::vector<std::uint8_t> null_mask_;
  bool has_nulls_ = false;
  std::shared_ptr<Dictionary> dictionary_;
};

}  // namespace escdb
