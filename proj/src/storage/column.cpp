#include "escdb/storage/column.hpp"

#include "escdb/error.hpp"

namespace escdb {

std::int64_t Dictionary::encode(std::string_view value) {
  if (auto it = codes_.find(value); it != codes_.end()) return it->second;
  const auto code = static_cast<std::int64_t>(strings_.size());
  strings_.emplace_back(value);
  codes_.emplace(strings_.back(), code);
  return code;
}

std::optional<std::int64_t> Dictionary::find(std::string_view value) const {
  if (auto it = codes_.find(value); it != codes_.end()) return it->second;
  return std::nullopt;
}

const std::string& Dictionary::decode(std::int64_t code) const { return strings_.at(static_cast<std::size_t>(code)); }

Column::Column(std::string name, ColumnType type, std::shared_ptr<Dictionary> dictionary)
    : name_(std::move(name)), type_(type), dictionary_(std::move(dictionary)) {
  if (type_.id == TypeId::Text && !dictionary_) dictionary_ = std::make_shared<Dictionary>();
}

void Column::push_back(std::int64_t value) {
  values_.push_back(value);
  if (has_nulls_) null_mask_.push_back(0);
}

void Column::push_null() {
  if (!has_nulls_) {
    null_mask_.assign(values_.size(), 0);
    has_nulls_ = true;
  }
  values_.push_back(0);
  null_mask_.push_back(1);
}

void Column::reserve(std::size_t rows) { values_.reserve(rows); }

Column Column::gather(std::span<const std::uint32_t> rows) const {
  Column out(name_, type_, dictionary_);
  out.values_.resize(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) out.values_[i] = values_[rows[i]];
  if (has_nulls_) {
    out.null_mask_.resize(rows.size());
    bool any = false;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      out.null_mask_[i] = null_mask_[rows[i]];
      any = any || out.null_mask_[i] != 0;
    }
    out.has_nulls_ = any;
    if (!any) out.null_mask_.clear();
  }
  return out;
}

std::string Column::format(std::size_t row) const {
  if (is_null(row)) return "NULL";
  const auto v = values_[row];
  switch (type_.id) {
    case TypeId::Int64: return std::to_string(v);
    case TypeId::Decimal: return format_decimal(v, type_.scale);
    case TypeId::Date: return format_date(static_cast<std::int32_t>(v));
    case TypeId::Text: return dictionary_->decode(v);
  }
  return {};
}

}  // namespace escdb
