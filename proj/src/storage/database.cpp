#include "escdb/storage/database.hpp"

#include <fmt/format.h>

#include "escdb/error.hpp"

namespace escdb {

ColumnTable& Database::create_table(const std::string& name, const Schema& schema) {
  if (tables_.contains(name)) throw Error(ErrorCode::DuplicateTable, fmt::format("table '{}' already exists", name));
  auto table = std::make_shared<ColumnTable>(name, schema);
  auto& ref = *table;
  tables_.emplace(name, std::move(table));
  return ref;
}

void Database::add_table(std::shared_ptr<ColumnTable> table) {
  const auto& name = table->name();
  if (tables_.contains(name)) throw Error(ErrorCode::DuplicateTable, fmt::format("table '{}' already exists", name));
  tables_.emplace(name, std::move(table));
}

void Database::drop_table(std::string_view name) {
  auto it = tables_.find(name);
  if (it == tables_.end()) throw Error(ErrorCode::UnknownTable, fmt::format("no table '{}'", name));
  tables_.erase(it);
}

bool Database::has_table(std::string_view name) const { return tables_.find(name) != tables_.end(); }

const ColumnTable& Database::table(std::string_view name) const { return *table_ptr(name); }

std::shared_ptr<const ColumnTable> Database::table_ptr(std::string_view name) const {
  auto it = tables_.find(name);
  if (it == tables_.end()) throw Error(ErrorCode::UnknownTable, fmt::format("no table '{}'", name));
  return it->second;
}

ColumnTable& Database::mutable_table(std::string_view name) {
  auto it = tables_.find(name);
  if (it == tables_.end()) throw Error(ErrorCode::UnknownTable, fmt::format("no table '{}'", name));
  return *it->second;
}

std::vector<std::string> Database::table_names() const {
  std::vector<std::string> names;
  for (const auto& [name, _] : tables_) names.push_back(name);
  return names;
}

TempTableHandle Database::materialize_temp(const Schema& schema, std::vector<Column> columns) {
  if (schema.size() != columns.size()) {
    throw Error(ErrorCode::ArityMismatch,
                fmt::format("temp schema has {} columns, {} vectors supplied", schema.size(), columns.size()));
  }
  for (std::size_t i = 0; i < schema.size(); ++i) {
    if (schema[i].name != columns[i].name() || schema[i].type != columns[i].type()) {
      throw Error(ErrorCode::TypeMismatch, fmt::format("temp column {} does not match schema entry '{}'", i, schema[i].name));
    }
  }
  const auto id = next_temp_id_++;
  auto table = std::make_shared<ColumnTable>(fmt::format("temp#{}", id), std::move(columns), true);
  TempTableHandle handle{id, schema, table->row_count()};
  temps_.emplace(id, std::move(table));
  return handle;
}

void Database::drop_temp(const TempTableHandle& handle) {
  if (temps_.erase(handle.id) == 0) throw Error(ErrorCode::DeadHandle, fmt::format("temp table {} is not live", handle.id));
}

std::shared_ptr<const ColumnTable> Database::temp(const TempTableHandle& handle) const {
  auto it = temps_.find(handle.id);
  if (it == temps_.end()) throw Error(ErrorCode::DeadHandle, fmt::format("temp table {} is not live", handle.id));
  return it->second;
}

TempTableLease& TempTableLease::operator=(TempTableLease&& other) noexcept {
  if (this != &other) {
    release();
    db_ = other.db_;
    handle_ = std::move(other.handle_);
    other.db_ = nullptr;
  }
  return *this;
}

void TempTableLease::release() noexcept {
  if (db_ != nullptr && db_->is_live(handle_)) db_->drop_temp(handle_);
  db_ = nullptr;
}

}  // namespace escdb
