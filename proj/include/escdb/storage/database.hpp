#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "escdb/storage/table.hpp"

namespace escdb {

struct TempTableHandle {
  std::uint64_t id = 0;
  Schema schema;
  std::size_t row_count = 0;
};

/// Registry of base tables and optimizer-created temporary tables. Temporary
/// tables live in their own id space and can never shadow a base table name.
class Database {
 public:
  ColumnTable& create_table(const std::string& name, const Schema& schema);
  /// Registers a fully built table (generators, CSV loader).
  void add_table(std::shared_ptr<ColumnTable> table);
  void drop_table(std::string_view name);

  bool has_table(std::string_view name) const;
  const ColumnTable& table(std::string_view name) const;
  std::shared_ptr<const ColumnTable> table_ptr(std::string_view name) const;
  ColumnTable& mutable_table(std::string_view name);
  std::vector<std::string> table_names() const;

  TempTableHandle materialize_temp(const Schema& schema, std::vector<Column> columns);
  void drop_temp(const TempTableHandle& handle);
  std::shared_ptr<const ColumnTable> temp(const TempTableHandle& handle) const;
  bool is_live(const TempTableHandle& handle) const { return temps_.contains(handle.id); }
  std::size_t live_temp_count() const { return temps_.size(); }

 private:
  std::map<std::string, std::shared_ptr<ColumnTable>, std::less<>> tables_;
  std::map<std::uint64_t, std::shared_ptr<ColumnTable>> temps_;
  std::uint64_t next_temp_id_ = 1;
};

/// Drops its temp table when it goes out of scope.
class TempTableLease {
 public:
  TempTableLease(Database& db, TempTableHandle handle) : db_(&db), handle_(std::move(handle)) {}
  TempTableLease(TempTableLease&& other) noexcept : db_(other.db_), handle_(std::move(other.handle_)) { other.db_ = nullptr; }
  TempTableLease& operator=(TempTableLease&& other) noexcept;
  TempTableLease(const TempTableLease&) = delete;
  TempTableLease& operator=(const TempTableLease&) = delete;
  ~TempTableLease() { release(); }

  const TempTableHandle& handle() const { return handle_; }
  void release() noexcept;

 private:
  Database* db_;
  TempTableHandle handle_;
};

}  // namespace escdb
