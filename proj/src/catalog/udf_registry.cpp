#include "escdb/catalog/udf_registry.hpp"

#include <algorithm>
#include <cctype>

#include <fmt/format.h>

#include "escdb/error.hpp"

namespace escdb {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

}  // namespace

void UdfRegistry::register_udf(std::string_view name, std::size_t arity, ScalarFunction fn) {
  auto key = lower(name);
  if (functions_.contains(key)) throw Error(ErrorCode::DuplicateFunction, fmt::format("function '{}' already registered", name));
  functions_.emplace(key, UdfInfo{key, arity, std::move(fn)});
}

const UdfInfo* UdfRegistry::find(std::string_view name) const {
  auto it = functions_.find(lower(name));
  return it == functions_.end() ? nullptr : &it->second;
}

const UdfInfo& UdfRegistry::get(std::string_view name) const {
  if (const auto* info = find(name)) return *info;
  throw Error(ErrorCode::UnknownFunction, fmt::format("function '{}' is not registered", name));
}

}  // namespace escdb
