#pragma once

#include <functional>
#include <map>
#include <span>
#include <string>
#include <string_view>

namespace escdb {

/// Pure scalar function over numeric arguments. DECIMAL arguments arrive
/// unscaled to their real value, DATE arguments as day numbers.
using ScalarFunction = std::function<double(std::span<const double>)>;

struct UdfInfo {
  std::string name;
  std::size_t arity = 0;
  ScalarFunction fn;
};

/// Names are case-insensitive.
class UdfRegistry {
 public:
  void register_udf(std::string_view name, std::size_t arity, ScalarFunction fn);
  const UdfInfo* find(std::string_view name) const;
  const UdfInfo& get(std::string_view name) const;

 private:
  std::map<std::string, UdfInfo, std::less<>> functions_;
};

}  // namespace escdb
