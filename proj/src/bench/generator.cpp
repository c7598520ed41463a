#include "escdb/bench/generator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include <fmt/format.h>

#include "escdb/error.hpp"
#include "escdb/storage/csv.hpp"

namespace escdb::bench {

namespace {

class Rng {
 public:
  Rng(std::uint64_t seed, std::uint64_t stream) : engine_(mix(seed) ^ mix(stream + 0x9e3779b97f4a7c15ULL)) {}

  /// Uniform integer in [lo, hi]. Modulo keeps the sequence identical across
  /// standard libraries, unlike the distribution classes.
  std::int64_t range(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(engine_() % static_cast<std::uint64_t>(hi - lo + 1));
  }
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  static std::uint64_t mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }
  std::mt19937_64 engine_;
};

/// Keys 1..n with P(k) proportional to 1 / k^exponent (uniform at exponent 0).
class KeySampler {
 public:
  KeySampler(std::size_t n, double exponent) : n_(n) {
    if (exponent <= 0) return;
    cdf_.resize(n);
    double total = 0;
    for (std::size_t k = 0; k < n; ++k) cdf_[k] = total += 1.0 / std::pow(static_cast<double>(k + 1), exponent);
    for (auto& c : cdf_) c /= total;
  }
  std::int64_t operator()(Rng& rng) const {
    if (cdf_.empty()) return rng.range(1, static_cast<std::int64_t>(n_));
    const auto it = std::lower_bound(cdf_.begin(), cdf_.end(), rng.unit());
    return static_cast<std::int64_t>(std::min<std::size_t>(static_cast<std::size_t>(it - cdf_.begin()), n_ - 1)) + 1;
  }

 private:
  std::size_t n_;
  std::vector<double> cdf_;
};

struct TableBuilder {
  std::string name;
  std::vector<Column> columns;

  TableBuilder(std::string table, const Schema& schema) : name(std::move(table)) {
    for (const auto& def : schema) columns.emplace_back(def.name, def.type);
  }
  void reserve(std::size_t rows) {
    for (auto& c : columns) c.reserve(rows);
  }
  void put(std::size_t column, std::int64_t value) { columns[column].push_back(value); }
  void put_text(std::size_t column, std::string_view value) {
    columns[column].push_back(columns[column].dictionary()->encode(value));
  }
  std::shared_ptr<ColumnTable> finish() { return std::make_shared<ColumnTable>(name, std::move(columns)); }
};

std::int64_t cents(double dollars) { return std::llround(dollars * 100); }

const std::int32_t kStartDate = date_from_ymd(1992, 1, 1);
const std::int32_t kLastOrderDate = date_from_ymd(1998, 8, 2);
const std::int32_t kCurrentDate = date_from_ymd(1995, 6, 17);

const std::array<std::string_view, 5> kPriorities{"1-URGENT", "2-HIGH", "3-MEDIUM", "4-NOT SPECIFIED", "5-LOW"};
const std::array<std::string_view, 5> kRegions{"AFRICA", "AMERICA", "ASIA", "EUROPE", "MIDDLE EAST"};
// Five nations per region, in region order.
const std::array<std::string_view, 25> kNations{
    "ALGERIA", "ETHIOPIA",  "KENYA",     "MOROCCO", "MOZAMBIQUE",     "ARGENTINA", "BRAZIL", "CANADA",  "PERU",
    "UNITED STATES", "CHINA", "INDIA", "INDONESIA", "JAPAN", "VIETNAM", "FRANCE", "GERMANY", "ROMANIA", "RUSSIA",
    "UNITED KINGDOM", "EGYPT", "IRAN", "IRAQ", "JORDAN", "SAUDI ARABIA"};
const std::array<std::string_view, 7> kContainers{"SM CASE", "SM BOX", "MED BAG", "MED BOX", "LG CASE", "LG BOX", "JUMBO PKG"};
const std::array<std::string_view, 6> kTypes{"STANDARD", "SMALL", "MEDIUM", "LARGE", "ECONOMY", "PROMO"};
const std::array<std::string_view, 5> kSegments{"AUTOMOBILE", "BUILDING", "FURNITURE", "HOUSEHOLD", "MACHINERY"};

std::string city_of(std::string_view nation, std::int64_t digit) {
  std::string prefix(nation.substr(0, 9));
  prefix.resize(9, ' ');
  return prefix + std::to_string(digit);
}

std::vector<std::shared_ptr<ColumnTable>> generate_tpch(const GenSpec& spec) {
  const auto orders_n = scaled_rows(1'500'000, spec.scale, "orders");
  const auto part_n = scaled_rows(200'000, spec.scale, "part");
  const auto supplier_n = scaled_rows(10'000, spec.scale, "supplier");
  const auto customer_n = scaled_rows(150'000, spec.scale, "customer");

  // part
  Rng prng(spec.seed, 1);
  TableBuilder part("part", {{"p_partkey", ColumnType::int64()},
                             {"p_brand", ColumnType::text()},
                             {"p_type", ColumnType::text()},
                             {"p_size", ColumnType::int64()},
                             {"p_container", ColumnType::text()},
                             {"p_retailprice", ColumnType::decimal(15, 2)}});
  part.reserve(part_n);
  std::vector<std::int64_t> part_price(part_n + 1);
  for (std::size_t k = 1; k <= part_n; ++k) {
    const auto size = prng.range(1, 50);
    const auto price = spec.correlated ? cents(900 + 20.0 * static_cast<double>(size)) + prng.range(0, 10'000)
                                       : prng.range(90'000, 200'000);
    part_price[k] = price;
    part.put(0, static_cast<std::int64_t>(k));
    part.put_text(1, fmt::format("Brand#{}{}", prng.range(1, 5), prng.range(1, 5)));
    part.put_text(2, kTypes[static_cast<std::size_t>(prng.range(0, kTypes.size() - 1))]);
    part.put(3, size);
    part.put_text(4, kContainers[static_cast<std::size_t>(prng.range(0, kContainers.size() - 1))]);
    part.put(5, price);
  }

  // supplier
  Rng srng(spec.seed, 2);
  TableBuilder supplier("supplier", {{"s_suppkey", ColumnType::int64()},
                                     {"s_name", ColumnType::text()},
                                     {"s_nationkey", ColumnType::int64()},
                                     {"s_acctbal", ColumnType::decimal(15, 2)}});
  supplier.reserve(supplier_n);
  for (std::size_t k = 1; k <= supplier_n; ++k) {
    const auto nation = srng.range(0, 24);
    const auto balance = spec.correlated ? -99'999 + nation * 40'000 + srng.range(0, 100'000) : srng.range(-99'999, 999'999);
    supplier.put(0, static_cast<std::int64_t>(k));
    supplier.put_text(1, fmt::format("Supplier#{:09}", k));
    supplier.put(2, nation);
    supplier.put(3, balance);
  }

  // orders and lineitem
  Rng orng(spec.seed, 3);
  Rng lrng(spec.seed, 4);
  const KeySampler part_keys(part_n, spec.fk_zipf);
  const KeySampler supp_keys(supplier_n, spec.fk_zipf);
  const KeySampler cust_keys(customer_n, 0);
  TableBuilder orders("orders", {{"o_orderkey", ColumnType::int64()},
                                 {"o_custkey", ColumnType::int64()},
                                 {"o_orderstatus", ColumnType::text()},
                                 {"o_totalprice", ColumnType::decimal(15, 2)},
                                 {"o_orderdate", ColumnType::date()},
                                 {"o_orderpriority", ColumnType::text()}});
  TableBuilder lineitem("lineitem", {{"l_orderkey", ColumnType::int64()},
                                     {"l_partkey", ColumnType::int64()},
                                     {"l_suppkey", ColumnType::int64()},
                                     {"l_linenumber", ColumnType::int64()},
                                     {"l_quantity", ColumnType::decimal(15, 2)},
                                     {"l_extendedprice", ColumnType::decimal(15, 2)},
                                     {"l_discount", ColumnType::decimal(15, 2)},
                                     {"l_tax", ColumnType::decimal(15, 2)},
                                     {"l_returnflag", ColumnType::text()},
                                     {"l_linestatus", ColumnType::text()},
                                     {"l_shipdate", ColumnType::date()},
                                     {"l_receiptdate", ColumnType::date()}});
  orders.reserve(orders_n);
  lineitem.reserve(orders_n * 4);
  const auto date_span = kLastOrderDate - kStartDate;
  for (std::size_t k = 1; k <= orders_n; ++k) {
    const auto offset = orng.range(0, date_span);
    const auto order_date = kStartDate + static_cast<std::int32_t>(offset);
    const auto price = spec.correlated ? cents(1000 + 150.0 * static_cast<double>(offset)) + orng.range(0, 3'000'000)
                                       : orng.range(100'000, 39'100'000);
    const auto lines = lrng.range(1, 7);
    std::size_t shipped = 0;
    for (std::int64_t line = 1; line <= lines; ++line) {
      const auto partkey = part_keys(lrng);
      const auto quantity = lrng.range(1, 50);
      const auto ship = order_date + static_cast<std::int32_t>(lrng.range(1, 121));
      const auto receipt = ship + static_cast<std::int32_t>(lrng.range(1, 30));
      lineitem.put(0, static_cast<std::int64_t>(k));
      lineitem.put(1, partkey);
      lineitem.put(2, supp_keys(lrng));
      lineitem.put(3, line);
      lineitem.put(4, quantity * 100);
      lineitem.put(5, quantity * part_price[static_cast<std::size_t>(partkey)]);
      lineitem.put(6, lrng.range(0, 10));
      lineitem.put(7, lrng.range(0, 8));
      lineitem.put_text(8, receipt <= kCurrentDate ? (lrng.range(0, 1) == 0 ? "R" : "A") : "N");
      lineitem.put_text(9, ship > kCurrentDate ? "O" : "F");
      lineitem.put(10, ship);
      lineitem.put(11, receipt);
      shipped += ship <= kCurrentDate ? 1 : 0;
    }
    const char* status = shipped == static_cast<std::size_t>(lines) ? "F" : (shipped == 0 ? "O" : "P");
    orders.put(0, static_cast<std::int64_t>(k));
    orders.put(1, cust_keys(orng));
    orders.put_text(2, status);
    orders.put(3, price);
    orders.put(4, order_date);
    orders.put_text(5, kPriorities[static_cast<std::size_t>(orng.range(0, kPriorities.size() - 1))]);
  }
  return {lineitem.finish(), orders.finish(), part.finish(), supplier.finish()};
}

std::vector<std::shared_ptr<ColumnTable>> generate_ssb(const GenSpec& spec) {
  const auto lineorder_orders = scaled_rows(1'500'000, spec.scale, "lineorder");
  const auto customer_n = scaled_rows(30'000, spec.scale, "customer");
  const auto supplier_n = scaled_rows(2'000, spec.scale, "supplier");
  const auto part_n = scaled_rows(200'000, spec.scale, "part");

  // Month-granular date dimension: one row per month of 1992..1998.
  TableBuilder date("dwdate", {{"d_datekey", ColumnType::date()},
                             {"d_year", ColumnType::int64()},
                             {"d_month", ColumnType::int64()},
                             {"d_yearmonthnum", ColumnType::int64()},
                             {"d_yearmonth", ColumnType::text()}});
  static const std::array<std::string_view, 12> kMonths{"Jan", "Feb", "Mar", "Apr", "May", "Jun",
                                                        "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"};
  std::vector<std::int32_t> months;
  for (int year = 1992; year <= 1998; ++year) {
    for (unsigned month = 1; month <= 12; ++month) {
      const auto key = date_from_ymd(year, month, 1);
      months.push_back(key);
      date.put(0, key);
      date.put(1, year);
      date.put(2, month);
      date.put(3, year * 100 + month);
      date.put_text(4, fmt::format("{}{}", kMonths[month - 1], year));
    }
  }

  const auto geography = [](TableBuilder& t, Rng& rng, std::size_t first_column) {
    const auto nation = static_cast<std::size_t>(rng.range(0, 24));
    t.put_text(first_column, city_of(kNations[nation], rng.range(0, 9)));
    t.put_text(first_column + 1, kNations[nation]);
    t.put_text(first_column + 2, kRegions[nation / 5]);
  };

  Rng crng(spec.seed, 11);
  TableBuilder customer("customer", {{"c_custkey", ColumnType::int64()},
                                     {"c_city", ColumnType::text()},
                                     {"c_nation", ColumnType::text()},
                                     {"c_region", ColumnType::text()},
                                     {"c_mktsegment", ColumnType::text()}});
  for (std::size_t k = 1; k <= customer_n; ++k) {
    customer.put(0, static_cast<std::int64_t>(k));
    geography(customer, crng, 1);
    customer.put_text(4, kSegments[static_cast<std::size_t>(crng.range(0, kSegments.size() - 1))]);
  }

  Rng srng(spec.seed, 12);
  TableBuilder supplier("supplier", {{"s_suppkey", ColumnType::int64()},
                                     {"s_city", ColumnType::text()},
                                     {"s_nation", ColumnType::text()},
                                     {"s_region", ColumnType::text()}});
  for (std::size_t k = 1; k <= supplier_n; ++k) {
    supplier.put(0, static_cast<std::int64_t>(k));
    geography(supplier, srng, 1);
  }

  Rng prng(spec.seed, 13);
  TableBuilder part("part", {{"p_partkey", ColumnType::int64()},
                             {"p_mfgr", ColumnType::text()},
                             {"p_category", ColumnType::text()},
                             {"p_brand1", ColumnType::text()},
                             {"p_size", ColumnType::int64()}});
  for (std::size_t k = 1; k <= part_n; ++k) {
    const auto mfgr = prng.range(1, 5);
    const auto category = prng.range(1, 5);
    part.put(0, static_cast<std::int64_t>(k));
    part.put_text(1, fmt::format("MFGR#{}", mfgr));
    part.put_text(2, fmt::format("MFGR#{}{}", mfgr, category));
    part.put_text(3, fmt::format("MFGR#{}{}{:02}", mfgr, category, prng.range(1, 40)));
    part.put(4, prng.range(1, 50));
  }

  Rng lrng(spec.seed, 14);
  const KeySampler part_keys(part_n, spec.fk_zipf);
  const KeySampler supp_keys(supplier_n, spec.fk_zipf);
  const KeySampler cust_keys(customer_n, 0);
  TableBuilder lineorder("lineorder", {{"lo_orderkey", ColumnType::int64()},
                                       {"lo_linenumber", ColumnType::int64()},
                                       {"lo_custkey", ColumnType::int64()},
                                       {"lo_partkey", ColumnType::int64()},
                                       {"lo_suppkey", ColumnType::int64()},
                                       {"lo_orderdate", ColumnType::date()},
                                       {"lo_quantity", ColumnType::int64()},
                                       {"lo_extendedprice", ColumnType::decimal(15, 2)},
                                       {"lo_discount", ColumnType::int64()},
                                       {"lo_revenue", ColumnType::decimal(15, 2)}});
  lineorder.reserve(lineorder_orders * 4);
  for (std::size_t k = 1; k <= lineorder_orders; ++k) {
    const auto lines = lrng.range(1, 7);
    const auto customer_key = cust_keys(lrng);
    const auto month = months[static_cast<std::size_t>(lrng.range(0, static_cast<std::int64_t>(months.size()) - 1))];
    for (std::int64_t line = 1; line <= lines; ++line) {
      const auto quantity = lrng.range(1, 50);
      const auto price = quantity * lrng.range(90'000, 200'000);
      const auto discount = lrng.range(0, 10);
      lineorder.put(0, static_cast<std::int64_t>(k));
      lineorder.put(1, line);
      lineorder.put(2, customer_key);
      lineorder.put(3, part_keys(lrng));
      lineorder.put(4, supp_keys(lrng));
      lineorder.put(5, month);
      lineorder.put(6, quantity);
      lineorder.put(7, price);
      lineorder.put(8, discount);
      lineorder.put(9, price * (100 - discount) / 100);
    }
  }
  return {lineorder.finish(), date.finish(), customer.finish(), supplier.finish(), part.finish()};
}

}  // namespace

std::string_view benchmark_name(Benchmark b) {
  switch (b) {
    case Benchmark::TpchSubset: return "tpch";
    case Benchmark::SsbSubset: return "ssb";
    case Benchmark::Custom: return "custom";
  }
  return "custom";
}

Benchmark parse_benchmark(std::string_view text) {
  if (text == "tpch" || text == "tpch_subset") return Benchmark::TpchSubset;
  if (text == "ssb" || text == "ssb_subset") return Benchmark::SsbSubset;
  if (text == "custom") return Benchmark::Custom;
  throw Error(ErrorCode::UsageError, fmt::format("unknown benchmark '{}' (expected tpch or ssb)", text));
}

std::size_t scaled_rows(double base_rows, double scale, std::string_view table) {
  if (!(scale > 0)) throw Error(ErrorCode::ScaleTooSmall, fmt::format("scale must be positive, got {}", scale));
  const auto rows = std::llround(base_rows * scale);
  if (rows < 1) {
    throw Error(ErrorCode::ScaleTooSmall, fmt::format("scale {} leaves table '{}' without rows", scale, table));
  }
  return static_cast<std::size_t>(rows);
}

std::vector<std::shared_ptr<ColumnTable>> generate(const GenSpec& spec) {
  switch (spec.benchmark) {
    case Benchmark::TpchSubset: return generate_tpch(spec);
    case Benchmark::SsbSubset: return generate_ssb(spec);
    case Benchmark::Custom: break;
  }
  throw Error(ErrorCode::UsageError, "custom data sets are loaded from CSV, not generated");
}

void register_bench_functions(UdfRegistry& udfs) {
  if (udfs.find("price_per_day") != nullptr) return;
  const double epoch = date_from_ymd(1991, 12, 31);
  udfs.register_udf("price_per_day", 2, [epoch](std::span<const double> args) { return args[0] / (args[1] - epoch); });
}

void load_benchmark(Catalog& catalog, const GenSpec& spec) {
  for (auto& table : generate(spec)) catalog.database().add_table(std::move(table));
  register_bench_functions(catalog.udfs());
}

std::vector<std::string> write_benchmark_csv(const GenSpec& spec, const std::string& dir) {
  std::filesystem::create_directories(dir);
  std::vector<std::string> paths;
  for (const auto& table : generate(spec)) {
    const auto path = (std::filesystem::path(dir) / (table->name() + ".csv")).string();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoError, fmt::format("cannot write '{}'", path));
    write_csv(out, *table, {.header = true});
    paths.push_back(path);
  }
  return paths;
}

}  // namespace escdb::bench
