#pragma once

#include <random>
#include <string>

#include "maxent/cli/table_io.hpp"
#include "maxent/model.hpp"

namespace testing {

inline std::string data_path(const std::string& name) {
  return std::string(MAXENT_DATA_DIR) + "/" + name;
}

inline const maxent::StratifiedTable& table2() {
  static const auto t = maxent::cli::load_table(data_path("table2.csv"));
  return t;
}

inline const maxent::StratifiedTable& table1() {
  static const auto t = maxent::cli::load_table(data_path("table1.csv"));
  return t;
}

/// Random table with every cell in [lo, hi].
inline maxent::StratifiedTable random_table(std::mt19937_64& rng, std::size_t categories,
                                            std::uint64_t lo = 1, std::uint64_t hi = 500) {
  std::uniform_int_distribution<std::uint64_t> count(lo, hi);
  std::vector<maxent::Category> cats;
  for (std::size_t c = 0; c < categories; ++c) {
    cats.push_back({"c" + std::to_string(c), {count(rng), count(rng), count(rng), count(rng)}});
  }
  return maxent::StratifiedTable(std::move(cats));
}

}  // namespace testing
