#pragma once

#include <filesystem>
#include <iosfwd>
#include <random>

#include "maxent/model.hpp"

namespace maxent::cli {

/// Reads CSV with header `category,exposure,outcome,count`. Rows with the same
/// (category, exposure, outcome) are summed; categories keep first-appearance
/// order and missing cells are zero. LF and CRLF line endings are accepted.
/// Throws ParseError (malformed row, with line number), ValidationError
/// (negative count) or DomainError (no rows, empty category).
StratifiedTable parse_table(std::istream& in);

/// parse_table on a file; IoError if it cannot be opened.
StratifiedTable load_table(const std::filesystem::path& path);

/// Throws DomainError unless `stratified` pools to exactly the counts of
/// `marginal` (a single-category table).
void cross_check_totals(const StratifiedTable& stratified, const StratifiedTable& marginal);

/// Draws N individuals with replacement from the table's (category, e, d)
/// microdata. Categories that receive no draws are dropped.
StratifiedTable resample_table(const StratifiedTable& table, std::mt19937_64& rng);

}  // namespace maxent::cli
