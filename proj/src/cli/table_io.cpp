#include "maxent/cli/table_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "maxent/errors.hpp"

namespace maxent::cli {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

long long parse_integer(std::string_view field, std::size_t line, const char* what) {
  long long v = 0;
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, v);
  if (ec != std::errc() || ptr != end || field.empty()) {
    throw ParseError(line, std::string("invalid ") + what + " '" + std::string(field) + "'");
  }
  return v;
}

}  // namespace

StratifiedTable parse_table(std::istream& in) {
  std::string raw;
  std::size_t line_no = 0;
  bool header_seen = false;
  std::vector<std::string> order;
  std::map<std::string, CellCounts> cells;

  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.remove_prefix(3);
    line = trim(line);
    if (line.empty()) continue;
    const auto fields = split(line);
    if (!header_seen) {
      if (fields.size() != 4 || fields[0] != "category" || fields[1] != "exposure" ||
          fields[2] != "outcome" || fields[3] != "count") {
        throw ParseError(line_no, "expected header 'category,exposure,outcome,count'");
      }
      header_seen = true;
      continue;
    }
    if (fields.size() != 4) {
      throw ParseError(line_no, "expected 4 fields, found " + std::to_string(fields.size()));
    }
    if (fields[0].empty()) throw ValidationError(line_no, "empty category label");
    const long long e = parse_integer(fields[1], line_no, "exposure");
    const long long d = parse_integer(fields[2], line_no, "outcome");
    const long long n = parse_integer(fields[3], line_no, "count");
    if ((e != 0 && e != 1) || (d != 0 && d != 1)) {
      throw ValidationError(line_no, "exposure and outcome must be 0 or 1");
    }
    if (n < 0) throw ValidationError(line_no, "negative count");

    const std::string label(fields[0]);
    auto [it, inserted] = cells.try_emplace(label);
    if (inserted) order.push_back(label);
    auto& c = it->second;
    const auto add = static_cast<std::uint64_t>(n);
    if (e == 0 && d == 1) c.n01 += add;
    if (e == 1 && d == 1) c.n11 += add;
    if (e == 0 && d == 0) c.n00 += add;
    if (e == 1 && d == 0) c.n10 += add;
  }
  if (!header_seen) throw ParseError(0, "empty input");
  if (order.empty()) throw ParseError(0, "no data rows");

  std::vector<Category> categories;
  for (const auto& label : order) categories.push_back({label, cells.at(label)});
  return StratifiedTable(std::move(categories));
}

StratifiedTable load_table(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  return parse_table(in);
}

void cross_check_totals(const StratifiedTable& stratified, const StratifiedTable& marginal) {
  if (marginal.size() != 1) throw DomainError("marginal table must have a single category");
  if (!(stratified.pooled() == marginal.pooled())) {
    throw DomainError("stratified table does not pool to the marginal table");
  }
}

StratifiedTable resample_table(const StratifiedTable& table, std::mt19937_64& rng) {
  // Cells laid out as category-major (01, 11, 00, 10); cumulative bounds.
  std::vector<std::uint64_t> upper;
  for (const auto& cat : table.categories()) {
    for (auto k : cat.counts.as_array()) upper.push_back((upper.empty() ? 0 : upper.back()) + k);
  }
  const std::uint64_t n = table.total();
  std::vector<std::uint64_t> drawn(upper.size(), 0);
  std::uniform_int_distribution<std::uint64_t> pick(0, n - 1);
  for (std::uint64_t i = 0; i < n; ++i) {
    const std::uint64_t u = pick(rng);
    const auto cell = std::upper_bound(upper.begin(), upper.end(), u) - upper.begin();
    ++drawn[static_cast<std::size_t>(cell)];
  }
  std::vector<Category> out;
  for (std::size_t c = 0; c < table.size(); ++c) {
    CellCounts k{drawn[4 * c], drawn[4 * c + 1], drawn[4 * c + 2], drawn[4 * c + 3]};
    if (k.total() > 0) out.push_back({table[c].label, k});
  }
  return StratifiedTable(std::move(out));
}

}  // namespace maxent::cli
