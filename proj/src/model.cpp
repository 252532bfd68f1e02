#include "maxent/model.hpp"

#include <cmath>
#include <limits>
#include <numeric>

#include "maxent/errors.hpp"

namespace maxent {

StratifiedTable::StratifiedTable(std::vector<Category> categories)
    : categories_(std::move(categories)) {
  if (categories_.empty()) throw DomainError("table has no categories");
  for (const auto& c : categories_) {
    if (c.counts.total() == 0) throw DomainError("category '" + c.label + "' is empty");
  }
}

std::uint64_t StratifiedTable::total() const {
  std::uint64_t n = 0;
  for (const auto& c : categories_) n += c.counts.total();
  return n;
}

CellCounts StratifiedTable::pooled() const {
  CellCounts out;
  for (const auto& c : categories_) {
    out.n01 += c.counts.n01;
    out.n11 += c.counts.n11;
    out.n00 += c.counts.n00;
    out.n10 += c.counts.n10;
  }
  return out;
}

StratifiedTable StratifiedTable::with_exposure_swapped() const {
  std::vector<Category> out = categories_;
  for (auto& c : out) {
    const CellCounts k = c.counts;
    c.counts = {k.n11, k.n01, k.n10, k.n00};
  }
  return StratifiedTable(std::move(out));
}

StratifiedTable StratifiedTable::haldane_smoothed() const {
  std::vector<Category> out = categories_;
  for (auto& c : out) {
    auto& k = c.counts;
    k = {2 * k.n01 + 1, 2 * k.n11 + 1, 2 * k.n00 + 1, 2 * k.n10 + 1};
  }
  return StratifiedTable(std::move(out));
}

double neg_x_log_x(double x) { return x > 0.0 ? -x * std::log(x) : 0.0; }

double shannon(std::span<const double> masses) {
  double h = 0.0;
  for (double q : masses) h += neg_x_log_x(q);
  return h;
}

JointOutcomeProbs outcome_masses(const Triple& t) {
  return {(1.0 - t.pi) * t.r0, t.pi * t.r1, (1.0 - t.pi) * (1.0 - t.r0), t.pi * (1.0 - t.r1)};
}

namespace {
bool in_unit(double x) { return x >= 0.0 && x <= 1.0; }
}  // namespace

double entropy(const Triple& t) {
  if (!in_unit(t.pi) || !in_unit(t.r0) || !in_unit(t.r1)) {
    throw DomainError("entropy: triple component outside [0,1]");
  }
  const auto q = outcome_masses(t);
  return neg_x_log_x(q.p01) + neg_x_log_x(q.p11) + neg_x_log_x(q.p00) + neg_x_log_x(q.p10);
}

double expected_risk(const Triple& t) { return t.pi * t.r1 + (1.0 - t.pi) * t.r0; }

Triple swap_exposure(const Triple& t) { return {1.0 - t.pi, t.r1, t.r0}; }

double tjur_r2(std::span<const FittedOutcome> data) {
  double sum1 = 0.0, sum0 = 0.0;
  std::size_t n1 = 0, n0 = 0;
  for (const auto& p : data) {
    if (p.observed) {
      sum1 += p.fitted;
      ++n1;
    } else {
      sum0 += p.fitted;
      ++n0;
    }
  }
  if (n1 == 0 || n0 == 0) {
    throw UndefinedStatisticError("tjur_r2 needs at least one success and one failure");
  }
  return sum1 / static_cast<double>(n1) - sum0 / static_cast<double>(n0);
}

JointOutcomeProbs joint_probs(const StratifiedTable& table, std::optional<std::size_t> category) {
  CellCounts k;
  if (category) {
    if (*category >= table.size()) throw DomainError("category index out of range");
    k = table[*category].counts;
  } else {
    k = table.pooled();
  }
  const double n = static_cast<double>(k.total());
  if (n == 0.0) throw DomainError("empty category");
  return {static_cast<double>(k.n01) / n, static_cast<double>(k.n11) / n,
          static_cast<double>(k.n00) / n, static_cast<double>(k.n10) / n};
}

double odds_ratio(const CellCounts& c) {
  const double den = static_cast<double>(c.n01) * static_cast<double>(c.n10);
  const double num = static_cast<double>(c.n11) * static_cast<double>(c.n00);
  if (den == 0.0) return std::numeric_limits<double>::infinity();
  return num / den;
}

}  // namespace maxent
