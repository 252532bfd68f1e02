#pragma once

// Core domain types of the propensity-prognosis model: the latent Bernoulli
// parameters of one individual, observed (exposure, outcome) tables, and the
// entropy / risk / Tjur R^2 functions shared by the solvers.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace maxent {

/// Latent parameters of one individual: e ~ Bernoulli(pi),
/// d(e=0) ~ Bernoulli(r0), d(e=1) ~ Bernoulli(r1).
struct Triple {
  double pi = 0.5;
  double r0 = 0.5;
  double r1 = 0.5;

  friend bool operator==(const Triple&, const Triple&) = default;
};

/// Joint masses P(e=a, d=b). Member order follows the table convention
/// used throughout: (0,1), (1,1), (0,0), (1,0).
struct JointOutcomeProbs {
  double p01 = 0.0;
  double p11 = 0.0;
  double p00 = 0.0;
  double p10 = 0.0;

  std::array<double, 4> as_array() const { return {p01, p11, p00, p10}; }
  double exposed() const { return p11 + p10; }
  double diseased() const { return p01 + p11; }
};

/// Cell counts of one 2x2 table, same order as JointOutcomeProbs.
struct CellCounts {
  std::uint64_t n01 = 0;
  std::uint64_t n11 = 0;
  std::uint64_t n00 = 0;
  std::uint64_t n10 = 0;

  std::uint64_t total() const { return n01 + n11 + n00 + n10; }
  std::array<std::uint64_t, 4> as_array() const { return {n01, n11, n00, n10}; }
  friend bool operator==(const CellCounts&, const CellCounts&) = default;
};

struct Category {
  std::string label;
  CellCounts counts;

  friend bool operator==(const Category&, const Category&) = default;
};

/// Exact integer counts of (exposure, outcome) per covariate category.
class StratifiedTable {
 public:
  /// Throws DomainError if there are no categories or any category is empty.
  explicit StratifiedTable(std::vector<Category> categories);

  std::span<const Category> categories() const { return categories_; }
  std::size_t size() const { return categories_.size(); }
  const Category& operator[](std::size_t i) const { return categories_.at(i); }

  std::uint64_t total() const;
  CellCounts pooled() const;

  /// Same table with exposure labels exchanged (e -> 1 - e).
  StratifiedTable with_exposure_swapped() const;
  /// Haldane smoothing (+0.5 per cell) kept in integer counts: every cell
  /// becomes 2n + 1, so all derived probabilities equal (n + 0.5) / (N + 2).
  StratifiedTable haldane_smoothed() const;

  friend bool operator==(const StratifiedTable&, const StratifiedTable&) = default;

 private:
  std::vector<Category> categories_;
};

/// (fitted probability, observed 0/1) pairs for Tjur's discrimination statistic.
struct FittedOutcome {
  double fitted = 0.0;
  bool observed = false;
};

/// -x log x with the 0 log 0 = 0 convention.
double neg_x_log_x(double x);

/// Shannon entropy (nats) of a finite distribution given as masses.
double shannon(std::span<const double> masses);

/// Joint outcome distribution induced by one individual's parameters.
JointOutcomeProbs outcome_masses(const Triple& t);

/// Entropy of the four joint outcomes of `t`, in nats. Components must lie in
/// [0,1]; boundary values use the 0 log 0 = 0 limit. Throws DomainError otherwise.
double entropy(const Triple& t);

/// pi * r1 + (1 - pi) * r0.
double expected_risk(const Triple& t);

/// Triple with the exposure label swapped: (1 - pi, r1, r0).
Triple swap_exposure(const Triple& t);

/// Mean fitted value among observed successes minus mean among failures.
/// Throws UndefinedStatisticError if either class is absent.
double tjur_r2(std::span<const FittedOutcome> data);

/// Counts of one category (or all categories pooled when `category` is empty)
/// divided by their own total. Throws DomainError for an out-of-range index.
JointOutcomeProbs joint_probs(const StratifiedTable& table,
                              std::optional<std::size_t> category = std::nullopt);

/// (n11 * n00) / (n01 * n10); infinite when the denominator is zero.
double odds_ratio(const CellCounts& c);

}  // namespace maxent
