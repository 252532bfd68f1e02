#pragma once

// Revised primal simplex for short, extremely wide linear programs:
//
//   maximize  c.w   subject to  lo_i <= a_i.w <= hi_i  (range rows)
//                               a_i.w >= lo_i          (at-least rows)
//                               w >= 0
//
// Columns are never materialized as a matrix. The problem supplies them on
// demand, and entering variables are selected by a pricing scan over the
// whole column space. The basis is dense (rows x rows) and refactorized
// periodically.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace maxent::lp {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();
inline constexpr std::size_t kNoColumn = std::numeric_limits<std::size_t>::max();

enum class RowKind { kRange, kAtLeast };

struct RowBound {
  RowKind kind = RowKind::kRange;
  double lo = 0.0;
  double hi = 0.0;  // +inf for kAtLeast

  static RowBound range(double lo, double hi) { return {RowKind::kRange, lo, hi}; }
  static RowBound equal(double v) { return {RowKind::kRange, v, v}; }
  static RowBound at_least(double rhs) { return {RowKind::kAtLeast, rhs, kInfinity}; }
};

struct ColumnEntry {
  std::uint32_t row = 0;
  double value = 0.0;
};

using SparseColumn = std::vector<ColumnEntry>;

enum class PricingRule {
  kBest,   // largest reduced cost, lowest index on ties
  kFirst,  // lowest index with reduced cost above threshold (Bland)
};

struct PricingResult {
  std::size_t column = kNoColumn;  // kNoColumn: no improving column
  double reduced_cost = 0.0;

  bool found() const { return column != kNoColumn; }
};

/// Column oracle. Reduced cost of column j under duals y is
/// objective_weight * c_j - sum_entries y[row] * value, summed in entry order.
class LpProblem {
 public:
  virtual ~LpProblem() = default;

  virtual std::size_t column_count() const = 0;
  virtual std::span<const RowBound> rows() const = 0;
  virtual double objective(std::size_t col) const = 0;
  virtual void column(std::size_t col, SparseColumn& out) const = 0;

  /// Scan for an entering column with reduced cost strictly above `threshold`.
  /// The default walks every column through objective() and column();
  /// overrides must return bit-identical results.
  virtual PricingResult price(std::span<const double> duals, double objective_weight,
                              double threshold, PricingRule rule) const;

  std::size_t row_count() const { return rows().size(); }
};

/// Problem with explicitly stored sparse columns. Used for small problems and tests.
class ExplicitLp final : public LpProblem {
 public:
  explicit ExplicitLp(std::vector<RowBound> rows) : rows_(std::move(rows)) {}

  /// Dense coefficient list of length row_count(); zeros are dropped.
  void add_column(double objective, std::span<const double> coefficients);

  std::size_t column_count() const override { return objectives_.size(); }
  std::span<const RowBound> rows() const override { return rows_; }
  double objective(std::size_t col) const override { return objectives_.at(col); }
  void column(std::size_t col, SparseColumn& out) const override { out = columns_.at(col); }

 private:
  std::vector<RowBound> rows_;
  std::vector<double> objectives_;
  std::vector<SparseColumn> columns_;
};

/// Validates the dual vector length (ParameterError) and forwards to problem.price.
PricingResult price_columns(const LpProblem& problem, std::span<const double> duals,
                            double objective_weight = 1.0, double threshold = 0.0,
                            PricingRule rule = PricingRule::kBest);

enum class Status { kOptimal, kInfeasible, kIterationLimit, kUnbounded };

std::string to_string(Status s);

/// Basic variable ids plus the resting bound of each nonbasic logical.
/// Variable ids: [0, n) structural, [n, n+R) row slacks, [n+R, n+2R) artificials.
struct Basis {
  std::vector<std::size_t> basic;
  std::vector<std::uint8_t> slack_at_upper;  // per row, meaningful when nonbasic
};

struct SolveOptions {
  double feasibility_tol = 1e-9;
  double optimality_tol = 1e-9;
  std::size_t max_iterations = 200000;
  std::size_t max_rows = 1024;
  std::size_t refactor_interval = 50;
  /// Consecutive degenerate pivots before switching to Bland's rule;
  /// 0 means 10 * row count.
  std::size_t stall_threshold = 0;
};

struct ColumnMass {
  std::size_t column = 0;
  double mass = 0.0;
};

struct LpSolution {
  Status status = Status::kInfeasible;
  std::vector<ColumnMass> columns;  // basic structural columns, ascending index
  double objective = 0.0;
  std::vector<double> row_activity;
  std::vector<double> duals;
  std::size_t iterations = 0;
  Basis basis;
  /// Rows still carrying artificial mass when phase 1 ended (status infeasible).
  std::vector<std::size_t> infeasible_rows;
  double infeasibility = 0.0;
};

/// Two-phase revised simplex. A warm basis from a previous solve is used if it
/// is primal feasible for this problem; otherwise the solve starts cold.
/// Throws ParameterError for nonpositive tolerances or too many rows.
LpSolution solve(const LpProblem& problem, const SolveOptions& options = {},
                 const Basis* warm = nullptr);

struct StageReport {
  double feasibility_tol = 0.0;
  Status status = Status::kInfeasible;
  std::size_t iterations = 0;
  double objective = 0.0;
};

struct StagedSolution {
  LpSolution solution;            // from the tightest stage that was optimal
  std::vector<StageReport> stages;
  std::size_t accepted_stage = 0;  // index into stages of `solution`
  bool reached_tightest = false;
};

/// Solves at the loosest feasibility tolerance, then at each tighter one,
/// warm-starting from the previous basis. If a tighter stage fails the last
/// optimal stage is returned with reached_tightest = false. The schedule must be
/// nonempty and strictly decreasing (ParameterError).
StagedSolution relax_and_retry(const LpProblem& problem, std::span<const double> schedule,
                               const SolveOptions& base = {});

}  // namespace maxent::lp
