#pragma once

// Discretization of the (pi, r0, r1) unit cube into m^3 subcubes and the
// linear program over per-category subcube weights. Weights are joint masses
// over cube x categories and sum to one; each category contributes four
// outcome rows, optionally followed by two variance rows.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "maxent/lp_solver.hpp"
#include "maxent/model.hpp"

namespace maxent::grid {

/// Uniform grid with m subdivisions per axis. Indices are 0-based here:
/// center(i) = (i + 0.5) / m.
class CubeGrid {
 public:
  explicit CubeGrid(int m);  // ParameterError if m < 2

  int m() const { return m_; }
  double center(int index) const { return (index + 0.5) / m_; }
  std::size_t cell_count() const {
    return static_cast<std::size_t>(m_) * static_cast<std::size_t>(m_) * static_cast<std::size_t>(m_);
  }

 private:
  int m_;
};

struct Cell {
  int j = 0;  // pi axis
  int k = 0;  // r0 axis
  int l = 0;  // r1 axis

  friend bool operator==(const Cell&, const Cell&) = default;
};

struct ColumnKey {
  std::size_t category = 0;
  Cell cell;
};

/// Centered variance rows: sum w (pi - exposure_mean)^2 >= exposure_bound and
/// sum w (r - outcome_mean)^2 >= outcome_bound, with r = (1-pi) r0 + pi r1.
struct VarianceRows {
  double r2_propensity = 0.0;
  double r2_prognosis = 0.0;
  double exposure_mean = 0.0;  // pooled P(e=1)
  double outcome_mean = 0.0;   // pooled P(d=1)
  double exposure_bound = 0.0;
  double outcome_bound = 0.0;
};

class DiscretizedProblem final : public lp::LpProblem {
 public:
  DiscretizedProblem(const StratifiedTable& table, int m, std::optional<VarianceRows> variance,
                     double epsilon);

  const CubeGrid& grid() const { return grid_; }
  std::size_t category_count() const { return categories_; }
  std::size_t equality_row_count() const { return 4 * categories_; }
  std::size_t inequality_row_count() const { return variance_ ? 2 : 0; }
  const std::optional<VarianceRows>& variance() const { return variance_; }
  double epsilon() const { return epsilon_; }
  /// Joint probabilities count / N of category c, in (01, 11, 00, 10) order.
  std::span<const double> equality_rhs(std::size_t c) const {
    return std::span<const double>(rhs_).subspan(4 * c, 4);
  }

  std::size_t encode(const ColumnKey& key) const;
  ColumnKey decode(std::size_t col) const;
  Triple center(const Cell& cell) const;

  /// Row coefficients of a unit mass at `t` in category c, in row order.
  void coefficients(std::size_t c, const Triple& t, lp::SparseColumn& out) const;

  std::size_t column_count() const override { return categories_ * grid_.cell_count(); }
  std::span<const lp::RowBound> rows() const override { return rows_; }
  double objective(std::size_t col) const override;
  void column(std::size_t col, lp::SparseColumn& out) const override;
  lp::PricingResult price(std::span<const double> duals, double objective_weight, double threshold,
                          lp::PricingRule rule) const override;

 private:
  CubeGrid grid_;
  std::size_t categories_;
  std::optional<VarianceRows> variance_;
  double epsilon_;
  std::vector<double> rhs_;
  std::vector<lp::RowBound> rows_;
  std::vector<double> axis_;     // centers
  std::vector<double> entropy_;  // per cell, (j, k, l) row-major
};

/// Builds the problem for `table`. Variance rows are added when both R^2
/// values are given; giving exactly one is a ParameterError, as are m < 2,
/// epsilon < 0 and R^2 outside [0, 1]. Degenerate tables propagate
/// DegenerateTableError.
DiscretizedProblem build_problem(const StratifiedTable& table, int m,
                                 std::optional<double> r2_propensity,
                                 std::optional<double> r2_prognosis, double epsilon);

struct Atom {
  std::size_t category = 0;
  Cell cell;
  Triple center;
  double mass = 0.0;
};

struct RowResidual {
  double activity = 0.0;
  double target = 0.0;  // RHS before epsilon relaxation
  double lo = 0.0;
  double hi = 0.0;

  double deviation() const { return activity - target; }
  /// Distance outside [lo, hi]; zero when satisfied.
  double violation() const;
};

struct WeightedAtomSet {
  std::vector<Atom> atoms;
  double achieved_entropy = 0.0;  // nats per individual
  std::vector<RowResidual> residuals;

  double total_mass() const;
};

inline constexpr double kDefaultMassFloor = 1e-9;

/// Keeps columns with mass >= floor and recomputes entropy and every row
/// activity from the kept atoms alone.
WeightedAtomSet atoms_from_solution(const DiscretizedProblem& problem,
                                    std::span<const lp::ColumnMass> column_masses,
                                    double mass_floor = kDefaultMassFloor);

/// Row residuals of an arbitrary set of point masses (category, triple, mass).
std::vector<RowResidual> residuals_for(const DiscretizedProblem& problem,
                                       std::span<const Atom> atoms);

}  // namespace maxent::grid
