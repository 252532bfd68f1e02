#include "maxent/grid_lp.hpp"

#include <algorithm>
#include <cmath>

#include "maxent/closed_form.hpp"
#include "maxent/errors.hpp"

namespace maxent::grid {

namespace {

struct RowCoefficients {
  double outcome[4];
  double exposure_spread;
  double outcome_spread;
};

// Single definition of a column's coefficients; the pricing loop and the
// generic column() accessor must agree bit for bit.
inline RowCoefficients coefficients_at(double pi, double r0, double r1, double exposure_mean,
                                       double outcome_mean) {
  RowCoefficients c;
  const double q = 1.0 - pi;
  c.outcome[0] = q * r0;
  c.outcome[1] = pi * r1;
  c.outcome[2] = q * (1.0 - r0);
  c.outcome[3] = pi * (1.0 - r1);
  const double dp = pi - exposure_mean;
  c.exposure_spread = dp * dp;
  const double dr = (c.outcome[0] + c.outcome[1]) - outcome_mean;
  c.outcome_spread = dr * dr;
  return c;
}

}  // namespace

CubeGrid::CubeGrid(int m) : m_(m) {
  if (m < 2) throw ParameterError("grid needs m >= 2");
}

DiscretizedProblem::DiscretizedProblem(const StratifiedTable& table, int m,
                                       std::optional<VarianceRows> variance, double epsilon)
    : grid_(m), categories_(table.size()), variance_(variance), epsilon_(epsilon) {
  if (!(epsilon >= 0.0)) throw ParameterError("epsilon must be nonnegative");
  const double n = static_cast<double>(table.total());
  // Rejects empty cells the same way the closed form does.
  closed_form::solve_conditional_homogeneous(table);
  for (const auto& cat : table.categories()) {
    for (auto k : cat.counts.as_array()) {
      const double p = static_cast<double>(k) / n;
      rhs_.push_back(p);
      rows_.push_back(lp::RowBound::range(p - epsilon, p + epsilon));
    }
  }
  if (variance_) {
    rows_.push_back(lp::RowBound::at_least(variance_->exposure_bound));
    rows_.push_back(lp::RowBound::at_least(variance_->outcome_bound));
  }
  axis_.resize(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) axis_[static_cast<std::size_t>(i)] = grid_.center(i);
  entropy_.resize(grid_.cell_count());
  std::size_t idx = 0;
  for (int j = 0; j < m; ++j) {
    for (int k = 0; k < m; ++k) {
      for (int l = 0; l < m; ++l) {
        entropy_[idx++] = entropy({axis_[j], axis_[k], axis_[l]});
      }
    }
  }
}

std::size_t DiscretizedProblem::encode(const ColumnKey& key) const {
  const auto m = static_cast<std::size_t>(grid_.m());
  return ((key.category * m + static_cast<std::size_t>(key.cell.j)) * m +
          static_cast<std::size_t>(key.cell.k)) * m +
         static_cast<std::size_t>(key.cell.l);
}

ColumnKey DiscretizedProblem::decode(std::size_t col) const {
  const auto m = static_cast<std::size_t>(grid_.m());
  ColumnKey key;
  key.cell.l = static_cast<int>(col % m);
  col /= m;
  key.cell.k = static_cast<int>(col % m);
  col /= m;
  key.cell.j = static_cast<int>(col % m);
  key.category = col / m;
  return key;
}

Triple DiscretizedProblem::center(const Cell& cell) const {
  return {axis_[cell.j], axis_[cell.k], axis_[cell.l]};
}

void DiscretizedProblem::coefficients(std::size_t c, const Triple& t,
                                      lp::SparseColumn& out) const {
  const double pe = variance_ ? variance_->exposure_mean : 0.0;
  const double pd = variance_ ? variance_->outcome_mean : 0.0;
  const RowCoefficients rc = coefficients_at(t.pi, t.r0, t.r1, pe, pd);
  out.clear();
  const auto base = static_cast<std::uint32_t>(4 * c);
  for (std::uint32_t i = 0; i < 4; ++i) out.push_back({base + i, rc.outcome[i]});
  if (variance_) {
    const auto v = static_cast<std::uint32_t>(4 * categories_);
    out.push_back({v, rc.exposure_spread});
    out.push_back({v + 1, rc.outcome_spread});
  }
}

double DiscretizedProblem::objective(std::size_t col) const {
  return entropy_[col % grid_.cell_count()];
}

void DiscretizedProblem::column(std::size_t col, lp::SparseColumn& out) const {
  const ColumnKey key = decode(col);
  coefficients(key.category, center(key.cell), out);
}

lp::PricingResult DiscretizedProblem::price(std::span<const double> duals, double objective_weight,
                                            double threshold, lp::PricingRule rule) const {
  const std::size_t m = static_cast<std::size_t>(grid_.m());
  const double pe = variance_ ? variance_->exposure_mean : 0.0;
  const double pd = variance_ ? variance_->outcome_mean : 0.0;
  const bool with_variance = variance_.has_value();
  const double yv = with_variance ? duals[4 * categories_] : 0.0;
  const double yr = with_variance ? duals[4 * categories_ + 1] : 0.0;
  const bool first = rule == lp::PricingRule::kFirst;

  lp::PricingResult best;
  double best_rc = threshold;
  std::size_t col = 0;
  for (std::size_t c = 0; c < categories_; ++c) {
    const double y0 = duals[4 * c], y1 = duals[4 * c + 1];
    const double y2 = duals[4 * c + 2], y3 = duals[4 * c + 3];
    const double* h = entropy_.data();
    for (std::size_t j = 0; j < m; ++j) {
      const double pi = axis_[j];
      for (std::size_t k = 0; k < m; ++k) {
        const double r0 = axis_[k];
        for (std::size_t l = 0; l < m; ++l, ++col, ++h) {
          const RowCoefficients a = coefficients_at(pi, r0, axis_[l], pe, pd);
          double rc = objective_weight * *h;
          rc -= y0 * a.outcome[0];
          rc -= y1 * a.outcome[1];
          rc -= y2 * a.outcome[2];
          rc -= y3 * a.outcome[3];
          if (with_variance) {
            rc -= yv * a.exposure_spread;
            rc -= yr * a.outcome_spread;
          }
          if (rc > best_rc) {
            best = {col, rc};
            best_rc = rc;
            if (first) return best;
          }
        }
      }
    }
  }
  return best;
}

DiscretizedProblem build_problem(const StratifiedTable& table, int m,
                                 std::optional<double> r2_propensity,
                                 std::optional<double> r2_prognosis, double epsilon) {
  if (m < 2) throw ParameterError("grid needs m >= 2");
  if (!(epsilon >= 0.0)) throw ParameterError("epsilon must be nonnegative");
  if (r2_propensity.has_value() != r2_prognosis.has_value()) {
    throw ParameterError("give both R^2 values or neither");
  }
  std::optional<VarianceRows> variance;
  if (r2_propensity) {
    for (double r2 : {*r2_propensity, *r2_prognosis}) {
      if (!(r2 >= 0.0 && r2 <= 1.0)) throw ParameterError("R^2 must lie in [0, 1]");
    }
    const auto pooled = joint_probs(table);
    VarianceRows v;
    v.r2_propensity = *r2_propensity;
    v.r2_prognosis = *r2_prognosis;
    v.exposure_mean = pooled.exposed();
    v.outcome_mean = pooled.diseased();
    v.exposure_bound = closed_form::r2_to_variance_bound(v.r2_propensity, v.exposure_mean);
    v.outcome_bound = closed_form::r2_to_variance_bound(v.r2_prognosis, v.outcome_mean);
    variance = v;
  }
  return DiscretizedProblem(table, m, variance, epsilon);
}

double RowResidual::violation() const {
  if (activity < lo) return lo - activity;
  if (activity > hi) return activity - hi;
  return 0.0;
}

double WeightedAtomSet::total_mass() const {
  double s = 0.0;
  for (const auto& a : atoms) s += a.mass;
  return s;
}

std::vector<RowResidual> residuals_for(const DiscretizedProblem& problem,
                                       std::span<const Atom> atoms) {
  const auto rows = problem.rows();
  std::vector<RowResidual> out(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out[i].lo = rows[i].lo;
    out[i].hi = rows[i].hi;
    out[i].target = rows[i].kind == lp::RowKind::kRange ? 0.5 * (rows[i].lo + rows[i].hi)
                                                         : rows[i].lo;
  }
  // Exact targets; the midpoint above can round differently from count / N.
  for (std::size_t c = 0; c < problem.category_count(); ++c) {
    const auto rhs = problem.equality_rhs(c);
    for (std::size_t i = 0; i < 4; ++i) out[4 * c + i].target = rhs[i];
  }
  lp::SparseColumn col;
  for (const auto& a : atoms) {
    problem.coefficients(a.category, a.center, col);
    for (const auto& e : col) out[e.row].activity += e.value * a.mass;
  }
  return out;
}

WeightedAtomSet atoms_from_solution(const DiscretizedProblem& problem,
                                    std::span<const lp::ColumnMass> column_masses,
                                    double mass_floor) {
  WeightedAtomSet out;
  for (const auto& cm : column_masses) {
    if (cm.mass < mass_floor) continue;
    const ColumnKey key = problem.decode(cm.column);
    out.atoms.push_back({key.category, key.cell, problem.center(key.cell), cm.mass});
    out.achieved_entropy += cm.mass * problem.objective(cm.column);
  }
  out.residuals = residuals_for(problem, out.atoms);
  return out;
}

}  // namespace maxent::grid
