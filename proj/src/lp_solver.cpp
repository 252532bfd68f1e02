#include "maxent/lp_solver.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "maxent/errors.hpp"

namespace maxent::lp {

PricingResult LpProblem::price(std::span<const double> duals, double objective_weight,
                               double threshold, PricingRule rule) const {
  PricingResult best;
  double best_rc = threshold;
  SparseColumn col;
  const std::size_t n = column_count();
  for (std::size_t j = 0; j < n; ++j) {
    column(j, col);
    double rc = objective_weight * objective(j);
    for (const auto& e : col) rc -= duals[e.row] * e.value;
    if (rc > best_rc) {
      best = {j, rc};
      best_rc = rc;
      if (rule == PricingRule::kFirst) break;
    }
  }
  return best;
}

void ExplicitLp::add_column(double objective, std::span<const double> coefficients) {
  if (coefficients.size() != rows_.size()) {
    throw ParameterError("column length does not match row count");
  }
  SparseColumn col;
  for (std::size_t i = 0; i < coefficients.size(); ++i) {
    if (coefficients[i] != 0.0) col.push_back({static_cast<std::uint32_t>(i), coefficients[i]});
  }
  objectives_.push_back(objective);
  columns_.push_back(std::move(col));
}

PricingResult price_columns(const LpProblem& problem, std::span<const double> duals,
                            double objective_weight, double threshold, PricingRule rule) {
  if (duals.size() != problem.row_count()) {
    throw ParameterError("dual vector length does not match row count");
  }
  return problem.price(duals, objective_weight, threshold, rule);
}

std::string to_string(Status s) {
  switch (s) {
    case Status::kOptimal: return "optimal";
    case Status::kInfeasible: return "infeasible";
    case Status::kIterationLimit: return "iteration-limit";
    case Status::kUnbounded: return "unbounded";
  }
  return "unknown";
}

namespace {

// Bounded revised simplex over structural columns (bounds [0, inf)),
// one slack per row and one artificial per row.
//
// Row i reads a_i.w + s_i + sign_i * t_i = b_i where
//   range row    : b_i = hi, s_i in [0, hi - lo]
//   at-least row : b_i = lo, s_i in (-inf, 0]
// and the artificial t_i >= 0 only lives during phase 1.
class Simplex {
 public:
  Simplex(const LpProblem& problem, const SolveOptions& options)
      : problem_(problem),
        opt_(options),
        n_(problem.column_count()),
        rows_(problem.row_count()),
        b_(rows_),
        lo_(2 * rows_),
        hi_(2 * rows_),
        value_(2 * rows_, 0.0),
        art_sign_(rows_, 1.0),
        basic_pos_(2 * rows_, -1),
        basis_(rows_),
        x_(rows_),
        binv_(rows_, rows_),
        stall_limit_(options.stall_threshold ? options.stall_threshold : 10 * rows_) {
    const auto rb = problem.rows();
    for (std::size_t i = 0; i < rows_; ++i) {
      if (rb[i].kind == RowKind::kRange) {
        if (!(rb[i].lo <= rb[i].hi)) throw ParameterError("range row with lo > hi");
        b_[i] = rb[i].hi;
        lo_[i] = 0.0;
        hi_[i] = rb[i].hi - rb[i].lo;
      } else {
        b_[i] = rb[i].lo;
        lo_[i] = -kInfinity;
        hi_[i] = 0.0;
      }
      lo_[rows_ + i] = 0.0;
      hi_[rows_ + i] = kInfinity;
    }
  }

  LpSolution run(const Basis* warm) {
    LpSolution out;
    bool warm_ok = warm != nullptr && try_warm_start(*warm);
    if (!warm_ok) {
      cold_start();
      const Status s1 = iterate(/*phase=*/1, out);
      if (s1 == Status::kIterationLimit) return finish(out, s1);
      double infeasibility = 0.0;
      for (std::size_t i = 0; i < rows_; ++i) {
        const double t = logical_value(rows_ + i);
        infeasibility += t;
        if (t > opt_.feasibility_tol) out.infeasible_rows.push_back(i);
      }
      out.infeasibility = infeasibility;
      if (!out.infeasible_rows.empty()) return finish(out, Status::kInfeasible);
    }
    // Artificials are fixed at zero from here on.
    for (std::size_t i = 0; i < rows_; ++i) hi_[rows_ + i] = 0.0;
    const Status s2 = iterate(/*phase=*/2, out);
    return finish(out, s2);
  }

 private:
  static constexpr double kPivotTol = 1e-9;

  bool is_structural(std::size_t v) const { return v < n_; }
  std::size_t logical(std::size_t v) const { return v - n_; }  // index into lo_/hi_/value_

  double lower(std::size_t v) const { return is_structural(v) ? 0.0 : lo_[logical(v)]; }
  double upper(std::size_t v) const { return is_structural(v) ? kInfinity : hi_[logical(v)]; }

  double logical_value(std::size_t l) const {
    const int pos = basic_pos_[l];
    return pos >= 0 ? x_[pos] : value_[l];
  }

  double cost(std::size_t v, int phase) const {
    if (is_structural(v)) return phase == 2 ? problem_.objective(v) : 0.0;
    const std::size_t l = logical(v);
    return (phase == 1 && l >= rows_) ? -1.0 : 0.0;
  }

  // Column of variable v, as sparse entries.
  void column_of(std::size_t v, SparseColumn& out) const {
    if (is_structural(v)) {
      problem_.column(v, out);
      return;
    }
    const std::size_t l = logical(v);
    out.clear();
    if (l < rows_) {
      out.push_back({static_cast<std::uint32_t>(l), 1.0});
    } else {
      out.push_back({static_cast<std::uint32_t>(l - rows_), art_sign_[l - rows_]});
    }
  }

  void set_basic(std::size_t pos, std::size_t v) {
    basis_[pos] = v;
    if (!is_structural(v)) basic_pos_[logical(v)] = static_cast<int>(pos);
  }

  void clear_basic(std::size_t v) {
    if (!is_structural(v)) basic_pos_[logical(v)] = -1;
  }

  void cold_start() {
    std::fill(basic_pos_.begin(), basic_pos_.end(), -1);
    for (std::size_t i = 0; i < rows_; ++i) {
      value_[rows_ + i] = 0.0;
      if (b_[i] >= lo_[i] && b_[i] <= hi_[i]) {
        set_basic(i, n_ + i);
        art_sign_[i] = 1.0;
        continue;
      }
      // Slack rests at the bound nearest b_i; the artificial takes up the rest.
      value_[i] = b_[i] < lo_[i] ? lo_[i] : hi_[i];
      const double residual = b_[i] - value_[i];
      art_sign_[i] = residual >= 0.0 ? 1.0 : -1.0;
      set_basic(i, n_ + rows_ + i);
    }
    refactor();
  }

  bool try_warm_start(const Basis& warm) {
    if (warm.basic.size() != rows_ || warm.slack_at_upper.size() != rows_) return false;
    std::fill(basic_pos_.begin(), basic_pos_.end(), -1);
    for (std::size_t i = 0; i < rows_; ++i) {
      value_[rows_ + i] = 0.0;
      art_sign_[i] = 1.0;
      if (std::isfinite(lo_[i]) && !warm.slack_at_upper[i]) {
        value_[i] = lo_[i];
      } else {
        value_[i] = hi_[i];
      }
    }
    for (std::size_t p = 0; p < rows_; ++p) {
      if (warm.basic[p] >= n_ + 2 * rows_) return false;
      set_basic(p, warm.basic[p]);
    }
    if (!refactor()) return false;
    for (std::size_t p = 0; p < rows_; ++p) {
      const std::size_t v = basis_[p];
      const double tol = opt_.feasibility_tol;
      if (!is_structural(v) && logical(v) >= rows_) {
        if (std::abs(x_[p]) > tol) return false;
      } else if (x_[p] < lower(v) - tol || x_[p] > upper(v) + tol) {
        return false;
      }
    }
    return true;
  }

  // Rebuilds B^-1 from the basis and recomputes basic values. Returns false if
  // the basis is numerically singular.
  bool refactor() {
    Eigen::MatrixXd basis_matrix = Eigen::MatrixXd::Zero(rows_, rows_);
    SparseColumn col;
    for (std::size_t p = 0; p < rows_; ++p) {
      column_of(basis_[p], col);
      for (const auto& e : col) basis_matrix(e.row, p) = e.value;
    }
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(basis_matrix);
    if (!(lu.rcond() > 1e-13)) return false;
    binv_ = lu.inverse();
    recompute_x();
    since_refactor_ = 0;
    return true;
  }

  void recompute_x() {
    Eigen::VectorXd rhs(rows_);
    for (std::size_t i = 0; i < rows_; ++i) rhs[i] = b_[i];
    // Nonbasic structurals sit at zero; only logicals contribute.
    for (std::size_t l = 0; l < 2 * rows_; ++l) {
      if (basic_pos_[l] >= 0 || value_[l] == 0.0) continue;
      const std::size_t row = l < rows_ ? l : l - rows_;
      const double coef = l < rows_ ? 1.0 : art_sign_[l - rows_];
      rhs[row] -= coef * value_[l];
    }
    const Eigen::VectorXd xb = binv_ * rhs;
    for (std::size_t p = 0; p < rows_; ++p) x_[p] = xb[p];
  }

  void compute_duals(int phase, std::vector<double>& y) const {
    y.assign(rows_, 0.0);
    for (std::size_t p = 0; p < rows_; ++p) {
      const double c = cost(basis_[p], phase);
      if (c == 0.0) continue;
      for (std::size_t r = 0; r < rows_; ++r) y[r] += c * binv_(p, r);
    }
  }

  struct Entering {
    std::size_t var = kNoColumn;
    double reduced_cost = 0.0;
    double direction = 1.0;
  };

  Entering choose_entering(int phase, const std::vector<double>& y, bool bland) const {
    const double tol = opt_.optimality_tol;
    const PricingRule rule = bland ? PricingRule::kFirst : PricingRule::kBest;
    Entering best;
    const PricingResult s = problem_.price(y, phase == 2 ? 1.0 : 0.0, tol, rule);
    if (s.found()) {
      best = {s.column, s.reduced_cost, 1.0};
      if (bland) return best;
    }
    for (std::size_t l = 0; l < 2 * rows_; ++l) {
      if (basic_pos_[l] >= 0) continue;
      if (!(lo_[l] < hi_[l])) continue;
      const std::size_t row = l < rows_ ? l : l - rows_;
      const double coef = l < rows_ ? 1.0 : art_sign_[l - rows_];
      const double rc = cost(n_ + l, phase) - y[row] * coef;
      const bool at_upper = value_[l] == hi_[l];
      const bool at_lower = value_[l] == lo_[l];
      double score = 0.0;
      double dir = 0.0;
      if (rc > tol && !at_upper) {
        score = rc;
        dir = 1.0;
      } else if (rc < -tol && !at_lower) {
        score = -rc;
        dir = -1.0;
      }
      if (dir == 0.0) continue;
      if (best.var == kNoColumn || score > std::abs(best.reduced_cost)) {
        best = {n_ + l, rc, dir};
        if (bland) return best;
      }
    }
    return best;
  }

  Status iterate(int phase, LpSolution& out) {
    std::vector<double> y;
    std::vector<double> alpha(rows_);
    SparseColumn col;
    std::size_t stall = 0;
    bool bland = false;
    while (true) {
      if (iterations_ >= opt_.max_iterations) return Status::kIterationLimit;
      if (since_refactor_ >= opt_.refactor_interval) refactor();
      compute_duals(phase, y);
      const Entering in = choose_entering(phase, y, bland);
      if (in.var == kNoColumn) {
        out.duals = y;
        return Status::kOptimal;
      }
      column_of(in.var, col);
      std::fill(alpha.begin(), alpha.end(), 0.0);
      for (const auto& e : col) {
        for (std::size_t p = 0; p < rows_; ++p) alpha[p] += binv_(p, e.row) * e.value;
      }

      // Harris two-pass ratio test. x_B moves by -dir * t * alpha.
      const double ftol = opt_.feasibility_tol;
      double relaxed_step = kInfinity;
      for (std::size_t p = 0; p < rows_; ++p) {
        const double rate = -in.direction * alpha[p];
        if (std::abs(alpha[p]) <= kPivotTol) continue;
        const std::size_t v = basis_[p];
        if (rate < 0.0 && std::isfinite(lower(v))) {
          relaxed_step = std::min(relaxed_step, (x_[p] - lower(v) + ftol) / -rate);
        } else if (rate > 0.0 && std::isfinite(upper(v))) {
          relaxed_step = std::min(relaxed_step, (upper(v) + ftol - x_[p]) / rate);
        }
      }
      const double own_range = upper(in.var) - lower(in.var);
      int leave = -1;
      double step = kInfinity;
      if (std::isfinite(relaxed_step)) {
        double best_pivot = 0.0;
        for (std::size_t p = 0; p < rows_; ++p) {
          const double rate = -in.direction * alpha[p];
          if (std::abs(alpha[p]) <= kPivotTol) continue;
          const std::size_t v = basis_[p];
          double t = kInfinity;
          if (rate < 0.0 && std::isfinite(lower(v))) {
            t = (x_[p] - lower(v)) / -rate;
          } else if (rate > 0.0 && std::isfinite(upper(v))) {
            t = (upper(v) - x_[p]) / rate;
          }
          if (!(t <= relaxed_step)) continue;
          bool take;
          if (leave < 0) {
            take = true;
          } else if (bland) {
            take = v < basis_[leave];
          } else {
            take = std::abs(alpha[p]) > best_pivot;
          }
          if (take) {
            leave = static_cast<int>(p);
            best_pivot = std::abs(alpha[p]);
            step = std::max(t, 0.0);
          }
        }
      }

      if (own_range <= step) {
        if (!std::isfinite(own_range)) return Status::kUnbounded;
        // Bound flip of a nonbasic logical; the basis is unchanged.
        const std::size_t l = logical(in.var);
        for (std::size_t p = 0; p < rows_; ++p) x_[p] -= in.direction * own_range * alpha[p];
        value_[l] = in.direction > 0 ? hi_[l] : lo_[l];
        ++iterations_;
        stall = 0;
        bland = false;
        continue;
      }

      const std::size_t p_out = static_cast<std::size_t>(leave);
      const std::size_t v_out = basis_[p_out];
      const double rate_out = -in.direction * alpha[p_out];
      const double start = is_structural(in.var) ? 0.0 : value_[logical(in.var)];
      for (std::size_t p = 0; p < rows_; ++p) x_[p] -= in.direction * step * alpha[p];
      if (!is_structural(v_out)) {
        value_[logical(v_out)] = rate_out < 0.0 ? lower(v_out) : upper(v_out);
      }
      clear_basic(v_out);
      set_basic(p_out, in.var);
      x_[p_out] = start + in.direction * step;

      // Product-form update of B^-1 with pivot alpha[p_out].
      const double pivot = alpha[p_out];
      for (std::size_t c = 0; c < rows_; ++c) binv_(p_out, c) /= pivot;
      for (std::size_t p = 0; p < rows_; ++p) {
        if (p == p_out || alpha[p] == 0.0) continue;
        const double f = alpha[p];
        for (std::size_t c = 0; c < rows_; ++c) binv_(p, c) -= f * binv_(p_out, c);
      }
      ++iterations_;
      ++since_refactor_;

      if (step * std::abs(in.reduced_cost) <= 1e-14) {
        if (++stall >= stall_limit_) bland = true;
      } else {
        stall = 0;
        bland = false;
      }
    }
  }

  LpSolution& finish(LpSolution& out, Status status) {
    refactor();
    out.status = status;
    out.iterations = iterations_;
    out.columns.clear();
    for (std::size_t p = 0; p < rows_; ++p) {
      if (is_structural(basis_[p]) && x_[p] > 0.0) out.columns.push_back({basis_[p], x_[p]});
    }
    std::sort(out.columns.begin(), out.columns.end(),
              [](const ColumnMass& a, const ColumnMass& b) { return a.column < b.column; });
    out.row_activity.assign(rows_, 0.0);
    out.objective = 0.0;
    SparseColumn col;
    for (const auto& cm : out.columns) {
      problem_.column(cm.column, col);
      for (const auto& e : col) out.row_activity[e.row] += e.value * cm.mass;
      out.objective += problem_.objective(cm.column) * cm.mass;
    }
    out.basis.basic = basis_;
    out.basis.slack_at_upper.assign(rows_, 0);
    for (std::size_t i = 0; i < rows_; ++i) {
      out.basis.slack_at_upper[i] = (basic_pos_[i] < 0 && value_[i] == hi_[i]) ? 1 : 0;
    }
    return out;
  }

  const LpProblem& problem_;
  SolveOptions opt_;
  std::size_t n_;
  std::size_t rows_;
  std::vector<double> b_;
  std::vector<double> lo_, hi_;   // bounds of logicals: [0,R) slacks, [R,2R) artificials
  std::vector<double> value_;     // resting value of nonbasic logicals
  std::vector<double> art_sign_;
  std::vector<int> basic_pos_;    // position in basis of each logical, -1 if nonbasic
  std::vector<std::size_t> basis_;
  std::vector<double> x_;
  Eigen::MatrixXd binv_;
  std::size_t stall_limit_;
  std::size_t iterations_ = 0;
  std::size_t since_refactor_ = 0;
};

void validate(const LpProblem& problem, const SolveOptions& options) {
  if (!(options.feasibility_tol > 0.0) || !(options.optimality_tol > 0.0)) {
    throw ParameterError("solver tolerances must be positive");
  }
  if (problem.row_count() == 0) throw ParameterError("problem has no rows");
  if (problem.row_count() > options.max_rows) {
    throw ParameterError("problem has " + std::to_string(problem.row_count()) +
                         " rows; cap is " + std::to_string(options.max_rows));
  }
}

}  // namespace

LpSolution solve(const LpProblem& problem, const SolveOptions& options, const Basis* warm) {
  validate(problem, options);
  Simplex simplex(problem, options);
  return simplex.run(warm);
}

StagedSolution relax_and_retry(const LpProblem& problem, std::span<const double> schedule,
                               const SolveOptions& base) {
  if (schedule.empty()) throw ParameterError("tolerance schedule is empty");
  for (std::size_t i = 1; i < schedule.size(); ++i) {
    if (!(schedule[i] < schedule[i - 1])) {
      throw ParameterError("tolerance schedule must be strictly decreasing");
    }
  }
  StagedSolution out;
  const Basis* warm = nullptr;
  bool have_optimal = false;
  for (std::size_t s = 0; s < schedule.size(); ++s) {
    SolveOptions opts = base;
    opts.feasibility_tol = schedule[s];
    LpSolution sol = solve(problem, opts, warm);
    out.stages.push_back({schedule[s], sol.status, sol.iterations, sol.objective});
    if (sol.status != Status::kOptimal) {
      if (!have_optimal) {
        out.solution = std::move(sol);
        out.accepted_stage = s;
      }
      break;
    }
    out.solution = std::move(sol);
    out.accepted_stage = s;
    have_optimal = true;
    warm = &out.solution.basis;
  }
  out.reached_tightest =
      have_optimal && out.accepted_stage + 1 == schedule.size();
  return out;
}

}  // namespace maxent::lp
