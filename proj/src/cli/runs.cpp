#include "maxent/cli/runs.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <random>
#include <utility>

#include "maxent/cli/table_io.hpp"
#include "maxent/errors.hpp"

namespace maxent::cli {

namespace {

const char* kCellNames[4] = {"p01", "p11", "p00", "p10"};

std::string adjacency_name(postprocess::Adjacency a) {
  return a == postprocess::Adjacency::kFace ? "face" : "vertex";
}

PointMass point_mass(double mass, const Triple& t) {
  const auto eff = postprocess::effect_summary(t);
  return {mass, t, eff.relative_risk, eff.risk_difference};
}

std::vector<ResidualEntry> residual_entries(const grid::DiscretizedProblem& problem,
                                            const StratifiedTable& table,
                                            const std::vector<grid::RowResidual>& rs) {
  std::vector<ResidualEntry> out;
  for (std::size_t i = 0; i < rs.size(); ++i) {
    std::string name;
    if (i < problem.equality_row_count()) {
      name = table[i / 4].label + ":" + kCellNames[i % 4];
    } else {
      name = i == problem.equality_row_count() ? "variance:exposure" : "variance:outcome";
    }
    std::optional<double> hi;
    if (std::isfinite(rs[i].hi)) hi = rs[i].hi;
    out.push_back({std::move(name), rs[i].activity, rs[i].target, rs[i].lo, hi});
  }
  return out;
}

std::vector<CategoryMixture> mixture_entries(const postprocess::MixtureSolution& mixture,
                                             const StratifiedTable& table) {
  std::vector<CategoryMixture> out;
  for (std::size_t c = 0; c < mixture.categories.size(); ++c) {
    CategoryMixture cm;
    cm.label = table[c].label;
    for (const auto& cl : mixture.categories[c].clusters) cm.clusters.push_back(point_mass(cl.mass, cl.centroid));
    for (const auto& cl : mixture.categories[c].dust) cm.dust.push_back(point_mass(cl.mass, cl.centroid));
    out.push_back(std::move(cm));
  }
  return out;
}

LpDetails lp_details(const lp::StagedSolution& staged) {
  LpDetails d;
  for (const auto& s : staged.stages) {
    d.stages.push_back({s.feasibility_tol, lp::to_string(s.status), s.iterations, s.objective});
    d.iterations += s.iterations;
  }
  d.reached_tightest = staged.reached_tightest;
  return d;
}

void fill_mixture(EstimateResult& result, const StratifiedTable& table) {
  auto& report = result.report;
  const auto& problem = *result.problem;
  report.achieved_entropy = result.atoms->achieved_entropy;
  report.solution_kind = "mixture";
  report.solution = mixture_entries(*result.mixture, table);
  auto& d = *report.lp;
  d.atom_count = result.atoms->atoms.size();
  d.atom_mass = result.atoms->total_mass();
  d.centroid_entropy = result.mixture->centroid_entropy;
  d.merge_entropy_bound = result.mixture->merge_entropy_bound;
  d.residuals = residual_entries(problem, table, result.atoms->residuals);
  d.merged_residuals = residual_entries(problem, table, result.mixture->residuals);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

void RunConfig::validate() const {
  if (mode == Mode::kLp && m < 2) throw ParameterError("lp mode needs m >= 2");
  if (!(epsilon >= 0.0)) throw ParameterError("epsilon must be nonnegative");
  if (r2_propensity.has_value() != r2_prognosis.has_value()) {
    throw ParameterError("give both R^2 values or neither");
  }
  for (const auto& r2 : {r2_propensity, r2_prognosis}) {
    if (r2 && !(*r2 >= 0.0 && *r2 <= 1.0)) throw ParameterError("R^2 must lie in [0, 1]");
  }
  if (replicates > 0 && !seed) throw ParameterError("bootstrap replicates need a seed");
  if (tol_schedule.empty()) throw ParameterError("tolerance schedule is empty");
  for (std::size_t i = 0; i < tol_schedule.size(); ++i) {
    if (!(tol_schedule[i] > 0.0)) throw ParameterError("tolerances must be positive");
    if (i > 0 && !(tol_schedule[i] < tol_schedule[i - 1])) {
      throw ParameterError("tolerance schedule must be strictly decreasing");
    }
  }
  if (cluster.reach < 1) throw ParameterError("cluster reach must be at least 1");
}

ConfigEcho RunConfig::echo() const {
  ConfigEcho e;
  e.input = input;
  e.mode = mode == Mode::kLp ? "lp" : "closed-form";
  e.m = m;
  e.r2_propensity = r2_propensity;
  e.r2_prognosis = r2_prognosis;
  e.epsilon = epsilon;
  e.tol_schedule = tol_schedule;
  e.smooth = smooth;
  e.replicates = replicates;
  e.seed = seed;
  e.adjacency = adjacency_name(cluster.adjacency);
  e.reach = cluster.reach;
  return e;
}

InputSummary summarize(const StratifiedTable& table) {
  InputSummary s;
  s.n = table.total();
  for (const auto& c : table.categories()) s.categories.push_back({c.label, c.counts});
  const auto pooled = joint_probs(table);
  s.exposure_marginal = pooled.exposed();
  s.outcome_marginal = pooled.diseased();
  const double oratio = odds_ratio(table.pooled());
  if (std::isfinite(oratio)) s.odds_ratio = oratio;
  return s;
}

EstimateResult run_estimate(const RunConfig& config, const StratifiedTable& input_table) {
  config.validate();
  const auto t0 = std::chrono::steady_clock::now();
  const StratifiedTable table = config.smooth ? input_table.haldane_smoothed() : input_table;

  EstimateResult result;
  auto& report = result.report;
  report.config = config.echo();
  report.input = summarize(input_table);

  const auto conditional = closed_form::solve_conditional_homogeneous(table);
  report.closed_form_entropy = conditional.entropy_per_individual();
  report.entropy_upper_bound = closed_form::relaxed_entropy_bound(
      table, config.mode == Mode::kLp ? config.epsilon : 0.0);

  if (config.mode == Mode::kClosedForm) {
    report.status = "optimal";
    report.solution_kind = table.size() == 1 ? "homogeneous" : "conditional_homogeneous";
    report.achieved_entropy = report.closed_form_entropy;
    for (const auto& c : conditional.categories) {
      report.solution.push_back({c.label, {point_mass(c.weight, c.solution.triple)}, {}});
    }
  } else {
    result.problem.emplace(grid::build_problem(table, config.m, config.r2_propensity,
                                               config.r2_prognosis, config.epsilon));
    const auto staged = lp::relax_and_retry(*result.problem, config.tol_schedule);
    report.status = lp::to_string(staged.solution.status);
    report.lp = lp_details(staged);
    if (staged.solution.status == lp::Status::kOptimal) {
      result.atoms = grid::atoms_from_solution(*result.problem, staged.solution.columns);
      result.mixture = postprocess::cluster_atoms(*result.atoms, *result.problem, config.cluster);
      fill_mixture(result, table);
    } else {
      report.solution_kind = "mixture";
    }
  }
  if (config.record_timing) report.elapsed_seconds = seconds_since(t0);
  return result;
}

EstimateResult run_estimate(const RunConfig& config) {
  return run_estimate(config, load_table(config.input));
}

std::vector<int> default_m_sweep() {
  std::vector<int> out;
  for (int m = 25; m <= 95; m += 5) out.push_back(m);
  return out;
}

ConvergenceSeries run_convergence(const RunConfig& config, const StratifiedTable& input_table,
                                  std::span<const int> m_values) {
  config.validate();
  if (config.r2_propensity || config.r2_prognosis) {
    throw ParameterError("the convergence study compares against the closed form; drop the R^2 values");
  }
  if (m_values.empty()) throw ParameterError("no grid sizes given");
  const StratifiedTable table = config.smooth ? input_table.haldane_smoothed() : input_table;

  ConvergenceSeries series;
  series.config = config.echo();
  series.reference_entropy = closed_form::solve_conditional_homogeneous(table).entropy_per_individual();
  series.reference_upper_bound = closed_form::relaxed_entropy_bound(table, config.epsilon);
  for (int m : m_values) {
    const auto problem = grid::build_problem(table, m, std::nullopt, std::nullopt, config.epsilon);
    const auto staged = lp::relax_and_retry(problem, config.tol_schedule);
    ConvergencePoint p;
    p.m = m;
    p.status = lp::to_string(staged.solution.status);
    for (const auto& s : staged.stages) p.iterations += s.iterations;
    if (staged.solution.status == lp::Status::kOptimal) {
      p.entropy = staged.solution.objective;
      p.gap = series.reference_entropy - p.entropy;
    }
    series.points.push_back(p);
  }
  return series;
}

ConvergenceSeries run_convergence(const RunConfig& config, std::span<const int> m_values) {
  return run_convergence(config, load_table(config.input), m_values);
}

EstimateResult run_bootstrap(const RunConfig& config, const StratifiedTable& input_table) {
  config.validate();
  if (config.mode != Mode::kLp) throw ParameterError("bootstrap runs in lp mode");
  if (config.replicates == 0) throw ParameterError("bootstrap needs at least one replicate");
  const auto t0 = std::chrono::steady_clock::now();
  const StratifiedTable table = config.smooth ? input_table.haldane_smoothed() : input_table;

  EstimateResult result;
  auto& report = result.report;
  report.kind = "bootstrap";
  report.config = config.echo();
  report.input = summarize(input_table);
  report.closed_form_entropy =
      closed_form::solve_conditional_homogeneous(table).entropy_per_individual();
  report.entropy_upper_bound = closed_form::relaxed_entropy_bound(table, config.epsilon);
  result.problem.emplace(grid::build_problem(table, config.m, config.r2_propensity,
                                             config.r2_prognosis, config.epsilon));
  const auto& problem = *result.problem;

  std::map<std::string, std::size_t> category_of;
  for (std::size_t c = 0; c < table.size(); ++c) category_of[table[c].label] = c;

  RunConfig replicate_config = config;
  replicate_config.replicates = 0;
  replicate_config.record_timing = false;

  BootstrapDetails details;
  details.replicates = config.replicates;
  // Each replicate's clusters (dust included) as point masses at their
  // centroids, filed under the grid cell containing the centroid.
  grid::WeightedAtomSet pooled;
  std::size_t solved = 0;
  const int m = problem.grid().m();
  auto cell_of = [m](double v) { return std::clamp(static_cast<int>(v * m), 0, m - 1); };
  std::mt19937_64 rng(*config.seed);
  for (std::size_t r = 0; r < config.replicates; ++r) {
    const StratifiedTable sample = resample_table(input_table, rng);
    std::string status;
    try {
      const auto rep = run_estimate(replicate_config, sample);
      status = rep.report.status;
      if (rep.optimal()) {
        ++solved;
        for (std::size_t c = 0; c < rep.mixture->categories.size(); ++c) {
          const std::size_t target = category_of.at(sample[c].label);
          for (const auto* group : {&rep.mixture->categories[c].clusters, &rep.mixture->categories[c].dust}) {
            for (const auto& cl : *group) {
              const grid::Cell cell{cell_of(cl.centroid.pi), cell_of(cl.centroid.r0), cell_of(cl.centroid.r1)};
              pooled.atoms.push_back({target, cell, cl.centroid, cl.mass});
            }
          }
        }
      }
    } catch (const DegenerateTableError&) {
      status = "degenerate";
    }
    if (status != "optimal") ++details.dropped;
    details.replicate_status.push_back(status);
  }
  report.bootstrap = details;
  report.lp = LpDetails{};
  report.solution_kind = "mixture";
  if (solved == 0) {
    report.status = "infeasible";
    return result;
  }
  report.status = "optimal";
  std::stable_sort(pooled.atoms.begin(), pooled.atoms.end(), [&](const auto& a, const auto& b) {
    return problem.encode({a.category, a.cell}) < problem.encode({b.category, b.cell});
  });
  for (auto& a : pooled.atoms) {
    a.mass /= static_cast<double>(solved);
    pooled.achieved_entropy += a.mass * entropy(a.center);
  }
  pooled.residuals = grid::residuals_for(problem, pooled.atoms);
  result.atoms = std::move(pooled);
  result.mixture = postprocess::cluster_atoms(*result.atoms, problem, config.cluster);
  fill_mixture(result, table);
  if (config.record_timing) report.elapsed_seconds = seconds_since(t0);
  return result;
}

EstimateResult run_bootstrap(const RunConfig& config) {
  return run_bootstrap(config, load_table(config.input));
}

}  // namespace maxent::cli
