#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "maxent/cli/report.hpp"
#include "maxent/closed_form.hpp"
#include "maxent/grid_lp.hpp"
#include "maxent/postprocess.hpp"

namespace maxent::cli {

enum class Mode { kClosedForm, kLp };

struct RunConfig {
  std::string input;
  Mode mode = Mode::kLp;
  int m = 80;
  std::optional<double> r2_propensity;
  std::optional<double> r2_prognosis;
  double epsilon = 1e-3;
  std::vector<double> tol_schedule = {1e-6, 1e-9};
  bool smooth = false;
  std::size_t replicates = 0;
  std::optional<std::uint64_t> seed;
  std::string json_out;
  std::string svg_out;
  postprocess::ClusterOptions cluster{postprocess::Adjacency::kVertex, 3, 1e-4};
  bool record_timing = false;

  /// ParameterError on: lp mode with m < 2, negative epsilon, R^2 outside
  /// [0,1] or only one of them given, replicates > 0 without a seed, a
  /// schedule that is empty or not strictly decreasing.
  void validate() const;
  ConfigEcho echo() const;
};

/// In-memory products of one estimate next to the serializable report.
struct EstimateResult {
  RunReport report;
  std::optional<grid::DiscretizedProblem> problem;
  std::optional<grid::WeightedAtomSet> atoms;
  std::optional<postprocess::MixtureSolution> mixture;

  bool optimal() const { return report.status == "optimal"; }
};

InputSummary summarize(const StratifiedTable& table);

/// Closed form (one category: homogeneous; several: conditional) or the
/// discretized LP solved with relax_and_retry and clustered. Smoothing, if
/// configured, is applied to `table` first.
EstimateResult run_estimate(const RunConfig& config, const StratifiedTable& table);
EstimateResult run_estimate(const RunConfig& config);  // loads config.input

/// LP entropy without variance rows for each m against the closed-form optimum.
/// ParameterError if R^2 values are configured or m_values is empty.
ConvergenceSeries run_convergence(const RunConfig& config, const StratifiedTable& table,
                                  std::span<const int> m_values);
ConvergenceSeries run_convergence(const RunConfig& config, std::span<const int> m_values);

/// 25, 30, ..., 95.
std::vector<int> default_m_sweep();

/// Resamples the pooled microdata `replicates` times (seeded), solves and
/// clusters each replicate in lp mode, pools every replicate's cluster point
/// masses divided by the number of replicates that solved, and clusters the
/// pool again against the original table's constraints. Replicates that fail
/// are dropped and counted.
EstimateResult run_bootstrap(const RunConfig& config, const StratifiedTable& table);
EstimateResult run_bootstrap(const RunConfig& config);

}  // namespace maxent::cli
