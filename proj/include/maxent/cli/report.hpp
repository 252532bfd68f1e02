#pragma once

// Serializable run reports. Every floating-point value is written with six
// significant digits; parsing a written report and writing it again gives the
// same bytes.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "maxent/model.hpp"

namespace maxent::cli {

inline constexpr int kSchemaVersion = 1;

struct ConfigEcho {
  std::string input;
  std::string mode;  // "closed-form" | "lp"
  int m = 0;
  std::optional<double> r2_propensity;
  std::optional<double> r2_prognosis;
  double epsilon = 0.0;
  std::vector<double> tol_schedule;
  bool smooth = false;
  std::size_t replicates = 0;
  std::optional<std::uint64_t> seed;
  std::string adjacency;
  int reach = 1;
};

struct CategorySummary {
  std::string label;
  CellCounts counts;
};

struct InputSummary {
  std::uint64_t n = 0;
  std::vector<CategorySummary> categories;
  double exposure_marginal = 0.0;
  double outcome_marginal = 0.0;
  std::optional<double> odds_ratio;  // absent when a cell is zero
};

struct PointMass {
  double mass = 0.0;
  Triple triple;
  std::optional<double> relative_risk;
  double risk_difference = 0.0;
};

struct CategoryMixture {
  std::string label;
  std::vector<PointMass> clusters;
  std::vector<PointMass> dust;
};

struct ResidualEntry {
  std::string row;
  double activity = 0.0;
  double target = 0.0;
  double lo = 0.0;
  std::optional<double> hi;  // absent for at-least rows
};

struct StageEntry {
  double feasibility_tol = 0.0;
  std::string status;
  std::size_t iterations = 0;
  double objective = 0.0;
};

struct LpDetails {
  std::vector<StageEntry> stages;
  bool reached_tightest = false;
  std::size_t iterations = 0;
  std::size_t atom_count = 0;
  double atom_mass = 0.0;
  double centroid_entropy = 0.0;
  double merge_entropy_bound = 0.0;
  std::vector<ResidualEntry> residuals;         // raw atom set
  std::vector<ResidualEntry> merged_residuals;  // clusters collapsed to centroids
};

struct BootstrapDetails {
  std::size_t replicates = 0;
  std::size_t dropped = 0;
  std::vector<std::string> replicate_status;
};

struct RunReport {
  int schema_version = kSchemaVersion;
  std::string kind = "estimate";  // "estimate" | "bootstrap"
  ConfigEcho config;
  InputSummary input;
  std::string solution_kind;  // "homogeneous" | "conditional_homogeneous" | "mixture"
  std::string status;         // "optimal" | "infeasible" | "iteration-limit" | "unbounded"
  std::vector<CategoryMixture> solution;
  double achieved_entropy = 0.0;
  double closed_form_entropy = 0.0;   // optimum without variance rows, epsilon = 0
  double entropy_upper_bound = 0.0;   // same, with rows relaxed by epsilon
  std::optional<LpDetails> lp;
  std::optional<BootstrapDetails> bootstrap;
  std::optional<double> elapsed_seconds;
};

struct ConvergencePoint {
  int m = 0;
  std::string status;
  double entropy = 0.0;
  double gap = 0.0;  // reference - entropy
  std::size_t iterations = 0;
};

struct ConvergenceSeries {
  int schema_version = kSchemaVersion;
  std::string kind = "convergence";
  ConfigEcho config;
  double reference_entropy = 0.0;  // closed-form optimum
  double reference_upper_bound = 0.0;  // with epsilon relaxation
  std::vector<ConvergencePoint> points;
};

/// Six significant digits, applied to every float in a JSON tree.
double round_sig6(double x);
void round_floats(nlohmann::json& j);

nlohmann::json to_json(const RunReport& r);
nlohmann::json to_json(const ConvergenceSeries& s);
RunReport report_from_json(const nlohmann::json& j);
ConvergenceSeries series_from_json(const nlohmann::json& j);

/// Pretty-printed with two-space indentation and a trailing newline.
std::string dump(const nlohmann::json& j);

}  // namespace maxent::cli
