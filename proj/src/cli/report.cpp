#include "maxent/cli/report.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "maxent/errors.hpp"

namespace maxent::cli {

using nlohmann::json;

double round_sig6(double x) {
  if (!std::isfinite(x) || x == 0.0) return x;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return std::strtod(buf, nullptr);
}

void round_floats(json& j) {
  if (j.is_number_float()) {
    j = round_sig6(j.get<double>());
  } else if (j.is_structured()) {
    for (auto& v : j) round_floats(v);
  }
}

namespace {

template <typename T>
json opt(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

template <typename T>
std::optional<T> get_opt(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<T>();
}

json triple_json(const Triple& t) { return {{"pi", t.pi}, {"r0", t.r0}, {"r1", t.r1}}; }
Triple triple_from(const json& j) {
  return {j.at("pi").get<double>(), j.at("r0").get<double>(), j.at("r1").get<double>()};
}

json config_json(const ConfigEcho& c) {
  return {{"input", c.input},
          {"mode", c.mode},
          {"m", c.m},
          {"r2_propensity", opt(c.r2_propensity)},
          {"r2_prognosis", opt(c.r2_prognosis)},
          {"epsilon", c.epsilon},
          {"tol_schedule", c.tol_schedule},
          {"smooth", c.smooth},
          {"replicates", c.replicates},
          {"seed", opt(c.seed)},
          {"adjacency", c.adjacency},
          {"reach", c.reach}};
}

ConfigEcho config_from(const json& j) {
  ConfigEcho c;
  c.input = j.at("input").get<std::string>();
  c.mode = j.at("mode").get<std::string>();
  c.m = j.at("m").get<int>();
  c.r2_propensity = get_opt<double>(j, "r2_propensity");
  c.r2_prognosis = get_opt<double>(j, "r2_prognosis");
  c.epsilon = j.at("epsilon").get<double>();
  c.tol_schedule = j.at("tol_schedule").get<std::vector<double>>();
  c.smooth = j.at("smooth").get<bool>();
  c.replicates = j.at("replicates").get<std::size_t>();
  c.seed = get_opt<std::uint64_t>(j, "seed");
  c.adjacency = j.at("adjacency").get<std::string>();
  c.reach = j.at("reach").get<int>();
  return c;
}

json counts_json(const CellCounts& k) {
  return {{"n01", k.n01}, {"n11", k.n11}, {"n00", k.n00}, {"n10", k.n10}};
}
CellCounts counts_from(const json& j) {
  return {j.at("n01").get<std::uint64_t>(), j.at("n11").get<std::uint64_t>(),
          j.at("n00").get<std::uint64_t>(), j.at("n10").get<std::uint64_t>()};
}

json point_json(const PointMass& p) {
  return {{"mass", p.mass},
          {"triple", triple_json(p.triple)},
          {"relative_risk", opt(p.relative_risk)},
          {"risk_difference", p.risk_difference}};
}
PointMass point_from(const json& j) {
  return {j.at("mass").get<double>(), triple_from(j.at("triple")),
          get_opt<double>(j, "relative_risk"), j.at("risk_difference").get<double>()};
}

json residuals_json(const std::vector<ResidualEntry>& rs) {
  json out = json::array();
  for (const auto& r : rs) {
    out.push_back({{"row", r.row},
                   {"activity", r.activity},
                   {"target", r.target},
                   {"lo", r.lo},
                   {"hi", opt(r.hi)}});
  }
  return out;
}
std::vector<ResidualEntry> residuals_from(const json& j) {
  std::vector<ResidualEntry> out;
  for (const auto& r : j) {
    out.push_back({r.at("row").get<std::string>(), r.at("activity").get<double>(),
                   r.at("target").get<double>(), r.at("lo").get<double>(), get_opt<double>(r, "hi")});
  }
  return out;
}

void check_schema(const json& j, const char* kind) {
  if (!j.is_object() || !j.contains("schema_version")) {
    throw ParseError(0, "not a report: missing schema_version");
  }
  if (j.at("schema_version").get<int>() != kSchemaVersion) {
    throw ParseError(0, "unsupported schema_version");
  }
  if (j.at("kind").get<std::string>() != kind && std::string(kind) != "any") {
    throw ParseError(0, "expected a '" + std::string(kind) + "' document");
  }
}

}  // namespace

json to_json(const RunReport& r) {
  json input = {{"n", r.input.n},
                {"exposure_marginal", r.input.exposure_marginal},
                {"outcome_marginal", r.input.outcome_marginal},
                {"odds_ratio", opt(r.input.odds_ratio)},
                {"categories", json::array()}};
  for (const auto& c : r.input.categories) {
    input["categories"].push_back({{"label", c.label}, {"counts", counts_json(c.counts)}});
  }
  json solution = json::array();
  for (const auto& cat : r.solution) {
    json clusters = json::array(), dust = json::array();
    for (const auto& p : cat.clusters) clusters.push_back(point_json(p));
    for (const auto& p : cat.dust) dust.push_back(point_json(p));
    solution.push_back({{"label", cat.label}, {"clusters", clusters}, {"dust", dust}});
  }
  json out = {{"schema_version", r.schema_version},
              {"kind", r.kind},
              {"config", config_json(r.config)},
              {"input", input},
              {"solution_kind", r.solution_kind},
              {"status", r.status},
              {"solution", solution},
              {"achieved_entropy", r.achieved_entropy},
              {"closed_form_entropy", r.closed_form_entropy},
              {"entropy_upper_bound", r.entropy_upper_bound},
              {"lp", nullptr},
              {"bootstrap", nullptr}};
  if (r.lp) {
    json stages = json::array();
    for (const auto& s : r.lp->stages) {
      stages.push_back({{"feasibility_tol", s.feasibility_tol},
                        {"status", s.status},
                        {"iterations", s.iterations},
                        {"objective", s.objective}});
    }
    out["lp"] = {{"stages", stages},
                 {"reached_tightest", r.lp->reached_tightest},
                 {"iterations", r.lp->iterations},
                 {"atom_count", r.lp->atom_count},
                 {"atom_mass", r.lp->atom_mass},
                 {"centroid_entropy", r.lp->centroid_entropy},
                 {"merge_entropy_bound", r.lp->merge_entropy_bound},
                 {"residuals", residuals_json(r.lp->residuals)},
                 {"merged_residuals", residuals_json(r.lp->merged_residuals)}};
  }
  if (r.bootstrap) {
    out["bootstrap"] = {{"replicates", r.bootstrap->replicates},
                        {"dropped", r.bootstrap->dropped},
                        {"replicate_status", r.bootstrap->replicate_status}};
  }
  if (r.elapsed_seconds) out["elapsed_seconds"] = *r.elapsed_seconds;
  round_floats(out);
  return out;
}

RunReport report_from_json(const json& j) {
  check_schema(j, "any");
  RunReport r;
  r.schema_version = j.at("schema_version").get<int>();
  r.kind = j.at("kind").get<std::string>();
  if (r.kind != "estimate" && r.kind != "bootstrap") {
    throw ParseError(0, "not an estimate or bootstrap report");
  }
  r.config = config_from(j.at("config"));
  const auto& in = j.at("input");
  r.input.n = in.at("n").get<std::uint64_t>();
  r.input.exposure_marginal = in.at("exposure_marginal").get<double>();
  r.input.outcome_marginal = in.at("outcome_marginal").get<double>();
  r.input.odds_ratio = get_opt<double>(in, "odds_ratio");
  for (const auto& c : in.at("categories")) {
    r.input.categories.push_back({c.at("label").get<std::string>(), counts_from(c.at("counts"))});
  }
  r.solution_kind = j.at("solution_kind").get<std::string>();
  r.status = j.at("status").get<std::string>();
  for (const auto& cat : j.at("solution")) {
    CategoryMixture m;
    m.label = cat.at("label").get<std::string>();
    for (const auto& p : cat.at("clusters")) m.clusters.push_back(point_from(p));
    for (const auto& p : cat.at("dust")) m.dust.push_back(point_from(p));
    r.solution.push_back(std::move(m));
  }
  r.achieved_entropy = j.at("achieved_entropy").get<double>();
  r.closed_form_entropy = j.at("closed_form_entropy").get<double>();
  r.entropy_upper_bound = j.at("entropy_upper_bound").get<double>();
  if (!j.at("lp").is_null()) {
    const auto& l = j.at("lp");
    LpDetails d;
    for (const auto& s : l.at("stages")) {
      d.stages.push_back({s.at("feasibility_tol").get<double>(), s.at("status").get<std::string>(),
                          s.at("iterations").get<std::size_t>(), s.at("objective").get<double>()});
    }
    d.reached_tightest = l.at("reached_tightest").get<bool>();
    d.iterations = l.at("iterations").get<std::size_t>();
    d.atom_count = l.at("atom_count").get<std::size_t>();
    d.atom_mass = l.at("atom_mass").get<double>();
    d.centroid_entropy = l.at("centroid_entropy").get<double>();
    d.merge_entropy_bound = l.at("merge_entropy_bound").get<double>();
    d.residuals = residuals_from(l.at("residuals"));
    d.merged_residuals = residuals_from(l.at("merged_residuals"));
    r.lp = std::move(d);
  }
  if (!j.at("bootstrap").is_null()) {
    const auto& b = j.at("bootstrap");
    r.bootstrap = BootstrapDetails{b.at("replicates").get<std::size_t>(),
                                   b.at("dropped").get<std::size_t>(),
                                   b.at("replicate_status").get<std::vector<std::string>>()};
  }
  r.elapsed_seconds = get_opt<double>(j, "elapsed_seconds");
  return r;
}

json to_json(const ConvergenceSeries& s) {
  json points = json::array();
  for (const auto& p : s.points) {
    points.push_back({{"m", p.m},
                      {"status", p.status},
                      {"entropy", p.entropy},
                      {"gap", p.gap},
                      {"iterations", p.iterations}});
  }
  json out = {{"schema_version", s.schema_version},
              {"kind", s.kind},
              {"config", config_json(s.config)},
              {"reference_entropy", s.reference_entropy},
              {"reference_upper_bound", s.reference_upper_bound},
              {"points", points}};
  round_floats(out);
  return out;
}

ConvergenceSeries series_from_json(const json& j) {
  check_schema(j, "convergence");
  ConvergenceSeries s;
  s.config = config_from(j.at("config"));
  s.reference_entropy = j.at("reference_entropy").get<double>();
  s.reference_upper_bound = j.at("reference_upper_bound").get<double>();
  for (const auto& p : j.at("points")) {
    s.points.push_back({p.at("m").get<int>(), p.at("status").get<std::string>(),
                        p.at("entropy").get<double>(), p.at("gap").get<double>(),
                        p.at("iterations").get<std::size_t>()});
  }
  return s;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace maxent::cli
