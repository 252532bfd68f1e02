#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "maxent/cli/plot.hpp"
#include "maxent/cli/report.hpp"
#include "maxent/cli/runs.hpp"
#include "maxent/errors.hpp"

namespace {

using namespace maxent;
using namespace maxent::cli;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInfeasible = 2;

struct Flags {
  RunConfig config;
  std::string mode = "lp";
  std::string adjacency = "vertex";
  std::string tol_schedule;
  std::string m_values;
  std::uint64_t seed = 0;
  std::string report_in;
};

std::vector<double> parse_doubles(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    const double v = std::stod(item, &used);
    if (used != item.size()) throw ParameterError("bad number '" + item + "'");
    out.push_back(v);
  }
  return out;
}

std::vector<int> parse_ints(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    const int v = std::stoi(item, &used);
    if (used != item.size()) throw ParameterError("bad integer '" + item + "'");
    out.push_back(v);
  }
  return out;
}

void add_run_options(CLI::App* app, Flags& f, bool estimate_flags) {
  app->add_option("--input", f.config.input, "CSV table: category,exposure,outcome,count")
      ->required()
      ->check(CLI::ExistingFile);
  app->add_option("--m", f.config.m, "Grid cells per axis")->capture_default_str();
  app->add_option("--epsilon", f.config.epsilon, "Half-width of the relaxed cell constraints")
      ->capture_default_str();
  app->add_option("--tol-schedule", f.tol_schedule,
                  "Comma-separated, strictly decreasing solver feasibility tolerances");
  app->add_flag("--smooth", f.config.smooth, "Add a half count to every cell before solving");
  app->add_option("--json-out", f.config.json_out, "Write the JSON report here instead of stdout");
  app->add_option("--svg-out", f.config.svg_out, "Also write an SVG plot");
  app->add_flag("--timing", f.config.record_timing, "Record elapsed seconds in the report");
  if (estimate_flags) {
    app->add_option("--r2-propensity", f.config.r2_propensity, "Tjur R^2 of the exposure model");
    app->add_option("--r2-prognosis", f.config.r2_prognosis, "Tjur R^2 of the outcome model");
    app->add_option("--adjacency", f.adjacency, "Cluster adjacency: face or vertex")
        ->check(CLI::IsMember({"face", "vertex"}))
        ->capture_default_str();
    app->add_option("--reach", f.config.cluster.reach, "Cluster reach in grid cells")
        ->capture_default_str();
  }
}

void finish_config(Flags& f) {
  f.config.mode = f.mode == "closed-form" ? Mode::kClosedForm : Mode::kLp;
  f.config.cluster.adjacency =
      f.adjacency == "face" ? postprocess::Adjacency::kFace : postprocess::Adjacency::kVertex;
  if (!f.tol_schedule.empty()) f.config.tol_schedule = parse_doubles(f.tol_schedule);
}

void write_json(const nlohmann::json& j, const std::string& path) {
  if (path.empty()) {
    std::cout << dump(j);
  } else {
    write_text_file(path, dump(j));
  }
}

int status_code(const std::string& status) {
  return status == "optimal" ? kExitOk : kExitInfeasible;
}

int emit_report(const RunConfig& config, const RunReport& report) {
  write_json(to_json(report), config.json_out);
  if (!config.svg_out.empty()) emit_plot(report, config.svg_out);
  return status_code(report.status);
}

int run_plot(const Flags& f) {
  std::ifstream in(f.report_in);
  if (!in) throw IoError("cannot open '" + f.report_in + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(0, e.what());
  }
  if (j.value("kind", "") == "convergence") {
    emit_plot(series_from_json(j), f.config.svg_out);
  } else {
    emit_plot(report_from_json(j), f.config.svg_out);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Maximum-entropy mixtures consistent with a 2x2 exposure/outcome table"};
  app.require_subcommand(1);
  Flags f;

  auto* estimate = app.add_subcommand("estimate", "Closed-form or LP estimate");
  add_run_options(estimate, f, true);
  estimate->add_option("--mode", f.mode, "closed-form or lp")
      ->check(CLI::IsMember({"closed-form", "lp"}))
      ->capture_default_str();

  auto* converge = app.add_subcommand("converge", "LP entropy against the closed form over grid sizes");
  add_run_options(converge, f, false);
  converge->add_option("--m-values", f.m_values, "Comma-separated grid sizes (default 25..95 step 5)");

  auto* bootstrap = app.add_subcommand("bootstrap", "Pool LP mixtures over resampled tables");
  add_run_options(bootstrap, f, true);
  bootstrap->add_option("--replicates", f.config.replicates, "Number of resampled tables")->required();
  bootstrap->add_option("--seed", f.seed, "Random seed")->required();

  auto* plot = app.add_subcommand("plot", "Render an SVG from a saved JSON report");
  plot->add_option("--input", f.report_in, "JSON report or convergence series")
      ->required()
      ->check(CLI::ExistingFile);
  plot->add_option("--svg-out", f.config.svg_out, "SVG destination")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    finish_config(f);
    if (estimate->parsed()) {
      const auto result = run_estimate(f.config);
      return emit_report(f.config, result.report);
    }
    if (converge->parsed()) {
      const auto ms = f.m_values.empty() ? default_m_sweep() : parse_ints(f.m_values);
      const auto series = run_convergence(f.config, ms);
      write_json(to_json(series), f.config.json_out);
      if (!f.config.svg_out.empty()) emit_plot(series, f.config.svg_out);
      for (const auto& p : series.points) {
        if (p.status != "optimal") return kExitInfeasible;
      }
      return kExitOk;
    }
    if (bootstrap->parsed()) {
      f.config.seed = f.seed;
      const auto result = run_bootstrap(f.config);
      return emit_report(f.config, result.report);
    }
    return run_plot(f);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  }
}
