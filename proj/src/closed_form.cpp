#include "maxent/closed_form.hpp"

#include <cmath>

#include "maxent/errors.hpp"

namespace maxent::closed_form {

double ConditionalHomogeneousSolution::entropy_per_individual() const {
  double h = 0.0;
  for (const auto& c : categories) h += c.weight * c.solution.entropy_per_individual;
  return h;
}

HomogeneousSolution solve_homogeneous(const JointOutcomeProbs& probs) {
  const double exposed = probs.p11 + probs.p10;
  const double unexposed = probs.p01 + probs.p00;
  if (exposed <= 0.0 || unexposed <= 0.0) {
    throw DegenerateTableError("exposure margin is empty");
  }
  if (probs.p01 <= 0.0 || probs.p11 <= 0.0 || probs.p00 <= 0.0 || probs.p10 <= 0.0) {
    throw DegenerateTableError("table has an empty cell");
  }
  HomogeneousSolution out;
  out.triple = {exposed, probs.p01 / unexposed, probs.p11 / exposed};
  out.entropy_per_individual = entropy(out.triple);
  return out;
}

ConditionalHomogeneousSolution solve_conditional_homogeneous(const StratifiedTable& table) {
  ConditionalHomogeneousSolution out;
  const double n = static_cast<double>(table.total());
  for (std::size_t c = 0; c < table.size(); ++c) {
    const auto& cat = table[c];
    try {
      out.categories.push_back({cat.label, static_cast<double>(cat.counts.total()) / n,
                                solve_homogeneous(joint_probs(table, c))});
    } catch (const DegenerateTableError& e) {
      throw DegenerateTableError("category '" + cat.label + "': " + e.what());
    }
  }
  return out;
}

double r2_to_variance_bound(double r2, double marginal) {
  if (!(r2 >= 0.0 && r2 <= 1.0)) throw DomainError("R^2 must lie in [0,1]");
  if (!(marginal > 0.0 && marginal < 1.0)) throw DomainError("degenerate marginal");
  return r2 * marginal * (1.0 - marginal);
}

double theoretical_tjur_r2(double variance, double marginal) {
  if (!(marginal > 0.0 && marginal < 1.0)) throw DomainError("degenerate marginal");
  if (variance < 0.0) throw DomainError("negative variance");
  const double cap = marginal * (1.0 - marginal);
  // Bernoulli-parameter variance can reach P(1-P) only at the {0,1} two-point law.
  if (variance > cap * (1.0 + 1e-12)) {
    throw DomainError("variance exceeds P(1-P): no distribution on [0,1] has it");
  }
  return variance / cap;
}

double relaxed_entropy_bound(const StratifiedTable& table, double epsilon) {
  if (epsilon < 0.0) throw ParameterError("epsilon must be nonnegative");
  const double n = static_cast<double>(table.total());
  double value = 0.0;
  double slope = 0.0;
  for (const auto& cat : table.categories()) {
    const double mass = static_cast<double>(cat.counts.total()) / n;
    for (auto k : cat.counts.as_array()) {
      const double q = static_cast<double>(k) / n;
      if (q <= 0.0) throw DegenerateTableError("category '" + cat.label + "' has an empty cell");
      const double log_ratio = std::log(q / mass);
      value -= q * log_ratio;
      slope += std::abs(log_ratio);
    }
  }
  return value + epsilon * slope;
}

}  // namespace maxent::closed_form
