#pragma once

// Analytic maximum-entropy solutions for the problems without variance
// constraints, and the bridge between Tjur's R^2 and latent variance.

#include <string>
#include <vector>

#include "maxent/model.hpp"

namespace maxent::closed_form {

struct HomogeneousSolution {
  Triple triple;
  double entropy_per_individual = 0.0;  // nats
};

struct CategorySolution {
  std::string label;
  double weight = 0.0;  // N_c / N
  HomogeneousSolution solution;
};

struct ConditionalHomogeneousSolution {
  std::vector<CategorySolution> categories;

  /// sum_c weight_c * H_c
  double entropy_per_individual() const;
};

/// The single point mass (P(e=1), P(d=1|e=0), P(d=1|e=1)). Every cell must be
/// strictly positive; otherwise throws DegenerateTableError.
HomogeneousSolution solve_homogeneous(const JointOutcomeProbs& probs);

/// solve_homogeneous applied to each category; errors name the category.
ConditionalHomogeneousSolution solve_conditional_homogeneous(const StratifiedTable& table);

/// r2 * P * (1 - P): lower bound on the latent variance implied by a
/// transported Tjur R^2. Throws DomainError when marginal is 0 or 1.
double r2_to_variance_bound(double r2, double marginal);

/// variance / (P (1 - P)). Throws DomainError if variance exceeds P (1 - P).
double theoretical_tjur_r2(double variance, double marginal);

/// Upper bound on the per-individual entropy attainable when every joint cell
/// constraint of `table` (RHS count / N) may move by up to `epsilon`. With
/// epsilon = 0 this is exactly the conditional homogeneous optimum. Uses the
/// concavity of sum_c -sum_i q_ci log(q_ci / M_c) in the joint masses q, so the
/// bound is first-order: F(q*) + epsilon * ||grad F(q*)||_1.
double relaxed_entropy_bound(const StratifiedTable& table, double epsilon);

}  // namespace maxent::closed_form
