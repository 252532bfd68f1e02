#pragma once

// Turns the solver's scattered subcube masses into a short list of point
// masses per category by merging mass that sits in neighboring subcubes.

#include <optional>
#include <vector>

#include "maxent/grid_lp.hpp"

namespace maxent::postprocess {

enum class Adjacency {
  kFace,    // indices differ by at most `reach` along exactly one axis
  kVertex,  // indices differ by at most `reach` along every axis (Chebyshev)
};

struct ClusterOptions {
  Adjacency adjacency = Adjacency::kFace;
  int reach = 1;             // grid steps
  double dust_mass = 1e-4;   // clusters lighter than this are reported as dust
};

struct Cluster {
  std::size_t category = 0;
  double mass = 0.0;
  Triple centroid;
  std::vector<grid::Cell> cells;
  double relative_risk() const;  // NaN when r0 == 0; see effect_summaries
  double risk_difference() const { return centroid.r1 - centroid.r0; }
};

struct CategoryClusters {
  std::vector<Cluster> clusters;  // heaviest first
  std::vector<Cluster> dust;
};

struct MixtureSolution {
  std::vector<CategoryClusters> categories;
  double raw_entropy = 0.0;       // of the atom set
  double centroid_entropy = 0.0;  // of the clusters collapsed to their centroids
  /// Upper bound on raw_entropy - centroid_entropy from the gradient of the
  /// entropy over each cluster's bounding box.
  double merge_entropy_bound = 0.0;
  std::vector<grid::RowResidual> residuals;  // evaluated at the centroids

  double total_mass() const;
  std::size_t cluster_count() const;
};

/// Connected components of occupied subcubes per category. Centroids are
/// mass-weighted means of member centers; residuals are recomputed with every
/// cluster (dust included) collapsed to its centroid.
MixtureSolution cluster_atoms(const grid::WeightedAtomSet& atoms,
                              const grid::DiscretizedProblem& problem,
                              const ClusterOptions& options = {});

struct EffectSummary {
  std::optional<double> relative_risk;  // absent when r0 == 0
  double risk_difference = 0.0;
};

EffectSummary effect_summary(const Triple& t);

/// Per category, per cluster (dust excluded), in cluster order.
std::vector<std::vector<EffectSummary>> effect_summaries(const MixtureSolution& mixture);

}  // namespace maxent::postprocess
