#include "maxent/postprocess.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>

namespace maxent::postprocess {

namespace {

bool neighbors(const grid::Cell& a, const grid::Cell& b, const ClusterOptions& opt) {
  const int dj = std::abs(a.j - b.j), dk = std::abs(a.k - b.k), dl = std::abs(a.l - b.l);
  if (opt.adjacency == Adjacency::kVertex) {
    return std::max({dj, dk, dl}) <= opt.reach;
  }
  const int moved = (dj > 0) + (dk > 0) + (dl > 0);
  return moved <= 1 && dj + dk + dl <= opt.reach;
}

std::size_t find_root(std::vector<std::size_t>& parent, std::size_t i) {
  while (parent[i] != i) {
    parent[i] = parent[parent[i]];
    i = parent[i];
  }
  return i;
}

double logit_magnitude(double x) { return std::abs(std::log((1.0 - x) / x)); }

// Largest |dH/d axis| over the box [lo, hi] on each axis:
//   dH/dpi = logit(pi) - h(r0) + h(r1), |.| <= max|logit(pi)| + log 2
//   dH/dr0 = (1 - pi) logit(r0),        dH/dr1 = pi logit(r1)
// logit is monotone, so its extremes sit on the box faces.
Triple gradient_bound(const Triple& lo, const Triple& hi) {
  return {std::max(logit_magnitude(lo.pi), logit_magnitude(hi.pi)) + std::log(2.0),
          std::max(logit_magnitude(lo.r0), logit_magnitude(hi.r0)),
          std::max(logit_magnitude(lo.r1), logit_magnitude(hi.r1))};
}

}  // namespace

double Cluster::relative_risk() const {
  return centroid.r0 > 0.0 ? centroid.r1 / centroid.r0 : std::numeric_limits<double>::quiet_NaN();
}

double MixtureSolution::total_mass() const {
  double s = 0.0;
  for (const auto& cat : categories) {
    for (const auto& c : cat.clusters) s += c.mass;
    for (const auto& c : cat.dust) s += c.mass;
  }
  return s;
}

std::size_t MixtureSolution::cluster_count() const {
  std::size_t n = 0;
  for (const auto& cat : categories) n += cat.clusters.size();
  return n;
}

MixtureSolution cluster_atoms(const grid::WeightedAtomSet& atoms,
                              const grid::DiscretizedProblem& problem,
                              const ClusterOptions& options) {
  MixtureSolution out;
  out.categories.resize(problem.category_count());
  out.raw_entropy = atoms.achieved_entropy;

  const auto& list = atoms.atoms;
  std::vector<std::size_t> parent(list.size());
  std::iota(parent.begin(), parent.end(), 0);
  for (std::size_t a = 0; a < list.size(); ++a) {
    for (std::size_t b = a + 1; b < list.size(); ++b) {
      if (list[a].category != list[b].category) continue;
      if (!neighbors(list[a].cell, list[b].cell, options)) continue;
      const std::size_t ra = find_root(parent, a), rb = find_root(parent, b);
      if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
    }
  }

  // Components keyed by root, in order of first member.
  std::vector<std::vector<std::size_t>> members;
  std::vector<std::size_t> slot(list.size(), std::numeric_limits<std::size_t>::max());
  for (std::size_t a = 0; a < list.size(); ++a) {
    const std::size_t r = find_root(parent, a);
    if (slot[r] == std::numeric_limits<std::size_t>::max()) {
      slot[r] = members.size();
      members.emplace_back();
    }
    members[slot[r]].push_back(a);
  }

  std::vector<grid::Atom> collapsed;
  for (const auto& group : members) {
    Cluster cl;
    cl.category = list[group.front()].category;
    double spi = 0.0, sr0 = 0.0, sr1 = 0.0;
    Triple lo{1.0, 1.0, 1.0}, hi{0.0, 0.0, 0.0};
    for (std::size_t a : group) {
      const auto& at = list[a];
      cl.mass += at.mass;
      spi += at.mass * at.center.pi;
      sr0 += at.mass * at.center.r0;
      sr1 += at.mass * at.center.r1;
      cl.cells.push_back(at.cell);
      lo = {std::min(lo.pi, at.center.pi), std::min(lo.r0, at.center.r0), std::min(lo.r1, at.center.r1)};
      hi = {std::max(hi.pi, at.center.pi), std::max(hi.r0, at.center.r0), std::max(hi.r1, at.center.r1)};
    }
    if (cl.mass > 0.0) cl.centroid = {spi / cl.mass, sr0 / cl.mass, sr1 / cl.mass};
    // Centroid can leave the hull by rounding; clamp it back.
    cl.centroid = {std::clamp(cl.centroid.pi, lo.pi, hi.pi), std::clamp(cl.centroid.r0, lo.r0, hi.r0),
                   std::clamp(cl.centroid.r1, lo.r1, hi.r1)};

    const Triple g = gradient_bound(lo, hi);
    for (std::size_t a : group) {
      const auto& c = list[a].center;
      out.merge_entropy_bound += list[a].mass * (g.pi * std::abs(c.pi - cl.centroid.pi) +
                                                 g.r0 * std::abs(c.r0 - cl.centroid.r0) +
                                                 g.r1 * std::abs(c.r1 - cl.centroid.r1));
    }
    out.centroid_entropy += cl.mass * entropy(cl.centroid);
    collapsed.push_back({cl.category, cl.cells.front(), cl.centroid, cl.mass});

    auto& bucket = out.categories[cl.category];
    (cl.mass < options.dust_mass ? bucket.dust : bucket.clusters).push_back(std::move(cl));
  }
  for (auto& cat : out.categories) {
    auto heavier = [](const Cluster& a, const Cluster& b) { return a.mass > b.mass; };
    std::stable_sort(cat.clusters.begin(), cat.clusters.end(), heavier);
    std::stable_sort(cat.dust.begin(), cat.dust.end(), heavier);
  }
  out.residuals = grid::residuals_for(problem, collapsed);
  return out;
}

EffectSummary effect_summary(const Triple& t) {
  EffectSummary s;
  if (t.r0 > 0.0) s.relative_risk = t.r1 / t.r0;
  s.risk_difference = t.r1 - t.r0;
  return s;
}

std::vector<std::vector<EffectSummary>> effect_summaries(const MixtureSolution& mixture) {
  std::vector<std::vector<EffectSummary>> out;
  for (const auto& cat : mixture.categories) {
    auto& row = out.emplace_back();
    for (const auto& c : cat.clusters) row.push_back(effect_summary(c.centroid));
  }
  return out;
}

}  // namespace maxent::postprocess
