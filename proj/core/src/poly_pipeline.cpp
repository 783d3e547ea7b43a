#include "cfrk/poly_pipeline.hpp"

#include <random>

#include "cfrk/assignment.hpp"
#include "cfrk/embeddings.hpp"
#include "cfrk/tree_dp.hpp"

namespace cfrk {

PolyApproxResult poly_approx_solve(const Instance& inst,
                                   const PolyApproxOptions& opts) {
  PolyApproxResult out;
  std::mt19937_64 master(opts.seed);

  Instance star_inst = inst;
  CliqueStarMetric csm;
  if (!opts.embed_all) {
    out.baseline = kmedian_baseline(inst, opts.swap_size);
    auto [embedded, metric] = clique_star_embed(inst, out.baseline);
    star_inst = std::move(embedded);
    csm = std::move(metric);
  }

  for (int trial = 0; trial < opts.trials; ++trial) {
    std::uint64_t seed = master();
    PolyApproxTrial rec;
    rec.seed = seed;

    Instance tree_inst = [&] {
      if (opts.embed_all) {
        std::vector<int> all(inst.metric->size());
        for (size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
        EmbeddedTree et = frt_tree_embed(all, *inst.metric, seed);
        // The embedded tree carries every point as a leaf; remap instance
        // point ids to the tree's node ids.
        Instance remapped = inst;
        remapped.metric = et.tree;
        auto remap = [&](int p) { return et.leaf_of_point[p]; };
        for (int& c : remapped.clients) c = remap(c);
        for (int& f : remapped.facilities) f = remap(f);
        for (auto& g : remapped.groups)
          for (int& f : g) f = remap(f);
        std::unordered_map<int, long long> caps;
        for (const auto& [f, cap] : inst.capacity) caps[remap(f)] = cap;
        remapped.capacity = std::move(caps);
        std::unordered_map<int, Rational> ws;
        for (const auto& [c, w] : inst.client_weight) ws[remap(c)] = w;
        remapped.client_weight = std::move(ws);
        return remapped;
      }
      return clique_star_to_tree(star_inst, csm, seed);
    }();

    BinarizedTree bt = binarize(tree_inst);
    Instance tree_median = tree_inst;
    tree_median.objective = Objective::median;
    auto tree_sol = dp_solve(bt, tree_median);
    if (!tree_sol) {
      // Feasibility does not depend on the metric; every other trial would
      // fail the same way.
      out.trials.push_back(rec);
      return out;
    }
    rec.tree_cost = tree_sol->cost;

    std::vector<int> centers = tree_sol->centers;
    if (opts.embed_all) {
      // Map tree leaves back to original points.
      std::vector<int> back(tree_inst.metric->size(), -1);
      for (size_t i = 0; i < tree_inst.facilities.size(); ++i)
        back[tree_inst.facilities[i]] = inst.facilities[i];
      for (int& c : centers) c = back[c];
    }
    auto true_sol = optimal_assignment(inst, centers);
    if (!true_sol) {
      out.trials.push_back(rec);
      continue;
    }
    rec.feasible = true;
    rec.true_cost = true_sol->cost;
    if (!out.solution || true_sol->cost < out.solution->cost) {
      out.solution = std::move(true_sol);
      out.best_trial = trial;
    }
    out.trials.push_back(rec);
  }
  return out;
}

}  // namespace cfrk
