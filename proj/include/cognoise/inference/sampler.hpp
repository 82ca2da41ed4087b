#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "cognoise/inference/draws.hpp"
#include "cognoise/inference/nuts.hpp"
#include "cognoise/inference/posterior.hpp"

namespace cognoise::infer {

namespace detail {
/// NUTS-facing adapter: never throws on wild positions; a non-finite value or
/// gradient becomes -inf so the trajectory is rejected as divergent.
class PosteriorTarget {
 public:
  explicit PosteriorTarget(const Posterior& post) : post_(post) {}
  std::size_t dim() const { return post_.dim(); }
  double logp_grad(const std::vector<double>& x, std::vector<double>& grad) const {
    double v;
    try {
      v = post_.value_and_grad(x, grad, /*strict=*/false);
    } catch (const std::exception&) {
      return -std::numeric_limits<double>::infinity();
    }
    if (!std::isfinite(v)) return -std::numeric_limits<double>::infinity();
    for (double g : grad) {
      if (!std::isfinite(g)) return -std::numeric_limits<double>::infinity();
    }
    return v;
  }

 private:
  const Posterior& post_;
};
}  // namespace detail

/// Gradient-guided MCMC over the model posterior. Returns constrained-scale
/// draws; divergence rates above 10% are flagged in meta, never silently.
inline PosteriorDraws sample(const Posterior& post, const NutsConfig& cfg) {
  const detail::PosteriorTarget target(post);
  const NutsResult raw = run_nuts(target, cfg);

  PosteriorDraws out;
  out.names = post.constrained_names();
  out.n_chains = static_cast<std::size_t>(cfg.chains);
  out.n_draws = static_cast<std::size_t>(cfg.draws);
  out.values.resize(out.n_chains * out.n_draws * out.names.size());
  std::size_t at = 0;
  for (std::size_t c = 0; c < out.n_chains; ++c) {
    for (std::size_t d = 0; d < out.n_draws; ++d) {
      const auto con = post.constrained(raw.draws[c][d]);
      for (double v : con) out.values[at++] = v;
    }
  }

  int total_div = 0;
  nlohmann::json div = nlohmann::json::array();
  nlohmann::json eps = nlohmann::json::array();
  nlohmann::json acc = nlohmann::json::array();
  nlohmann::json depth_hits = nlohmann::json::array();
  for (const auto& s : raw.stats) {
    total_div += s.divergences;
    div.push_back(s.divergences);
    eps.push_back(s.step_size);
    acc.push_back(s.mean_accept);
    depth_hits.push_back(s.max_depth_hits);
  }
  const double div_rate =
      static_cast<double>(total_div) / static_cast<double>(cfg.chains * cfg.draws);
  out.meta = {{"variant", variant_name(post.spec().variant)},
              {"group_specific_noise", post.spec().group_specific_noise},
              {"seed", cfg.seed},
              {"chains", cfg.chains},
              {"warmup", cfg.warmup},
              {"draws", cfg.draws},
              {"target_accept", cfg.target_accept},
              {"max_depth", cfg.max_depth},
              {"divergences", div},
              {"divergence_rate", div_rate},
              {"high_divergence_warning", div_rate > 0.10},
              {"step_size", eps},
              {"mean_accept", acc},
              {"max_depth_hits", depth_hits}};
  return out;
}

}  // namespace cognoise::infer
