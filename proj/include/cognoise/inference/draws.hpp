#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace cognoise::infer {

/// Constrained-scale posterior sample store: chains x draws x dimension with
/// per-dimension names and sampler metadata.
struct PosteriorDraws {
  std::vector<std::string> names;
  std::size_t n_chains = 0;
  std::size_t n_draws = 0;  // per chain
  std::vector<double> values;  // [chain][draw][dim] row-major
  nlohmann::json meta;

  std::size_t n_dims() const { return names.size(); }

  double value(std::size_t chain, std::size_t draw, std::size_t dim) const {
    return values[(chain * n_draws + draw) * names.size() + dim];
  }

  int index_of(const std::string& name) const {
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (names[i] == name) return static_cast<int>(i);
    }
    return -1;
  }

  std::size_t require(const std::string& name) const {
    const int i = index_of(name);
    if (i < 0) throw std::invalid_argument("no such parameter: " + name);
    return static_cast<std::size_t>(i);
  }

  /// All draws of one dimension pooled across chains, chain-major.
  std::vector<double> column(std::size_t dim) const {
    std::vector<double> out;
    out.reserve(n_chains * n_draws);
    for (std::size_t c = 0; c < n_chains; ++c) {
      for (std::size_t d = 0; d < n_draws; ++d) out.push_back(value(c, d, dim));
    }
    return out;
  }

  std::vector<std::vector<double>> per_chain(std::size_t dim) const {
    std::vector<std::vector<double>> out(n_chains);
    for (std::size_t c = 0; c < n_chains; ++c) {
      out[c].reserve(n_draws);
      for (std::size_t d = 0; d < n_draws; ++d) out[c].push_back(value(c, d, dim));
    }
    return out;
  }
};

}  // namespace cognoise::infer
