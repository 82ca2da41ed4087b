#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <numeric>
#include <string>
#include <vector>

#include "cognoise/errors.hpp"
#include "cognoise/hierarchy.hpp"
#include "cognoise/inference/draws.hpp"
#include "cognoise/inference/model_spec.hpp"
#include "cognoise/math.hpp"
#include "cognoise/model.hpp"
#include "cognoise/rng.hpp"

namespace cognoise::infer {

/// Rank-normalized split R-hat (bulk). Chains are split in half, all draws are
/// rank-normalized jointly, and the classic between/within statistic is taken
/// on the normalized values. Degenerate (constant) input yields +inf.
inline double rhat(const std::vector<std::vector<double>>& chains) {
  if (chains.size() < 2) throw std::invalid_argument("rhat: need >= 2 chains");
  for (const auto& c : chains) {
    if (c.size() < 4) throw std::invalid_argument("rhat: need >= 4 draws per chain");
  }
  // split each chain in half
  std::vector<std::vector<double>> seq;
  for (const auto& c : chains) {
    const std::size_t half = c.size() / 2;
    seq.emplace_back(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(half));
    seq.emplace_back(c.end() - static_cast<std::ptrdiff_t>(half), c.end());
  }
  const std::size_t m = seq.size();
  const std::size_t n = seq[0].size();
  const std::size_t total = m * n;

  // joint average ranks (ties averaged), then normal scores
  struct Item {
    double v;
    std::size_t seq_idx;
    std::size_t pos;
  };
  std::vector<Item> items;
  items.reserve(total);
  for (std::size_t s = 0; s < m; ++s) {
    for (std::size_t i = 0; i < n; ++i) items.push_back({seq[s][i], s, i});
  }
  std::sort(items.begin(), items.end(), [](const Item& a, const Item& b) { return a.v < b.v; });
  std::vector<std::vector<double>> z(m, std::vector<double>(n));
  std::size_t i = 0;
  bool any_distinct = false;
  while (i < total) {
    std::size_t j = i;
    while (j < total && items[j].v == items[i].v) ++j;
    const double avg_rank = 0.5 * static_cast<double>(i + 1 + j);  // mean of ranks i+1..j
    const double u = (avg_rank - 0.375) / (static_cast<double>(total) + 0.25);
    const double score = math::norm_ppf(u);
    for (std::size_t t = i; t < j; ++t) z[items[t].seq_idx][items[t].pos] = score;
    if (j - i < total) any_distinct = true;
    i = j;
  }
  if (!any_distinct) return std::numeric_limits<double>::infinity();

  double w = 0.0;
  double var_of_means = 0.0;
  std::vector<double> means(m);
  for (std::size_t s = 0; s < m; ++s) {
    math::Welford acc;
    for (double v : z[s]) acc.add(v);
    means[s] = acc.mean();
    w += acc.variance();
  }
  w /= static_cast<double>(m);
  math::Welford macc;
  for (double v : means) macc.add(v);
  var_of_means = macc.variance();
  const double b = static_cast<double>(n) * var_of_means;
  if (w <= 0.0) return std::numeric_limits<double>::infinity();
  const double var_plus =
      (static_cast<double>(n) - 1.0) / static_cast<double>(n) * w + b / static_cast<double>(n);
  return std::sqrt(var_plus / w);
}

inline double rhat(const PosteriorDraws& draws, std::size_t dim) {
  return rhat(draws.per_chain(dim));
}

/// Shortest contiguous interval over the sorted draws containing
/// ceil(mass * n) points; ties break to the lowest start.
inline std::pair<double, double> hdi(std::vector<double> draws, double mass = 0.95) {
  if (!(mass > 0.0 && mass < 1.0)) throw std::invalid_argument("hdi: mass must be in (0,1)");
  if (draws.size() < 20) throw std::invalid_argument("hdi: need >= 20 draws");
  std::sort(draws.begin(), draws.end());
  const std::size_t n = draws.size();
  const auto window =
      static_cast<std::size_t>(std::ceil(mass * static_cast<double>(n)));
  const std::size_t w = std::min(std::max<std::size_t>(window, 1), n);
  std::size_t best = 0;
  double best_width = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s + w <= n; ++s) {
    const double width = draws[s + w - 1] - draws[s];
    if (width < best_width) {
      best_width = width;
      best = s;
    }
  }
  return {draws[best], draws[best + w - 1]};
}

struct SummaryRow {
  std::string name;
  double mean = 0.0;
  double median = 0.0;
  double sd = 0.0;
  double hdi_lo = 0.0;
  double hdi_hi = 0.0;
  double rhat = std::numeric_limits<double>::quiet_NaN();
};

inline SummaryRow summarize_values(const std::string& name, const std::vector<double>& pooled,
                                   const std::vector<std::vector<double>>* chains) {
  SummaryRow row;
  row.name = name;
  math::Welford acc;
  for (double v : pooled) acc.add(v);
  row.mean = acc.mean();
  row.sd = acc.sd();
  std::vector<double> sorted = pooled;
  std::sort(sorted.begin(), sorted.end());
  row.median = math::median_sorted(sorted);
  if (sorted.size() >= 20 && sorted.front() < sorted.back()) {
    const auto h = hdi(sorted, 0.95);
    row.hdi_lo = h.first;
    row.hdi_hi = h.second;
  } else {
    row.hdi_lo = sorted.front();
    row.hdi_hi = sorted.back();
  }
  if (chains != nullptr && chains->size() >= 2 && (*chains)[0].size() >= 4) {
    row.rhat = rhat(*chains);
  }
  return row;
}

/// Population-level quantities derived per draw for reports. Group rows follow
/// two labeled conventions: *_med = exp(mu) (median of the log-normal
/// hyper-distribution) and the unsuffixed row = exp(mu + tau^2/2) (its mean),
/// which is the convention that reproduces the published evidence-weight and
/// threshold identities. beta is reported both as transform-of-mean and as
/// mean-of-transform.
class DerivedValues {
 public:
  DerivedValues(const ModelSpec& spec, const PosteriorDraws& draws) : spec_(spec) {
    slots_ = spec.slots();
    for (const auto& s : slots_) {
      SlotIdx idx;
      idx.grouped = spec.slot_group_specific(s);
      if (idx.grouped) {
        idx.mu_b = draws.require("mu_" + s.name + "_B");
        idx.mu_t = draws.require("mu_" + s.name + "_T");
      } else {
        idx.mu_b = draws.require("mu_" + s.name);
        idx.mu_t = idx.mu_b;
      }
      idx.tau = draws.require("tau_" + s.name);
      slot_idx_.push_back(idx);
    }
    noise_slot_ = find_slot_({"nu_so", "nu_ab", "nu_soa"});
    prior_slot_ = find_slot_({"mu_r", "mu_rp"});
    b_slot_ = find_slot_({"b"});
  }

  /// Names in emission order.
  std::vector<std::string> names() const {
    std::vector<std::string> out;
    for (std::size_t s = 0; s < slots_.size(); ++s) {
      const auto& name = slots_[s].name;
      if (slot_idx_[s].grouped) {
        out.push_back(name + "_B");
        out.push_back(name + "_B_med");
        out.push_back(name + "_T");
        out.push_back(name + "_T_med");
      } else {
        out.push_back(name + "_pop");
        out.push_back(name + "_pop_med");
      }
    }
    if (b_slot_ >= 0) {
      out.push_back("beta");
      out.push_back("beta_med");
      out.push_back("beta_mot");
    }
    if (noise_slot_ >= 0) {
      append_grouped_(out, "alpha");
      if (prior_slot_ >= 0) append_grouped_(out, "delta");
    }
    return out;
  }

  /// Values for one draw, aligned with names().
  std::vector<double> compute(const PosteriorDraws& draws, std::size_t chain,
                              std::size_t draw) const {
    std::vector<double> out;
    auto hypermean = [&](std::size_t s, bool treat) {
      const auto& idx = slot_idx_[s];
      const double mu = draws.value(chain, draw, treat ? idx.mu_t : idx.mu_b);
      const double tau = draws.value(chain, draw, idx.tau);
      return std::exp(mu + 0.5 * tau * tau);
    };
    auto hypermedian = [&](std::size_t s, bool treat) {
      const auto& idx = slot_idx_[s];
      return std::exp(draws.value(chain, draw, treat ? idx.mu_t : idx.mu_b));
    };
    for (std::size_t s = 0; s < slots_.size(); ++s) {
      if (slot_idx_[s].grouped) {
        out.push_back(hypermean(s, false));
        out.push_back(hypermedian(s, false));
        out.push_back(hypermean(s, true));
        out.push_back(hypermedian(s, true));
      } else {
        out.push_back(hypermean(s, false));
        out.push_back(hypermedian(s, false));
      }
    }
    if (b_slot_ >= 0) {
      const auto sb = static_cast<std::size_t>(b_slot_);
      const double bm = hypermean(sb, false);
      const double bmed = hypermedian(sb, false);
      out.push_back(bm / (1.0 + bm));
      out.push_back(bmed / (1.0 + bmed));
      const auto& idx = slot_idx_[sb];
      out.push_back(mean_of_beta_(draws.value(chain, draw, idx.mu_b),
                                  draws.value(chain, draw, idx.tau)));
    }
    if (noise_slot_ >= 0) {
      const auto sn = static_cast<std::size_t>(noise_slot_);
      const bool grouped = slot_idx_[sn].grouped;
      const double nu_b_group = hypermean(sn, false);
      const double alpha_b = model::evidence_weight(nu_b_group, 1.0);
      out.push_back(alpha_b);
      double alpha_t = alpha_b;
      if (grouped) {
        alpha_t = model::evidence_weight(hypermean(sn, true), 1.0);
        out.push_back(alpha_t);
      }
      if (prior_slot_ >= 0) {
        const double mu_r = hypermean(static_cast<std::size_t>(prior_slot_), false);
        out.push_back(model::prior_threshold(mu_r, alpha_b));
        if (grouped) out.push_back(model::prior_threshold(mu_r, alpha_t));
      }
    }
    return out;
  }

 private:
  struct SlotIdx {
    bool grouped = false;
    std::size_t mu_b = 0, mu_t = 0, tau = 0;
  };

  int find_slot_(const std::vector<std::string>& candidates) const {
    for (const auto& c : candidates) {
      for (std::size_t s = 0; s < slots_.size(); ++s) {
        if (slots_[s].name == c) return static_cast<int>(s);
      }
    }
    return -1;
  }

  void append_grouped_(std::vector<std::string>& out, const std::string& base) const {
    if (slot_idx_[static_cast<std::size_t>(noise_slot_)].grouped) {
      out.push_back(base + "_B");
      out.push_back(base + "_T");
    } else {
      out.push_back(base + "_pop");
    }
  }

  /// E[b/(1+b)] for ln b ~ N(mu, tau^2) via composite Simpson over +-8 sd.
  static double mean_of_beta_(double mu, double tau) {
    if (tau < 1e-12) return math::logistic(mu);
    const int n = 200;  // intervals, even
    const double lo = -8.0, hi = 8.0;
    const double h = (hi - lo) / n;
    double sum = 0.0;
    for (int i = 0; i <= n; ++i) {
      const double zv = lo + h * i;
      const double f = math::logistic(mu + tau * zv) * math::norm_pdf(zv);
      const double wgt = (i == 0 || i == n) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
      sum += wgt * f;
    }
    return sum * h / 3.0;
  }

  ModelSpec spec_;
  std::vector<SlotInfo> slots_;
  std::vector<SlotIdx> slot_idx_;
  int noise_slot_ = -1;
  int prior_slot_ = -1;
  int b_slot_ = -1;
};

/// Summary table: raw dimensions first (means, scales, correlations, per-
/// participant parameters), then the derived population rows.
inline std::vector<SummaryRow> summarize(const PosteriorDraws& draws, const ModelSpec* spec = nullptr) {
  std::vector<SummaryRow> rows;
  for (std::size_t k = 0; k < draws.n_dims(); ++k) {
    const auto chains = draws.per_chain(k);
    rows.push_back(summarize_values(draws.names[k], draws.column(k), &chains));
  }
  if (spec != nullptr) {
    const DerivedValues derived(*spec, draws);
    const auto names = derived.names();
    std::vector<std::vector<std::vector<double>>> per_chain(
        names.size(), std::vector<std::vector<double>>(draws.n_chains));
    for (std::size_t c = 0; c < draws.n_chains; ++c) {
      for (std::size_t d = 0; d < draws.n_draws; ++d) {
        const auto vals = derived.compute(draws, c, d);
        for (std::size_t i = 0; i < names.size(); ++i) per_chain[i][c].push_back(vals[i]);
      }
    }
    for (std::size_t i = 0; i < names.size(); ++i) {
      std::vector<double> pooled;
      for (const auto& c : per_chain[i]) pooled.insert(pooled.end(), c.begin(), c.end());
      rows.push_back(summarize_values(names[i], pooled, &per_chain[i]));
    }
  }
  return rows;
}

/// Per-draw named lookup spanning raw and derived quantities.
class DrawView {
 public:
  DrawView(const PosteriorDraws& draws, const ModelSpec* spec) : draws_(draws) {
    if (spec != nullptr) {
      derived_ = std::make_shared<DerivedValues>(*spec, draws);
      derived_names_ = derived_->names();
    }
  }

  double lookup(const std::string& name, std::size_t chain, std::size_t draw) const {
    const int raw = draws_.index_of(name);
    if (raw >= 0) return draws_.value(chain, draw, static_cast<std::size_t>(raw));
    for (std::size_t i = 0; i < derived_names_.size(); ++i) {
      if (derived_names_[i] == name) {
        return derived_->compute(draws_, chain, draw)[i];
      }
    }
    throw std::invalid_argument("no such parameter: " + name);
  }

  bool has(const std::string& name) const {
    if (draws_.index_of(name) >= 0) return true;
    for (const auto& n : derived_names_) {
      if (n == name) return true;
    }
    return false;
  }

 private:
  const PosteriorDraws& draws_;
  std::shared_ptr<DerivedValues> derived_;
  std::vector<std::string> derived_names_;
};

/// Fraction of joint draws satisfying a predicate over named parameters.
inline double prob_statement(const PosteriorDraws& draws, const ModelSpec* spec,
                             const std::function<bool(const std::function<double(const std::string&)>&)>& pred) {
  const DrawView view(draws, spec);
  std::size_t hits = 0;
  for (std::size_t c = 0; c < draws.n_chains; ++c) {
    for (std::size_t d = 0; d < draws.n_draws; ++d) {
      auto get = [&](const std::string& name) { return view.lookup(name, c, d); };
      if (pred(get)) ++hits;
    }
  }
  return static_cast<double>(hits) / static_cast<double>(draws.n_chains * draws.n_draws);
}

struct ParsedStatement {
  std::string lhs;
  char op = '>';
  std::string rhs;       // parameter name, or empty when numeric
  double rhs_value = 0;
  bool rhs_is_number = false;
};

inline ParsedStatement parse_statement(const std::string& s) {
  const auto pos = s.find_first_of("<>");
  if (pos == std::string::npos || pos == 0 || pos + 1 >= s.size()) {
    throw config_error("cannot parse probability statement '" + s + "' (expected lhs<rhs or lhs>rhs)");
  }
  auto trim = [](std::string v) {
    const auto b = v.find_first_not_of(" \t");
    const auto e = v.find_last_not_of(" \t");
    return b == std::string::npos ? std::string() : v.substr(b, e - b + 1);
  };
  ParsedStatement p;
  p.lhs = trim(s.substr(0, pos));
  p.op = s[pos];
  p.rhs = trim(s.substr(pos + 1));
  try {
    std::size_t used = 0;
    p.rhs_value = std::stod(p.rhs, &used);
    p.rhs_is_number = used == p.rhs.size();
  } catch (...) {
    p.rhs_is_number = false;
  }
  return p;
}

inline double prob_statement(const PosteriorDraws& draws, const ModelSpec* spec,
                             const std::string& statement) {
  const ParsedStatement p = parse_statement(statement);
  return prob_statement(draws, spec, [&](const std::function<double(const std::string&)>& get) {
    const double lhs = get(p.lhs);
    const double rhs = p.rhs_is_number ? p.rhs_value : get(p.rhs);
    return p.op == '>' ? lhs > rhs : lhs < rhs;
  });
}

/// Posterior summaries of the correlation-matrix entries; diagonals are 1 by
/// construction and emitted as exact constants.
inline std::vector<SummaryRow> extract_correlations(const PosteriorDraws& draws) {
  std::vector<SummaryRow> rows;
  for (std::size_t k = 0; k < draws.n_dims(); ++k) {
    if (draws.names[k].rfind("omega_", 0) == 0) {
      const auto chains = draws.per_chain(k);
      rows.push_back(summarize_values(draws.names[k], draws.column(k), &chains));
    }
  }
  return rows;
}

struct PredictivePoint {
  double ratio = 0.0;
  int group = hier::kGroupBaseline;
  double mean = 0.0;
  double hdi_lo = 0.0;
  double hdi_hi = 0.0;
};

/// Population-level predicted choice curve: for each (thinned) draw, a fresh
/// synthetic population is drawn from that draw's hyper-parameters and its
/// mean choice probability is evaluated on the ratio grid; the per-draw curves
/// are then summarized by mean and 95% HDI.
inline std::vector<PredictivePoint> posterior_predictive(
    const PosteriorDraws& draws, const ModelSpec& spec,
    const std::vector<std::pair<std::int64_t, std::int64_t>>& grid, std::size_t n_individuals = 100,
    std::size_t max_draws = 400, std::uint64_t seed = 99) {
  if (grid.empty()) throw std::invalid_argument("posterior_predictive: empty grid");
  const auto slots = spec.slots();
  const std::size_t k = slots.size();
  // hyper dim indices
  std::vector<std::size_t> mu_b_idx(k), mu_t_idx(k), tau_idx(k);
  for (std::size_t s = 0; s < k; ++s) {
    if (spec.slot_group_specific(slots[s])) {
      mu_b_idx[s] = draws.require("mu_" + slots[s].name + "_B");
      mu_t_idx[s] = draws.require("mu_" + slots[s].name + "_T");
    } else {
      mu_b_idx[s] = mu_t_idx[s] = draws.require("mu_" + slots[s].name);
    }
    tau_idx[s] = draws.require("tau_" + slots[s].name);
  }
  std::vector<std::pair<std::size_t, std::size_t>> omega_idx;  // (i, j) j < i
  std::vector<std::size_t> omega_dim;
  for (std::size_t i = 1; i < k; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      omega_idx.emplace_back(i, j);
      omega_dim.push_back(draws.require("omega_" + slots[j].name + "_" + slots[i].name));
    }
  }

  const std::size_t total = draws.n_chains * draws.n_draws;
  const std::size_t stride = std::max<std::size_t>(1, total / std::max<std::size_t>(1, max_draws));
  const rng::Stream root(seed);

  std::vector<std::vector<std::vector<double>>> curves(
      2, std::vector<std::vector<double>>(grid.size()));  // [group][grid] -> per-draw means
  for (std::size_t flat = 0; flat < total; flat += stride) {
    const std::size_t c = flat / draws.n_draws;
    const std::size_t d = flat % draws.n_draws;
    hier::HyperParams hyper;
    hyper.slots.resize(k);
    hyper.tau.resize(k);
    hyper.omega.assign(k * k, 0.0);
    for (std::size_t s = 0; s < k; ++s) {
      hyper.slots[s].name = slots[s].name;
      hyper.slots[s].group_specific = spec.slot_group_specific(slots[s]);
      hyper.slots[s].mu_base = draws.value(c, d, mu_b_idx[s]);
      hyper.slots[s].mu_treat = draws.value(c, d, mu_t_idx[s]);
      hyper.tau[s] = draws.value(c, d, tau_idx[s]);
      hyper.omega[s * k + s] = 1.0;
    }
    for (std::size_t e = 0; e < omega_idx.size(); ++e) {
      const double v = draws.value(c, d, omega_dim[e]);
      hyper.omega[omega_idx[e].first * k + omega_idx[e].second] = v;
      hyper.omega[omega_idx[e].second * k + omega_idx[e].first] = v;
    }
    for (int group : {hier::kGroupBaseline, hier::kGroupTreatment}) {
      const auto pop = hier::draw_participants(hyper, n_individuals, group,
                                               root.derive("ppc", flat, group), 0);
      std::vector<double> acc(grid.size(), 0.0);
      for (const auto& participant : pop) {
        if (spec.uses_altruism_records() && spec.variant != Variant::random_utility) {
          const auto params = sim::altruism_params(hyper, participant);
          for (std::size_t gi = 0; gi < grid.size(); ++gi) {
            acc[gi] += model::prob_self(params, grid[gi].first, grid[gi].second);
          }
        } else if (spec.variant == Variant::random_utility) {
          const double b = participant.theta[1];
          const model::RandomUtilityParams params{b / (1.0 + b), participant.theta[0]};
          for (std::size_t gi = 0; gi < grid.size(); ++gi) {
            acc[gi] += model::prob_self_random_utility(params, grid[gi].first, grid[gi].second);
          }
        } else {
          const auto params = sim::number_params(hyper, participant);
          for (std::size_t gi = 0; gi < grid.size(); ++gi) {
            acc[gi] += model::prob_A(params, grid[gi].first, grid[gi].second);
          }
        }
      }
      for (std::size_t gi = 0; gi < grid.size(); ++gi) {
        curves[static_cast<std::size_t>(group)][gi].push_back(
            acc[gi] / static_cast<double>(n_individuals));
      }
    }
  }

  std::vector<PredictivePoint> out;
  for (int group : {hier::kGroupBaseline, hier::kGroupTreatment}) {
    for (std::size_t gi = 0; gi < grid.size(); ++gi) {
      const auto& vals = curves[static_cast<std::size_t>(group)][gi];
      PredictivePoint pt;
      pt.ratio = static_cast<double>(grid[gi].first) / static_cast<double>(grid[gi].second);
      pt.group = group;
      pt.mean = math::mean(vals);
      if (vals.size() >= 20) {
        const auto h = hdi(vals, 0.95);
        pt.hdi_lo = h.first;
        pt.hdi_hi = h.second;
      } else {
        auto mm = std::minmax_element(vals.begin(), vals.end());
        pt.hdi_lo = *mm.first;
        pt.hdi_hi = *mm.second;
      }
      out.push_back(pt);
    }
  }
  return out;
}

}  // namespace cognoise::infer
