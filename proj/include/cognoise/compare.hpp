#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "cognoise/errors.hpp"
#include "cognoise/math.hpp"

namespace cognoise::compare {

/// WAIC decomposition: elpd = lppd - p, with a standard error over records and
/// the per-record elpd contributions retained for paired comparisons.
struct WaicResult {
  double elpd_waic = 0.0;
  double p_waic = 0.0;
  double lppd = 0.0;
  double se = 0.0;
  std::vector<double> pointwise;  // per-record elpd contributions

  std::size_t n_records() const { return pointwise.size(); }
};

/// One-pass WAIC accumulator over draws of pointwise log-likelihood rows.
/// Draw order and chain concatenation order do not affect the result beyond
/// floating-point roundoff of the streaming log-mean-exp.
class StreamingWaic {
 public:
  explicit StreamingWaic(std::size_t n_records)
      : lme_(n_records), var_(n_records) {}

  std::size_t n_records() const { return lme_.size(); }
  std::size_t n_draws() const { return n_draws_; }

  void add_draw(std::span<const double> loglik) {
    if (loglik.size() != lme_.size()) throw data_error("waic: pointwise row size mismatch");
    for (std::size_t i = 0; i < loglik.size(); ++i) {
      if (!std::isfinite(loglik[i])) {
        throw data_error("waic: non-finite log-likelihood at record " + std::to_string(i));
      }
      lme_[i].add(loglik[i]);
      var_[i].add(loglik[i]);
    }
    ++n_draws_;
  }

  WaicResult finalize() const {
    if (n_draws_ < 2) throw data_error("waic: need at least 2 draws");
    WaicResult r;
    r.pointwise.resize(lme_.size());
    for (std::size_t i = 0; i < lme_.size(); ++i) {
      const double lppd_i = lme_[i].value();
      const double p_i = var_[i].variance();
      r.lppd += lppd_i;
      r.p_waic += p_i;
      r.pointwise[i] = lppd_i - p_i;
      r.elpd_waic += r.pointwise[i];
    }
    math::Welford acc;
    for (double v : r.pointwise) acc.add(v);
    r.se = std::sqrt(static_cast<double>(r.pointwise.size()) * acc.variance());
    return r;
  }

 private:
  std::vector<math::OnlineLogMeanExp> lme_;
  std::vector<math::Welford> var_;
  std::size_t n_draws_ = 0;
};

/// WAIC from an in-memory draws x records matrix.
inline WaicResult waic(const std::vector<std::vector<double>>& loglik_by_draw) {
  if (loglik_by_draw.size() < 2) throw data_error("waic: need at least 2 draws");
  StreamingWaic acc(loglik_by_draw.front().size());
  for (const auto& row : loglik_by_draw) acc.add_draw(row);
  return acc.finalize();
}

struct ComparisonRow {
  std::string model;
  double elpd_waic = 0.0;
  double p_waic = 0.0;
  double se = 0.0;
  double d_elpd = 0.0;  // against the best model
  double d_se = 0.0;    // paired SE of the difference
};

/// Rank models by elpd; differences against the best model use the paired
/// standard error over pointwise contributions.
inline std::vector<ComparisonRow> compare(
    const std::vector<std::pair<std::string, WaicResult>>& results) {
  if (results.empty()) throw data_error("compare: no models");
  const std::size_t n = results.front().second.n_records();
  for (const auto& r : results) {
    if (r.second.n_records() != n) {
      throw data_error("compare: models were evaluated on different record sets");
    }
  }
  std::vector<std::size_t> order(results.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return results[a].second.elpd_waic > results[b].second.elpd_waic;
  });
  const auto& best = results[order.front()].second;
  std::vector<ComparisonRow> rows;
  for (std::size_t i : order) {
    const auto& r = results[i].second;
    ComparisonRow row;
    row.model = results[i].first;
    row.elpd_waic = r.elpd_waic;
    row.p_waic = r.p_waic;
    row.se = r.se;
    row.d_elpd = r.elpd_waic - best.elpd_waic;
    math::Welford acc;
    for (std::size_t j = 0; j < n; ++j) acc.add(r.pointwise[j] - best.pointwise[j]);
    row.d_se = std::sqrt(static_cast<double>(n) * acc.variance());
    rows.push_back(row);
  }
  return rows;
}

}  // namespace cognoise::compare
