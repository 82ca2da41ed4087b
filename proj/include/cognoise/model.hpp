#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "cognoise/design.hpp"
#include "cognoise/errors.hpp"
#include "cognoise/math.hpp"

namespace cognoise::model {

namespace detail {
inline void require_finite(double x, const char* name) {
  if (!std::isfinite(x)) {
    throw std::invalid_argument(std::string(name) + " must be finite");
  }
}
}  // namespace detail

/// One decision maker in the binary give-or-take task. All parameters live on
/// the natural scale; the payment-ratio prior SD is normalized to 1.
struct IndividualParams {
  double beta;   // altruism weight, in (0,1)
  double nu_so;  // payment-signal noise SD (log space), >= 0
  double nu_b;   // preference-signal noise SD (log space), >= 0
  double mu_r;   // prior mean of the payment ratio, > 0

  static constexpr double sigma_r = 1.0;

  double b() const { return beta / (1.0 - beta); }

  void validate() const {
    detail::require_finite(beta, "beta");
    detail::require_finite(nu_so, "nu_so");
    detail::require_finite(nu_b, "nu_b");
    detail::require_finite(mu_r, "mu_r");
    if (!(beta > 0.0 && beta < 1.0)) throw std::invalid_argument("beta must be in (0,1)");
    if (nu_so < 0.0) throw std::invalid_argument("nu_so must be >= 0");
    if (nu_b < 0.0) throw std::invalid_argument("nu_b must be >= 0");
    if (!(mu_r > 0.0)) throw std::invalid_argument("mu_r must be > 0");
  }
};

/// Parameters of the number-comparison choice rule; the objective comparison
/// factor is fixed at 1/2.
struct NumberParams {
  double nu_ab;  // magnitude-signal noise SD (log space)
  double mu_rp;  // prior mean of the magnitude ratio, > 0

  static constexpr double threshold = 0.5;

  void validate() const {
    detail::require_finite(nu_ab, "nu_ab");
    detail::require_finite(mu_rp, "mu_rp");
    if (nu_ab < 0.0) throw std::invalid_argument("nu_ab must be >= 0");
    if (!(mu_rp > 0.0)) throw std::invalid_argument("mu_rp must be > 0");
  }
};

/// Logistic random-utility benchmark over euro amounts.
struct RandomUtilityParams {
  double beta;      // altruism weight, in (0,1)
  double sigma_ru;  // choice sensitivity, > 0

  void validate() const {
    detail::require_finite(beta, "beta");
    detail::require_finite(sigma_ru, "sigma_ru");
    if (!(beta > 0.0 && beta < 1.0)) throw std::invalid_argument("beta must be in (0,1)");
    if (!(sigma_ru > 0.0)) throw std::invalid_argument("sigma_ru must be > 0");
  }
};

/// Bayesian evidence weight sigma^2 / (sigma^2 + nu^2). Equals 1 at nu = 0 and
/// decreases strictly in nu.
inline double evidence_weight(double nu, double sigma_r) {
  detail::require_finite(nu, "nu");
  detail::require_finite(sigma_r, "sigma_r");
  if (nu < 0.0) throw std::invalid_argument("evidence_weight: nu must be >= 0");
  if (!(sigma_r > 0.0)) throw std::invalid_argument("evidence_weight: sigma_r must be > 0");
  const double s2 = sigma_r * sigma_r;
  return s2 / (s2 + nu * nu);
}

/// Prior-induced threshold delta = mu_r^{-(1-alpha)}.
inline double prior_threshold(double mu_r, double alpha) {
  detail::require_finite(mu_r, "mu_r");
  detail::require_finite(alpha, "alpha");
  if (!(mu_r > 0.0)) throw std::invalid_argument("prior_threshold: mu_r must be > 0");
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("prior_threshold: alpha must be in (0,1]");
  }
  return std::pow(mu_r, -(1.0 - alpha));
}

/// Probability of taking `self` at a payment ratio self/other > 0.
inline double prob_self_ratio(const IndividualParams& p, double ratio) {
  p.validate();
  if (!(ratio > 0.0) || !std::isfinite(ratio)) {
    throw std::invalid_argument("prob_self_ratio: ratio must be finite and > 0");
  }
  if (p.nu_so == 0.0 && p.nu_b == 0.0) {
    throw deterministic_limit_error(
        "prob_self: nu_so = nu_b = 0 is the deterministic limit");
  }
  const double alpha = evidence_weight(p.nu_so, IndividualParams::sigma_r);
  const double ln_delta = -(1.0 - alpha) * std::log(p.mu_r);
  const double num = alpha * std::log(ratio) - std::log(p.b()) - ln_delta;
  const double den = std::sqrt(p.nu_so * p.nu_so * alpha * alpha + p.nu_b * p.nu_b);
  return math::norm_cdf(num / den);
}

/// Probability of taking `self` under the log-normal noisy-perception rule.
/// self = 0 maps to probability 0 exactly; a design may contain such trials
/// and the likelihood scores them at the clamp floor.
inline double prob_self(const IndividualParams& p, std::int64_t self_cents,
                        std::int64_t other_cents) {
  if (other_cents <= 0) throw std::invalid_argument("prob_self: other must be > 0");
  if (self_cents < 0) throw std::invalid_argument("prob_self: self must be >= 0");
  if (self_cents == 0) {
    p.validate();
    if (p.nu_so == 0.0 && p.nu_b == 0.0) {
      throw deterministic_limit_error(
          "prob_self: nu_so = nu_b = 0 is the deterministic limit");
    }
    return 0.0;
  }
  return prob_self_ratio(
      p, static_cast<double>(self_cents) / static_cast<double>(other_cents));
}

/// Probability of judging A larger than B/2 at a magnitude ratio A/B > 0.
/// The denominator is alpha' * nu, the nu_b -> 0 limit of the altruism rule.
inline double prob_A_ratio(const NumberParams& p, double ratio) {
  p.validate();
  if (!(ratio > 0.0) || !std::isfinite(ratio)) {
    throw std::invalid_argument("prob_A_ratio: ratio must be finite and > 0");
  }
  if (p.nu_ab == 0.0) {
    throw deterministic_limit_error("prob_A: nu_ab = 0 is the deterministic limit");
  }
  const double alpha = 1.0 / (1.0 + p.nu_ab * p.nu_ab);
  const double ln_delta = -(1.0 - alpha) * std::log(p.mu_rp);
  const double num = alpha * std::log(ratio) - std::log(NumberParams::threshold) - ln_delta;
  return math::norm_cdf(num / (alpha * p.nu_ab));
}

inline double prob_A(const NumberParams& p, std::int64_t a_cents, std::int64_t b_cents) {
  if (a_cents <= 0) throw std::invalid_argument("prob_A: A must be > 0");
  if (b_cents <= 0) throw std::invalid_argument("prob_A: B must be > 0");
  return prob_A_ratio(p, static_cast<double>(a_cents) / static_cast<double>(b_cents));
}

/// Logistic random-utility benchmark; amounts are converted to euros so that
/// sigma_ru has an interpretable scale.
inline double prob_self_random_utility(const RandomUtilityParams& p,
                                       std::int64_t self_cents,
                                       std::int64_t other_cents) {
  p.validate();
  if (self_cents < 0 || other_cents < 0) {
    throw std::invalid_argument("prob_self_random_utility: amounts must be >= 0");
  }
  const double s = static_cast<double>(self_cents) / 100.0;
  const double o = static_cast<double>(other_cents) / 100.0;
  const double x = p.sigma_ru * ((1.0 - p.beta) * s - p.beta * o);
  return math::logistic(x);
}

/// Linear-encoding variant: ratios and thresholds enter untransformed and the
/// prior-induced shift is delta = (1-alpha) * mu_r, which vanishes in the
/// noiseless limit so that the rule reduces to self/other > beta/(1-beta).
inline double prob_self_linear(const IndividualParams& p, std::int64_t self_cents,
                               std::int64_t other_cents) {
  p.validate();
  if (other_cents <= 0) throw std::invalid_argument("prob_self_linear: other must be > 0");
  if (self_cents < 0) throw std::invalid_argument("prob_self_linear: self must be >= 0");
  if (p.nu_so == 0.0 && p.nu_b == 0.0) {
    throw deterministic_limit_error(
        "prob_self_linear: nu_so = nu_b = 0 is the deterministic limit");
  }
  const double alpha = evidence_weight(p.nu_so, IndividualParams::sigma_r);
  const double delta = (1.0 - alpha) * p.mu_r;
  const double r = static_cast<double>(self_cents) / static_cast<double>(other_cents);
  const double num = alpha * r - p.b() - delta;
  const double den = std::sqrt(p.nu_so * p.nu_so * alpha * alpha + p.nu_b * p.nu_b);
  return math::norm_cdf(num / den);
}

/// Ratio at which prob_self equals 1/2: r* = (b * delta)^{1/alpha}. Does not
/// depend on nu_b at all, so it is bit-identical across preference-noise values.
inline double indifference_ratio(const IndividualParams& p) {
  p.validate();
  const double alpha = evidence_weight(p.nu_so, IndividualParams::sigma_r);
  const double delta = prior_threshold(p.mu_r, alpha);
  return std::pow(p.b() * delta, 1.0 / alpha);
}

enum class ChoiceRule { log_normal, linear };

inline double mean_choice_over_grid(const IndividualParams& p,
                                    std::span<const design::TrialSpec> grid,
                                    ChoiceRule rule = ChoiceRule::log_normal) {
  if (grid.empty()) throw std::invalid_argument("mean_choice_over_grid: empty grid");
  double s = 0.0;
  for (const auto& t : grid) {
    s += (rule == ChoiceRule::log_normal)
             ? prob_self(p, t.self_cents, t.other_cents)
             : prob_self_linear(p, t.self_cents, t.other_cents);
  }
  return s / static_cast<double>(grid.size());
}

inline double mean_choice_over_grid(const RandomUtilityParams& p,
                                    std::span<const design::TrialSpec> grid) {
  if (grid.empty()) throw std::invalid_argument("mean_choice_over_grid: empty grid");
  double s = 0.0;
  for (const auto& t : grid) s += prob_self_random_utility(p, t.self_cents, t.other_cents);
  return s / static_cast<double>(grid.size());
}

inline double mean_choice_over_grid(const NumberParams& p,
                                    std::span<const design::TrialSpec> grid) {
  if (grid.empty()) throw std::invalid_argument("mean_choice_over_grid: empty grid");
  double s = 0.0;
  for (const auto& t : grid) s += prob_A(p, t.self_cents, t.other_cents);
  return s / static_cast<double>(grid.size());
}

}  // namespace cognoise::model
