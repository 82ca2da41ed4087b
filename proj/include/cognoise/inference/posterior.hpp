#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "cognoise/errors.hpp"
#include "cognoise/inference/model_spec.hpp"
#include "cognoise/inference/position.hpp"
#include "cognoise/math.hpp"
#include "cognoise/simulate.hpp"

namespace cognoise::infer {

// Priors (log scale): means N(-0.5, 0.25), group differences N(0, 0.25),
// scales half-normal(0.25), correlations LKJ(2). The 0.25 values are standard
// deviations.
inline constexpr double kMeanLoc = -0.5;
inline constexpr double kMeanScale = 0.25;
inline constexpr double kDeltaScale = 0.25;
inline constexpr double kTauScale = 0.25;
inline constexpr double kLkjEta = 2.0;

// Likelihood probabilities are clamped to [kLikFloor, 1 - kLikFloor] before
// taking logs so that deterministic trials (self = 0) keep gradients finite.
inline constexpr double kLikFloor = 1e-12;

struct PreparedRecord {
  design::Task task = design::Task::altruism;
  double lnr = 0.0;       // log(self/other); unused when self_zero
  double self_eur = 0.0;  // euro amounts, used by the random-utility rule
  double other_eur = 0.0;
  int choice = 0;
  bool self_zero = false;
  std::size_t row = 0;  // index in the original dataset
};

struct PreparedParticipant {
  std::string id;
  int group = hier::kGroupBaseline;
  std::vector<PreparedRecord> recs;
};

struct PreparedData {
  std::vector<PreparedParticipant> parts;  // sorted by id
  std::size_t n_records = 0;
};

inline PreparedData prepare_data(const ModelSpec& spec, const sim::ChoiceDataset& data) {
  if (data.empty()) throw data_error("prepare: empty dataset");
  std::map<std::string, std::size_t> index;
  PreparedData out;
  bool saw_altruism = false;
  bool saw_number = false;
  for (std::size_t row = 0; row < data.size(); ++row) {
    const auto& r = data[row];
    if (r.choice != 0 && r.choice != 1) {
      throw data_error("record " + std::to_string(row) + ": choice must be 0 or 1");
    }
    if (r.other_cents <= 0) {
      throw data_error("record " + std::to_string(row) + ": other must be > 0");
    }
    if (r.task == design::Task::altruism) {
      if (!spec.uses_altruism_records()) {
        throw data_error("record " + std::to_string(row) + ": altruism record in a " +
                         std::string(variant_name(spec.variant)) + " fit");
      }
      if (r.self_cents < 0) throw data_error("record " + std::to_string(row) + ": self must be >= 0");
      saw_altruism = true;
    } else {
      if (!spec.uses_number_records()) {
        throw data_error("record " + std::to_string(row) + ": number record in a " +
                         std::string(variant_name(spec.variant)) + " fit");
      }
      if (r.self_cents <= 0) throw data_error("record " + std::to_string(row) + ": A must be > 0");
      saw_number = true;
    }
    auto it = index.find(r.participant_id);
    if (it == index.end()) {
      it = index.emplace(r.participant_id, out.parts.size()).first;
      out.parts.push_back({r.participant_id, r.group, {}});
    } else if (out.parts[it->second].group != r.group) {
      throw data_error("participant " + r.participant_id + " appears in both groups");
    }
    PreparedRecord pr;
    pr.task = r.task;
    pr.self_zero = (r.self_cents == 0);
    pr.lnr = pr.self_zero ? 0.0
                          : std::log(static_cast<double>(r.self_cents) /
                                     static_cast<double>(r.other_cents));
    pr.self_eur = static_cast<double>(r.self_cents) / 100.0;
    pr.other_eur = static_cast<double>(r.other_cents) / 100.0;
    pr.choice = r.choice;
    pr.row = row;
    out.parts[it->second].recs.push_back(pr);
  }
  if (spec.uses_altruism_records() && !saw_altruism) {
    throw data_error("variant requires altruism records but none were found");
  }
  if (spec.uses_number_records() && !saw_number) {
    throw data_error("variant requires number records but none were found");
  }
  // std::map iterates in key order, but parts were appended in first-seen
  // order; sort by id for a canonical participant ordering.
  std::sort(out.parts.begin(), out.parts.end(),
            [](const auto& a, const auto& b) { return a.id < b.id; });
  out.n_records = data.size();
  return out;
}

namespace detail {

struct BernoulliTerm {
  double ll = 0.0;
  double w = 0.0;  // d ll / d eta
};

/// Log Bernoulli(Phi(eta)) with the probability clamped to
/// [kLikFloor, 1 - kLikFloor]; inside the clamp the tail is evaluated through
/// erfc on the accurate side.
inline BernoulliTerm bernoulli_probit(double eta, int choice) {
  const double p = 0.5 * std::erfc(-eta * M_SQRT1_2);
  const double q = 0.5 * std::erfc(eta * M_SQRT1_2);
  BernoulliTerm t;
  if (choice == 1) {
    if (p <= kLikFloor) return {std::log(kLikFloor), 0.0};
    if (q <= kLikFloor) return {std::log1p(-kLikFloor), 0.0};
    t.ll = eta < 0.0 ? std::log(p) : std::log1p(-q);
    t.w = math::norm_pdf(eta) / p;
  } else {
    if (q <= kLikFloor) return {std::log(kLikFloor), 0.0};
    if (p <= kLikFloor) return {std::log1p(-kLikFloor), 0.0};
    t.ll = eta > 0.0 ? std::log(q) : std::log1p(-p);
    t.w = -math::norm_pdf(eta) / q;
  }
  return t;
}

inline BernoulliTerm bernoulli_logistic(double x, int choice) {
  // log p = -softplus(-x), log(1-p) = -softplus(x)
  const auto softplus = [](double v) {
    return v > 0.0 ? v + std::log1p(std::exp(-v)) : std::log1p(std::exp(v));
  };
  BernoulliTerm t;
  if (choice == 1) {
    t.ll = -softplus(-x);
    t.w = math::logistic(-x);
  } else {
    t.ll = -softplus(x);
    t.w = -math::logistic(x);
  }
  const double floor_ll = std::log(kLikFloor);
  if (t.ll < floor_ll) return {floor_ll, 0.0};
  return t;
}

/// Altruism choice rule: eta and its partials with respect to the logs of
/// (nu_so, nu_b, b, mu_r). Pinned parameters simply arrive as constants.
struct Eq7Kernel {
  double u, alpha, D2, invD, c0, lnmur, nub2;

  static Eq7Kernel make(double nu_so, double nu_b, double lnb, double lnmur) {
    Eq7Kernel k;
    k.u = nu_so * nu_so;
    k.alpha = 1.0 / (1.0 + k.u);
    k.nub2 = nu_b * nu_b;
    k.D2 = k.u * k.alpha * k.alpha + k.nub2;
    k.invD = 1.0 / std::sqrt(k.D2);
    k.lnmur = lnmur;
    k.c0 = -lnb + (1.0 - k.alpha) * lnmur;
    return k;
  }

  double eta(double lnr) const { return (alpha * lnr + c0) * invD; }

  void partials(double lnr, double et, double* d_lnnuso, double* d_lnnub, double* d_lnb,
                double* d_lnmur) const {
    const double dN_du = -alpha * alpha * (lnr - lnmur);
    const double dD2_du = alpha * alpha * (1.0 - 2.0 * u * alpha);
    const double deta_du = dN_du * invD - et * dD2_du * (0.5 / D2);
    *d_lnnuso = deta_du * 2.0 * u;
    *d_lnnub = -et * nub2 / D2;
    *d_lnb = -invD;
    *d_lnmur = (1.0 - alpha) * invD;
  }
};

/// Number-comparison rule (denominator alpha * nu): eta and partials with
/// respect to the logs of (nu, mu).
struct Eq8Kernel {
  double u, nu, alpha, invD, c0, lnmu;

  static Eq8Kernel make(double nu_ab, double lnmu) {
    Eq8Kernel k;
    k.nu = nu_ab;
    k.u = nu_ab * nu_ab;
    k.alpha = 1.0 / (1.0 + k.u);
    k.invD = 1.0 / (k.alpha * nu_ab);
    k.lnmu = lnmu;
    k.c0 = std::log(2.0) + (1.0 - k.alpha) * lnmu;
    return k;
  }

  double eta(double lnr) const { return (alpha * lnr + c0) * invD; }

  void partials(double lnr, double et, double* d_lnnu, double* d_lnmu) const {
    const double dN_du = -alpha * alpha * (lnr - lnmu);
    const double dD_du = (1.0 - u) * alpha * alpha / (2.0 * nu);
    const double deta_du = (dN_du - et * dD_du) * invD;
    *d_lnnu = deta_du * 2.0 * u;
    *d_lnmu = (1.0 - alpha) * invD;
  }
};

/// Random-utility rule over euro amounts: x and partials with respect to the
/// logs of (sigma, b).
struct RuKernel {
  double sigma, b, scale, dlnb_coeff;

  static RuKernel make(double sigma, double b) {
    RuKernel k;
    k.sigma = sigma;
    k.b = b;
    k.scale = sigma / (1.0 + b);
    k.dlnb_coeff = -sigma * b / ((1.0 + b) * (1.0 + b));
    return k;
  }

  double x(double self_eur, double other_eur) const {
    return scale * (self_eur - b * other_eur);
  }

  void partials(double self_eur, double other_eur, double xv, double* d_lnsigma,
                double* d_lnb) const {
    *d_lnsigma = xv;
    *d_lnb = dlnb_coeff * (self_eur + other_eur);
  }
};

/// Per-participant likelihood evaluator: built once from the participant's
/// constrained parameters, maps kernel partials onto the variant's slots.
struct ParticipantKernel {
  Variant variant;
  Eq7Kernel eq7{};
  Eq8Kernel eq8{};
  RuKernel ru{};
  bool has_eq7 = false;
  bool has_eq8 = false;
  bool has_ru = false;
  // slot indices receiving each partial; -1 drops it (pinned parameter)
  int m7_nuso = -1, m7_nub = -1, m7_b = -1, m7_mur = -1;
  int m8_nu = -1, m8_mu = -1;

  static ParticipantKernel make(Variant v, std::span<const double> theta,
                                std::span<const double> log_theta) {
    ParticipantKernel k;
    k.variant = v;
    switch (v) {
      case Variant::altruism_full:
        k.eq7 = Eq7Kernel::make(theta[0], theta[1], log_theta[2], log_theta[3]);
        k.has_eq7 = true;
        k.m7_nuso = 0; k.m7_nub = 1; k.m7_b = 2; k.m7_mur = 3;
        break;
      case Variant::altruism_mu1:
        k.eq7 = Eq7Kernel::make(theta[0], theta[1], log_theta[2], 0.0);
        k.has_eq7 = true;
        k.m7_nuso = 0; k.m7_nub = 1; k.m7_b = 2;
        break;
      case Variant::altruism_nub0:
        k.eq7 = Eq7Kernel::make(theta[0], 0.0, log_theta[1], log_theta[2]);
        k.has_eq7 = true;
        k.m7_nuso = 0; k.m7_b = 1; k.m7_mur = 2;
        break;
      case Variant::altruism_nuso0:
        k.eq7 = Eq7Kernel::make(0.0, theta[0], log_theta[1], 0.0);
        k.has_eq7 = true;
        k.m7_nub = 0; k.m7_b = 1;
        break;
      case Variant::random_utility:
        k.ru = RuKernel::make(theta[0], theta[1]);
        k.has_ru = true;
        break;
      case Variant::number_main:
        k.eq8 = Eq8Kernel::make(theta[0], log_theta[1]);
        k.has_eq8 = true;
        k.m8_nu = 0; k.m8_mu = 1;
        break;
      case Variant::number_mu1:
        k.eq8 = Eq8Kernel::make(theta[0], 0.0);
        k.has_eq8 = true;
        k.m8_nu = 0;
        break;
      case Variant::combined_full:
        k.eq7 = Eq7Kernel::make(theta[0], theta[1], log_theta[2], log_theta[3]);
        k.eq8 = Eq8Kernel::make(theta[0], log_theta[3]);
        k.has_eq7 = k.has_eq8 = true;
        k.m7_nuso = 0; k.m7_nub = 1; k.m7_b = 2; k.m7_mur = 3;
        k.m8_nu = 0; k.m8_mu = 3;
        break;
      case Variant::combined_nub0:
        k.eq7 = Eq7Kernel::make(theta[0], 0.0, log_theta[1], log_theta[2]);
        k.eq8 = Eq8Kernel::make(theta[0], log_theta[2]);
        k.has_eq7 = k.has_eq8 = true;
        k.m7_nuso = 0; k.m7_b = 1; k.m7_mur = 2;
        k.m8_nu = 0; k.m8_mu = 2;
        break;
    }
    return k;
  }

  /// Log-likelihood of one record; adj (size k, nullable) receives the
  /// adjoints with respect to the participant's log-scale parameters.
  double loglik(const PreparedRecord& r, double* adj) const {
    if (r.task == design::Task::altruism) {
      if (has_ru) {
        const double xv = ru.x(r.self_eur, r.other_eur);
        const auto t = bernoulli_logistic(xv, r.choice);
        if (adj != nullptr && t.w != 0.0) {
          double ds, db;
          ru.partials(r.self_eur, r.other_eur, xv, &ds, &db);
          adj[0] += t.w * ds;
          adj[1] += t.w * db;
        }
        return t.ll;
      }
      if (r.self_zero) {
        return r.choice == 1 ? std::log(kLikFloor) : std::log1p(-kLikFloor);
      }
      const double et = eq7.eta(r.lnr);
      const auto t = bernoulli_probit(et, r.choice);
      if (adj != nullptr && t.w != 0.0) {
        double d0, d1, d2, d3;
        eq7.partials(r.lnr, et, &d0, &d1, &d2, &d3);
        if (m7_nuso >= 0) adj[m7_nuso] += t.w * d0;
        if (m7_nub >= 0) adj[m7_nub] += t.w * d1;
        if (m7_b >= 0) adj[m7_b] += t.w * d2;
        if (m7_mur >= 0) adj[m7_mur] += t.w * d3;
      }
      return t.ll;
    }
    const double et = eq8.eta(r.lnr);
    const auto t = bernoulli_probit(et, r.choice);
    if (adj != nullptr && t.w != 0.0) {
      double d0, d1;
      eq8.partials(r.lnr, et, &d0, &d1);
      if (m8_nu >= 0) adj[m8_nu] += t.w * d0;
      if (m8_mu >= 0) adj[m8_mu] += t.w * d1;
    }
    return t.ll;
  }
};

inline double normal_lpdf(double x, double loc, double scale) {
  const double z = (x - loc) / scale;
  return -0.5 * z * z - std::log(scale) - math::kLnSqrt2Pi;
}

// half-normal on tau plus the log|d tau / d log_tau| = log(tau) jacobian
inline double halfnormal_log_tau_lpdf(double tau, double log_tau, double scale) {
  const double z = tau / scale;
  return std::log(2.0) - std::log(scale) - math::kLnSqrt2Pi - 0.5 * z * z + log_tau;
}

}  // namespace detail

/// Hierarchical posterior for one model variant over one dataset. All methods
/// are const and safe to call from parallel chains.
class Posterior {
 public:
  Posterior(const ModelSpec& spec, const sim::ChoiceDataset& data)
      : spec_(spec), data_(prepare_data(spec, data)), lay_(spec, data_.parts.size()) {}

  const ModelSpec& spec() const { return spec_; }
  const Layout& layout() const { return lay_; }
  const PreparedData& data() const { return data_; }
  std::size_t dim() const { return lay_.dim(); }

  double log_prior(std::span<const double> x) const {
    check_dim_(x);
    const DecodedHyper h = decode_hyper(lay_, x, kLkjEta);
    return prior_value_(x, h);
  }

  std::vector<double> log_likelihood_pointwise(std::span<const double> x) const {
    check_dim_(x);
    const DecodedHyper h = decode_hyper(lay_, x, kLkjEta);
    std::vector<double> out(data_.n_records, 0.0);
    std::vector<double> log_theta(lay_.k), theta(lay_.k);
    for (std::size_t p = 0; p < data_.parts.size(); ++p) {
      participant_log_theta_(h, x, p, log_theta, nullptr);
      for (std::size_t s = 0; s < lay_.k; ++s) theta[s] = std::exp(log_theta[s]);
      const auto kern = detail::ParticipantKernel::make(spec_.variant, theta, log_theta);
      for (const auto& r : data_.parts[p].recs) out[r.row] = kern.loglik(r, nullptr);
    }
    return out;
  }

  double value(std::span<const double> x) const { return eval_(x, {}, false); }

  /// Log posterior and its gradient. With strict = true a non-finite gradient
  /// component raises sampler_error naming the offending coordinate; the
  /// sampler itself runs with strict = false and treats such states as
  /// divergent.
  double value_and_grad(std::span<const double> x, std::span<double> grad,
                        bool strict = true) const {
    const double v = eval_(x, grad, strict);
    return v;
  }

  /// Names of the constrained quantities stored per draw: group-level means,
  /// scales, correlations, then per-participant parameters.
  std::vector<std::string> constrained_names() const {
    std::vector<std::string> out;
    for (std::size_t s = 0; s < lay_.k; ++s) {
      if (spec_.slot_group_specific(lay_.slots[s])) {
        out.push_back("mu_" + lay_.slots[s].name + "_B");
        out.push_back("mu_" + lay_.slots[s].name + "_T");
      } else {
        out.push_back("mu_" + lay_.slots[s].name);
      }
    }
    for (std::size_t s = 0; s < lay_.k; ++s) out.push_back("tau_" + lay_.slots[s].name);
    for (std::size_t i = 1; i < lay_.k; ++i) {
      for (std::size_t j = 0; j < i; ++j) {
        out.push_back("omega_" + lay_.slots[j].name + "_" + lay_.slots[i].name);
      }
    }
    for (const auto& p : data_.parts) {
      for (std::size_t s = 0; s < lay_.k; ++s) {
        out.push_back("theta." + p.id + "." + lay_.slots[s].name);
      }
    }
    return out;
  }

  std::size_t constrained_dim() const {
    return lay_.k + lay_.g + lay_.k + lay_.m + data_.parts.size() * lay_.k;
  }

  /// Transform an unconstrained position into the stored constrained vector.
  std::vector<double> constrained(std::span<const double> x) const {
    check_dim_(x);
    const DecodedHyper h = decode_hyper(lay_, x, kLkjEta);
    std::vector<double> out;
    out.reserve(constrained_dim());
    for (std::size_t s = 0; s < lay_.k; ++s) {
      if (spec_.slot_group_specific(lay_.slots[s])) {
        out.push_back(h.mu_base[s]);
        out.push_back(h.mu_base[s] + h.delta[s]);
      } else {
        out.push_back(h.mu_base[s]);
      }
    }
    for (std::size_t s = 0; s < lay_.k; ++s) out.push_back(h.tau[s]);
    const auto omega = corr::correlation_from_cholesky(h.corr.L, lay_.k);
    for (std::size_t i = 1; i < lay_.k; ++i) {
      for (std::size_t j = 0; j < i; ++j) out.push_back(omega[i * lay_.k + j]);
    }
    std::vector<double> log_theta(lay_.k);
    for (std::size_t p = 0; p < data_.parts.size(); ++p) {
      participant_log_theta_(h, x, p, log_theta, nullptr);
      for (std::size_t s = 0; s < lay_.k; ++s) out.push_back(std::exp(log_theta[s]));
    }
    return out;
  }

 private:
  void check_dim_(std::span<const double> x) const {
    if (x.size() != dim()) throw std::invalid_argument("position has wrong dimension");
  }

  // log theta for participant p; optionally stores the raw L*z products
  // needed by the tau adjoints.
  void participant_log_theta_(const DecodedHyper& h, std::span<const double> x, std::size_t p,
                              std::vector<double>& log_theta, std::vector<double>* lz_out) const {
    const std::size_t z0 = lay_.off_z + p * lay_.k;
    const int group = data_.parts[p].group;
    for (std::size_t s = 0; s < lay_.k; ++s) {
      double lz = 0.0;
      for (std::size_t j = 0; j <= s; ++j) lz += h.corr.L[s * lay_.k + j] * x[z0 + j];
      if (lz_out != nullptr) (*lz_out)[s] = lz;
      log_theta[s] = std::clamp(h.mu(s, group) + h.tau[s] * lz, -60.0, 60.0);
    }
  }

  double prior_value_(std::span<const double> x, const DecodedHyper& h) const {
    double lp = 0.0;
    for (std::size_t s = 0; s < lay_.k; ++s) {
      lp += detail::normal_lpdf(h.mu_base[s], kMeanLoc, kMeanScale);
    }
    for (std::size_t i = 0; i < lay_.g; ++i) {
      lp += detail::normal_lpdf(x[lay_.off_delta + i], 0.0, kDeltaScale);
    }
    for (std::size_t s = 0; s < lay_.k; ++s) {
      lp += detail::halfnormal_log_tau_lpdf(h.tau[s], x[lay_.off_ltau + s], kTauScale);
    }
    lp += h.corr.log_prior;
    const std::size_t nz = data_.parts.size() * lay_.k;
    for (std::size_t i = 0; i < nz; ++i) {
      const double z = x[lay_.off_z + i];
      lp += -0.5 * z * z - math::kLnSqrt2Pi;
    }
    return lp;
  }

  double eval_(std::span<const double> x, std::span<double> grad, bool strict) const {
    check_dim_(x);
    const bool want_grad = !grad.empty();
    if (want_grad) {
      if (grad.size() != dim()) throw std::invalid_argument("gradient buffer has wrong dimension");
      std::fill(grad.begin(), grad.end(), 0.0);
    }
    const DecodedHyper h = decode_hyper(lay_, x, kLkjEta);
    double lp = prior_value_(x, h);
    if (want_grad) {
      for (std::size_t s = 0; s < lay_.k; ++s) {
        grad[lay_.off_mu + s] += -(h.mu_base[s] - kMeanLoc) / (kMeanScale * kMeanScale);
      }
      for (std::size_t i = 0; i < lay_.g; ++i) {
        grad[lay_.off_delta + i] += -x[lay_.off_delta + i] / (kDeltaScale * kDeltaScale);
      }
      for (std::size_t s = 0; s < lay_.k; ++s) {
        grad[lay_.off_ltau + s] += -(h.tau[s] * h.tau[s]) / (kTauScale * kTauScale) + 1.0;
      }
      const std::size_t nz = data_.parts.size() * lay_.k;
      for (std::size_t i = 0; i < nz; ++i) grad[lay_.off_z + i] += -x[lay_.off_z + i];
    }

    // Likelihood, accumulating adjoints of each participant's log theta and
    // pushing them back through the non-centered hierarchy.
    std::vector<double> adj_L(lay_.k * lay_.k, 0.0);
    std::vector<double> log_theta(lay_.k), theta(lay_.k), lz(lay_.k), a(lay_.k);
    for (std::size_t p = 0; p < data_.parts.size(); ++p) {
      participant_log_theta_(h, x, p, log_theta, &lz);
      for (std::size_t s = 0; s < lay_.k; ++s) theta[s] = std::exp(log_theta[s]);
      const auto kern = detail::ParticipantKernel::make(spec_.variant, theta, log_theta);
      std::fill(a.begin(), a.end(), 0.0);
      double* adj = want_grad ? a.data() : nullptr;
      for (const auto& r : data_.parts[p].recs) lp += kern.loglik(r, adj);
      if (!want_grad) continue;
      const std::size_t z0 = lay_.off_z + p * lay_.k;
      const bool treat = data_.parts[p].group == hier::kGroupTreatment;
      for (std::size_t s = 0; s < lay_.k; ++s) {
        const double as = a[s];
        if (as == 0.0) continue;
        grad[lay_.off_mu + s] += as;
        if (treat) {
          const int di = lay_.delta_index(s);
          if (di >= 0) grad[static_cast<std::size_t>(di)] += as;
        }
        grad[lay_.off_ltau + s] += as * h.tau[s] * lz[s];
        const double at = as * h.tau[s];
        for (std::size_t j = 0; j <= s; ++j) {
          adj_L[s * lay_.k + j] += at * x[z0 + j];
          grad[z0 + j] += at * h.corr.L[s * lay_.k + j];
        }
      }
    }
    if (want_grad && lay_.m > 0) {
      corr::corr_backward(h.corr, kLkjEta, adj_L, grad.subspan(lay_.off_y, lay_.m));
    }
    if (want_grad && strict) {
      for (std::size_t i = 0; i < grad.size(); ++i) {
        if (!std::isfinite(grad[i])) {
          throw sampler_error("non-finite gradient in coordinate " + std::to_string(i) + " (" +
                              lay_.coordinate_names()[i] + ")");
        }
      }
    }
    return lp;
  }

  ModelSpec spec_;
  PreparedData data_;
  Layout lay_;
};

/// Likelihood of one record given a participant's constrained parameters,
/// used when streaming pointwise log-likelihoods from stored draws.
inline double loglik_from_theta(Variant v, std::span<const double> theta,
                                const PreparedRecord& r) {
  std::vector<double> log_theta(theta.size());
  for (std::size_t s = 0; s < theta.size(); ++s) log_theta[s] = std::log(theta[s]);
  const auto kern = detail::ParticipantKernel::make(v, theta, log_theta);
  return kern.loglik(r, nullptr);
}

}  // namespace cognoise::infer
