#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <thread>
#include <vector>

#include "cognoise/math.hpp"
#include "cognoise/rng.hpp"

namespace cognoise::infer {

/// Sampler settings. Desk-scale defaults; warmup splits 75/25 between joint
/// (step size + diagonal metric) adaptation and a final step-size-only phase.
struct NutsConfig {
  int chains = 4;
  int warmup = 500;
  int draws = 1000;
  std::uint64_t seed = 1;
  double target_accept = 0.8;
  int max_depth = 10;
  int threads = 0;  // 0 = one thread per chain up to hardware size
  bool adapt_mass = true;
};

struct ChainStats {
  int divergences = 0;       // post-warmup
  int max_depth_hits = 0;    // post-warmup
  double step_size = 0.0;
  double mean_accept = 0.0;  // post-warmup mean acceptance statistic
};

struct NutsResult {
  // draws[chain][draw] is an unconstrained position
  std::vector<std::vector<std::vector<double>>> draws;
  std::vector<ChainStats> stats;
};

namespace nuts_detail {

constexpr double kMaxEnergyChange = 1000.0;

struct State {
  std::vector<double> theta;
  std::vector<double> r;
  std::vector<double> grad;
  double logp = 0.0;
};

inline double kinetic(const std::vector<double>& r, const std::vector<double>& minv) {
  double k = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) k += minv[i] * r[i] * r[i];
  return 0.5 * k;
}

template <class Target>
void leapfrog(const Target& target, State& s, double eps, const std::vector<double>& minv) {
  const std::size_t d = s.theta.size();
  for (std::size_t i = 0; i < d; ++i) s.r[i] += 0.5 * eps * s.grad[i];
  for (std::size_t i = 0; i < d; ++i) s.theta[i] += eps * minv[i] * s.r[i];
  s.logp = target.logp_grad(s.theta, s.grad);
  for (std::size_t i = 0; i < d; ++i) s.r[i] += 0.5 * eps * s.grad[i];
}

inline bool uturn(const State& minus, const State& plus, const std::vector<double>& minv) {
  double dot_m = 0.0;
  double dot_p = 0.0;
  for (std::size_t i = 0; i < minv.size(); ++i) {
    const double d = plus.theta[i] - minus.theta[i];
    dot_m += d * minv[i] * minus.r[i];
    dot_p += d * minv[i] * plus.r[i];
  }
  return dot_m < 0.0 || dot_p < 0.0;
}

struct Subtree {
  State minus, plus;
  std::vector<double> sel;
  double lsew = -std::numeric_limits<double>::infinity();
  double sum_acc = 0.0;
  int n_leap = 0;
  bool divergent = false;
  bool turned = false;
};

inline double log_add_exp(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  const double m = std::max(a, b);
  return m + std::log(std::exp(a - m) + std::exp(b - m));
}

template <class Target>
Subtree build_tree(const Target& target, int depth, const State& edge, double dir, double h0,
                   double eps, const std::vector<double>& minv, rng::Stream& stream) {
  if (depth == 0) {
    Subtree t;
    t.minus = edge;
    leapfrog(target, t.minus, dir * eps, minv);
    t.n_leap = 1;
    const double h = -t.minus.logp + kinetic(t.minus.r, minv);
    const double dh = h0 - h;  // log weight relative to the initial energy
    if (!std::isfinite(h) || -dh > kMaxEnergyChange) {
      t.divergent = true;
      t.plus = t.minus;
      return t;
    }
    t.sum_acc = std::min(1.0, std::exp(dh));
    t.lsew = dh;
    t.sel = t.minus.theta;
    t.plus = t.minus;
    return t;
  }
  Subtree t1 = build_tree(target, depth - 1, edge, dir, h0, eps, minv, stream);
  if (t1.divergent || t1.turned) return t1;
  const State& next_edge = dir > 0 ? t1.plus : t1.minus;
  Subtree t2 = build_tree(target, depth - 1, next_edge, dir, h0, eps, minv, stream);
  t1.n_leap += t2.n_leap;
  t1.sum_acc += t2.sum_acc;
  if (t2.divergent || t2.turned) {
    t1.divergent = t2.divergent;
    t1.turned = t2.turned;
    return t1;
  }
  const double total = log_add_exp(t1.lsew, t2.lsew);
  if (std::log(stream.uniform()) < t2.lsew - total) t1.sel = std::move(t2.sel);
  t1.lsew = total;
  if (dir > 0) {
    t1.plus = std::move(t2.plus);
  } else {
    t1.minus = std::move(t2.minus);
  }
  t1.turned = uturn(t1.minus, t1.plus, minv);
  return t1;
}

/// Coarse search for a step size whose single-step acceptance straddles 1/2.
template <class Target>
double initial_step_size(const Target& target, const State& init, const std::vector<double>& minv,
                         rng::Stream& stream) {
  const std::size_t d = init.theta.size();
  double eps = 1.0;
  State s = init;
  s.r.resize(d);
  for (std::size_t i = 0; i < d; ++i) s.r[i] = stream.normal() / std::sqrt(minv[i]);
  const double h0 = -s.logp + kinetic(s.r, minv);
  State probe = s;
  leapfrog(target, probe, eps, minv);
  double h = -probe.logp + kinetic(probe.r, minv);
  double ratio = std::exp(h0 - h);
  for (int iter = 0; iter < 60 && (!std::isfinite(ratio) || ratio <= 0.0); ++iter) {
    eps *= 0.5;
    probe = s;
    leapfrog(target, probe, eps, minv);
    h = -probe.logp + kinetic(probe.r, minv);
    ratio = std::exp(h0 - h);
  }
  if (!std::isfinite(ratio)) return 1e-3;
  const double a = ratio > 0.5 ? 1.0 : -1.0;
  for (int iter = 0; iter < 60; ++iter) {
    if (std::pow(ratio, a) <= std::pow(2.0, -a)) break;
    eps *= std::pow(2.0, a);
    probe = s;
    leapfrog(target, probe, eps, minv);
    h = -probe.logp + kinetic(probe.r, minv);
    ratio = std::exp(h0 - h);
    if (!std::isfinite(ratio)) {
      eps *= 0.5;
      break;
    }
  }
  return std::clamp(eps, 1e-8, 1e2);
}

struct DualAveraging {
  double mu = 0.0;
  double log_eps = 0.0;
  double log_eps_bar = 0.0;
  double h_bar = 0.0;
  int m = 0;
  static constexpr double gamma = 0.05;
  static constexpr double t0 = 10.0;
  static constexpr double kappa = 0.75;

  void reset(double eps0) {
    mu = std::log(10.0 * eps0);
    log_eps = std::log(eps0);
    log_eps_bar = 0.0;
    h_bar = 0.0;
    m = 0;
  }
  void update(double accept, double target) {
    ++m;
    const double md = static_cast<double>(m);
    h_bar = (1.0 - 1.0 / (md + t0)) * h_bar + (target - accept) / (md + t0);
    log_eps = mu - std::sqrt(md) / gamma * h_bar;
    const double w = std::pow(md, -kappa);
    log_eps_bar = w * log_eps + (1.0 - w) * log_eps_bar;
  }
  double current() const { return std::exp(log_eps); }
  double averaged() const { return std::exp(log_eps_bar); }
};

template <class Target>
void run_chain(const Target& target, const NutsConfig& cfg, int chain,
               std::vector<std::vector<double>>& out, ChainStats& stats) {
  const std::size_t d = target.dim();
  rng::Stream stream = rng::Stream(cfg.seed).derive("nuts.chain", static_cast<std::uint64_t>(chain));
  State cur;
  cur.theta.resize(d);
  cur.grad.assign(d, 0.0);
  cur.r.assign(d, 0.0);
  {
    rng::Stream init = stream.derive("init");
    for (auto& v : cur.theta) v = init.uniform() - 0.5;
  }
  cur.logp = target.logp_grad(cur.theta, cur.grad);

  std::vector<double> minv(d, 1.0);
  DualAveraging da;
  da.reset(initial_step_size(target, cur, minv, stream));
  stats.step_size = da.current();

  // Welford accumulators for the diagonal metric.
  std::vector<double> wm(d, 0.0), ws(d, 0.0);
  std::size_t wn = 0;
  const int mass_update_at =
      (cfg.adapt_mass && cfg.warmup >= 40) ? (3 * cfg.warmup) / 4 : -1;
  const int collect_from = cfg.warmup / 10;

  const int total = cfg.warmup + cfg.draws;
  out.clear();
  out.reserve(static_cast<std::size_t>(cfg.draws));
  double acc_sum = 0.0;
  int acc_n = 0;

  for (int iter = 0; iter < total; ++iter) {
    const bool warm = iter < cfg.warmup;
    const double eps = warm ? da.current() : stats.step_size;

    for (std::size_t i = 0; i < d; ++i) cur.r[i] = stream.normal() / std::sqrt(minv[i]);
    const double h0 = -cur.logp + kinetic(cur.r, minv);

    Subtree traj;
    traj.minus = cur;
    traj.plus = cur;
    traj.sel = cur.theta;
    traj.lsew = 0.0;
    bool divergent = false;
    int depth = 0;
    for (; depth < cfg.max_depth; ++depth) {
      const double dir = stream.uniform() < 0.5 ? -1.0 : 1.0;
      Subtree t = build_tree(target, depth, dir > 0 ? traj.plus : traj.minus, dir, h0, eps,
                             minv, stream);
      traj.n_leap += t.n_leap;
      traj.sum_acc += t.sum_acc;
      if (t.divergent) {
        divergent = true;
        break;
      }
      if (t.turned) break;
      // biased progressive sampling toward the fresh half of the trajectory
      if (std::log(stream.uniform()) < t.lsew - traj.lsew) traj.sel = std::move(t.sel);
      traj.lsew = log_add_exp(traj.lsew, t.lsew);
      if (dir > 0) {
        traj.plus = std::move(t.plus);
      } else {
        traj.minus = std::move(t.minus);
      }
      if (uturn(traj.minus, traj.plus, minv)) break;
    }

    cur.theta = std::move(traj.sel);
    cur.logp = target.logp_grad(cur.theta, cur.grad);
    const double accept = traj.n_leap > 0 ? traj.sum_acc / traj.n_leap : 0.0;

    if (warm) {
      da.update(accept, cfg.target_accept);
      if (mass_update_at > 0 && iter >= collect_from && iter < mass_update_at) {
        ++wn;
        for (std::size_t i = 0; i < d; ++i) {
          const double delta = cur.theta[i] - wm[i];
          wm[i] += delta / static_cast<double>(wn);
          ws[i] += delta * (cur.theta[i] - wm[i]);
        }
      }
      if (mass_update_at > 0 && iter + 1 == mass_update_at && wn > 4) {
        const double n = static_cast<double>(wn);
        for (std::size_t i = 0; i < d; ++i) {
          const double var = ws[i] / (n - 1.0);
          minv[i] = std::max(n / (n + 5.0) * var + 1e-3 * (5.0 / (n + 5.0)), 1e-10);
        }
        da.reset(initial_step_size(target, cur, minv, stream));
      }
      if (iter + 1 == cfg.warmup) stats.step_size = da.averaged();
    } else {
      if (divergent) ++stats.divergences;
      if (depth == cfg.max_depth) ++stats.max_depth_hits;
      acc_sum += accept;
      ++acc_n;
      out.push_back(cur.theta);
    }
  }
  if (cfg.warmup == 0) stats.step_size = da.current();
  stats.mean_accept = acc_n > 0 ? acc_sum / acc_n : 0.0;
}

}  // namespace nuts_detail

/// Dynamic multinomial no-U-turn sampling with dual-averaging step-size
/// adaptation and diagonal metric estimation during warmup. Target must
/// provide dim() and a const, thread-safe
/// double logp_grad(const std::vector<double>&, std::vector<double>&).
template <class Target>
NutsResult run_nuts(const Target& target, const NutsConfig& cfg) {
  NutsResult res;
  res.draws.resize(static_cast<std::size_t>(cfg.chains));
  res.stats.resize(static_cast<std::size_t>(cfg.chains));
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw <= 0) hw = 2;
  const int threads = cfg.threads > 0 ? cfg.threads : std::min(cfg.chains, hw);
  if (threads <= 1 || cfg.chains <= 1) {
    for (int c = 0; c < cfg.chains; ++c) {
      nuts_detail::run_chain(target, cfg, c, res.draws[static_cast<std::size_t>(c)],
                             res.stats[static_cast<std::size_t>(c)]);
    }
    return res;
  }
  std::vector<std::thread> pool;
  for (int tix = 0; tix < threads; ++tix) {
    pool.emplace_back([&, tix]() {
      for (std::size_t c = static_cast<std::size_t>(tix); c < res.draws.size();
           c += static_cast<std::size_t>(threads)) {
        nuts_detail::run_chain(target, cfg, static_cast<int>(c), res.draws[c], res.stats[c]);
      }
    });
  }
  for (auto& t : pool) t.join();
  return res;
}

}  // namespace cognoise::infer
