#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "cognoise/correlation.hpp"
#include "cognoise/errors.hpp"
#include "cognoise/rng.hpp"

namespace cognoise::hier {

inline constexpr int kGroupBaseline = 0;
inline constexpr int kGroupTreatment = 1;

inline std::string group_label(int group) { return group == kGroupTreatment ? "T" : "B"; }
inline int parse_group(const std::string& s) {
  if (s == "B") return kGroupBaseline;
  if (s == "T") return kGroupTreatment;
  throw data_error("unknown group label '" + s + "' (expected B or T)");
}

/// One coordinate of the individual-parameter hierarchy. Values live on the
/// log scale; group-specific slots carry separate baseline/treatment means.
struct ParamSlot {
  std::string name;
  bool group_specific = false;
  double mu_base = 0.0;
  double mu_treat = 0.0;  // ignored unless group_specific

  double mu(int group) const {
    return (group_specific && group == kGroupTreatment) ? mu_treat : mu_base;
  }
};

/// Population-level parameters: per-slot log-scale means (noise slots split by
/// group), positive scales tau, and a correlation matrix Omega shared by both
/// groups.
struct HyperParams {
  std::vector<ParamSlot> slots;
  std::vector<double> tau;    // per slot, > 0
  std::vector<double> omega;  // k x k row-major correlation

  std::size_t k() const { return slots.size(); }

  int slot_index(const std::string& name) const {
    for (std::size_t i = 0; i < slots.size(); ++i) {
      if (slots[i].name == name) return static_cast<int>(i);
    }
    return -1;
  }

  void validate() const {
    const std::size_t n = k();
    if (n == 0) throw data_error("hyper: no parameter slots");
    if (tau.size() != n) throw data_error("hyper: tau size mismatch");
    for (double t : tau) {
      if (!(t > 0.0) || !std::isfinite(t)) throw data_error("hyper: tau must be finite and > 0");
    }
    if (omega.size() != n * n) throw data_error("hyper: omega size mismatch");
    for (std::size_t i = 0; i < n; ++i) {
      if (omega[i * n + i] != 1.0) throw data_error("hyper: omega diagonal must be 1");
      for (std::size_t j = 0; j < i; ++j) {
        if (omega[i * n + j] != omega[j * n + i]) throw data_error("hyper: omega must be symmetric");
      }
    }
    try {
      corr::cholesky(omega, n);
    } catch (const std::invalid_argument&) {
      throw data_error("hyper: omega is not positive definite");
    }
  }
};

struct Participant {
  std::string id;
  int group = kGroupBaseline;
  std::vector<double> log_theta;  // per slot
  std::vector<double> theta;      // exp(log_theta)
};

using Population = std::vector<Participant>;

/// Draw n participants for one group: log theta_i = mu_group + diag(tau) L z_i
/// with L the Cholesky factor of Omega. The z stream is keyed by the global
/// participant index only, so the same index yields the same innovations in
/// either group and group assignment moves only the group-specific means.
inline Population draw_participants(const HyperParams& hyper, std::size_t n, int group,
                                    const rng::Stream& stream, std::size_t index_offset = 0) {
  hyper.validate();
  const std::size_t k = hyper.k();
  const auto l = corr::cholesky(hyper.omega, k);
  Population out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t gid = index_offset + i;
    rng::Stream zs = stream.derive("hier.z", gid);
    std::vector<double> z(k);
    for (auto& v : z) v = zs.normal();
    Participant p;
    char buf[16];
    std::snprintf(buf, sizeof(buf), "P%04zu", gid);
    p.id = buf;
    p.group = group;
    p.log_theta.resize(k);
    p.theta.resize(k);
    for (std::size_t s = 0; s < k; ++s) {
      double lz = 0.0;
      for (std::size_t j = 0; j <= s; ++j) lz += l[s * k + j] * z[j];
      p.log_theta[s] = hyper.slots[s].mu(group) + hyper.tau[s] * lz;
      p.theta[s] = std::exp(p.log_theta[s]);
    }
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace cognoise::hier
