#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "cognoise/correlation.hpp"
#include "cognoise/hierarchy.hpp"
#include "cognoise/inference/model_spec.hpp"

namespace cognoise::infer {

/// Coordinate layout of the unconstrained sampling space:
///   [ slot base means | group deltas | log tau | correlation coords | z_i... ]
/// Group-specific means are parametrized as mu_B = base, mu_T = base + delta.
struct Layout {
  ModelSpec spec;
  std::vector<SlotInfo> slots;
  std::vector<int> gs_slots;  // indices of group-specific slots
  std::size_t n_participants = 0;

  std::size_t k = 0;  // slots
  std::size_t g = 0;  // group deltas
  std::size_t m = 0;  // correlation coordinates

  std::size_t off_mu = 0;
  std::size_t off_delta = 0;
  std::size_t off_ltau = 0;
  std::size_t off_y = 0;
  std::size_t off_z = 0;

  Layout() = default;
  Layout(const ModelSpec& s, std::size_t n) : spec(s), slots(s.slots()), n_participants(n) {
    k = slots.size();
    for (std::size_t i = 0; i < k; ++i) {
      if (spec.slot_group_specific(slots[i])) gs_slots.push_back(static_cast<int>(i));
    }
    g = gs_slots.size();
    m = corr::corr_coord_count(k);
    off_mu = 0;
    off_delta = k;
    off_ltau = k + g;
    off_y = off_ltau + k;
    off_z = off_y + m;
  }

  std::size_t dim() const { return off_z + n_participants * k; }

  /// Position of slot s in the delta block, or -1 if not group-specific.
  int delta_index(std::size_t s) const {
    for (std::size_t i = 0; i < gs_slots.size(); ++i) {
      if (gs_slots[i] == static_cast<int>(s)) return static_cast<int>(off_delta + i);
    }
    return -1;
  }

  std::vector<std::string> coordinate_names() const {
    std::vector<std::string> out;
    out.reserve(dim());
    for (const auto& s : slots) out.push_back("mu[" + s.name + "]");
    for (int gi : gs_slots) out.push_back("delta[" + slots[static_cast<std::size_t>(gi)].name + "]");
    for (const auto& s : slots) out.push_back("log_tau[" + s.name + "]");
    for (std::size_t i = 1; i < k; ++i) {
      for (std::size_t j = 0; j < i; ++j) {
        out.push_back("corr[" + slots[i].name + "," + slots[j].name + "]");
      }
    }
    for (std::size_t p = 0; p < n_participants; ++p) {
      for (const auto& s : slots) out.push_back("z[" + std::to_string(p) + "][" + s.name + "]");
    }
    return out;
  }
};

/// Decoded hyper-level view of an unconstrained position.
struct DecodedHyper {
  std::vector<double> mu_base;   // k
  std::vector<double> delta;    // k, zero when not group-specific
  std::vector<double> tau;      // k
  corr::CorrTransform corr;     // L, z, density terms

  double mu(std::size_t s, int group) const {
    return mu_base[s] + (group == hier::kGroupTreatment ? delta[s] : 0.0);
  }
};

inline DecodedHyper decode_hyper(const Layout& lay, std::span<const double> x, double lkj_eta) {
  DecodedHyper h;
  h.mu_base.assign(x.begin() + static_cast<std::ptrdiff_t>(lay.off_mu),
                   x.begin() + static_cast<std::ptrdiff_t>(lay.off_mu + lay.k));
  h.delta.assign(lay.k, 0.0);
  for (std::size_t i = 0; i < lay.g; ++i) {
    h.delta[static_cast<std::size_t>(lay.gs_slots[i])] = x[lay.off_delta + i];
  }
  h.tau.resize(lay.k);
  for (std::size_t s = 0; s < lay.k; ++s) h.tau[s] = std::exp(x[lay.off_ltau + s]);
  h.corr = corr::corr_forward(x.subspan(lay.off_y, lay.m), lay.k, lkj_eta);
  return h;
}

/// Per-participant constrained parameters (natural scale) for one position.
inline std::vector<double> participant_theta(const Layout& lay, const DecodedHyper& h,
                                             std::span<const double> x, std::size_t p, int group) {
  std::vector<double> theta(lay.k);
  const std::size_t z0 = lay.off_z + p * lay.k;
  for (std::size_t s = 0; s < lay.k; ++s) {
    double lz = 0.0;
    for (std::size_t j = 0; j <= s; ++j) lz += h.corr.L[s * lay.k + j] * x[z0 + j];
    theta[s] = std::exp(h.mu(s, group) + h.tau[s] * lz);
  }
  return theta;
}

}  // namespace cognoise::infer
