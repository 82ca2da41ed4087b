#pragma once

#include <string>
#include <vector>

#include "cognoise/design.hpp"
#include "cognoise/errors.hpp"

namespace cognoise::infer {

/// Registered model variants. Nested variants pin the removed parameter
/// exactly (mu_r = 1, nu_b = 0, nu_so = 0) inside the shared likelihood
/// kernels, so the full model evaluated at the pinned value reproduces the
/// nested likelihood bit for bit.
enum class Variant {
  altruism_full,
  altruism_mu1,
  altruism_nub0,
  altruism_nuso0,
  random_utility,
  number_main,
  number_mu1,
  combined_full,
  combined_nub0,
};

inline const char* variant_name(Variant v) {
  switch (v) {
    case Variant::altruism_full: return "altruism-full";
    case Variant::altruism_mu1: return "altruism-mu1";
    case Variant::altruism_nub0: return "altruism-nub0";
    case Variant::altruism_nuso0: return "altruism-nuso0";
    case Variant::random_utility: return "random-utility";
    case Variant::number_main: return "number-main";
    case Variant::number_mu1: return "number-mu1";
    case Variant::combined_full: return "combined-full";
    case Variant::combined_nub0: return "combined-nub0";
  }
  return "?";
}

inline Variant parse_variant(const std::string& s) {
  for (Variant v : {Variant::altruism_full, Variant::altruism_mu1, Variant::altruism_nub0,
                    Variant::altruism_nuso0, Variant::random_utility, Variant::number_main,
                    Variant::number_mu1, Variant::combined_full, Variant::combined_nub0}) {
    if (s == variant_name(v)) return v;
  }
  throw config_error("unknown model variant '" + s + "'");
}

inline const std::vector<Variant>& all_variants() {
  static const std::vector<Variant> v = {
      Variant::altruism_full, Variant::altruism_mu1,  Variant::altruism_nub0,
      Variant::altruism_nuso0, Variant::random_utility, Variant::number_main,
      Variant::number_mu1,    Variant::combined_full, Variant::combined_nub0};
  return v;
}

struct SlotInfo {
  std::string name;
  bool noise = false;  // group-specific when the spec's flag is on
};

struct ModelSpec {
  Variant variant = Variant::altruism_full;
  bool group_specific_noise = true;

  std::vector<SlotInfo> slots() const {
    switch (variant) {
      case Variant::altruism_full:
        return {{"nu_so", true}, {"nu_b", true}, {"b", false}, {"mu_r", false}};
      case Variant::altruism_mu1:
        return {{"nu_so", true}, {"nu_b", true}, {"b", false}};
      case Variant::altruism_nub0:
        return {{"nu_so", true}, {"b", false}, {"mu_r", false}};
      case Variant::altruism_nuso0:
        return {{"nu_b", true}, {"b", false}};
      case Variant::random_utility:
        return {{"sigma_ru", true}, {"b", false}};
      case Variant::number_main:
        return {{"nu_ab", true}, {"mu_rp", false}};
      case Variant::number_mu1:
        return {{"nu_ab", true}};
      case Variant::combined_full:
        return {{"nu_soa", true}, {"nu_b", true}, {"b", false}, {"mu_r", false}};
      case Variant::combined_nub0:
        return {{"nu_soa", true}, {"b", false}, {"mu_r", false}};
    }
    return {};
  }

  bool uses_altruism_records() const {
    return variant != Variant::number_main && variant != Variant::number_mu1;
  }
  bool uses_number_records() const {
    return variant == Variant::number_main || variant == Variant::number_mu1 ||
           variant == Variant::combined_full || variant == Variant::combined_nub0;
  }

  bool slot_group_specific(const SlotInfo& s) const {
    return s.noise && group_specific_noise;
  }
};

}  // namespace cognoise::infer
