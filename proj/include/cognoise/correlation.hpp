#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "cognoise/rng.hpp"

namespace cognoise::corr {

/// Dense Cholesky of a k x k SPD matrix (row-major). Throws on non-PD input.
inline std::vector<double> cholesky(const std::vector<double>& a, std::size_t k) {
  if (a.size() != k * k) throw std::invalid_argument("cholesky: bad size");
  std::vector<double> l(k * k, 0.0);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double s = a[i * k + j];
      for (std::size_t p = 0; p < j; ++p) s -= l[i * k + p] * l[j * k + p];
      if (i == j) {
        if (!(s > 0.0)) throw std::invalid_argument("cholesky: matrix not positive definite");
        l[i * k + i] = std::sqrt(s);
      } else {
        l[i * k + j] = s / l[j * k + j];
      }
    }
  }
  return l;
}

/// Unconstrained-to-Cholesky-correlation transform. The k(k-1)/2 coordinates
/// y map through z = tanh(y) and row-wise stick breaking to a lower-triangular
/// L with unit-norm rows, so Omega = L L^T is always a valid correlation
/// matrix. log_prior holds the LKJ(eta) density of Omega expressed through L
/// plus the full change-of-variable terms, i.e. the additive contribution of
/// the correlation block to an unconstrained log posterior.
struct CorrTransform {
  std::size_t k = 0;
  std::vector<double> z;         // tanh(y), size m
  std::vector<double> L;         // k x k row-major, lower triangular
  std::vector<double> sq_before; // per off-diagonal element: sum of squares of the row so far
  std::vector<double> sq_diag;   // per row i >= 1: sum of squares before the diagonal
  double log_prior = 0.0;
};

inline std::size_t corr_coord_count(std::size_t k) { return k * (k - 1) / 2; }

inline CorrTransform corr_forward(std::span<const double> y, std::size_t k, double eta) {
  const std::size_t m = corr_coord_count(k);
  if (y.size() != m) throw std::invalid_argument("corr_forward: bad coordinate count");
  CorrTransform t;
  t.k = k;
  t.z.resize(m);
  t.L.assign(k * k, 0.0);
  t.sq_before.resize(m);
  t.sq_diag.assign(k, 0.0);
  if (k == 0) return t;
  t.L[0] = 1.0;
  std::size_t idx = 0;
  double lp = 0.0;
  for (std::size_t i = 1; i < k; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < i; ++j, ++idx) {
      const double zj = std::tanh(y[idx]);
      t.z[idx] = zj;
      t.sq_before[idx] = s;
      const double w = std::sqrt(1.0 - s);
      const double lij = zj * w;
      t.L[i * k + j] = lij;
      lp += std::log1p(-zj * zj) + 0.5 * std::log1p(-s);
      s += lij * lij;
    }
    t.sq_diag[i] = s;
    const double lii = std::sqrt(std::max(1.0 - s, 1e-300));
    t.L[i * k + i] = lii;
    // LKJ(eta) density through the Cholesky factor.
    const double coeff = static_cast<double>(k) - static_cast<double>(i + 1) + 2.0 * eta - 2.0;
    lp += coeff * std::log(lii);
  }
  t.log_prior = lp;
  return t;
}

/// Reverse pass: takes adjoints of every L entry (k x k row-major; row 0 and
/// zero entries ignored) plus the direct log_prior terms, and accumulates the
/// gradient with respect to y into adj_y.
inline void corr_backward(const CorrTransform& t, double eta,
                          std::span<const double> adj_L, std::span<double> adj_y) {
  const std::size_t k = t.k;
  const std::size_t m = corr_coord_count(k);
  if (adj_L.size() != k * k || adj_y.size() != m) {
    throw std::invalid_argument("corr_backward: bad sizes");
  }
  std::size_t row_start = 0;  // index of (i, 0) within the coordinate vector
  for (std::size_t i = 1; i < k; ++i) {
    const std::size_t base = row_start;
    const double lii = t.L[i * k + i];
    const double coeff = static_cast<double>(k) - static_cast<double>(i + 1) + 2.0 * eta - 2.0;
    // L_ii = sqrt(1 - s_i); density term coeff * log(L_ii).
    double a_lii = adj_L[i * k + i] + coeff / lii;
    double a_s = a_lii * (-0.5 / lii);
    for (std::size_t j = i; j-- > 0;) {
      const std::size_t idx = base + j;
      const double lij = t.L[i * k + j];
      const double zj = t.z[idx];
      const double s_before = t.sq_before[idx];
      const double w2 = 1.0 - s_before;
      const double w = std::sqrt(w2);
      // s_{j+1} = s_j + L_ij^2
      double a_lij = adj_L[i * k + j] + a_s * 2.0 * lij;
      // L_ij = z_ij * w_j
      double a_z = a_lij * w;
      const double a_w = a_lij * zj;
      // density: log(1 - z^2) and 0.5 * log(1 - s_j)
      a_z += -2.0 * zj / (1.0 - zj * zj);
      a_s += a_w * (-0.5 / w) - 0.5 / w2;
      adj_y[idx] += a_z * (1.0 - zj * zj);
    }
    row_start += i;
  }
}

inline std::vector<double> correlation_from_cholesky(const std::vector<double>& l,
                                                     std::size_t k) {
  std::vector<double> omega(k * k, 0.0);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      double s = 0.0;
      for (std::size_t p = 0; p <= std::min(i, j); ++p) s += l[i * k + p] * l[j * k + p];
      omega[i * k + j] = s;
    }
  }
  return omega;
}

/// Inverse of corr_forward: recover unconstrained coordinates from a
/// correlation matrix via its Cholesky factor.
inline std::vector<double> corr_unconstrain(const std::vector<double>& omega,
                                            std::size_t k) {
  const auto l = cholesky(omega, k);
  std::vector<double> y(corr_coord_count(k));
  std::size_t idx = 0;
  for (std::size_t i = 1; i < k; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < i; ++j, ++idx) {
      const double w = std::sqrt(1.0 - s);
      const double z = l[i * k + j] / w;
      y[idx] = std::atanh(z);
      s += l[i * k + j] * l[i * k + j];
    }
  }
  return y;
}

/// LKJ(eta) log density of a correlation matrix up to its normalizing
/// constant: (eta - 1) * log det(Omega).
inline double lkj_log_density_unnormalized(const std::vector<double>& omega,
                                           std::size_t k, double eta) {
  const auto l = cholesky(omega, k);
  double logdet = 0.0;
  for (std::size_t i = 0; i < k; ++i) logdet += 2.0 * std::log(l[i * k + i]);
  return (eta - 1.0) * logdet;
}

/// Draw a correlation matrix from LKJ(eta) with the onion method.
inline std::vector<double> lkj_sample(std::size_t k, double eta, rng::Stream& stream) {
  if (k == 0) return {};
  std::vector<double> omega(k * k, 0.0);
  omega[0] = 1.0;
  if (k == 1) return omega;
  double beta_par = eta + (static_cast<double>(k) - 2.0) / 2.0;
  const double r12 = 2.0 * stream.beta(beta_par, beta_par) - 1.0;
  omega[0 * k + 1] = r12;
  omega[1 * k + 0] = r12;
  omega[1 * k + 1] = 1.0;
  for (std::size_t mdim = 2; mdim < k; ++mdim) {
    beta_par -= 0.5;
    const double yy = stream.beta(static_cast<double>(mdim) / 2.0, beta_par);
    const auto u = stream.unit_sphere(mdim);
    // z = chol(Omega_m) * (sqrt(y) * u)
    std::vector<double> sub(mdim * mdim);
    for (std::size_t i = 0; i < mdim; ++i)
      for (std::size_t j = 0; j < mdim; ++j) sub[i * mdim + j] = omega[i * k + j];
    const auto a = cholesky(sub, mdim);
    const double r = std::sqrt(yy);
    for (std::size_t i = 0; i < mdim; ++i) {
      double zi = 0.0;
      for (std::size_t j = 0; j <= i; ++j) zi += a[i * mdim + j] * r * u[j];
      omega[i * k + mdim] = zi;
      omega[mdim * k + i] = zi;
    }
    omega[mdim * k + mdim] = 1.0;
  }
  return omega;
}

}  // namespace cognoise::corr
