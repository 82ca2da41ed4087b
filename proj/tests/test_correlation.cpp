#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "cognoise/correlation.hpp"
#include "cognoise/math.hpp"
#include "cognoise/rng.hpp"

using namespace cognoise;

TEST_CASE("cholesky of a known matrix") {
  const std::vector<double> a = {4.0, 2.0, 2.0, 3.0};
  const auto l = corr::cholesky(a, 2);
  CHECK(l[0] == Catch::Approx(2.0));
  CHECK(l[2] == Catch::Approx(1.0));
  CHECK(l[3] == Catch::Approx(std::sqrt(2.0)));
  CHECK_THROWS_AS(corr::cholesky({1.0, 2.0, 2.0, 1.0}, 2), std::invalid_argument);
}

TEST_CASE("corr transform round trip") {
  rng::Stream s(31);
  for (std::size_t k : {2u, 3u, 4u}) {
    for (int rep = 0; rep < 50; ++rep) {
      std::vector<double> y(corr::corr_coord_count(k));
      for (auto& v : y) v = 2.0 * (s.uniform() - 0.5);
      const auto t = corr::corr_forward(y, k, 2.0);
      const auto omega = corr::correlation_from_cholesky(t.L, k);
      // valid correlation matrix
      for (std::size_t i = 0; i < k; ++i) {
        CHECK(omega[i * k + i] == Catch::Approx(1.0).margin(1e-12));
        for (std::size_t j = 0; j < i; ++j) {
          CHECK(std::abs(omega[i * k + j]) < 1.0);
          CHECK(omega[i * k + j] == Catch::Approx(omega[j * k + i]).margin(1e-15));
        }
      }
      const auto y2 = corr::corr_unconstrain(omega, k);
      for (std::size_t i = 0; i < y.size(); ++i) {
        CHECK(y2[i] == Catch::Approx(y[i]).margin(1e-9));
      }
    }
  }
}

TEST_CASE("corr backward matches finite differences") {
  rng::Stream s(77);
  const std::size_t k = 4;
  const std::size_t m = corr::corr_coord_count(k);
  for (int rep = 0; rep < 25; ++rep) {
    std::vector<double> y(m);
    for (auto& v : y) v = 1.4 * (s.uniform() - 0.5);
    // random adjoint for L plus the density itself
    std::vector<double> adj_l(k * k);
    for (auto& v : adj_l) v = s.normal();
    adj_l[0] = 0.0;  // L(0,0) is constant
    const auto scalar = [&](const std::vector<double>& yy) {
      const auto t = corr::corr_forward(yy, k, 2.0);
      double v = t.log_prior;
      for (std::size_t i = 0; i < k * k; ++i) v += adj_l[i] * t.L[i];
      return v;
    };
    const auto t0 = corr::corr_forward(y, k, 2.0);
    std::vector<double> grad(m, 0.0);
    corr::corr_backward(t0, 2.0, adj_l, grad);
    const double h = 1e-6;
    for (std::size_t i = 0; i < m; ++i) {
      auto yp = y;
      auto ym = y;
      yp[i] += h;
      ym[i] -= h;
      const double fd = (scalar(yp) - scalar(ym)) / (2.0 * h);
      CHECK(grad[i] == Catch::Approx(fd).margin(1e-5).epsilon(1e-5));
    }
  }
}

TEST_CASE("lkj density prefers identity over strong correlation") {
  const std::size_t k = 4;
  std::vector<double> ident(k * k, 0.0);
  for (std::size_t i = 0; i < k; ++i) ident[i * k + i] = 1.0;
  std::vector<double> strong(k * k, 0.9);
  for (std::size_t i = 0; i < k; ++i) strong[i * k + i] = 1.0;
  CHECK(corr::lkj_log_density_unnormalized(ident, k, 2.0) >
        corr::lkj_log_density_unnormalized(strong, k, 2.0));
  CHECK(corr::lkj_log_density_unnormalized(ident, k, 2.0) == 0.0);
}

TEST_CASE("onion sampler marginal moments") {
  // for K = 4, eta = 2 the marginal correlation is 2*Beta(3,3)-1:
  // mean 0, variance 1/7
  rng::Stream s(123);
  math::Welford acc01;
  math::Welford acc23;
  const std::size_t k = 4;
  for (int i = 0; i < 20000; ++i) {
    const auto omega = corr::lkj_sample(k, 2.0, s);
    acc01.add(omega[0 * k + 1]);
    acc23.add(omega[2 * k + 3]);
    corr::cholesky(omega, k);  // every draw is a valid correlation matrix
  }
  CHECK(std::abs(acc01.mean()) < 0.01);
  CHECK(acc01.variance() == Catch::Approx(1.0 / 7.0).margin(0.006));
  CHECK(std::abs(acc23.mean()) < 0.01);
  CHECK(acc23.variance() == Catch::Approx(1.0 / 7.0).margin(0.006));
}
