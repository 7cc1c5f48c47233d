#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "locsnn/errors.hpp"
#include "locsnn/kernel.hpp"

using namespace locsnn;
using doctest::Approx;

TEST_CASE("incoming kernel") {
  KernelConfig cfg;
  cfg.tau_s = 2.0;

  SUBCASE("vanishes for negative offsets") {
    CHECK(eval_epsilon(-1.0, cfg) == 0.0);
    CHECK(eval_epsilon(-0.001, cfg) == 0.0);
  }
  SUBCASE("starts at zero and peaks at 1 after tau_s") {
    CHECK(eval_epsilon(0.0, cfg) == 0.0);
    CHECK(eval_epsilon(cfg.tau_s, cfg) == 1.0);
    // Peak: neighbors are strictly below.
    CHECK(eval_epsilon(cfg.tau_s - 0.1, cfg) < 1.0);
    CHECK(eval_epsilon(cfg.tau_s + 0.1, cfg) < 1.0);
  }
  SUBCASE("is nonnegative everywhere") {
    for (double s = -3.0; s < 40.0; s += 0.25) {
      CHECK(eval_epsilon(s, cfg) >= 0.0);
    }
  }
  SUBCASE("transmission delay shifts the kernel") {
    KernelConfig delayed = cfg;
    delayed.delay = 3;
    CHECK(eval_epsilon(2.0, delayed) == 0.0);
    CHECK(eval_epsilon(3.0, delayed) == 0.0);
    CHECK(eval_epsilon(3.0 + cfg.tau_s, delayed) == 1.0);
  }
}

TEST_CASE("refractory kernel") {
  KernelConfig cfg;
  cfg.tau_r = 1.5;
  cfg.theta = 10.0;

  SUBCASE("vanishes for negative offsets") {
    CHECK(eval_eta(-5.0, cfg) == 0.0);
  }
  SUBCASE("maximum magnitude is 2*theta at tau_r") {
    CHECK(eval_eta(cfg.tau_r, cfg) == Approx(-2.0 * cfg.theta).epsilon(1e-15));
  }
  SUBCASE("never positive, decays to zero") {
    for (double s = 0.0; s < 30.0; s += 0.5) {
      CHECK(eval_eta(s, cfg) <= 0.0);
    }
    CHECK(std::abs(eval_eta(50.0 * cfg.tau_r, cfg)) < 1e-15 * 2.0 * cfg.theta);
  }
}

TEST_CASE("sampled tables equal pointwise evaluation") {
  KernelConfig cfg;
  cfg.tau_s = 1.0;
  cfg.tau_r = 2.0;
  cfg.kernel_len = 12;
  KernelTables tables = sample_kernels(cfg);
  REQUIRE(tables.eps.size() == 12);
  REQUIRE(tables.eta.size() == 12);
  CHECK(tables.eps[0] == 0.0);
  for (int k = 0; k < 12; ++k) {
    CHECK(tables.eps[k] == eval_epsilon(static_cast<double>(k), cfg));
    CHECK(tables.eta[k] == eval_eta(static_cast<double>(k), cfg));
    CHECK(tables.eta[k] <= 0.0);
  }

  SUBCASE("degenerate single-entry truncation") {
    cfg.kernel_len = 1;
    KernelTables single = sample_kernels(cfg);
    CHECK(single.eps.size() == 1);
    CHECK(single.eps[0] == 0.0);
  }
  SUBCASE("unresolved length is rejected") {
    cfg.kernel_len = 0;
    CHECK_THROWS_AS(sample_kernels(cfg), ValidationError);
  }
}

TEST_CASE("default truncation") {
  KernelConfig cfg;
  cfg.tau_s = 1.0;
  cfg.tau_r = 1.0;
  CHECK(default_kernel_len(325, cfg) == 8);
  CHECK(default_kernel_len(4, cfg) == 4);  // capped by the axis
  cfg.tau_r = 2.5;
  CHECK(default_kernel_len(100, cfg) == 20);
  CHECK(resolve_kernel_len(cfg, 100).kernel_len == 20);
  cfg.kernel_len = 6;
  CHECK(resolve_kernel_len(cfg, 100).kernel_len == 6);  // explicit wins
}

TEST_CASE("surrogate derivative") {
  KernelConfig cfg;
  cfg.theta = 10.0;
  cfg.surr_alpha = 1.5;
  cfg.surr_beta = 2.0;

  SUBCASE("peaks at the threshold") {
    CHECK(surrogate_derivative(cfg.theta, cfg) == cfg.surr_alpha);
  }
  SUBCASE("symmetric about the threshold") {
    for (double delta : {0.1, 1.0, 3.7, 12.0}) {
      CHECK(surrogate_derivative(cfg.theta + delta, cfg) ==
            Approx(surrogate_derivative(cfg.theta - delta, cfg)).epsilon(1e-15));
    }
  }
  SUBCASE("decays exponentially") {
    const double u = cfg.theta + 10.0 / cfg.surr_beta;
    CHECK(surrogate_derivative(u, cfg) ==
          Approx(cfg.surr_alpha * std::exp(-10.0)).epsilon(1e-12));
  }
  SUBCASE("strictly positive far from threshold") {
    CHECK(surrogate_derivative(cfg.theta - 200.0, cfg) > 0.0);
    CHECK(surrogate_derivative(cfg.theta + 200.0, cfg) > 0.0);
  }
}

TEST_CASE("relaxed spike is the surrogate's antiderivative") {
  KernelConfig cfg;
  cfg.theta = 4.0;
  cfg.surr_alpha = 1.0;
  cfg.surr_beta = 0.8;
  const double h = 1e-6;
  for (double u : {-2.0, 3.9, 4.0, 4.1, 9.0}) {
    const double fd = (relaxed_spike(u + h, cfg) - relaxed_spike(u - h, cfg)) / (2 * h);
    CHECK(fd == Approx(surrogate_derivative(u, cfg)).epsilon(1e-6));
  }
  CHECK(relaxed_spike(-1e9, cfg) == 0.0);
  CHECK(relaxed_spike(1e9, cfg) == Approx(2.0 * cfg.surr_alpha / cfg.surr_beta));
  CHECK(relaxed_spike(cfg.theta, cfg) == Approx(cfg.surr_alpha / cfg.surr_beta));
}

TEST_CASE("config validation") {
  KernelConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.tau_s = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
  cfg = KernelConfig{};
  cfg.theta = -1.0;
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
  cfg = KernelConfig{};
  cfg.surr_beta = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
  cfg = KernelConfig{};
  cfg.delay = -1;
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
}
