#include <array>
#include <cmath>

#include "doctest.h"
#include "ionramp/ramp.hpp"

using namespace ionramp;

TEST_CASE("linear schedule") {
  const auto p = make_protocol(6, {4, 1}, 1.0, -1.0, 500.0, 500.0);
  CHECK(p.ramped_sites == std::vector<int>{1, 4});

  CHECK(u_at(p, 0.0, 1) == 1.0);
  CHECK(u_at(p, 250.0, 1) == doctest::Approx(0.0));
  CHECK(u_at(p, 125.0, 4) == doctest::Approx(0.5));
  CHECK(u_at(p, 500.0, 4) == -1.0);
  CHECK(u_at(p, 800.0, 4) == -1.0);
  for (double t : {0.0, 100.0, 500.0, 900.0}) CHECK(u_at(p, t, 0) == 1.0);

  const Eigen::VectorXd mid = interaction_at(p, 250.0);
  CHECK(mid.size() == 6);
  CHECK(mid(2) == 1.0);
  CHECK(std::abs(mid(4)) < 1e-15);

  const Eigen::VectorXd end = final_interaction(p);
  CHECK((end - interaction_at(p, 500.0)).cwiseAbs().maxCoeff() == 0.0);
  CHECK(end(1) == -1.0);
  CHECK(end(5) == 1.0);
}

TEST_CASE("schedule is monotone and continuous at tau") {
  const auto p = make_protocol(8, {2}, 2.5, -1.0, 173.0, 0.0);
  double previous = u_at(p, 0.0, 2);
  for (int k = 1; k <= 1000; ++k) {
    const double u = u_at(p, 173.0 * k / 1000.0, 2);
    CHECK(u <= previous);
    previous = u;
  }
  CHECK(u_at(p, 173.0 - 1e-9, 2) == doctest::Approx(-1.0).epsilon(1e-9));
}

TEST_CASE("residual weight and its integral") {
  const auto p = make_protocol(6, {1, 4}, 1.0, -1.0, 100.0, 50.0);
  // g(t) = 2 (1 - t/100) until tau
  CHECK(residual_weight(p, 0.0) == 2.0);
  CHECK(residual_weight(p, 25.0) == doctest::Approx(1.5));
  CHECK(residual_weight(p, 100.0) == 0.0);
  CHECK(residual_weight(p, 140.0) == 0.0);

  CHECK(residual_weight_integral(p, 0.0) == 0.0);
  CHECK(residual_weight_integral(p, 50.0) == doctest::Approx(75.0));
  CHECK(residual_weight_integral(p, 100.0) == doctest::Approx(100.0));
  CHECK(residual_weight_integral(p, 150.0) == doctest::Approx(100.0));

  // H(t) - H(tau) on a ramped site equals g(t) n(n-1).
  for (double t : {0.0, 13.0, 61.0, 100.0}) {
    CHECK(u_at(p, t, 1) - u_at(p, 100.0, 1) == doctest::Approx(residual_weight(p, t)));
  }

  // Trapezoid check of the closed-form integral.
  const int n = 4000;
  double acc = 0;
  for (int k = 0; k < n; ++k) {
    const double a = 130.0 * k / n, b = 130.0 * (k + 1) / n;
    acc += (residual_weight(p, a) + residual_weight(p, b)) / 2 * (b - a);
  }
  CHECK(acc == doctest::Approx(residual_weight_integral(p, 130.0)).epsilon(1e-6));
}

TEST_CASE("protocol validation") {
  CHECK_THROWS_AS(make_protocol(6, {1, 1}, 1, -1, 10, 0), std::invalid_argument);
  CHECK_THROWS_AS(make_protocol(6, {6}, 1, -1, 10, 0), std::invalid_argument);
  CHECK_THROWS_AS(make_protocol(6, {-1}, 1, -1, 10, 0), std::invalid_argument);
  CHECK_THROWS_AS(make_protocol(6, {1}, 1, -1, 0, 0), std::invalid_argument);
  CHECK_THROWS_AS(make_protocol(6, {1}, 1, -1, -3, 0), std::invalid_argument);
  CHECK_THROWS_AS(make_protocol(6, {1}, 1, -1, 10, -1), std::invalid_argument);

  const auto p = make_protocol(6, {1}, 1, -1, 10, 0);
  CHECK_THROWS_AS(u_at(p, 1.0, 6), std::out_of_range);
  CHECK_THROWS_AS(u_at(p, -1.0, 1), std::invalid_argument);
}

TEST_CASE("named protocols") {
  const std::array<int, 2> pair{4, 1};
  const auto bell = bell_protocol(6, pair, 1.0, -1.0, 500.0);
  CHECK(bell.ramped_sites == std::vector<int>{1, 4});
  CHECK(bell.hold == 500.0);
  CHECK(bell.total_time() == 1000.0);
  CHECK(bell_protocol(6, pair, 1.0, -1.0, 500.0, 0.0).hold == 0.0);

  const std::array<int, 3> bad_pair{1, 2, 3};
  CHECK_THROWS_AS(bell_protocol(6, bad_pair, 1, -1, 10), std::invalid_argument);

  const std::array<int, 3> triple{2, 4, 6};
  const auto w = w_protocol(8, triple, 1.0, -1.0, 300.0);
  CHECK(w.ramped_sites.size() == 3);
  CHECK(w.hold == 300.0);
  CHECK_THROWS_AS(w_protocol(8, pair, 1, -1, 10), std::invalid_argument);

  const auto cool = cooling_protocol(8, 2, 0.4, -1.0, 173.0);
  CHECK(cool.ramped_sites == std::vector<int>{2});
  CHECK(cool.hold == 0.0);
  CHECK(cool.total_time() == 173.0);
}

TEST_CASE("edge and generic site choices") {
  const std::array<int, 2> ends{0, 5};
  CHECK(bell_protocol(6, ends, 1, -1, 10).ramped_sites == std::vector<int>{0, 5});
  const std::array<int, 3> spread{0, 2, 4};
  CHECK(w_protocol(6, spread, 1, -1, 10).ramped_sites.size() == 3);
  const std::array<int, 3> repeated{1, 1, 3};
  CHECK_THROWS_AS(w_protocol(6, repeated, 1, -1, 10), std::invalid_argument);
  CHECK(cooling_protocol(8, 0, 0.4, -1, 10).ramped_sites == std::vector<int>{0});
  CHECK_THROWS_AS(cooling_protocol(8, 8, 0.4, -1, 10), std::invalid_argument);
}

TEST_CASE("schedule Lipschitz bound") {
  const auto p = make_protocol(5, {0, 3}, 0.4, -1.0, 37.0, 10.0);
  const double eps = 0.01;
  const double bound = std::abs(p.u_final - p.u_initial) * eps / p.duration;
  for (int k = 0; k < 5000; ++k) {
    const double t = 47.0 * k / 5000.0;
    for (int i = 0; i < 5; ++i) CHECK(std::abs(u_at(p, t + eps, i) - u_at(p, t, i)) <= bound * (1 + 1e-12));
  }
}
