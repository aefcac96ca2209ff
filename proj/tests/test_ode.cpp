#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "schubart/ode.hpp"

using namespace schubart::ode;

namespace {
constexpr double kPi = std::numbers::pi;

Vec<2> rotate(double, const Vec<2>& y) { return {y[1], -y[0]}; }
}  // namespace

TEST_CASE("exponential decay") {
  Options opt;
  opt.rel_tol = opt.abs_tol = 1e-12;
  auto res = integrate<1>([](double, const Vec<1>& y) { return Vec<1>{-y[0]}; }, 0.0, {1.0}, 5.0, opt);
  CHECK(res.status == Status::Completed);
  CHECK(res.t_final == 5.0);
  CHECK(std::abs(res.y_final[0] - std::exp(-5.0)) <= 1e-12);
  for (std::size_t k = 1; k < res.t.size(); ++k) CHECK(res.t[k] > res.t[k - 1]);
}

TEST_CASE("harmonic oscillator over ten periods") {
  Options opt;
  auto res = integrate<2>(rotate, 0.0, {0.0, 1.0}, 20 * kPi, opt);
  CHECK(std::abs(res.y_final[0] - std::sin(20 * kPi)) <= 1e-9);
  CHECK(std::abs(res.y_final[1] - 1.0) <= 1e-9);
}

TEST_CASE("dense output at requested times") {
  Options opt;
  std::vector<double> times;
  for (int k = 0; k <= 40; ++k) times.push_back(0.25 * k);
  auto res = integrate<2>(rotate, 0.0, {0.0, 1.0}, 10.0, opt, {}, times);
  REQUIRE(res.out_t.size() == times.size());
  for (std::size_t k = 0; k < times.size(); ++k) {
    CHECK(res.out_t[k] == times[k]);
    CHECK(std::abs(res.out_y[k][0] - std::sin(times[k])) <= 1e-9);
  }
}

TEST_CASE("terminal event is located precisely") {
  Options opt;
  std::vector<Event<2>> ev{{[](double, const Vec<2>& y) { return y[0]; }, -1, true}};
  auto res = integrate<2>(rotate, 0.0, {0.0, 1.0}, 10.0, opt, ev);
  CHECK(res.status == Status::EventReached);
  REQUIRE(res.hits.size() == 1);
  CHECK(std::abs(res.hits[0].t - kPi) <= 1e-12);
  CHECK(std::abs(res.hits[0].y[0]) <= 1e-12);
  CHECK(res.t_final == res.hits[0].t);
}

TEST_CASE("non-terminal events in both directions") {
  Options opt;
  std::vector<Event<2>> ev{{[](double, const Vec<2>& y) { return y[0]; }, 0, false}};
  auto res = integrate<2>(rotate, 0.0, {0.0, 1.0}, 10.0, opt, ev);
  CHECK(res.status == Status::Completed);
  REQUIRE(res.hits.size() == 3);
  for (int k = 0; k < 3; ++k) CHECK(std::abs(res.hits[k].t - (k + 1) * kPi) <= 1e-11);
}

TEST_CASE("projection after each step") {
  Options opt;
  opt.rel_tol = opt.abs_tol = 1e-6;
  int projected = 0;
  auto res = integrate<2>(rotate, 0.0, {0.0, 1.0}, 50.0, opt, {}, {}, [&](double, Vec<2>& y) {
    const double n = std::hypot(y[0], y[1]);
    y[0] /= n;
    y[1] /= n;
    ++projected;
    return true;
  });
  CHECK(projected > 0);
  CHECK(std::abs(std::hypot(res.y_final[0], res.y_final[1]) - 1.0) <= 1e-15);
}

TEST_CASE("non-finite right-hand side ends in step failure") {
  Options opt;
  auto f = [](double t, const Vec<1>& y) {
    return Vec<1>{t > 1.0 ? std::numeric_limits<double>::quiet_NaN() : y[0]};
  };
  auto res = integrate<1>(f, 0.0, {1.0}, 5.0, opt);
  CHECK(res.status == Status::StepFailure);
  CHECK(res.t_final <= 1.0 + 1e-12);
}

TEST_CASE("step budget") {
  Options opt;
  opt.max_steps = 10;
  opt.max_step = 1e-3;
  auto res = integrate<1>([](double, const Vec<1>& y) { return Vec<1>{-y[0]}; }, 0.0, {1.0}, 5.0, opt);
  CHECK(res.status == Status::StepBudget);
  CHECK(res.accepted == 10);
}
