#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "schubart/dynamics.hpp"
#include "schubart/error.hpp"
#include "schubart/potential.hpp"
#include "support.hpp"

using namespace schubart;

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kGammaOracle = 0.49997122060187286;  // r = 0.1, u = nu = 0, h = -1, m = 1/3

MassContext third() { return build_context(1.0 / 3.0); }

IntegratorConfig quiet(double sigma_max) {
  IntegratorConfig c;
  c.sigma_max = sigma_max;
  return c;
}
}  // namespace

TEST_CASE("equilibrium P is a rest point") {
  for (double m : {0.2, 1.0 / 3.0, 0.8}) {
    const auto ctx = build_context(m);
    const RegularizedState P{0, -ctx.nu0, 0, 0};
    CHECK(std::abs(energy_residual(P, ctx, {-1})) <= 1e-15);
    const auto f = vector_field(P, ctx, {-1});
    CHECK(f.dr == 0.0);
    CHECK(std::abs(f.dnu) <= 1e-15);
    CHECK(f.du == 0.0);
    CHECK(f.dgamma == 0.0);
  }
}

TEST_CASE("energy relation") {
  const auto ctx = third();
  const EnergyLevel e{-1};
  const double g = gamma_from_energy(0.1, 0, 0, ctx, e);
  CHECK(std::abs(g - kGammaOracle) <= 1e-15);
  CHECK(std::abs(energy_residual({0.1, 0, 0, g}, ctx, e)) <= 1e-15);
  CHECK(energy_residual({0.1, 0.3, 0.4, 0.2}, ctx, e) == energy_residual({0.1, -0.3, 0.4, 0.2}, ctx, e));
  CHECK(std::abs(energy_residual({0, 0, 0, 0}, ctx, e) + 0.5 * ctx.nu0 * ctx.nu0) <= 1e-15);
  CHECK(std::abs(gamma_from_energy(0, 0, 0, ctx, e) - ctx.nu0) <= 1e-15);

  const double g_half = gamma_from_energy(0.1, -0.1, 0.5 * kPi, ctx, e);
  CHECK(g_half <= 1e-15);
  CHECK(shape_velocity({0.1, -0.1, 0.5 * kPi, g_half}, ctx, e) > 0.1);

  try {
    gamma_from_energy(0.3, 0, 0, ctx, e);
    FAIL("no error outside the Hill region");
  } catch (const Error& err) {
    CHECK(err.kind() == ErrorKind::ImaginaryGamma);
  }
  // At the boundary of the Hill region the root is zero.
  CHECK(gamma_from_energy(ctx.r_star, 0, 0, ctx, e) <= 1e-7);
}

TEST_CASE("the homothetic set H is invariant exactly") {
  const auto ctx = third();
  const EnergyLevel e{-1};
  const double r0 = 0.1;
  const double nu = -std::sqrt(2 * (eval_fields(r0, 0, ctx).rU + r0 * e.h));
  const RegularizedState s0{r0, nu, 0, 0};
  const auto f = vector_field(s0, ctx, e);
  CHECK(f.du == 0.0);
  CHECK(f.dgamma == 0.0);
  const auto tr = integrate(s0, ctx, e, quiet(20));
  double prev_r = r0;
  for (const auto& s : tr.samples) {
    CHECK(s.state.u == 0.0);
    CHECK(s.state.gamma == 0.0);
    CHECK(s.state.r <= prev_r);
    prev_r = s.state.r;
  }
  CHECK(tr.final.state.r < 1e-3);
  CHECK(std::abs(tr.final.state.nu + ctx.nu0) < 1e-3);
}

TEST_CASE("the collision manifold r = 0 is invariant exactly") {
  const auto ctx = third();
  const EnergyLevel e{-1};
  const double nu = -ctx.nu0 + 0.01;
  const RegularizedState s0{0, nu, 0.1, gamma_from_energy(0, nu, 0.1, ctx, e)};
  CHECK(vector_field(s0, ctx, e).dr == 0.0);
  const auto tr = integrate(s0, ctx, e, quiet(10));
  for (const auto& s : tr.samples) {
    CHECK(s.state.r == 0.0);
    CHECK(s.t_phys == 0.0);
  }
  CHECK(tr.max_energy_residual <= 1e-9);
}

TEST_CASE("crossing a double collision") {
  const auto ctx = third();
  const EnergyLevel e{-1};
  const RegularizedState s0{0.1, 0, 0, gamma_from_energy(0.1, 0, 0, ctx, e)};
  const std::vector<EventSpec> ev{{EventKind::UCrossing, kPi, 1, true}};
  const auto tr = integrate(s0, ctx, e, quiet(50), ev);
  CHECK(tr.termination == Termination::EventReached);
  CHECK(std::abs(tr.final.state.u - kPi) <= 1e-12);
  CHECK(tr.max_energy_residual <= 1e-9);
  CHECK(std::isfinite(tr.final.t_phys));
  CHECK(tr.final.t_phys > 0);
  bool passed_half = false;
  double prev_sigma = -1;
  for (const auto& s : tr.samples) {
    CHECK(s.sigma > prev_sigma);
    prev_sigma = s.sigma;
    CHECK(std::isfinite(shape_velocity(s.state, ctx, e)));
    if (s.state.u > 0.5 * kPi) passed_half = true;
  }
  CHECK(passed_half);
}

TEST_CASE("reversal and half-shift symmetries") {
  const auto ctx = third();
  const EnergyLevel e{-1};
  IntegratorConfig cfg = quiet(1.5);
  cfg.energy_projection = false;
  const RegularizedState s0{0.15, -0.05, 0.2, gamma_from_energy(0.15, -0.05, 0.2, ctx, e)};
  const auto fwd = integrate(s0, ctx, e, cfg);
  const auto back = integrate(reflect_quarter(fwd.final.state), ctx, e, cfg);
  const auto end = reflect_quarter(back.final.state);
  CHECK(std::abs(end.r - s0.r) <= 1e-7);
  CHECK(std::abs(end.nu - s0.nu) <= 1e-7);
  CHECK(std::abs(end.u - s0.u) <= 1e-7);
  CHECK(std::abs(end.gamma - s0.gamma) <= 1e-7);

  const auto shifted = integrate(shift_half(s0), ctx, e, cfg);
  const auto expect = shift_half(fwd.final.state);
  CHECK(std::abs(shifted.final.state.r - expect.r) <= 1e-10);
  CHECK(std::abs(shifted.final.state.nu - expect.nu) <= 1e-10);
  CHECK(std::abs(shifted.final.state.u - expect.u) <= 1e-10);
  CHECK(std::abs(shifted.final.state.gamma - expect.gamma) <= 1e-10);
}

TEST_CASE("u is nondecreasing while gamma >= 0 below pi/2") {
  const auto ctx = third();
  const EnergyLevel e{-1};
  const RegularizedState s0{0.17, 0, 0, gamma_from_energy(0.17, 0, 0, ctx, e)};
  const std::vector<EventSpec> ev{{EventKind::UCrossing, 0.5 * kPi, 1, true}};
  const auto tr = integrate(s0, ctx, e, quiet(50), ev);
  double prev_u = 0;
  for (const auto& s : tr.samples)
    if (s.state.gamma >= 0 && s.state.u < 0.5 * kPi) {
      CHECK(s.state.u >= prev_u);
      prev_u = s.state.u;
    }
}

TEST_CASE("physical time rate") {
  const auto ctx = third();
  CHECK(physical_time_rate({0, -1, 0.3, 0.1}, ctx) == 0.0);
  CHECK(physical_time_rate({0.04, 0, 0, 0}, ctx) == doctest::Approx(0.008 * ctx.theta_star));
}

TEST_CASE("regularized flow matches the unregularized oracle") {
  const auto ctx = third();
  const EnergyLevel e{-1};
  const RegularizedState s0{0.15, 0, 0, gamma_from_energy(0.15, 0, 0, ctx, e)};
  const std::vector<EventSpec> ev{{EventKind::UCrossing, 0.6, 1, true}};
  const auto tr = integrate(s0, ctx, e, quiet(50), ev);
  const auto cmp = testing::compare_with_oracle(tr, ctx);
  CHECK(cmp.min_distance >= kOracleGuard);
  CHECK(!cmp.oracle_margin_violation);
  CHECK(cmp.points > 10);
  CHECK(cmp.max_error <= 1e-6);
}

TEST_CASE("oracle flow basics") {
  const auto ctx = third();
  const JacobiState iso{1.0, 0, 0.3, 0};
  const auto orc = oracle_flow(iso, ctx, 0.5);
  for (const auto& s : orc.states) CHECK(s.x2 == 0.0);
  CHECK(orc.max_energy_drift <= 1e-9);
  CHECK_THROWS_AS(oracle_flow({1.0, 0.49, 0, 0}, ctx, 1.0), Error);
  CHECK_THROWS_AS(oracle_flow({4.0, 0, 0, 0}, ctx, 1.0), Error);
}

TEST_CASE("invalid inputs") {
  const auto ctx = third();
  const EnergyLevel e{-1};
  CHECK_THROWS_AS(integrate({0.1, 0, 0, 0.1}, ctx, e, quiet(1)), Error);
  CHECK_THROWS_AS(vector_field({-0.1, 0, 0, 0}, ctx, e), Error);
  CHECK_THROWS_AS(vector_field({kPi / ctx.A1, 0, 0, 0}, ctx, e), Error);
  CHECK(parse_event_kind("nu") == EventKind::NuCrossing);
  CHECK_THROWS_AS(parse_event_kind("w"), Error);
}
