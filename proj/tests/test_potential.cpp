#include <doctest.h>

#include <cmath>
#include <numbers>
#include <utility>

#include "schubart/error.hpp"
#include "schubart/potential.hpp"

using namespace schubart;

namespace {
constexpr double kPi = std::numbers::pi;

// mpmath, 50 digits (tests/oracles/compute_oracles.py), m = 1/3.
constexpr double kRU_01_0 = 0.22498561071506331;
constexpr double kR2Ur_01_0 = -0.22863276198975093;
constexpr double kRU_01_03 = 0.24220886289377001;
constexpr double kR2Ur_01_03 = -0.24581278005866831;
constexpr double kRUth_01_03 = 0.24319880798427824;
constexpr double kF_01 = 0.021338459440375688;
constexpr double kF_02 = -0.19534169416791726;
constexpr double kAxisCrossing = 0.53416276813608652;
constexpr double kRUthth = 1.3154667137168919;
constexpr double kF5 = 0.93414160102317167;
constexpr double kdF5 = -3.6770440306166637;
constexpr double kd2F5 = 7.5619690379008854;
constexpr double kRUc2Limit = 0.1732659558297058;
constexpr double kRUc2Near = 0.17326601726974769;  // r = 0, u = pi/2 - 1e-3
constexpr double kRUc2Near01 = 0.17326601569366524;  // r = 0.1, u = pi/2 - 1e-3

MassContext third() { return build_context(1.0 / 3.0); }
}  // namespace

TEST_CASE("field values against the high-precision oracle") {
  const auto ctx = third();
  auto p = eval_fields(0.1, 0.0, ctx);
  CHECK(p.valid);
  CHECK(std::abs(p.rU - kRU_01_0) <= 1e-15);
  CHECK(std::abs(p.r2U_r - kR2Ur_01_0) <= 1e-15);
  CHECK(p.rU_theta == 0.0);
  CHECK(std::abs(p.rU - 0.1 * axis_potential(0.1, ctx)) <= 1e-15);

  p = eval_fields(0.1, 0.3, ctx);
  CHECK(std::abs(p.rU - kRU_01_03) <= 1e-15);
  CHECK(std::abs(p.r2U_r - kR2Ur_01_03) <= 1e-15);
  CHECK(std::abs(p.rU_theta - kRUth_01_03) <= 1e-15);
}

TEST_CASE("collision manifold values") {
  for (double m : {0.1, 1.0 / 3.0, 0.7}) {
    const auto ctx = build_context(m);
    const auto p = eval_fields(0.0, 0.0, ctx);
    const double expect = ctx.n * ctx.n / ctx.A1 + 2 * ctx.m * ctx.n / (ctx.A2 * ctx.sin_theta_star);
    CHECK(std::abs(p.rU - expect) <= 1e-15);
    CHECK(std::abs(p.rU - 0.5 * ctx.nu0 * ctx.nu0) <= 1e-15);
    CHECK(std::abs(collision_manifold_rU_cos2u(0.0, ctx) - expect) <= 1e-15);
    CHECK(std::abs(p.r2U_r + p.rU) <= 1e-15);
    // Closed form and the general evaluator agree along u.
    for (double u : {0.2, 0.7, 1.2, 1.5})
      CHECK(std::abs(collision_manifold_rU_cos2u(u, ctx) - eval_fields(0.0, u, ctx).rU_c2) <= 1e-13);
  }
  const auto ctx = third();
  CHECK(std::abs(collision_manifold_rU_cos2u(0.5 * kPi, ctx) - kRUc2Limit) <= 1e-15);
  CHECK(std::abs(collision_manifold_rU_cos2u(0.5 * kPi - 1e-3, ctx) - kRUc2Near) <= 1e-14);
  CHECK(std::abs(eval_fields(0.1, 0.5 * kPi - 1e-3, ctx).rU_c2 - kRUc2Near01) <= 1e-14);
  CHECK(std::abs(eval_fields(0.1, 0.5 * kPi, ctx).rU_c2 - kRUc2Limit) <= 1e-15);
}

TEST_CASE("series and direct branches agree at the seam") {
  for (double x : {0.0099999999, 0.01, -0.0099999999}) {
    const double direct_cot = x * std::cos(x) / std::sin(x);
    const double direct_sin2 = (x / std::sin(x)) * (x / std::sin(x));
    CHECK(std::abs(x_cot_x(x) - direct_cot) <= 1e-14);
    CHECK(std::abs(x2_over_sin2(x) - direct_sin2) <= 1e-14);
    CHECK(std::abs(sinc(x) - std::sin(x) / x) <= 1e-14);
  }
  CHECK(x_cot_x(0.0) == 1.0);
  CHECK(x2_over_sin2(0.0) == 1.0);
  CHECK(sinc(0.0) == 1.0);
}

TEST_CASE("parity and the r^2 limit") {
  const auto ctx = third();
  for (double r : {0.0, 0.05, 0.2})
    for (double u : {0.1, 0.9, 1.5, 0.5 * kPi}) {
      const auto a = eval_fields_unchecked(r, u, ctx), b = eval_fields_unchecked(r, -u, ctx);
      CHECK(std::abs(a.rU_c2 - b.rU_c2) <= 1e-12);
      CHECK(std::abs(a.r2U_r_c2 - b.r2U_r_c2) <= 1e-12);
      CHECK(std::abs(a.rU_theta_c4 + b.rU_theta_c4) <= 1e-12);
      const auto c = eval_fields_unchecked(-r, u, ctx);
      CHECK(c.rU_c2 == a.rU_c2);
      CHECK(c.rU_theta_c4 == a.rU_theta_c4);
    }
  for (double u : {0.0, 0.3, 1.0, 0.5 * kPi - 0.1}) {
    auto gap = [&](double r) {
      const auto p = eval_fields(r, u, ctx);
      return std::abs(p.r2U_r + p.rU);
    };
    const double ratio = gap(1e-3) / gap(1e-4);
    CHECK(ratio == doctest::Approx(100).epsilon(0.05));
  }
  const auto p = eval_fields(1e-4, 0.7, ctx);
  CHECK(std::abs(p.r2U_r + p.rU) <= 1e-7);
}

TEST_CASE("double collision limit of the theta field") {
  const auto ctx = third();
  const double limit = 4 * ctx.m * ctx.n / (ctx.A2 * ctx.theta_star * ctx.theta_star);
  for (double r : {0.0, 0.1, ctx.r_star}) {
    const double u = 0.5 * kPi - 1e-6;
    const double q = eval_fields(r, u, ctx).rU_theta_c4 / std::sin(u);
    CHECK(std::abs(q / limit - 1) <= 1e-6);
  }
}

TEST_CASE("domain errors") {
  const auto ctx = third();
  CHECK_THROWS_AS(eval_fields(-0.1, 0, ctx), Error);
  try {
    eval_fields(kPi / ctx.A1, 0, ctx);
    FAIL("no error at the antipodal line");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Singular);
  }
  try {
    eval_fields(1.5 * kPi / ctx.A1, 0, ctx);
    FAIL("no error beyond the blow-up bound");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::OutOfDomain);
  }
  CHECK(std::isnan(eval_fields_unchecked(1.5 * kPi / ctx.A1, 0, ctx).rU));
  CHECK_THROWS_AS(potential_xy(kPi, 0, ctx), Error);
  CHECK_THROWS_AS(potential_xy(2, 1, ctx), Error);
}

TEST_CASE("rU_theta_theta at the origin") {
  const auto ctx = third();
  CHECK(std::abs(rU_theta_theta_origin(ctx) - kRUthth) <= 1e-14);
  CHECK(std::abs(rU_theta_theta_origin_fd(ctx) - kRUthth) <= 1e-8);
}

TEST_CASE("F") {
  const auto ctx = third();
  const EnergyLevel e{-1};
  CHECK(std::abs(F(0.1, 0, ctx, e) - kF_01) <= 1e-15);
  CHECK(std::abs(F(0.2, 0, ctx, e) - kF_02) <= 1e-15);
  CHECK(F(ctx.r_star, 0, ctx, e) < 0);
  for (double u : {0.0, 0.4, 1.2}) CHECK(std::abs(F(0, u, ctx, e) - eval_fields(0, u, ctx).rU) <= 1e-15);
  double prev = F(0.5 * ctx.r_star, 0, ctx, e);
  for (int k = 1; k <= 200; ++k) {
    const double u = 0.5 * kPi * k / 200.0 - (k == 200 ? 1e-9 : 0.0);
    const double v = F(0.5 * ctx.r_star, u, ctx, e);
    CHECK(v > prev);
    prev = v;
  }
  CHECK(F_scaled(0.1, 0.5 * kPi, ctx, e) > 0);
}

TEST_CASE("auxiliary f") {
  const auto a = f_aux(kPi / 5);
  CHECK(std::abs(a.f - kF5) <= 1e-14);
  CHECK(std::abs(a.df - kdF5) <= 1e-13);
  CHECK(std::abs(a.d2f - kd2F5) <= 1e-13);
  CHECK(f_aux(1e-6).f > 1e5);
  CHECK_THROWS_AS(f_aux(0.0), Error);
  CHECK_THROWS_AS(f_aux(1.0), Error);
}

// Every level set of U runs into the collision-antipodal points, where U has no limit.
bool near_singular_corner(const ContourPoint& p) {
  for (auto [x1, x2] : {std::pair{kPi, 0.5 * kPi}, {kPi, -0.5 * kPi}, {2 * kPi, 0.0}})
    if (std::hypot(p.x1 - x1, p.x2 - x2) <= 1e-6) return true;
  return false;
}

TEST_CASE("zero-velocity curve in region I") {
  const auto ctx = third();
  const auto lines = zero_velocity_curve(-1.0, Region::I, {}, ctx);
  REQUIRE(!lines.empty());
  bool crossed = false;
  for (const auto& line : lines) {
    CHECK(line.region == Region::I);
    for (const auto& p : line.points)
      if (!near_singular_corner(p)) CHECK(std::abs(potential_xy(p.x1, p.x2, ctx) - 1.0) <= kContourTolerance);
    for (std::size_t k = 1; k < line.points.size(); ++k) {
      const auto& a = line.points[k - 1];
      const auto& b = line.points[k];
      if ((a.x2 <= 0 && b.x2 > 0) || (a.x2 >= 0 && b.x2 < 0)) {
        const double t = a.x2 / (a.x2 - b.x2);
        const double x1 = a.x1 + t * (b.x1 - a.x1);
        CHECK(std::abs(x1 - kAxisCrossing) <= 1e-5);
        crossed = true;
      }
    }
  }
  CHECK(crossed);
  CHECK(std::abs(ctx.r_star * ctx.A1 - kAxisCrossing) <= 1e-15);
}

TEST_CASE("zero-velocity curves exist for the figure energies and other regions") {
  const auto ctx = third();
  for (double h : {-100.0, 0.0, 100.0}) CHECK(!zero_velocity_curve(h, Region::I, {128, 128}, ctx).empty());
  for (Region reg : {Region::II, Region::III, Region::IV})
    for (const auto& line : zero_velocity_curve(0.0, reg, {128, 128}, ctx))
      for (const auto& p : line.points)
        if (!near_singular_corner(p)) CHECK(std::abs(potential_xy(p.x1, p.x2, ctx)) <= kContourTolerance);
  CHECK_THROWS_AS(zero_velocity_curve(0.0, Region::I, {1, 1}, ctx), Error);
}

TEST_CASE("antipodal mid-segments repel") {
  const auto ctx = third();
  CHECK(max_potential_near_midsegments(ctx, 1e-5, 0.05, 200) < -100);
}
