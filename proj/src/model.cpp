#include "schubart/model.hpp"

#include <boost/math/tools/toms748_solve.hpp>

#include <cmath>
#include <cstdint>
#include <numbers>

#include "schubart/error.hpp"

namespace schubart {

namespace {

double bracketed_root(auto&& f, double lo, double hi) {
  std::uintmax_t iters = 200;
  auto tol = [](double a, double b) { return std::abs(b - a) <= 4e-16 * std::abs(a); };
  auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, tol, iters);
  return 0.5 * (a + b);
}

}  // namespace

double arccot(double a) {
  if (!(a > 0)) throw Error(ErrorKind::InvalidArgument, "arccot expects a > 0");
  return std::atan(1.0 / a);
}

double axis_potential(double r, const MassContext& ctx) {
  const double x1 = r * ctx.A1;
  return ctx.n * ctx.n / std::tan(x1) + 2.0 * ctx.m * ctx.n / std::tan(0.5 * x1);
}

MassContext build_context(double m) {
  if (!(m > 0.0 && m < 1.0)) throw Error(ErrorKind::InvalidArgument, "mass m must lie in (0, 1)");
  MassContext c;
  c.m = m;
  c.n = 0.5 * (1.0 - m);
  c.mu1 = 0.5 * c.n;
  c.mu2 = 2.0 * c.n * m;
  c.A1 = std::sqrt(2.0 / c.n);
  c.A2 = std::sqrt((m + 1.0) / (2.0 * c.n * m));
  c.theta_star = std::atan(std::sqrt(m));
  c.sin_theta_star = std::sin(c.theta_star);
  c.cos_theta_star = std::cos(c.theta_star);

  const double n2 = c.n * c.n;
  c.nu0 = std::sqrt(2.0 * (n2 / c.A1 + 2.0 * m * c.n / (c.A2 * c.sin_theta_star)));

  const double k = 4.0 * m * c.n + n2;
  const double disc = 1.0 + k * n2;
  if (!(disc > 0)) throw Error(ErrorKind::InvalidArgument, "negative discriminant");
  c.a = (1.0 + std::sqrt(disc)) / k;
  c.r_star = 2.0 / c.A1 * arccot(c.a);

  // U(r, 0) decreases from +inf to -inf on (0, pi / A1).
  const double hi = 0.5 * std::numbers::pi / c.A1;
  c.r_star_root = bracketed_root([&](double r) { return axis_potential(r, c) - 1.0; }, 1e-12 * hi, hi);
  if (std::abs(c.r_star_root - c.r_star) > 1e-12 * c.r_star)
    throw Error(ErrorKind::InvalidArgument, "r_star cross-check failed");
  return c;
}

double hill_radius(const MassContext& ctx, EnergyLevel energy) {
  const double hi = std::numbers::pi / ctx.A1;
  auto f = [&](double r) { return axis_potential(r, ctx) + energy.h; };
  return bracketed_root(f, 1e-14 * hi, hi * (1.0 - 1e-14));
}

double estimate_polynomial(double m) {
  return (((-7.0 * m + 20.0) * m - 18.0) * m + 4.0) * m + 17.0;
}

EstimateReport verify_estimates(const MassContext& ctx) {
  EstimateReport e;
  e.half_angle = 0.5 * ctx.r_star * ctx.A1;
  e.cot_value = 1.0 / std::tan(e.half_angle);
  e.side_value = ctx.r_star * ctx.A2 * std::sin(2.0 * ctx.theta_star);
  e.g_value = estimate_polynomial(ctx.m);
  e.cot_bound = e.cot_value >= 3.5;
  e.half_angle_bound = e.half_angle <= std::numbers::pi / 10.0;
  e.side_bound = e.side_value < std::numbers::pi / 5.0;
  e.g_bound = e.g_value >= 16.0;
  return e;
}

}  // namespace schubart
