#include "schubart/potential.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "schubart/error.hpp"

namespace schubart {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSeriesCut = 1e-2;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// theta* (1 - s) and theta* (1 + s), written without cancellation near s = +1 / -1.
double delta_minus(double ts, double s, double c2) { return s >= 0 ? ts * c2 / (1.0 + s) : ts * (1.0 - s); }
double delta_plus(double ts, double s, double c2) { return s <= 0 ? ts * c2 / (1.0 - s) : ts * (1.0 + s); }

}  // namespace

double x_cot_x(double x) {
  if (std::abs(x) < kSeriesCut) {
    const double y = x * x;
    return 1.0 - y * (1.0 / 3 + y * (1.0 / 45 + y * (2.0 / 945 + y * (1.0 / 4725 + y * (2.0 / 93555)))));
  }
  return x * std::cos(x) / std::sin(x);
}

double x2_over_sin2(double x) {
  if (std::abs(x) < kSeriesCut) {
    const double y = x * x;
    return 1.0 + y * (1.0 / 3 + y * (1.0 / 15 + y * (2.0 / 189 + y * (1.0 / 675 + y * (2.0 / 10395)))));
  }
  const double q = x / std::sin(x);
  return q * q;
}

double sinc(double x) {
  if (std::abs(x) < kSeriesCut) {
    const double y = x * x;
    return 1.0 - y * (1.0 / 6 - y * (1.0 / 120 - y * (1.0 / 5040 - y * (1.0 / 362880))));
  }
  return std::sin(x) / x;
}

PotentialSample eval_fields_unchecked(double r, double u, const MassContext& ctx) {
  const double s = std::sin(u);
  const double c = std::cos(u);
  const double c2 = c * c;
  const double ts = ctx.theta_star;
  const double theta = ts * s;
  const double ct = std::cos(theta);
  const double st = std::sin(theta);

  const double dm = delta_minus(ts, s, c2);
  const double dp = delta_plus(ts, s, c2);
  const double sdm = std::sin(dm), sdp = std::sin(dp);

  const double g12 = ctx.A1 * ct;
  const double g13 = ctx.A2 * sdp;
  const double g23 = ctx.A2 * sdm;
  const double rho = r * g12;
  const double eta = r * g13;
  const double xi = r * g23;

  PotentialSample p;
  if (!(std::abs(rho) < kPi)) {
    p.rU = p.rU_theta = p.r2U_r = p.rU_c2 = p.r2U_r_c2 = p.rU_theta_c4 = kNaN;
    return p;
  }

  // cos^2 u / g for the two side terms; the vanishing one is rewritten through 1 -/+ sin u.
  const double c2_g23 = s >= 0 ? (1.0 + s) / (ctx.A2 * ts * sinc(dm)) : c2 / g23;
  const double c2_g13 = s <= 0 ? (1.0 - s) / (ctx.A2 * ts * sinc(dp)) : c2 / g13;

  const double nn = ctx.n * ctx.n;
  const double mn = ctx.m * ctx.n;
  const double f0_12 = x_cot_x(rho), f0_13 = x_cot_x(eta), f0_23 = x_cot_x(xi);
  const double f1_12 = x2_over_sin2(rho), f1_13 = x2_over_sin2(eta), f1_23 = x2_over_sin2(xi);

  p.rU_c2 = nn * c2 * f0_12 / g12 + mn * (f0_13 * c2_g13 + f0_23 * c2_g23);
  p.r2U_r_c2 = -(nn * c2 * f1_12 / g12 + mn * (f1_13 * c2_g13 + f1_23 * c2_g23));
  p.rU_theta_c4 = nn * st / (ctx.A1 * ct * ct) * f1_12 * c2 * c2 -
                  mn * ctx.A2 * std::cos(dp) * c2_g13 * c2_g13 * f1_13 +
                  mn * ctx.A2 * std::cos(dm) * c2_g23 * c2_g23 * f1_23;

  if (c2 > 0) {
    p.rU = p.rU_c2 / c2;
    p.r2U_r = p.r2U_r_c2 / c2;
    p.rU_theta = p.rU_theta_c4 / (c2 * c2);
  } else {
    p.rU = p.r2U_r = p.rU_theta = std::numeric_limits<double>::infinity();
  }
  p.valid = std::isfinite(p.rU) && std::isfinite(p.r2U_r) && std::isfinite(p.rU_theta);
  return p;
}

PotentialSample eval_fields(double r, double u, const MassContext& ctx) {
  if (!(r >= 0)) throw Error(ErrorKind::OutOfDomain, "negative radius");
  const double rho = r * ctx.A1 * std::cos(ctx.theta_star * std::sin(u));
  if (std::abs(rho - kPi) <= 1e-14 * kPi)
    throw Error(ErrorKind::Singular, "antipodal configuration (x1 = pi)");
  if (rho > kPi) throw Error(ErrorKind::OutOfDomain, "radius beyond the blow-up bound");
  return eval_fields_unchecked(r, u, ctx);
}

double collision_manifold_rU_cos2u(double u, const MassContext& ctx) {
  const double c = std::cos(u);
  if (std::abs(c) < 1e-4) return eval_fields_unchecked(0.0, u, ctx).rU_c2;
  const double theta = ctx.theta_star * std::sin(u);
  const double ct = std::cos(theta);
  const double c2 = c * c;
  // cos^2 theta - cos^2 theta* = sin(theta* - theta) sin(theta* + theta), theta* - theta = theta* c^2 / (1 + sin u).
  const double gap = std::sin(ctx.theta_star * c2 / (1.0 + std::abs(std::sin(u)))) * std::sin(ctx.theta_star + std::abs(theta));
  return ctx.n * ctx.n * c2 / (ctx.A1 * ct) + 2.0 * ctx.m * ctx.n * ctx.sin_theta_star / ctx.A2 * c2 * ct / gap;
}

double collision_rU_theta_form(double theta, const MassContext& ctx) {
  const double ts = ctx.theta_star;
  return ctx.n * ctx.n / (ctx.A1 * std::cos(theta)) +
         ctx.m * ctx.n / ctx.A2 * (1.0 / std::sin(ts + theta) + 1.0 / std::sin(ts - theta));
}

double rU_theta_theta_origin(const MassContext& ctx) {
  const double s = ctx.sin_theta_star, c = ctx.cos_theta_star;
  return ctx.m * ctx.n / ctx.A2 * 2.0 * (1.0 + c * c) / (s * s * s) + ctx.n * ctx.n / ctx.A1;
}

double rU_theta_theta_origin_fd(const MassContext& ctx) {
  auto d2 = [&](double h) {
    return (collision_rU_theta_form(h, ctx) - 2.0 * collision_rU_theta_form(0.0, ctx) +
            collision_rU_theta_form(-h, ctx)) /
           (h * h);
  };
  const double h = 1e-3 * ctx.theta_star;
  return (4.0 * d2(0.5 * h) - d2(h)) / 3.0;
}

double F(double r, double u, const MassContext& ctx, EnergyLevel energy) {
  const auto p = eval_fields(r, u, ctx);
  return 2.0 * p.rU + p.r2U_r + 2.0 * r * energy.h;
}

double F_scaled(double r, double u, const MassContext& ctx, EnergyLevel energy) {
  const auto p = eval_fields(r, u, ctx);
  const double c = std::cos(u);
  return 2.0 * p.rU_c2 + p.r2U_r_c2 + 2.0 * r * energy.h * c * c;
}

AuxF f_aux(double x) {
  if (!(x > 0 && x <= kPi / 5.0 * (1.0 + 1e-15)))
    throw Error(ErrorKind::InvalidArgument, "f_aux is defined on (0, pi/5]");
  const double s = std::sin(x), c = std::cos(x);
  const double s2 = s * s;
  AuxF a;
  a.f = 2.0 * c / s - x / s2;
  a.df = -(3.0 - 2.0 * x * c / s) / s2;
  a.d2f = -2.0 / (s2 * s2) * (2.0 * x - 2.0 * std::sin(2.0 * x) + x * std::cos(2.0 * x));
  return a;
}

double potential_xy(double x1, double x2, const MassContext& ctx) {
  const auto d = distances({x1, x2, 0, 0}, ctx);
  const double tol = 1e-15;
  for (double v : {d.d12, d.d13, d.d23}) {
    if (v <= tol) throw Error(ErrorKind::Singular, "double collision");
    if (std::abs(v - kPi) <= tol) throw Error(ErrorKind::Singular, "antipodal configuration");
  }
  return ctx.n * ctx.n / std::tan(d.d12) + ctx.m * ctx.n * (1.0 / std::tan(d.d13) + 1.0 / std::tan(d.d23));
}

}  // namespace schubart
