#include "schubart/claims.hpp"

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <numbers>

#include "schubart/error.hpp"
#include "schubart/potential.hpp"
#include "schubart/wazewski.hpp"

namespace schubart {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kHalfPi = 0.5 * std::numbers::pi;

double node(double lo, double hi, int k, int count) {
  return count <= 1 ? lo : lo + (hi - lo) * k / (count - 1);
}

// Keeps the smallest slack over a family of named checks.
class Ledger {
 public:
  explicit Ledger(ClaimResult& out) : out_(out) {}

  void check(const char* label, double margin, double r = 0, double u = 0) {
    if (std::isnan(margin)) {
      nan_ = true;
      note(label, margin);
      return;
    }
    if (first_ || margin < out_.worst_margin) {
      out_.worst_margin = margin;
      out_.worst_r = r;
      out_.worst_u = u;
      first_ = false;
    }
    if (margin < 0) note(label, margin);
  }

  void finish() {
    if (nan_)
      out_.status = ClaimStatus::Indeterminate;
    else
      out_.status = out_.worst_margin >= 0 ? ClaimStatus::Pass : ClaimStatus::Fail;
    if (out_.detail.empty()) out_.detail = "ok";
  }

 private:
  void note(const char* label, double margin) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s%s margin %.3g", out_.detail.empty() ? "" : "; ", label, margin);
    out_.detail += buf;
  }

  ClaimResult& out_;
  bool first_ = true;
  bool nan_ = false;
};

double maximize(auto&& f, double lo, double hi, double* at) {
  auto [x, v] = boost::math::tools::brent_find_minima([&](double t) { return -f(t); }, lo, hi, 52);
  if (at) *at = x;
  return -v;
}

double minimize(auto&& f, double lo, double hi, double* at) {
  auto [x, v] = boost::math::tools::brent_find_minima(f, lo, hi, 52);
  if (at) *at = x;
  return v;
}

double root(auto&& f, double lo, double hi) {
  std::uintmax_t iters = 200;
  auto tol = [](double a, double b) { return std::abs(b - a) <= 4e-16 * std::max(std::abs(a), 1e-300); };
  auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, tol, iters);
  return 0.5 * (a + b);
}

// Central first and second differences with one Richardson step.
double d1(auto&& f, double x, double h) {
  auto D = [&](double s) { return (f(x + s) - f(x - s)) / (2 * s); };
  return (4 * D(0.5 * h) - D(h)) / 3;
}

double d2(auto&& f, double x, double h) {
  auto D = [&](double s) { return (f(x + s) - 2 * f(x) + f(x - s)) / (s * s); };
  return (4 * D(0.5 * h) - D(h)) / 3;
}

double claim3_J_free(double ts, double theta, double u) {
  const double ct = std::cos(theta), cs = std::cos(ts), cu = std::cos(u);
  return ct * ct - cs * cs - (1 - cs * cs) * cu * cu * ct;
}

}  // namespace

std::string to_string(ClaimStatus status) {
  switch (status) {
    case ClaimStatus::Pass: return "pass";
    case ClaimStatus::Fail: return "fail";
    case ClaimStatus::Indeterminate: return "indeterminate";
  }
  return "?";
}

double ClaimResult::constant(const std::string& name) const {
  for (const auto& c : constants)
    if (c.name == name) return c.value;
  throw Error(ErrorKind::InvalidArgument, "unknown claim constant " + name);
}

double side_term_g(double r, double theta, const MassContext& ctx) {
  const double ts = ctx.theta_star;
  auto part = [&](double beta) {
    const double sb = std::sin(beta);
    return std::cos(beta) / (ctx.A2 * sb * sb) * x2_over_sin2(r * ctx.A2 * sb);
  };
  return ctx.m * ctx.n * (part(ts - theta) - part(ts + theta));
}

double claim3_J(double theta_star, double theta) {
  const double q = theta / theta_star;
  const double cu2 = 1 - q * q;
  const double ct = std::cos(theta), cs = std::cos(theta_star);
  return ct * ct - cs * cs - (1 - cs * cs) * cu2 * ct;
}

ClaimResult verify_claim1(const MassContext& ctx, ClaimGrid grid) {
  ClaimResult res;
  res.id = 1;
  Ledger led(res);
  double worst_theta = 0, worst_r = 0;
  for (int i = 0; i < grid.nr; ++i) {
    const double r = node(0, ctx.r_star, i, grid.nr);
    for (int j = 0; j < grid.nu; ++j) {
      const double u = node(-kHalfPi, kHalfPi, j, grid.nu);
      const auto a = eval_fields_unchecked(r, u, ctx);
      const auto b = eval_fields_unchecked(r, -u, ctx);
      const auto c = eval_fields_unchecked(-r, u, ctx);
      const double pt = std::max({std::abs(a.rU_c2 - b.rU_c2), std::abs(a.r2U_r_c2 - b.r2U_r_c2),
                                  std::abs(a.rU_theta_c4 + b.rU_theta_c4)});
      const double pr = std::max({std::abs(a.rU_c2 - c.rU_c2), std::abs(a.r2U_r_c2 - c.r2U_r_c2),
                                  std::abs(a.rU_theta_c4 - c.rU_theta_c4)});
      worst_theta = std::max(worst_theta, pt);
      worst_r = std::max(worst_r, pr);
      led.check("theta parity", kExactZero - pt, r, u);
      led.check("r parity", kExactZero - pr, r, u);
    }
    led.check("rU_theta on theta = 0", kExactZero - std::abs(eval_fields_unchecked(r, 0.0, ctx).rU_theta), r, 0);
  }

  // -r^2 U_r - rU = sum (x^2/sin^2 x - x cot x) / g ~ (2/3) r^2 sum g.
  auto gap = [&](double r, double u) {
    const auto p = eval_fields_unchecked(r, u, ctx);
    return std::abs(-p.r2U_r - p.rU);
  };
  double worst_ratio = 100;
  for (double u : {0.0, 0.3, 0.7, 1.0, kHalfPi - 0.1}) {
    const double g3 = gap(1e-3, u), g4 = gap(1e-4, u), g5 = gap(1e-5, u);
    for (double ratio : {g3 / g4, g4 / g5}) {
      if (std::abs(ratio - 100) > std::abs(worst_ratio - 100)) worst_ratio = ratio;
      led.check("r^2 decay rate", 5.0 - std::abs(ratio - 100), 1e-4, u);
    }
  }
  const double g_ex = gap(1e-4, 0.7);
  led.check("limit gap at r = 1e-4, u = 0.7", 1e-7 - g_ex, 1e-4, 0.7);

  res.constants = {{"theta_parity_residual", worst_theta},
                   {"r_parity_residual", worst_r},
                   {"decay_ratio_worst", worst_ratio},
                   {"limit_gap_r1e-4_u0.7", g_ex}};
  led.finish();
  return res;
}

ClaimResult verify_claim2(const MassContext& ctx) {
  ClaimResult res;
  res.id = 2;
  Ledger led(res);
  const double analytic = rU_theta_theta_origin(ctx);
  const double fd = rU_theta_theta_origin_fd(ctx);
  led.check("analytic vs finite differences", 1e-8 - std::abs(analytic - fd));
  led.check("positivity", analytic - kStrictMargin);

  // First term of rU_theta per unit n^2: its theta-derivative at theta = 0 tends to 1/A1.
  const double r = 1e-4;
  auto term = [&](double th) {
    const double s = std::sin(r * ctx.A1 * std::cos(th));
    return r * r * ctx.A1 * std::sin(th) / (s * s);
  };
  const double slope = d1(term, 0.0, 1e-5 * ctx.theta_star);
  led.check("first-term limit 1/A1", 1e-6 - std::abs(slope * ctx.A1 - 1.0), r, 0);

  res.constants = {{"rU_theta_theta", analytic},
                   {"rU_theta_theta_fd", fd},
                   {"first_term_slope", slope},
                   {"inverse_A1", 1.0 / ctx.A1}};
  led.finish();
  return res;
}

ClaimResult verify_claim3(const MassContext& ctx, ClaimGrid grid) {
  ClaimResult res;
  res.id = 3;
  Ledger led(res);
  auto v = [&](double u) { return 2.0 * collision_manifold_rU_cos2u(u, ctx); };
  const double v0 = v(0.0);
  constexpr double kCut = 0.1;

  double best = -std::numeric_limits<double>::infinity();
  double best_u = kCut;
  const int nu = std::max(grid.nu, 3);
  for (int j = 0; j < nu; ++j) {
    const double u = node(0, kHalfPi, j, nu);
    const double val = v(u);
    led.check("v(u) <= v(0)", v0 + kExactZero - val, 0, u);
    if (u >= kCut && val > best) {
      best = val;
      best_u = u;
    }
  }
  // Refine between the neighbours of the worst node.
  const double du = kHalfPi / (nu - 1);
  double at = best_u;
  const double refined = maximize(v, std::max(kCut, best_u - du), std::min(kHalfPi, best_u + du), &at);
  if (refined > best) {
    best = refined;
    best_u = at;
  }
  led.check("margin for u >= 0.1", v0 - best - kStrictMargin, 0, best_u);

  // J with u tied to theta, and the derivative in theta* at fixed (theta, u).
  double worst_J = std::numeric_limits<double>::infinity();
  double worst_dJ = std::numeric_limits<double>::infinity();
  for (int i = 1; i < grid.nr; ++i) {
    const double ts = node(0, kPi / 4, i, grid.nr);
    for (int k = 0; k < grid.nu; ++k) {
      const double th = node(0, ts, k, grid.nu);
      const double J = claim3_J(ts, th);
      worst_J = std::min(worst_J, J);
      led.check("J >= 0", J + kExactZero, ts, th);
      const double u = std::asin(std::min(1.0, th / ts));
      const double cu = std::cos(u);
      const double dJ = 2 * std::sin(ts) * std::cos(ts) * (1 - cu * cu * std::cos(th));
      const double dJ_fd = d1([&](double t) { return claim3_J_free(t, th, u); }, ts, 1e-5 * kPi / 4);
      worst_dJ = std::min(worst_dJ, dJ);
      led.check("dJ/dtheta* >= 0", dJ + kExactZero, ts, th);
      led.check("dJ/dtheta* formula", 1e-8 - std::abs(dJ - dJ_fd), ts, th);
    }
    led.check("J(t*, t*) = 0", kExactZero - std::abs(claim3_J(ts, ts)), ts, ts);
  }
  for (int j = 0; j < grid.nu; ++j) {
    const double th = ctx.theta_star * std::sin(node(0, kHalfPi, j, grid.nu));
    led.check("J >= 0 at this mass", claim3_J(ctx.theta_star, th) + kExactZero, 0, th);
  }

  res.constants = {{"v0", v0},
                   {"max_v_beyond_cut", best},
                   {"argmax_u_beyond_cut", best_u},
                   {"min_J", worst_J},
                   {"min_dJ_dtheta_star", worst_dJ}};
  led.finish();
  return res;
}

ClaimResult verify_claim4(const MassContext& ctx, ClaimGrid grid) {
  ClaimResult res;
  res.id = 4;
  Ledger led(res);
  auto L = [&](double r, double u) { return 2.0 * eval_fields_unchecked(r, u, ctx).rU_c2; };

  std::vector<double> radii;
  for (int i = 0; i < grid.nr; ++i) radii.push_back(node(0, ctx.r_star, i, grid.nr));
  for (double r : {1e-3, 0.1, ctx.r_star})
    if (r <= ctx.r_star) radii.push_back(r);

  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  double lo_r = 0;
  for (double r : radii) {
    const double val = L(r, kHalfPi);
    if (val < lo) {
      lo = val;
      lo_r = r;
    }
    hi = std::max(hi, val);
    const double near = L(r, kHalfPi - 1e-3);
    led.check("convergence at pi/2 - 1e-3", 0.01 * std::abs(val) - std::abs(near - val), r, kHalfPi - 1e-3);
  }
  led.check("positivity", lo - kStrictMargin, lo_r, kHalfPi);
  led.check("r-independence", 1e-8 - (hi - lo), lo_r, kHalfPi);

  const double mn = ctx.m * ctx.n;
  const double expansion = 4 * mn / (ctx.A2 * ctx.theta_star);
  const double stated = mn / (2 * ctx.theta_star * ctx.A2);
  res.constants = {{"measured_limit", lo},
                   {"spread", hi - lo},
                   {"expansion_4mn_over_A2_theta_star", expansion},
                   {"stated_mn_over_2_theta_star_A2", stated},
                   {"measured_over_stated", lo / stated}};
  led.finish();
  return res;
}

ClaimResult verify_claim5(const MassContext& ctx, double u0, ClaimGrid grid) {
  ClaimResult res;
  res.id = 5;
  if (!(u0 > 0 && u0 < kHalfPi)) throw Error(ErrorKind::InvalidArgument, "claim 5 cutoff must lie in (0, pi/2)");
  Ledger led(res);
  auto q = [&](double r, double u) { return eval_fields_unchecked(r, u, ctx).rU_theta_c4 / std::sin(u); };

  double c3 = std::numeric_limits<double>::infinity();
  double at_r = 0, at_u = u0;
  for (int i = 0; i < grid.nr; ++i) {
    const double r = node(0, ctx.r_star, i, grid.nr);
    for (int j = 0; j < grid.nu; ++j) {
      const double u = node(u0, kHalfPi, j, grid.nu);
      const double val = q(r, u);
      if (val < c3) {
        c3 = val;
        at_r = r;
        at_u = u;
      }
    }
  }
  // Two coordinate passes of refinement around the worst node.
  const double dr = ctx.r_star / std::max(1, grid.nr - 1);
  const double du = (kHalfPi - u0) / std::max(1, grid.nu - 1);
  for (int pass = 0; pass < 2; ++pass) {
    double x = at_u;
    double val = minimize([&](double u) { return q(at_r, u); }, std::max(u0, at_u - du), std::min(kHalfPi, at_u + du), &x);
    if (val < c3) {
      c3 = val;
      at_u = x;
    }
    val = minimize([&](double r) { return q(r, at_u); }, std::max(0.0, at_r - dr), std::min(ctx.r_star, at_r + dr), &x);
    if (val < c3) {
      c3 = val;
      at_r = x;
    }
  }
  led.check("positive lower bound", c3 - kStrictMargin, at_r, at_u);

  const double ts = ctx.theta_star;
  const double mn = ctx.m * ctx.n;
  const double limit = 4 * mn / (ctx.A2 * ts * ts);
  double worst_rel = 0;
  for (int i = 0; i < grid.nr; ++i) {
    const double r = node(0, ctx.r_star, i, grid.nr);
    const double rel = std::abs(q(r, kHalfPi - 1e-6) / limit - 1);
    worst_rel = std::max(worst_rel, rel);
    led.check("limit at u = pi/2", 1e-6 - rel, r, kHalfPi - 1e-6);
  }

  double g_min = std::numeric_limits<double>::infinity();
  for (int i = 0; i < grid.nr; ++i) {
    const double r = node(0, ctx.r_star, i, grid.nr);
    led.check("g(r, 0) = 0", kExactZero - std::abs(side_term_g(r, 0, ctx)), r, 0);
    if (i > 0) led.check("g(r, theta*/2) > 0", side_term_g(r, 0.5 * ts, ctx) - kStrictMargin, r, 0.5 * ts);
    for (int k = 1; k < grid.nu - 1; ++k) {
      const double th = node(0, ts, k, grid.nu);
      const double g = side_term_g(r, th, ctx);
      g_min = std::min(g_min, g);
      led.check("g >= 0", g + kExactZero, r, th);
    }
  }
  const auto est = verify_estimates(ctx);
  led.check("r* A2 sin(2 theta*) < pi/5", kPi / 5 - est.side_value);

  res.constants = {{"c3", c3},
                   {"theta_star_c3", ts * c3},
                   {"limit_measured_at_r_star", q(ctx.r_star, kHalfPi - 1e-6)},
                   {"limit_4mn_over_A2_theta_star_sq", limit},
                   {"limit_worst_relative_error", worst_rel},
                   {"g_min", g_min},
                   {"side_value", est.side_value},
                   {"u0", u0}};
  led.finish();
  return res;
}

ClaimResult verify_claim6(const MassContext& ctx, ClaimGrid grid) {
  ClaimResult res;
  res.id = 6;
  Ledger led(res);
  const EnergyLevel unit{-1.0};
  auto Fr = [&](double r) { return [&, r](double u) { return F(r, u, ctx, unit); }; };
  const double hu = 1e-5 * kHalfPi;

  double min_Fu = std::numeric_limits<double>::infinity();
  for (int i = 0; i < grid.nr; ++i) {
    const double r = node(0, ctx.r_star, i, grid.nr);
    for (int j = 1; j < grid.nu; ++j) {
      // F blows up like 1/cos^2 u at pi/2; the last node sits just below it.
      const double u = j == grid.nu - 1 ? kHalfPi - 1e-3 : node(0, kHalfPi, j, grid.nu);
      const double Fu = d1(Fr(r), u, hu);
      min_Fu = std::min(min_Fu, Fu);
      led.check("F_u > 0", Fu - kStrictMargin, r, u);
    }
    led.check("F cos^2 u > 0 at pi/2", F_scaled(r, kHalfPi, ctx, unit) - kStrictMargin, r, kHalfPi);
  }

  const auto ends = locate_F_zero_endpoints(ctx, unit);
  const double rA = ends.r_A;
  led.check("r_A > 0", rA - kStrictMargin, rA, 0);
  led.check("r_A < r*", ctx.r_star - rA - kStrictMargin, rA, 0);
  led.check("F(A) = 0", kExactZero - std::abs(F(rA, 0, ctx, unit)), rA, 0);
  const double Fu_A = d1(Fr(rA), 0.0, hu);
  led.check("F_u(A) = 0", kExactZero - std::abs(Fu_A), rA, 0);
  const double Fuu_A = d2(Fr(rA), 0.0, 10 * hu);
  led.check("F_uu(A) > 0", Fuu_A - kStrictMargin, rA, 0);

  // F_uu(A) = theta*^2 F_thth with F_thth = n^2 r (-f'(rho) rho) + mn r (2 f''(xi) xi'^2 - 2 f'(xi) xi).
  const double rho = rA * ctx.A1;
  const double xi = rA * ctx.A2 * ctx.sin_theta_star;
  const double dxi = rA * ctx.A2 * ctx.cos_theta_star;
  const auto fr = f_aux(rho), fx = f_aux(xi);
  const double Fthth = ctx.n * ctx.n * rA * (-fr.df * rho) + ctx.m * ctx.n * rA * (2 * fx.d2f * dxi * dxi - 2 * fx.df * xi);
  const double Fuu_formula = ctx.theta_star * ctx.theta_star * Fthth;
  led.check("F_uu(A) formula", 1e-5 * std::abs(Fuu_formula) - std::abs(Fuu_A - Fuu_formula), rA, 0);

  const double alpha = ends.alpha;
  led.check("alpha > 0", alpha - kStrictMargin, ctx.r_star, alpha);
  led.check("alpha < pi/2", kHalfPi - alpha - kStrictMargin, ctx.r_star, alpha);
  led.check("F(B) = 0", kExactZero - std::abs(F(ctx.r_star, alpha, ctx, unit)), ctx.r_star, alpha);

  // Continuation of F = 0 in u: F(0, u) > 0 and F(r*, u) < 0 for 0 <= u < alpha.
  constexpr int kCurvePoints = 64;
  res.curve.emplace_back(rA, 0.0);
  double max_jump = 0;
  for (int k = 1; k < kCurvePoints; ++k) {
    const double u = alpha * k / kCurvePoints;
    const double r = root([&](double x) { return F(x, u, ctx, unit); }, 0.0, ctx.r_star);
    max_jump = std::max(max_jump, std::abs(r - res.curve.back().first));
    res.curve.emplace_back(r, u);
  }
  max_jump = std::max(max_jump, std::abs(ctx.r_star - res.curve.back().first));
  res.curve.emplace_back(ctx.r_star, alpha);
  led.check("curve continuity", 0.25 * ctx.r_star - max_jump);

  double worst_df = -std::numeric_limits<double>::infinity(), worst_d2f = -worst_df, worst_k = worst_d2f;
  constexpr int kAuxPoints = 200;
  for (int k = 1; k <= kAuxPoints; ++k) {
    const double x = kPi / 5 * k / kAuxPoints;
    const auto a = f_aux(x);
    const double kx = 2 * std::sin(2 * x) - 3 * x;
    worst_df = std::max(worst_df, a.df);
    worst_d2f = std::min(worst_d2f, a.d2f);
    worst_k = std::min(worst_k, kx);
    led.check("f' < 0", -a.df - kStrictMargin, x, 0);
    led.check("f'' >= 0", a.d2f + kExactZero, x, 0);
    led.check("k(x) >= 0", kx + kExactZero, x, 0);
  }

  double arg_max = 0;
  for (int j = 0; j < grid.nu; ++j) {
    const double u = node(0, kHalfPi, j, grid.nu);
    const double th = ctx.theta_star * std::sin(u);
    const double rho_j = ctx.r_star * ctx.A1 * std::cos(th);
    const double xi_j = ctx.r_star * ctx.A2 * std::sin(ctx.theta_star - th);
    const double eta_j = ctx.r_star * ctx.A2 * std::sin(ctx.theta_star + th);
    arg_max = std::max({arg_max, rho_j, xi_j, eta_j});
  }
  led.check("rho, xi, eta <= pi/5", kPi / 5 - arg_max, ctx.r_star, 0);

  res.constants = {{"min_F_u", min_Fu},
                   {"r_A", rA},
                   {"F_u_at_A", Fu_A},
                   {"F_uu_at_A", Fuu_A},
                   {"F_uu_at_A_formula", Fuu_formula},
                   {"alpha", alpha},
                   {"max_df", worst_df},
                   {"min_d2f", worst_d2f},
                   {"min_k", worst_k},
                   {"max_argument", arg_max}};
  led.finish();
  return res;
}

ClaimReport verify_all_claims(const MassContext& ctx, ClaimGrid grid, double u0) {
  ClaimReport rep;
  rep.m = ctx.m;
  rep.grid = grid;
  rep.u0 = u0;
  auto guarded = [&](int id, auto&& fn) {
    try {
      return fn();
    } catch (const Error& e) {
      ClaimResult r;
      r.id = id;
      r.status = ClaimStatus::Indeterminate;
      r.worst_margin = std::numeric_limits<double>::quiet_NaN();
      r.detail = e.what();
      return r;
    }
  };
  rep.claims[0] = guarded(1, [&] { return verify_claim1(ctx, grid); });
  rep.claims[1] = guarded(2, [&] { return verify_claim2(ctx); });
  rep.claims[2] = guarded(3, [&] { return verify_claim3(ctx, grid); });
  rep.claims[3] = guarded(4, [&] { return verify_claim4(ctx, grid); });
  rep.claims[4] = guarded(5, [&] { return verify_claim5(ctx, u0, grid); });
  rep.claims[5] = guarded(6, [&] { return verify_claim6(ctx, grid); });
  rep.all_pass = std::all_of(rep.claims.begin(), rep.claims.end(),
                             [](const ClaimResult& c) { return c.status == ClaimStatus::Pass; });
  return rep;
}

}  // namespace schubart
