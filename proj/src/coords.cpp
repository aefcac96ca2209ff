#include "schubart/coords.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "schubart/error.hpp"

namespace schubart {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_positive(double x) {
  double y = std::fmod(x, kTwoPi);
  if (y < 0) y += kTwoPi;
  return y;
}

bool near(double a, double b) { return std::abs(a - b) <= 1e-12 * (1.0 + std::abs(b)); }

}  // namespace

std::string to_string(Region region) {
  switch (region) {
    case Region::I: return "I";
    case Region::II: return "II";
    case Region::III: return "III";
    case Region::IV: return "IV";
  }
  return "?";
}

std::string to_string(BoundaryKind kind) {
  switch (kind) {
    case BoundaryKind::DoubleCollisionSide: return "double-collision side";
    case BoundaryKind::AntipodalMidSegment: return "antipodal mid-segment";
    case BoundaryKind::TotalCollisionVertex: return "total-collision vertex";
    case BoundaryKind::CollisionAntipodalPoint: return "collision-antipodal point";
  }
  return "?";
}

std::string to_string(const RegionLabel& label) {
  if (const auto* r = std::get_if<Region>(&label)) return to_string(*r);
  return "Boundary(" + to_string(std::get<BoundaryKind>(label)) + ")";
}

Region parse_region(const std::string& text) {
  if (text == "I") return Region::I;
  if (text == "II") return Region::II;
  if (text == "III") return Region::III;
  if (text == "IV") return Region::IV;
  throw Error(ErrorKind::InvalidArgument, "unknown region '" + text + "'");
}

JacobiState angles_to_jacobi(const AngularConfig& cfg, const MassContext& ctx) {
  const double s13 = wrap_positive(cfg.phi3 - cfg.phi1);
  const double s12 = wrap_positive(cfg.phi2 - cfg.phi1);
  // Body 2 at the same point as body 1 after wrapping counts as a full turn unless all coincide.
  const double span = (s12 == 0.0 && s13 > 0.0) ? kTwoPi : s12;
  if (s13 > span)
    throw Error(ErrorKind::InvalidArgument, "configuration is not in the anticlockwise order 1, 3, 2");
  JacobiState js;
  js.x1 = span;
  js.x2 = s13 - ctx.alpha2 * span;
  js.u1 = cfg.v2 - cfg.v1;
  js.u2 = cfg.v3 - ctx.alpha1 * cfg.v1 - ctx.alpha2 * cfg.v2;
  return js;
}

AngularConfig jacobi_to_angles(const JacobiState& js, const MassContext& ctx) {
  const double m12 = 2.0 * ctx.n;
  AngularConfig c;
  c.phi1 = -ctx.alpha2 * js.x1 - ctx.m * js.x2;
  c.phi2 = ctx.alpha1 * js.x1 - ctx.m * js.x2;
  c.phi3 = m12 * js.x2;
  c.v1 = -ctx.alpha2 * js.u1 - ctx.m * js.u2;
  c.v2 = ctx.alpha1 * js.u1 - ctx.m * js.u2;
  c.v3 = m12 * js.u2;
  return c;
}

Distances distances(const JacobiState& js, const MassContext& ctx) {
  const double p = js.x1;
  const double q = ctx.alpha1 * js.x1 - js.x2;
  const double s = ctx.alpha2 * js.x1 + js.x2;
  auto arc = [](double x) { return std::min(x, kTwoPi - x); };
  return {arc(p), arc(s), arc(q)};
}

RegionLabel classify_region(const JacobiState& js, const MassContext& ctx) {
  const double p = js.x1;
  const double q = ctx.alpha1 * js.x1 - js.x2;
  const double s = ctx.alpha2 * js.x1 + js.x2;
  const double tol = 1e-12;
  if (q < -tol || s < -tol || p > kTwoPi + tol)
    throw Error(ErrorKind::OutOfDomain, "point lies outside the configuration triangle");

  const bool on_q0 = std::abs(q) <= tol;
  const bool on_s0 = std::abs(s) <= tol;
  const bool on_p2pi = std::abs(p - kTwoPi) <= tol;
  const bool mid_p = near(p, kPi);
  const bool mid_q = near(q, kPi);
  const bool mid_s = near(s, kPi);

  // Vertices of the big triangle: origin and the two corners on x1 = 2 pi.
  if ((on_q0 && on_s0) || (on_q0 && on_p2pi) || (on_s0 && on_p2pi))
    return BoundaryKind::TotalCollisionVertex;
  // Pairwise intersections of the mid-segments.
  if ((mid_p && mid_q) || (mid_p && mid_s) || (mid_q && mid_s))
    return BoundaryKind::CollisionAntipodalPoint;
  if (on_q0 || on_s0 || on_p2pi) return BoundaryKind::DoubleCollisionSide;
  if (mid_p || mid_q || mid_s) return BoundaryKind::AntipodalMidSegment;

  if (p < kPi) return Region::I;
  if (s > kPi) return Region::III;
  if (q > kPi) return Region::IV;
  return Region::II;
}

PolarState jacobi_to_polar(const JacobiState& js, const MassContext& ctx) {
  const double a = std::sqrt(ctx.mu1) * js.x1;
  const double b = std::sqrt(ctx.mu2) * js.x2;
  const double da = std::sqrt(ctx.mu1) * js.u1;
  const double db = std::sqrt(ctx.mu2) * js.u2;
  PolarState ps;
  ps.r = std::hypot(a, b);
  if (ps.r == 0.0) return ps;
  ps.theta = std::atan2(b, a);
  const double rdot = (a * da + b * db) / ps.r;
  const double thetadot = (a * db - b * da) / (ps.r * ps.r);
  const double sr = std::sqrt(ps.r);
  ps.nu = sr * rdot;
  ps.tau = ps.r * sr * thetadot;
  return ps;
}

JacobiState polar_to_jacobi(const PolarState& ps, const MassContext& ctx) {
  if (ps.r < 0) throw Error(ErrorKind::InvalidArgument, "negative radius");
  JacobiState js;
  const double c = std::cos(ps.theta), s = std::sin(ps.theta);
  js.x1 = ps.r * c / std::sqrt(ctx.mu1);
  js.x2 = ps.r * s / std::sqrt(ctx.mu2);
  if (ps.r == 0.0) return js;
  const double sr = std::sqrt(ps.r);
  const double rdot = ps.nu / sr;
  const double w = ps.tau / (ps.r * sr);
  js.u1 = (rdot * c - ps.r * s * w) / std::sqrt(ctx.mu1);
  js.u2 = (rdot * s + ps.r * c * w) / std::sqrt(ctx.mu2);
  return js;
}

int branch_of(double u) { return static_cast<int>(std::floor((u + 0.5 * kPi) / kPi)); }

RegularizedState polar_to_regularized(const PolarState& ps, const MassContext& ctx, int branch) {
  if (std::abs(ps.theta) > ctx.theta_star * (1.0 + 1e-14))
    throw Error(ErrorKind::OutOfDomain, "|theta| exceeds theta*");
  const double ratio = std::clamp(ps.theta / ctx.theta_star, -1.0, 1.0);
  const double base = std::asin(ratio);
  RegularizedState rs;
  rs.r = ps.r;
  rs.nu = ps.nu;
  rs.u = branch * kPi + ((branch % 2 == 0) ? base : -base);
  const double c = std::cos(rs.u);
  rs.gamma = ps.tau * c * c;
  return rs;
}

PolarState regularized_to_polar(const RegularizedState& rs, const MassContext& ctx) {
  const double c = std::cos(rs.u);
  if (c == 0.0) throw Error(ErrorKind::Singular, "tau is undefined at a regularized double collision");
  PolarState ps;
  ps.r = rs.r;
  ps.theta = ctx.theta_star * std::sin(rs.u);
  ps.nu = rs.nu;
  ps.tau = rs.gamma / (c * c);
  return ps;
}

JacobiState regularized_configuration(double r, double u, const MassContext& ctx) {
  const double theta = ctx.theta_star * std::sin(u);
  JacobiState js;
  js.x1 = r * ctx.A1 * std::cos(theta);
  js.x2 = r * std::sin(theta) / std::sqrt(ctx.mu2);
  return js;
}

double kinetic2_angles(const AngularConfig& cfg, const MassContext& ctx) {
  return ctx.n * (cfg.v1 * cfg.v1 + cfg.v2 * cfg.v2) + ctx.m * cfg.v3 * cfg.v3;
}

double kinetic2_jacobi(const JacobiState& js, const MassContext& ctx) {
  return ctx.mu1 * js.u1 * js.u1 + ctx.mu2 * js.u2 * js.u2;
}

double angular_momentum(const AngularConfig& cfg, const MassContext& ctx) {
  return ctx.n * (cfg.v1 + cfg.v2) + ctx.m * cfg.v3;
}

}  // namespace schubart
