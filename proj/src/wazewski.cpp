#include "schubart/wazewski.hpp"

#include <boost/math/tools/toms748_solve.hpp>

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>

#include "schubart/error.hpp"
#include "schubart/potential.hpp"

namespace schubart {

namespace {

constexpr double kHalfPi = 0.5 * std::numbers::pi;

double root_in(auto&& f, double lo, double hi) {
  std::uintmax_t iters = 300;
  auto tol = [](double a, double b) { return std::abs(b - a) <= 1e-15 * std::max(1.0, std::abs(a)); };
  auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, tol, iters);
  return std::abs(f(a)) <= std::abs(f(b)) ? a : b;
}

}  // namespace

std::string to_string(Face face) {
  switch (face) {
    case Face::GammaZero: return "gamma=0";
    case Face::NuZero: return "nu=0";
    case Face::UZero: return "u=0";
    case Face::UHalfPi: return "u=pi/2";
    case Face::RZero: return "r=0";
    case Face::RStar: return "r=r*";
  }
  return "?";
}

std::string to_string(ExitFace face) { return face == ExitFace::B1 ? "B1" : "B2"; }

WazewskiMembership membership(const RegularizedState& s, const MassContext& ctx, EnergyLevel energy, double tol) {
  WazewskiMembership w;
  w.on_energy_manifold = std::abs(energy_residual(s, ctx, energy)) <= tol;
  const bool box = s.r >= -tol && s.r <= ctx.r_star + tol && s.nu <= tol && s.u >= -tol &&
                   s.u <= kHalfPi + tol && s.gamma >= -tol;
  w.inside = w.on_energy_manifold && box;
  if (std::abs(s.gamma) <= tol) w.faces.push_back(Face::GammaZero);
  if (std::abs(s.nu) <= tol) w.faces.push_back(Face::NuZero);
  if (std::abs(s.u) <= tol) w.faces.push_back(Face::UZero);
  if (std::abs(s.u - kHalfPi) <= tol) w.faces.push_back(Face::UHalfPi);
  if (std::abs(s.r) <= tol) w.faces.push_back(Face::RZero);
  if (std::abs(s.r - ctx.r_star) <= tol) w.faces.push_back(Face::RStar);
  w.on_H = std::abs(s.u) <= tol && std::abs(s.gamma) <= tol;
  if (!w.inside || w.on_H) return w;
  if (std::abs(s.u - kHalfPi) <= tol) {
    w.immediate_exit = true;
    w.exit_face = ExitFace::B1;
  } else if (std::abs(s.nu) <= tol && F_scaled(std::max(s.r, 0.0), s.u, ctx, energy) >= 0) {
    w.immediate_exit = true;
    w.exit_face = ExitFace::B2;
  }
  return w;
}

RegularizedState shooting_start(double r0, const MassContext& ctx, EnergyLevel energy) {
  return {r0, 0.0, 0.0, gamma_from_energy(r0, 0.0, 0.0, ctx, energy)};
}

ExitOutcome exit_map(double r0, const MassContext& ctx, EnergyLevel energy, const IntegratorConfig& cfg) {
  if (!(energy.h < 0)) throw Error(ErrorKind::InvalidArgument, "the Wazewski construction needs h < 0");
  const double r_h = hill_radius(ctx, energy);
  if (!(r0 > 0 && r0 < r_h)) throw Error(ErrorKind::InvalidArgument, "r0 must lie strictly inside the shooting segment");
  const RegularizedState s0 = shooting_start(r0, ctx, energy);
  ExitOutcome out;
  if (F(r0, 0.0, ctx, energy) >= 0) {
    ExitRecord rec;
    rec.exit_state = s0;
    rec.face = ExitFace::B2;
    out.record = rec;
    TrajectorySample smp;
    smp.state = s0;
    smp.energy_residual = energy_residual(s0, ctx, energy);
    out.trajectory.samples.push_back(smp);
    out.trajectory.final = smp;
    out.trajectory.termination = Termination::EventReached;
    return out;
  }
  const std::array<EventSpec, 2> events{{{EventKind::NuCrossing, 0.0, +1, true},
                                         {EventKind::UCrossing, kHalfPi, +1, true}}};
  out.trajectory = integrate(s0, ctx, energy, cfg, events);
  out.sigma_reached = out.trajectory.final.sigma;
  if (out.trajectory.termination != Termination::EventReached) return out;
  const auto& ev = out.trajectory.events.back();
  ExitRecord rec;
  rec.exit_state = ev.sample.state;
  rec.exit_sigma = ev.sample.sigma;
  rec.exit_t_phys = ev.sample.t_phys;
  rec.face = ev.spec_index == 0 ? ExitFace::B2 : ExitFace::B1;
  rec.on_T = std::abs(rec.exit_state.nu) <= kOnTargetTol && std::abs(rec.exit_state.u - kHalfPi) <= kOnTargetTol;
  out.record = rec;
  return out;
}

Eigen::Vector3d reduced_field(const Eigen::Vector3d& x, const MassContext& ctx, EnergyLevel energy) {
  const double r = x[0], u = x[1], gamma = x[2];
  const auto p = eval_fields_unchecked(r, u, ctx);
  const double s = std::sin(u), c = std::cos(u), c2 = c * c;
  const double nu = -std::sqrt(2.0 * (p.rU + r * energy.h) - gamma * gamma / (c2 * c2));
  const double ts = ctx.theta_star;
  Eigen::Vector3d f;
  f[0] = ts * nu * r * c2;
  f[1] = gamma / c;
  f[2] = -0.5 * ts * nu * gamma * c2 + ts * p.rU_theta_c4 - 2.0 * s * gamma * gamma / c2;
  return f;
}

EquilibriumData linearize_P(const MassContext& ctx, EnergyLevel energy) {
  EquilibriumData d;
  const double ts = ctx.theta_star, nu0 = ctx.nu0;
  d.P = {0.0, -nu0, 0.0, 0.0};
  d.rU_theta_theta = rU_theta_theta_origin(ctx);
  d.rU_theta_theta_fd = rU_theta_theta_origin_fd(ctx);
  const double k = d.rU_theta_theta_fd;
  d.jacobian << -ts * nu0, 0, 0, 0, 0, 1, 0, ts * ts * k, 0.5 * ts * nu0;

  const double step = 1e-5;
  const Eigen::Vector3d x0 = Eigen::Vector3d::Zero();
  for (int j = 0; j < 3; ++j) {
    Eigen::Vector3d xp = x0, xm = x0;
    xp[j] += step;
    xm[j] -= step;
    d.jacobian_fd.col(j) = (reduced_field(xp, ctx, energy) - reduced_field(xm, ctx, energy)) / (2.0 * step);
  }
  d.max_entry_discrepancy = (d.jacobian - d.jacobian_fd).cwiseAbs().maxCoeff();

  const double half_trace = 0.25 * ts * nu0;
  const double disc = std::sqrt(half_trace * half_trace + ts * ts * k);
  d.eigenvalues = {-ts * nu0, half_trace - disc, half_trace + disc};
  d.eigenvectors[0] = Eigen::Vector3d(1, 0, 0);
  d.eigenvectors[1] = Eigen::Vector3d(0, 1, d.eigenvalues[1]);
  d.eigenvectors[2] = Eigen::Vector3d(0, 1, d.eigenvalues[2]);

  // The radial eigenvalue is the one whose eigenvector points along r.
  Eigen::EigenSolver<Eigen::Matrix3d> es(d.jacobian_fd);
  int radial = 0;
  for (int i = 1; i < 3; ++i)
    if (std::abs(es.eigenvectors()(0, i)) > std::abs(es.eigenvectors()(0, radial))) radial = i;
  std::array<double, 2> rest{};
  for (int i = 0, k = 0; i < 3; ++i)
    if (i != radial) rest[k++] = es.eigenvalues()[i].real();
  std::sort(rest.begin(), rest.end());
  d.eigenvalues_fd = {es.eigenvalues()[radial].real(), rest[0], rest[1]};
  return d;
}

BranchResult unstable_branch(const MassContext& ctx, EnergyLevel energy, double eps, const IntegratorConfig& cfg) {
  if (!(eps > 0)) throw Error(ErrorKind::InvalidArgument, "offset must be positive");
  const auto eq = linearize_P(ctx, energy);
  const Eigen::Vector3d v = eq.eigenvectors[2].normalized();
  RegularizedState s0;
  s0.r = 0.0;
  s0.u = eps * v[1];
  s0.gamma = eps * v[2];
  const double c2 = std::cos(s0.u) * std::cos(s0.u);
  const auto p = eval_fields(0.0, s0.u, ctx);
  s0.nu = -std::sqrt(2.0 * p.rU - s0.gamma * s0.gamma / (c2 * c2));

  const std::array<EventSpec, 2> events{{{EventKind::UCrossing, kHalfPi, +1, true},
                                         {EventKind::NuCrossing, 0.0, +1, true}}};
  BranchResult br;
  br.trajectory = integrate(s0, ctx, energy, cfg, events);
  br.bound = 0.5 * ctx.theta_star * ctx.nu0;
  if (br.trajectory.termination != Termination::EventReached)
    throw Error(ErrorKind::NoExit, "unstable branch did not leave W within the sigma budget");
  const auto& ev = br.trajectory.events.back();
  if (ev.spec_index != 0) throw Error(ErrorKind::BranchViolation, "nu reached 0 before u = pi/2 on the branch");
  br.exit.exit_state = ev.sample.state;
  br.exit.exit_sigma = ev.sample.sigma;
  br.exit.exit_t_phys = ev.sample.t_phys;
  br.exit.face = ExitFace::B1;
  br.exit.on_T = std::abs(ev.sample.state.nu) <= kOnTargetTol;
  double hint = 1.0;
  for (const auto& smp : br.trajectory.samples) {
    if (smp.state.r != 0.0) br.r_stayed_zero = false;
    const auto f = vector_field(smp.state, ctx, energy, hint);
    if (f.du > 0) br.max_dnu_du = std::max(br.max_dnu_du, f.dnu / f.du);
  }
  return br;
}

FCurveEndpoints locate_F_zero_endpoints(const MassContext& ctx, EnergyLevel energy) {
  FCurveEndpoints e;
  auto fa = [&](double r) { return F_scaled(r, 0.0, ctx, energy); };
  if (!(fa(ctx.r_star) < 0)) throw Error(ErrorKind::InvalidArgument, "F(r*, 0) is not negative");
  e.r_A = root_in(fa, 1e-14, ctx.r_star);
  auto fb = [&](double u) { return F_scaled(ctx.r_star, u, ctx, energy); };
  e.alpha = root_in(fb, 0.0, kHalfPi);
  return e;
}

}  // namespace schubart
