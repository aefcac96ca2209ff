#include <algorithm>
#include <cmath>
#include <numbers>

#include "schubart/dynamics.hpp"
#include "schubart/error.hpp"
#include "schubart/ode.hpp"
#include "schubart/potential.hpp"

namespace schubart {

namespace {

constexpr double kPi = std::numbers::pi;

double csc2(double x) {
  const double s = std::sin(x);
  return 1.0 / (s * s);
}

double guard_margin(const ode::Vec<4>& y, const MassContext& ctx) {
  const auto d = distances({y[0], y[1], 0, 0}, ctx);
  double g = kPi;
  for (double v : {d.d12, d.d13, d.d23}) g = std::min({g, v - kOracleGuard, std::abs(v - kPi) - kOracleGuard});
  return g;
}

}  // namespace

double jacobi_energy(const JacobiState& js, const MassContext& ctx) {
  return 0.5 * kinetic2_jacobi(js, ctx) - potential_xy(js.x1, js.x2, ctx);
}

OracleTrajectory oracle_flow(const JacobiState& js0, const MassContext& ctx, double duration,
                             std::span<const double> output_times) {
  if (!std::holds_alternative<Region>(classify_region(js0, ctx)) ||
      std::get<Region>(classify_region(js0, ctx)) != Region::I)
    throw Error(ErrorKind::InvalidArgument, "oracle flow starts strictly inside region I");
  if (guard_margin({js0.x1, js0.x2, js0.u1, js0.u2}, ctx) <= 0)
    throw Error(ErrorKind::InvalidArgument, "initial state inside the guard band");

  const double nn = ctx.n * ctx.n, mn = ctx.m * ctx.n;
  auto rhs = [&](double, const ode::Vec<4>& y) -> ode::Vec<4> {
    const double x1 = y[0], x2 = y[1];
    const double s = ctx.alpha2 * x1 + x2;
    const double q = ctx.alpha1 * x1 - x2;
    const double cs = csc2(s), cq = csc2(q);
    const double f1 = -nn * csc2(x1) - mn * (ctx.alpha2 * cs + ctx.alpha1 * cq);
    const double f2 = -mn * (cs - cq);
    return {y[2], y[3], f1 / ctx.mu1, f2 / ctx.mu2};
  };

  ode::Event<4> guard;
  guard.g = [&](double, const ode::Vec<4>& y) { return guard_margin(y, ctx); };
  guard.direction = -1;
  guard.terminal = true;
  const std::vector<ode::Event<4>> events{guard};

  ode::Options opt;
  opt.rel_tol = 1e-13;
  opt.abs_tol = 1e-13;
  opt.initial_step = 1e-5;
  opt.max_step = std::max(duration / 20.0, 1e-6);
  opt.record_steps = output_times.empty();

  const auto res = ode::integrate<4>(rhs, 0.0, {js0.x1, js0.x2, js0.u1, js0.u2}, duration, opt,
                                     std::span<const ode::Event<4>>(events), output_times);
  if (res.status == ode::Status::StepFailure || res.status == ode::Status::StepBudget)
    throw Error(ErrorKind::StepFailure, "oracle flow step failure");

  OracleTrajectory out;
  out.energy = jacobi_energy(js0, ctx);
  const auto& ts = output_times.empty() ? res.t : res.out_t;
  const auto& ys = output_times.empty() ? res.y : res.out_y;
  for (std::size_t k = 0; k < ts.size(); ++k) {
    const JacobiState js{ys[k][0], ys[k][1], ys[k][2], ys[k][3]};
    out.t.push_back(ts[k]);
    out.states.push_back(js);
    out.max_energy_drift = std::max(out.max_energy_drift, std::abs(jacobi_energy(js, ctx) - out.energy));
  }
  out.margin_violation = res.status == ode::Status::EventReached;
  out.t_final = res.t_final;
  return out;
}

}  // namespace schubart
