#include "schubart/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "schubart/error.hpp"
#include "schubart/ode.hpp"
#include "schubart/potential.hpp"

namespace schubart {

namespace {

constexpr double kPi = std::numbers::pi;
// Below kEnergyZone, w comes from the energy relation; above kDirectZone, from gamma / cos u.
constexpr double kEnergyZone = 0.02;
constexpr double kDirectZone = 0.05;
// Below this |cos u| the sign of gamma cos u is not trusted.
constexpr double kSignZone = 1e-3;

using State5 = ode::Vec<5>;

RegularizedState unpack(const State5& y) { return {y[0], y[1], y[2], y[3]}; }

double blend_weight(double abs_c) {
  if (abs_c <= kEnergyZone) return 0.0;
  if (abs_c >= kDirectZone) return 1.0;
  const double x = (abs_c - kEnergyZone) / (kDirectZone - kEnergyZone);
  return x * x * (3.0 - 2.0 * x);
}

struct Local {
  PotentialSample p;
  double s, c, c2;
};

Local local_fields(const RegularizedState& st, const MassContext& ctx) {
  Local l;
  l.s = std::sin(st.u);
  l.c = std::cos(st.u);
  l.c2 = l.c * l.c;
  l.p = eval_fields_unchecked(st.r, st.u, ctx);
  return l;
}

double w_squared(const RegularizedState& st, const Local& l, double h) {
  return 2.0 * l.p.rU_c2 + 2.0 * st.r * h * l.c2 - st.nu * st.nu * l.c2;
}

double w_of(const RegularizedState& st, const Local& l, double h, double hint) {
  const double ac = std::abs(l.c);
  const double lambda = blend_weight(ac);
  const double direct = lambda > 0 ? st.gamma / l.c : 0.0;
  if (lambda == 1.0) return direct;
  double sign = hint;
  if (ac >= kSignZone && st.gamma != 0.0) sign = (st.gamma * l.c > 0) ? 1.0 : -1.0;
  const double wE = std::copysign(std::sqrt(std::max(w_squared(st, l, h), 0.0)), sign);
  return lambda * direct + (1.0 - lambda) * wE;
}

FieldEval field(const RegularizedState& st, const Local& l, const MassContext& ctx, double h, double hint) {
  const double ts = ctx.theta_star;
  const double w = w_of(st, l, h, hint);
  FieldEval f;
  f.dr = ts * st.nu * st.r * l.c2;
  f.dnu = ts * (-0.5 * st.nu * st.nu * l.c2 + 2.0 * st.r * h * l.c2 + 2.0 * l.p.rU_c2 + l.p.r2U_r_c2);
  f.du = w;
  f.dgamma = -0.5 * ts * st.nu * st.gamma * l.c2 + ts * l.p.rU_theta_c4 - 2.0 * l.s * w * w;
  return f;
}

double residual(const RegularizedState& st, const Local& l, double h) {
  double w2;
  if (l.c == 0.0) {
    w2 = std::max(w_squared(st, l, h), 0.0);
  } else {
    const double w = st.gamma / l.c;
    w2 = w * w;
  }
  return 0.5 * (st.nu * st.nu * l.c2 + w2) - l.p.rU_c2 - st.r * h * l.c2;
}

}  // namespace

std::string to_string(EventKind kind) {
  switch (kind) {
    case EventKind::UCrossing: return "u";
    case EventKind::NuCrossing: return "nu";
    case EventKind::RThreshold: return "r";
    case EventKind::GammaCrossing: return "gamma";
  }
  return "?";
}

EventKind parse_event_kind(const std::string& text) {
  if (text == "u") return EventKind::UCrossing;
  if (text == "nu") return EventKind::NuCrossing;
  if (text == "r") return EventKind::RThreshold;
  if (text == "gamma") return EventKind::GammaCrossing;
  throw Error(ErrorKind::InvalidArgument, "unknown event variable '" + text + "'");
}

double w_squared_from_energy(const RegularizedState& s, const MassContext& ctx, EnergyLevel energy) {
  return w_squared(s, local_fields(s, ctx), energy.h);
}

double shape_velocity(const RegularizedState& s, const MassContext& ctx, EnergyLevel energy, double sign_hint) {
  return w_of(s, local_fields(s, ctx), energy.h, sign_hint);
}

FieldEval vector_field(const RegularizedState& s, const MassContext& ctx, EnergyLevel energy, double sign_hint) {
  if (s.r < 0) throw Error(ErrorKind::OutOfDomain, "negative radius");
  const double rho = s.r * ctx.A1 * std::cos(ctx.theta_star * std::sin(s.u));
  if (std::abs(rho - kPi) <= 1e-14 * kPi) throw Error(ErrorKind::Singular, "state at an antipodal configuration");
  if (rho > kPi) throw Error(ErrorKind::OutOfDomain, "radius beyond the blow-up bound");
  return field(s, local_fields(s, ctx), ctx, energy.h, sign_hint);
}

double energy_residual(const RegularizedState& s, const MassContext& ctx, EnergyLevel energy) {
  return residual(s, local_fields(s, ctx), energy.h);
}

double gamma_from_energy(double r, double nu, double u, const MassContext& ctx, EnergyLevel energy) {
  const RegularizedState s{r, nu, u, 0.0};
  const Local l = local_fields(s, ctx);
  const double w2 = w_squared(s, l, energy.h);
  if (!(w2 >= -1e-12)) throw Error(ErrorKind::ImaginaryGamma, "point lies outside the Hill region");
  return std::abs(l.c) * std::sqrt(std::max(w2, 0.0));
}

double physical_time_rate(const RegularizedState& s, const MassContext& ctx) {
  const double c = std::cos(s.u);
  return s.r * std::sqrt(std::abs(s.r)) * ctx.theta_star * c * c;
}

RegularizedState reflect_quarter(const RegularizedState& s) { return {s.r, -s.nu, kPi - s.u, -s.gamma}; }

RegularizedState shift_half(const RegularizedState& s) { return {s.r, s.nu, s.u + kPi, -s.gamma}; }

Trajectory integrate(const RegularizedState& s0, const MassContext& ctx, EnergyLevel energy,
                     const IntegratorConfig& cfg, std::span<const EventSpec> events, double t_phys0) {
  if (!(cfg.rel_tol > 0 && cfg.abs_tol > 0)) throw Error(ErrorKind::InvalidArgument, "tolerances must be positive");
  const double res0 = energy_residual(s0, ctx, energy);
  if (!(std::abs(res0) <= 1e-9))
    throw Error(ErrorKind::InvalidArgument, "initial state is off the energy manifold (residual " +
                                                std::to_string(res0) + ")");
  const double h = energy.h;
  const double c0 = std::cos(s0.u);
  double hint = (s0.gamma * c0 < 0) ? -1.0 : 1.0;
  if (s0.gamma == 0.0 || std::abs(c0) < kSignZone) hint = 1.0;

  auto rhs = [&](double, const State5& y) -> State5 {
    const auto st = unpack(y);
    const Local l = local_fields(st, ctx);
    const FieldEval f = field(st, l, ctx, h, hint);
    return {f.dr, f.dnu, f.du, f.dgamma, st.r * std::sqrt(std::abs(st.r)) * ctx.theta_star * l.c2};
  };

  auto after = [&](double, State5& y) {
    auto st = unpack(y);
    const Local l = local_fields(st, ctx);
    const double ac = std::abs(l.c);
    if (ac >= kSignZone && st.gamma != 0.0) hint = (st.gamma * l.c > 0) ? 1.0 : -1.0;
    if (!cfg.energy_projection) return false;
    const double w2 = w_squared(st, l, h);
    if (ac < kEnergyZone) {
      y[3] = l.c * std::copysign(std::sqrt(std::max(w2, 0.0)), hint);
      return true;
    }
    const double w = st.gamma / l.c;
    if (std::abs(w) >= std::abs(st.nu) * l.c2) {
      y[3] = l.c * std::copysign(std::sqrt(std::max(w2, 0.0)), w);
    } else {
      const double nu2 = (2.0 * l.p.rU_c2 + 2.0 * st.r * h * l.c2 - w * w) / l.c2;
      y[1] = std::copysign(std::sqrt(std::max(nu2, 0.0)), st.nu);
    }
    return true;
  };

  std::vector<ode::Event<5>> ev;
  for (const auto& e : events) {
    ode::Event<5> oe;
    oe.direction = e.direction;
    oe.terminal = e.terminal;
    const double v = e.value;
    switch (e.kind) {
      case EventKind::UCrossing: oe.g = [v](double, const State5& y) { return y[2] - v; }; break;
      case EventKind::NuCrossing: oe.g = [v](double, const State5& y) { return y[1] - v; }; break;
      case EventKind::RThreshold: oe.g = [v](double, const State5& y) { return y[0] - v; }; break;
      case EventKind::GammaCrossing: oe.g = [v](double, const State5& y) { return y[3] - v; }; break;
    }
    ev.push_back(std::move(oe));
  }

  ode::Options opt;
  opt.rel_tol = cfg.rel_tol;
  opt.abs_tol = cfg.abs_tol;
  opt.initial_step = cfg.initial_step;
  opt.max_step = cfg.max_step;
  opt.max_steps = cfg.max_steps;
  opt.record_steps = cfg.record_samples;

  const State5 y0{s0.r, s0.nu, s0.u, s0.gamma, t_phys0};
  const auto res = ode::integrate<5>(rhs, 0.0, y0, cfg.sigma_max, opt, std::span<const ode::Event<5>>(ev),
                                     std::span<const double>{}, after);
  if (res.status == ode::Status::StepFailure)
    throw Error(ErrorKind::StepFailure, "step size underflow at sigma = " + std::to_string(res.t_final));
  if (res.status == ode::Status::StepBudget) throw Error(ErrorKind::StepFailure, "step budget exhausted");

  auto make_sample = [&](double sigma, const State5& y) {
    TrajectorySample smp;
    smp.sigma = sigma;
    smp.t_phys = y[4];
    smp.state = unpack(y);
    smp.energy_residual = energy_residual(smp.state, ctx, energy);
    return smp;
  };

  Trajectory tr;
  tr.samples.reserve(res.t.size());
  for (std::size_t k = 0; k < res.t.size(); ++k) {
    tr.samples.push_back(make_sample(res.t[k], res.y[k]));
    tr.max_energy_residual = std::max(tr.max_energy_residual, std::abs(tr.samples.back().energy_residual));
  }
  for (const auto& hit : res.hits) tr.events.push_back({hit.index, make_sample(hit.t, hit.y)});
  tr.final = make_sample(res.t_final, res.y_final);
  tr.max_energy_residual = std::max(tr.max_energy_residual, std::abs(tr.final.energy_residual));
  tr.termination = res.status == ode::Status::EventReached ? Termination::EventReached : Termination::SigmaLimit;
  tr.rejected_steps = res.rejected;
  return tr;
}

JacobiState regularized_to_jacobi(const RegularizedState& s, const MassContext& ctx) {
  return polar_to_jacobi(regularized_to_polar(s, ctx), ctx);
}

}  // namespace schubart
