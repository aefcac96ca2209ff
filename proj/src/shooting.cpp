#include "schubart/shooting.hpp"

#include <boost/math/tools/toms748_solve.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

#include "schubart/error.hpp"
#include "schubart/potential.hpp"

namespace schubart {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kHalfPi = 0.5 * std::numbers::pi;

void require_shooting_energy(EnergyLevel energy) {
  if (!(energy.h <= -1.0)) throw Error(ErrorKind::InvalidArgument, "shooting needs an energy h <= -1");
}

// Exit face at r0, stepping past cells that dwell near P.
std::optional<ExitRecord> classify(double& r0, const MassContext& ctx, EnergyLevel energy,
                                   const IntegratorConfig& cfg, double lo, double hi) {
  for (double shift : {0.0, 1e-12, -1e-12, 1e-11, -1e-11}) {
    const double r = r0 + shift;
    if (!(r > lo && r < hi)) continue;
    auto out = exit_map(r, ctx, energy, cfg);
    if (out.record) {
      r0 = r;
      return out.record;
    }
  }
  return std::nullopt;
}

QuarterOrbit bisect(double lo, double hi, const ShootConfig& cfg, const MassContext& ctx, EnergyLevel energy) {
  IntegratorConfig icfg = cfg.integrator;
  icfg.record_samples = false;
  QuarterOrbit q;
  double best_r = hi;
  double best_nu = std::numeric_limits<double>::infinity();
  for (int step = 0; step < cfg.max_bisection && hi - lo > cfg.width_tol; ++step) {
    double mid = 0.5 * (lo + hi);
    const auto rec = classify(mid, ctx, energy, icfg, lo, hi);
    BisectionStep bs{lo, hi, mid, std::nullopt, 0.0, 0.0};
    if (rec) {
      bs.face = rec->face;
      bs.exit_nu = rec->exit_state.nu;
      bs.exit_u = rec->exit_state.u;
    }
    q.trace.push_back(bs);
    if (!rec) throw Error(ErrorKind::NoExit, "no exit near r0 = " + std::to_string(mid));
    if (rec->face == ExitFace::B2) {
      lo = mid;
    } else {
      hi = mid;
      if (std::abs(rec->exit_state.nu) < best_nu) {
        best_nu = std::abs(rec->exit_state.nu);
        best_r = mid;
      }
      if (best_nu <= cfg.nu_tol) break;
    }
  }
  q.bracket_lo = lo;
  q.bracket_hi = hi;

  // Polish on the smooth residual: positive at lo (nu already crossed 0), negative at hi.
  double r_final = best_r;
  const double f_lo = shooting_residual(lo, ctx, energy, icfg);
  const double f_hi = shooting_residual(hi, ctx, energy, icfg);
  if (std::isfinite(f_lo) && std::isfinite(f_hi) && f_lo > 0 && f_hi < 0) {
    auto f = [&](double r) { return shooting_residual(r, ctx, energy, icfg); };
    std::uintmax_t iters = 60;
    auto tol = [](double a, double b) { return std::abs(b - a) <= 4e-16 * std::abs(a); };
    auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, f_lo, f_hi, tol, iters);
    const double fa = f(a), fb = f(b);
    const double cand = std::abs(fa) <= std::abs(fb) ? a : b;
    if (std::min(std::abs(fa), std::abs(fb)) <= std::abs(f(r_final))) r_final = cand;
    q.polished = true;
  } else if (!(f_hi < 0) && !std::isfinite(best_nu)) {
    r_final = hi;
  }

  Trajectory tr;
  const double nu1 = shooting_residual(r_final, ctx, energy, cfg.integrator, &tr);
  if (!std::isfinite(nu1)) throw Error(ErrorKind::NoExit, "quarter orbit does not reach u = pi/2");
  const auto s0 = shooting_start(r_final, ctx, energy);
  q.r0 = r_final;
  q.gamma0 = s0.gamma;
  q.trajectory = std::move(tr);
  const auto& end = q.trajectory.final;
  q.r1 = end.state.r;
  q.gamma1 = end.state.gamma;
  q.sigma1 = end.sigma;
  q.t1 = end.t_phys;
  q.exit_nu = end.state.nu;
  return q;
}

struct Transition {
  double lo, hi;  // lo exits through B2, hi through B1
};

std::vector<Transition> transitions(const std::vector<ScanCell>& cells) {
  std::vector<Transition> out;
  std::optional<std::size_t> last;
  for (std::size_t k = 0; k < cells.size(); ++k) {
    if (!cells[k].exit) continue;
    if (last) {
      const auto fa = cells[*last].exit->face, fb = cells[k].exit->face;
      if (fa == ExitFace::B2 && fb == ExitFace::B1) out.push_back({cells[*last].r0, cells[k].r0});
      if (fa == ExitFace::B1 && fb == ExitFace::B2) out.push_back({cells[k].r0, cells[*last].r0});
    }
    last = k;
  }
  return out;
}

}  // namespace

std::vector<ScanCell> scan_exit_faces(int n, const MassContext& ctx, EnergyLevel energy, const IntegratorConfig& cfg) {
  if (n < 2) throw Error(ErrorKind::InvalidArgument, "scan needs at least two points");
  IntegratorConfig icfg = cfg;
  icfg.record_samples = false;
  const double r_h = hill_radius(ctx, energy);
  std::vector<ScanCell> cells;
  for (int k = 1; k <= n; ++k) {
    ScanCell c;
    c.r0 = r_h * k / (n + 1.0);
    c.exit = exit_map(c.r0, ctx, energy, icfg).record;
    cells.push_back(c);
  }
  return cells;
}

double shooting_residual(double r0, const MassContext& ctx, EnergyLevel energy, const IntegratorConfig& cfg,
                         Trajectory* trajectory) {
  const auto s0 = shooting_start(r0, ctx, energy);
  const std::array<EventSpec, 1> events{{{EventKind::UCrossing, kHalfPi, +1, true}}};
  Trajectory tr = integrate(s0, ctx, energy, cfg, events);
  double nu = std::numeric_limits<double>::quiet_NaN();
  if (tr.termination == Termination::EventReached) nu = tr.final.state.nu;
  if (trajectory) *trajectory = std::move(tr);
  return nu;
}

QuarterOrbit bracket_and_bisect(const ShootConfig& cfg, const MassContext& ctx, EnergyLevel energy) {
  require_shooting_energy(energy);
  if (cfg.lo > 0 || cfg.hi > 0) {
    IntegratorConfig icfg = cfg.integrator;
    icfg.record_samples = false;
    const auto a = exit_map(cfg.lo, ctx, energy, icfg).record;
    const auto b = exit_map(cfg.hi, ctx, energy, icfg).record;
    if (!a || !b || a->face != ExitFace::B2 || b->face != ExitFace::B1)
      throw Error(ErrorKind::InvalidArgument, "bracket must exit through B2 at lo and B1 at hi");
    return bisect(cfg.lo, cfg.hi, cfg, ctx, energy);
  }
  const auto cells = scan_exit_faces(cfg.scan_points, ctx, energy, cfg.integrator);
  const auto tr = transitions(cells);
  if (tr.empty()) throw Error(ErrorKind::NoFaceChange, "no B2 -> B1 transition on the shooting segment");
  return bisect(tr.front().lo, tr.front().hi, cfg, ctx, energy);
}

std::vector<QuarterOrbit> find_quarter_orbits(const ShootConfig& cfg, const MassContext& ctx, EnergyLevel energy) {
  require_shooting_energy(energy);
  const auto cells = scan_exit_faces(cfg.scan_points, ctx, energy, cfg.integrator);
  const auto tr = transitions(cells);
  if (tr.empty()) throw Error(ErrorKind::NoFaceChange, "no B2 -> B1 transition on the shooting segment");
  std::vector<QuarterOrbit> out;
  for (const auto& t : tr) out.push_back(bisect(t.lo, t.hi, cfg, ctx, energy));
  return out;
}

PeriodicOrbit assemble_period(const QuarterOrbit& q, const MassContext& ctx, EnergyLevel energy,
                              const IntegratorConfig& cfg) {
  if (!(std::abs(q.exit_nu) <= 1e-6)) throw Error(ErrorKind::InvalidArgument, "quarter orbit misses the target edge");
  PeriodicOrbit p;
  p.r0 = q.r0;
  p.gamma0 = q.gamma0;
  p.r1 = q.r1;
  p.gamma1 = q.gamma1;
  const double s1 = q.sigma1, t1 = q.t1;

  std::vector<TrajectorySample> half = q.trajectory.samples;
  for (std::size_t k = q.trajectory.samples.size() - 1; k-- > 0;) {
    TrajectorySample smp = q.trajectory.samples[k];
    smp.sigma = 2.0 * s1 - smp.sigma;
    smp.t_phys = 2.0 * t1 - smp.t_phys;
    smp.state = reflect_quarter(smp.state);
    smp.energy_residual = energy_residual(smp.state, ctx, energy);
    half.push_back(smp);
  }
  p.samples = half;
  for (std::size_t k = 1; k < half.size(); ++k) {
    TrajectorySample smp = half[k];
    smp.sigma += 2.0 * s1;
    smp.t_phys += 2.0 * t1;
    smp.state = shift_half(smp.state);
    smp.energy_residual = energy_residual(smp.state, ctx, energy);
    p.samples.push_back(smp);
  }
  p.sigma_period = 4.0 * s1;
  p.t_period = 4.0 * t1;

  const RegularizedState g0{q.r0, 0.0, 0.0, q.gamma0};
  const std::array<EventSpec, 4> events{{{EventKind::UCrossing, 2.0 * kPi, +1, true},
                                         {EventKind::UCrossing, kHalfPi, +1, false},
                                         {EventKind::UCrossing, kPi, +1, false},
                                         {EventKind::UCrossing, 1.5 * kPi, +1, false}}};
  IntegratorConfig icfg = cfg;
  icfg.sigma_max = std::max(cfg.sigma_max, 8.0 * s1);
  p.reintegrated = integrate(g0, ctx, energy, icfg, events);
  if (p.reintegrated.termination != Termination::EventReached)
    throw Error(ErrorKind::ClosureFailure, "re-integration did not complete a period");
  const auto& end = p.reintegrated.final;
  p.sigma_period_reintegrated = end.sigma;
  p.t_period_reintegrated = end.t_phys;
  p.closure_components = {std::abs(end.state.r - g0.r), std::abs(end.state.nu - g0.nu),
                          std::abs(end.state.u - 2.0 * kPi), std::abs(end.state.gamma - g0.gamma)};
  p.closure_error = *std::max_element(p.closure_components.begin(), p.closure_components.end());
  for (const auto& ev : p.reintegrated.events)
    if (ev.spec_index == 2) {
      p.half_state = ev.sample.state;
      p.half_mismatch = std::max({std::abs(ev.sample.state.r - q.r0), std::abs(ev.sample.state.nu),
                                  std::abs(ev.sample.state.u - kPi), std::abs(ev.sample.state.gamma + q.gamma0)});
    }
  if (!(p.closure_error <= kClosureTolerance))
    throw Error(ErrorKind::ClosureFailure, "closure error " + std::to_string(p.closure_error) + " exceeds 1e-5");
  return p;
}

double closure_after_periods(const QuarterOrbit& q, int periods, const MassContext& ctx, EnergyLevel energy,
                             const IntegratorConfig& cfg) {
  if (periods < 1) throw Error(ErrorKind::InvalidArgument, "periods must be positive");
  const RegularizedState g0{q.r0, 0.0, 0.0, q.gamma0};
  const std::array<EventSpec, 1> events{{{EventKind::UCrossing, 2.0 * kPi * periods, +1, true}}};
  IntegratorConfig icfg = cfg;
  icfg.record_samples = false;
  icfg.sigma_max = std::max(cfg.sigma_max, 8.0 * periods * q.sigma1);
  const auto tr = integrate(g0, ctx, energy, icfg, events);
  if (tr.termination != Termination::EventReached)
    throw Error(ErrorKind::ClosureFailure, "re-integration did not complete the requested periods");
  const auto& s = tr.final.state;
  return std::max({std::abs(s.r - g0.r), std::abs(s.nu), std::abs(s.u - 2.0 * kPi * periods),
                   std::abs(s.gamma - g0.gamma)});
}

AngularConfig physical_config(const RegularizedState& s, const MassContext& ctx) {
  const JacobiState pos = regularized_configuration(s.r, s.u, ctx);
  AngularConfig a = jacobi_to_angles(pos, ctx);
  if (!(s.r > 0)) return a;
  const double sn = std::sin(s.u), c = std::cos(s.u), c2 = c * c;
  const double theta = ctx.theta_star * sn;
  const double ct = std::cos(theta), st = std::sin(theta);
  const double sr = std::sqrt(s.r);
  const double rdot = s.nu / sr;
  const double isq2 = 1.0 / std::sqrt(ctx.mu2);
  // Body 1: phi1' = rdot (-alpha2 A1 cos theta - m sin theta / sqrt(mu2)) - r theta' A2 sqrt(m) sin(theta* - theta),
  // with r theta' = gamma / (cos^2 u sqrt r) and sin(theta* - theta) / cos^2 u written without 0/0.
  const double dm = sn >= 0 ? ctx.theta_star * c2 / (1.0 + sn) : ctx.theta_star * (1.0 - sn);
  const double sin_over_c2 = sn >= 0 ? sinc(dm) * ctx.theta_star / (1.0 + sn) : std::sin(dm) / c2;
  a.v1 = rdot * (-ctx.alpha2 * ctx.A1 * ct - ctx.m * st * isq2) -
         s.gamma / sr * ctx.A2 * std::sqrt(ctx.m) * sin_over_c2;
  const double r_thetadot = c2 > 0 ? s.gamma / (c2 * sr) : std::numeric_limits<double>::infinity();
  const double u1 = ctx.A1 * (rdot * ct - r_thetadot * st);
  const double u2 = (rdot * st + r_thetadot * ct) * isq2;
  a.v2 = ctx.alpha1 * u1 - ctx.m * u2;
  a.v3 = 2.0 * ctx.n * u2;
  return a;
}

std::vector<PhysicalSample> render_physical(const PeriodicOrbit& orbit, const MassContext& ctx) {
  std::vector<PhysicalSample> out;
  out.reserve(orbit.samples.size());
  for (const auto& smp : orbit.samples) {
    PhysicalSample ps;
    ps.t_phys = smp.t_phys;
    ps.sigma = smp.sigma;
    ps.angles = physical_config(smp.state, ctx);
    ps.d = distances(regularized_configuration(smp.state.r, smp.state.u, ctx), ctx);
    out.push_back(ps);
  }
  return out;
}

}  // namespace schubart
