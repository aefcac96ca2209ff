#include "schubart/homothetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "schubart/error.hpp"
#include "schubart/ode.hpp"

namespace schubart {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kRegimeTol = 1e-12;
constexpr double kEndDistance = 1e-15;

void check_x1(double x1) {
  if (!(x1 > 0 && x1 < kTwoPi) || x1 == kPi)
    throw Error(ErrorKind::InvalidArgument, "x1 must lie in (0, pi) or (pi, 2 pi)");
}

double csc2(double x) {
  const double s = std::sin(x);
  return 1.0 / (s * s);
}

}  // namespace

double iso_mu1(double m) { return 0.25 * (1.0 - m); }
double iso_prefactor(double m) { return 0.25 * (1.0 - m) * (1.0 - m); }

double iso_profile(double x1, double m) {
  check_x1(x1);
  const double k4 = 4.0 * m / (1.0 - m);
  const double first = 1.0 / std::tan(x1);
  return (x1 < kPi ? first : -first) + k4 / std::tan(0.5 * x1);
}

double iso_profile_tan_form(double x1, double m) {
  if (!(x1 > kPi && x1 < kTwoPi)) throw Error(ErrorKind::InvalidArgument, "tan form holds on (pi, 2 pi)");
  return 0.5 * std::tan(0.5 * x1) + (9.0 * m - 1.0) / (2.0 * (1.0 - m)) / std::tan(0.5 * x1);
}

double iso_potential(double x1, double m) { return iso_prefactor(m) * iso_profile(x1, m); }

double iso_energy(const IsoscelesState& s, double m) {
  return 0.5 * s.p1 * s.p1 / iso_mu1(m) - iso_potential(s.x1, m);
}

std::string to_string(MassRegime regime) {
  switch (regime) {
    case MassRegime::Below: return "m<1/9";
    case MassRegime::Critical: return "m=1/9";
    case MassRegime::Above: return "m>1/9";
  }
  return "?";
}

std::string to_string(MotionClass motion) {
  switch (motion) {
    case MotionClass::CollisionAntipodalInfiniteVelocity: return "collision-antipodal (infinite velocity)";
    case MotionClass::CollisionAntipodalFiniteVelocity: return "collision-antipodal (finite velocity)";
    case MotionClass::Periodic: return "periodic";
    case MotionClass::Equilibrium: return "equilibrium";
    case MotionClass::Forbidden: return "forbidden";
  }
  return "?";
}

std::string to_string(IsoDiagnosis d) {
  switch (d) {
    case IsoDiagnosis::TripleCollision: return "triple-collision";
    case IsoDiagnosis::CollisionAntipodal: return "collision-antipodal";
    case IsoDiagnosis::Periodic: return "periodic";
    case IsoDiagnosis::Equilibrium: return "equilibrium";
    case IsoDiagnosis::DurationElapsed: return "duration-elapsed";
  }
  return "?";
}

TrichotomyReport classify_trichotomy(double m, double h) {
  if (!(m > 0 && m < 1)) throw Error(ErrorKind::InvalidArgument, "mass m must lie in (0, 1)");
  TrichotomyReport rep;
  rep.m = m;
  rep.h = h;
  const double k = 9.0 * m - 1.0;
  if (std::abs(k) <= kRegimeTol) {
    rep.regime = MassRegime::Critical;
    // -U decreases from +inf to 0 on (pi, 2 pi).
    rep.motion = h >= 0 ? MotionClass::CollisionAntipodalFiniteVelocity : MotionClass::Forbidden;
  } else if (k < 0) {
    rep.regime = MassRegime::Below;
    rep.motion = MotionClass::CollisionAntipodalInfiniteVelocity;
  } else {
    rep.regime = MassRegime::Above;
    const double x_eq = 2.0 * (kPi - std::atan(std::sqrt(k / (1.0 - m))));
    const double h0 = -iso_potential(x_eq, m);
    rep.x1_eq = x_eq;
    rep.h0 = h0;
    if (std::abs(h - h0) <= 1e-12 * std::max(1.0, std::abs(h0)))
      rep.motion = MotionClass::Equilibrium;
    else
      rep.motion = h > h0 ? MotionClass::Periodic : MotionClass::Forbidden;
  }
  return rep;
}

IsoTrajectory integrate_iso(const IsoscelesState& s0, double m, double duration) {
  check_x1(s0.x1);
  if (!(m > 0 && m < 1)) throw Error(ErrorKind::InvalidArgument, "mass m must lie in (0, 1)");
  if (!(duration > 0)) throw Error(ErrorKind::InvalidArgument, "duration must be positive");
  // z is the distance to the end the branch can run into: x1 = z on (0, pi) and
  // x1 = 2 pi - z on (pi, 2 pi).  The clock s with dt = z^(3/2) ds turns the
  // approach to z = 0 into exponential decay; t rides along as a third component.
  const bool upper = s0.x1 > kPi;
  const double mu1 = iso_mu1(m), pref = iso_prefactor(m), k4 = 4.0 * m / (1.0 - m);
  const double sgn = upper ? 1.0 : -1.0;
  auto rhs = [&](double, const ode::Vec<3>& y) -> ode::Vec<3> {
    const double z = y[0];
    const double dt = z * std::sqrt(z);
    const double df = -csc2(z) + sgn * 0.5 * k4 * csc2(0.5 * z);
    return {dt * y[1] / mu1, dt * pref * df, dt};
  };
  auto energy_z = [&](double z, double pz) {
    return 0.5 * pz * pz / mu1 - pref * (1.0 / std::tan(z) - sgn * k4 / std::tan(0.5 * z));
  };
  const double z0 = upper ? kTwoPi - s0.x1 : s0.x1;
  const double pz0 = upper ? -s0.p1 : s0.p1;

  std::vector<ode::Event<3>> events(4);
  events[0].g = [](double, const ode::Vec<3>& y) { return y[0] - kEndDistance; };
  events[0].direction = -1;
  events[1].g = [](double, const ode::Vec<3>& y) { return std::abs(y[1]) - kBlowupMomentum; };
  events[1].direction = 1;
  events[2].g = [](double, const ode::Vec<3>& y) { return y[1]; };
  events[2].terminal = false;
  events[3].g = [duration](double, const ode::Vec<3>& y) { return y[2] - duration; };
  events[3].direction = 1;

  ode::Options opt;
  opt.rel_tol = 1e-12;
  opt.abs_tol = 1e-20;
  opt.initial_step = 1e-6;
  opt.max_step = std::max(duration / 50.0, 1e-6);
  opt.min_step = 1e-30;
  opt.max_steps = 2'000'000;
  opt.record_steps = true;

  // The s-span is only a backstop; the duration event ends regular runs.
  const double s_end = 1e3 * (duration + 1.0);
  const auto res = ode::integrate<3>(rhs, 0.0, {z0, pz0, 0.0}, s_end, opt, std::span<const ode::Event<3>>(events));

  auto to_state = [&](const ode::Vec<3>& y) {
    return upper ? IsoscelesState{kTwoPi - y[0], -y[1]} : IsoscelesState{y[0], y[1]};
  };

  IsoTrajectory out;
  out.energy = iso_energy(s0, m);
  const double e0 = energy_z(z0, pz0);
  for (const auto& y : res.y) {
    out.t.push_back(y[2]);
    out.states.push_back(to_state(y));
    out.max_excursion = std::max(out.max_excursion, std::abs(y[0] - z0));
    const double kinetic = 0.5 * y[1] * y[1] / mu1;
    out.max_energy_drift =
        std::max(out.max_energy_drift, std::abs(energy_z(y[0], y[1]) - e0) / std::max(1.0, kinetic));
  }
  for (const auto& hit : res.hits)
    if (hit.index == 2) out.turning_times.push_back(hit.y[2]);
  out.t_final = res.y_final[2];
  out.final = to_state(res.y_final);

  const bool duration_done = !res.hits.empty() && res.hits.back().index == 3 && res.status == ode::Status::EventReached;
  const bool ended = (res.status == ode::Status::EventReached && !duration_done) ||
                     (res.status == ode::Status::StepFailure && res.y_final[0] < 1e-6);
  if (ended) {
    out.diagnosis = upper ? IsoDiagnosis::CollisionAntipodal : IsoDiagnosis::TripleCollision;
    out.velocity_blowup = !res.hits.empty() && res.hits.back().index == 1;
  } else if (!duration_done) {
    throw Error(ErrorKind::StepFailure, "isosceles integration failed away from the end states");
  } else if (out.turning_times.size() >= 2) {
    out.diagnosis = IsoDiagnosis::Periodic;
  } else if (out.max_excursion <= 1e-9) {
    out.diagnosis = IsoDiagnosis::Equilibrium;
  } else {
    out.diagnosis = IsoDiagnosis::DurationElapsed;
  }
  return out;
}

}  // namespace schubart
