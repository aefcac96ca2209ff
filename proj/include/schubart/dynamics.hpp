#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "schubart/coords.hpp"
#include "schubart/model.hpp"

namespace schubart {

// Derivatives with respect to the regularized clock sigma.
struct FieldEval {
  double dr = 0, dnu = 0, du = 0, dgamma = 0;
};

struct IntegratorConfig {
  double rel_tol = 1e-12;
  double abs_tol = 1e-12;
  double initial_step = 1e-4;
  double max_step = 0.05;
  double sigma_max = 200.0;
  bool energy_projection = true;
  bool record_samples = true;
  std::size_t max_steps = 2'000'000;
};

enum class EventKind { UCrossing, NuCrossing, RThreshold, GammaCrossing };

struct EventSpec {
  EventKind kind = EventKind::UCrossing;
  double value = 0;
  int direction = 0;
  bool terminal = true;
};

struct TrajectorySample {
  double sigma = 0;
  double t_phys = 0;
  RegularizedState state;
  double energy_residual = 0;
};

enum class Termination { EventReached, SigmaLimit };

struct EventRecord {
  std::size_t spec_index = 0;
  TrajectorySample sample;
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
  std::vector<EventRecord> events;
  TrajectorySample final;
  Termination termination = Termination::SigmaLimit;
  double max_energy_residual = 0;
  std::size_t rejected_steps = 0;
};

std::string to_string(EventKind kind);
EventKind parse_event_kind(const std::string& text);

// 2 cos^2 u (rU + rh) - nu^2 cos^2 u, the square of w = gamma / cos u on the energy manifold.
double w_squared_from_energy(const RegularizedState& s, const MassContext& ctx, EnergyLevel energy);

// w = gamma / cos u.  Close to a double collision it is taken from the energy relation
// with the sign of gamma cos u, or `sign_hint` when cos u is too small to tell.
double shape_velocity(const RegularizedState& s, const MassContext& ctx, EnergyLevel energy,
                      double sign_hint = 1.0);

FieldEval vector_field(const RegularizedState& s, const MassContext& ctx, EnergyLevel energy,
                       double sign_hint = 1.0);

double energy_residual(const RegularizedState& s, const MassContext& ctx, EnergyLevel energy);

double gamma_from_energy(double r, double nu, double u, const MassContext& ctx, EnergyLevel energy);

// dt_phys / dsigma.
double physical_time_rate(const RegularizedState& s, const MassContext& ctx);

// Time-reversing reflection about u = pi/2 and the half-period shift u -> u + pi.
RegularizedState reflect_quarter(const RegularizedState& s);
RegularizedState shift_half(const RegularizedState& s);

Trajectory integrate(const RegularizedState& s0, const MassContext& ctx, EnergyLevel energy,
                     const IntegratorConfig& cfg, std::span<const EventSpec> events = {},
                     double t_phys0 = 0.0);

// Full Jacobi state (positions and velocities) of a regularized state off collisions.
JacobiState regularized_to_jacobi(const RegularizedState& s, const MassContext& ctx);

struct OracleTrajectory {
  std::vector<double> t;
  std::vector<JacobiState> states;
  bool margin_violation = false;
  double t_final = 0;
  double energy = 0;
  double max_energy_drift = 0;
};

inline constexpr double kOracleGuard = 0.05;

// Unregularized Euler-Lagrange flow in (x1, x2) for region I.  When output_times is
// empty every accepted step is returned.
OracleTrajectory oracle_flow(const JacobiState& js0, const MassContext& ctx, double duration,
                             std::span<const double> output_times = {});

double jacobi_energy(const JacobiState& js, const MassContext& ctx);

}  // namespace schubart
