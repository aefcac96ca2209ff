#pragma once

#include <array>
#include <optional>
#include <vector>

#include "schubart/coords.hpp"
#include "schubart/dynamics.hpp"
#include "schubart/model.hpp"
#include "schubart/wazewski.hpp"

namespace schubart {

struct ShootConfig {
  // Leave both at 0 to find the bracket by scanning the shooting segment.
  double lo = 0;
  double hi = 0;
  int scan_points = 40;
  int max_bisection = 200;
  double nu_tol = 1e-8;
  double width_tol = 1e-14;
  IntegratorConfig integrator;
};

struct ScanCell {
  double r0 = 0;
  std::optional<ExitRecord> exit;  // empty: no exit within the sigma budget
};

struct BisectionStep {
  double lo = 0, hi = 0, mid = 0;
  std::optional<ExitFace> face;
  double exit_nu = 0;
  double exit_u = 0;
};

struct QuarterOrbit {
  double r0 = 0, gamma0 = 0;
  double r1 = 0, gamma1 = 0;
  double sigma1 = 0, t1 = 0;
  double exit_nu = 0;  // nu at u = pi/2
  Trajectory trajectory;
  std::vector<BisectionStep> trace;
  double bracket_lo = 0, bracket_hi = 0;
  bool polished = false;
};

struct PeriodicOrbit {
  double r0 = 0, gamma0 = 0, r1 = 0, gamma1 = 0;
  std::vector<TrajectorySample> samples;  // four quarters assembled by symmetry
  double sigma_period = 0;
  double t_period = 0;
  Trajectory reintegrated;  // Gamma(0) integrated to u = 2 pi
  double sigma_period_reintegrated = 0;
  double t_period_reintegrated = 0;
  std::array<double, 4> closure_components{};  // |dr|, |dnu|, |du|, |dgamma|
  double closure_error = 0;
  RegularizedState half_state;  // re-integrated state at u = pi
  double half_mismatch = 0;     // against (r0, 0, pi, -gamma0)
};

inline constexpr double kClosureTolerance = 1e-5;

// r0_k = r_h k / (n + 1), k = 1..n, where r_h is the Hill bound on the segment.
std::vector<ScanCell> scan_exit_faces(int n, const MassContext& ctx, EnergyLevel energy,
                                      const IntegratorConfig& cfg);

// nu at the first u = pi/2 crossing from shooting_start(r0), integrating through nu = 0.
// NaN if u = pi/2 is not reached.
double shooting_residual(double r0, const MassContext& ctx, EnergyLevel energy, const IntegratorConfig& cfg,
                         Trajectory* trajectory = nullptr);

QuarterOrbit bracket_and_bisect(const ShootConfig& cfg, const MassContext& ctx, EnergyLevel energy);

// One polished quarter orbit per face change found by the scan.
std::vector<QuarterOrbit> find_quarter_orbits(const ShootConfig& cfg, const MassContext& ctx, EnergyLevel energy);

PeriodicOrbit assemble_period(const QuarterOrbit& q, const MassContext& ctx, EnergyLevel energy,
                              const IntegratorConfig& cfg = {});

// Max-norm distance between Gamma(0) and the state after `periods` full turns of u.
double closure_after_periods(const QuarterOrbit& q, int periods, const MassContext& ctx, EnergyLevel energy,
                             const IntegratorConfig& cfg = {});

struct PhysicalSample {
  double t_phys = 0;
  double sigma = 0;
  AngularConfig angles;
  Distances d;
};

// Angles and angular velocities; body 1's velocity is evaluated in a form that stays
// finite through the 2-3 collision.
AngularConfig physical_config(const RegularizedState& s, const MassContext& ctx);

std::vector<PhysicalSample> render_physical(const PeriodicOrbit& orbit, const MassContext& ctx);

}  // namespace schubart
