#pragma once

#include <vector>

#include "schubart/coords.hpp"
#include "schubart/model.hpp"

namespace schubart {

// Fields at (r, u) with theta = theta* sin u.  The raw values blow up at a double
// collision (cos u = 0); the cos^2 u / cos^4 u scaled ones stay finite there.
struct PotentialSample {
  double rU = 0;
  double rU_theta = 0;
  double r2U_r = 0;
  double rU_c2 = 0;        // rU cos^2 u
  double r2U_r_c2 = 0;     // r^2 U_r cos^2 u
  double rU_theta_c4 = 0;  // rU_theta cos^4 u
  bool valid = false;      // raw values finite
};

// x cot x and x^2 / sin^2 x with a short series below |x| < 1e-2.
double x_cot_x(double x);
double x2_over_sin2(double x);
double sinc(double x);

// Throws Singular at antipodal configurations (including Q), OutOfDomain for r < 0
// or beyond the blow-up bound.
PotentialSample eval_fields(double r, double u, const MassContext& ctx);

// Same formulas without domain checks; r may be negative (the fields are even or odd
// in r) and NaN is returned past an antipodal line.  Used inside integrators and
// finite differences.
PotentialSample eval_fields_unchecked(double r, double u, const MassContext& ctx);

// rU cos^2 u on r = 0 from the closed form; the value at u = pi/2 is the continuous limit.
double collision_manifold_rU_cos2u(double u, const MassContext& ctx);

// rU on r = 0 as a function of theta.
double collision_rU_theta_form(double theta, const MassContext& ctx);

double rU_theta_theta_origin(const MassContext& ctx);
// Richardson-extrapolated central second difference of collision_rU_theta_form at 0.
double rU_theta_theta_origin_fd(const MassContext& ctx);

// 2 rU + r^2 U_r + 2 r h, and its cos^2 u multiple which stays finite at u = pi/2.
double F(double r, double u, const MassContext& ctx, EnergyLevel energy);
double F_scaled(double r, double u, const MassContext& ctx, EnergyLevel energy);

struct AuxF {
  double f = 0, df = 0, d2f = 0;
};
// f(x) = 2 cot x - x / sin^2 x on (0, pi/5].
AuxF f_aux(double x);

// U in Jacobi coordinates for any configuration off the singular lines.
double potential_xy(double x1, double x2, const MassContext& ctx);

struct ContourPoint {
  double x1 = 0, x2 = 0;
};

struct ContourPolyline {
  Region region = Region::I;
  double h = 0;
  std::vector<ContourPoint> points;
  bool closed = false;
};

struct GridSpec {
  int n1 = 512;
  int n2 = 512;
};

inline constexpr double kContourTolerance = 1e-8;

std::vector<ContourPolyline> zero_velocity_curve(double h, Region region, GridSpec grid,
                                                 const MassContext& ctx);

// Largest U on a strip at distance `offset` from each mid-segment, staying
// `endpoint_margin` away from the collision-antipodal ends.
double max_potential_near_midsegments(const MassContext& ctx, double offset, double endpoint_margin,
                                      int samples);

}  // namespace schubart
