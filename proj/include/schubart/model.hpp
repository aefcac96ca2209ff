#pragma once

namespace schubart {

// Masses are (n, n, m) with n = (1 - m) / 2, so the total mass is 1.
struct MassContext {
  double m = 0;
  double n = 0;
  double alpha1 = 0.5;
  double alpha2 = 0.5;
  double mu1 = 0;
  double mu2 = 0;
  double A1 = 0;
  double A2 = 0;
  double theta_star = 0;
  double sin_theta_star = 0;
  double cos_theta_star = 0;
  double nu0 = 0;
  // a = cot(r_star * A1 / 2), the positive root of (4mn + n^2) a^2 - 2a - n^2 = 0.
  double a = 0;
  double r_star = 0;
  // r_star recomputed by bracketed root finding on U(r, 0) = 1.
  double r_star_root = 0;
};

struct EnergyLevel {
  double h = -1.0;
};

// arccot on (0, inf), range (0, pi/2).
double arccot(double a);

MassContext build_context(double m);

// Radius where the axis u = 0 meets U = -h, i.e. the Hill bound on the shooting segment.
// Equals r_star for h = -1.
double hill_radius(const MassContext& ctx, EnergyLevel energy);

// U on the symmetric axis u = 0 (x1 = r A1, x2 = 0).
double axis_potential(double r, const MassContext& ctx);

double estimate_polynomial(double m);

struct EstimateReport {
  double cot_value = 0;    // cot(r* A1 / 2)
  double half_angle = 0;   // r* A1 / 2
  double side_value = 0;   // r* A2 sin(2 theta*)
  double g_value = 0;      // g(m)
  bool cot_bound = false;
  bool half_angle_bound = false;
  bool side_bound = false;
  bool g_bound = false;
  bool all() const { return cot_bound && half_angle_bound && side_bound && g_bound; }
};

EstimateReport verify_estimates(const MassContext& ctx);

}  // namespace schubart
