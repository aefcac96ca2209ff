#pragma once

#include <Eigen/Dense>

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "schubart/dynamics.hpp"
#include "schubart/model.hpp"

namespace schubart {

enum class Face { GammaZero, NuZero, UZero, UHalfPi, RZero, RStar };
enum class ExitFace { B1, B2 };

std::string to_string(Face face);
std::string to_string(ExitFace face);

struct WazewskiMembership {
  bool inside = false;
  bool on_energy_manifold = false;
  std::vector<Face> faces;
  bool on_H = false;
  bool immediate_exit = false;
  std::optional<ExitFace> exit_face;
};

inline constexpr double kMembershipTol = 1e-10;
inline constexpr double kOnTargetTol = 1e-8;

WazewskiMembership membership(const RegularizedState& s, const MassContext& ctx, EnergyLevel energy,
                              double tol = kMembershipTol);

// Point of the shooting segment: (r0, 0, 0, gamma from energy).
RegularizedState shooting_start(double r0, const MassContext& ctx, EnergyLevel energy);

struct ExitRecord {
  RegularizedState exit_state;
  double exit_sigma = 0;
  double exit_t_phys = 0;
  ExitFace face = ExitFace::B2;
  bool on_T = false;
};

struct ExitOutcome {
  std::optional<ExitRecord> record;  // empty when the sigma budget ran out
  double sigma_reached = 0;
  Trajectory trajectory;
};

// Shooting-segment exit map.  Integrates from shooting_start(r0) until nu crosses 0
// upwards (B2) or u reaches pi/2 (B1).
ExitOutcome exit_map(double r0, const MassContext& ctx, EnergyLevel energy, const IntegratorConfig& cfg);

struct EquilibriumData {
  RegularizedState P;
  double rU_theta_theta = 0;
  double rU_theta_theta_fd = 0;
  Eigen::Matrix3d jacobian;     // analytic, coordinates (r, u, gamma)
  Eigen::Matrix3d jacobian_fd;  // central differences of the reduced field
  double max_entry_discrepancy = 0;
  std::array<double, 3> eigenvalues{};  // lambda1 (radial), lambda2 < 0 < lambda3
  std::array<Eigen::Vector3d, 3> eigenvectors;
  std::array<double, 3> eigenvalues_fd{};
};

// Reduced field at (r, u, gamma) with nu = -sqrt(2(rU + rh) - gamma^2 / cos^4 u); r may be negative.
Eigen::Vector3d reduced_field(const Eigen::Vector3d& x, const MassContext& ctx, EnergyLevel energy);

EquilibriumData linearize_P(const MassContext& ctx, EnergyLevel energy = {});

struct BranchResult {
  Trajectory trajectory;
  ExitRecord exit;
  double max_dnu_du = 0;
  double bound = 0;  // theta* nu0 / 2
  bool r_stayed_zero = true;
};

// Unstable branch of P inside r = 0, started eps along the unstable eigenvector.
BranchResult unstable_branch(const MassContext& ctx, EnergyLevel energy, double eps,
                             const IntegratorConfig& cfg = {});

struct FCurveEndpoints {
  double r_A = 0;    // F(r_A, 0) = 0
  double alpha = 0;  // F(r*, alpha) = 0
};

FCurveEndpoints locate_F_zero_endpoints(const MassContext& ctx, EnergyLevel energy);

}  // namespace schubart
