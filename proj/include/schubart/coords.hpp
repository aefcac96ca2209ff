#pragma once

#include <string>
#include <variant>

#include "schubart/model.hpp"

namespace schubart {

struct AngularConfig {
  double phi1 = 0, phi2 = 0, phi3 = 0;
  double v1 = 0, v2 = 0, v3 = 0;
};

struct JacobiState {
  double x1 = 0, x2 = 0;
  double u1 = 0, u2 = 0;
};

struct PolarState {
  double r = 0, theta = 0;
  double nu = 0, tau = 0;
};

struct RegularizedState {
  double r = 0, nu = 0, u = 0, gamma = 0;
};

struct Distances {
  double d12 = 0, d13 = 0, d23 = 0;
};

enum class Region { I, II, III, IV };

enum class BoundaryKind {
  DoubleCollisionSide,
  AntipodalMidSegment,
  TotalCollisionVertex,
  CollisionAntipodalPoint,
};

using RegionLabel = std::variant<Region, BoundaryKind>;

std::string to_string(Region region);
std::string to_string(BoundaryKind kind);
std::string to_string(const RegionLabel& label);
Region parse_region(const std::string& text);

// Sorts the bodies into the anticlockwise order phi1 <= phi3 <= phi2 <= phi1 + 2 pi
// before forming x1 = phi2 - phi1 and x2 = phi3 - alpha1 phi1 - alpha2 phi2.
JacobiState angles_to_jacobi(const AngularConfig& cfg, const MassContext& ctx);

// Centre-of-mass representative: sum m_i phi_i = 0.
AngularConfig jacobi_to_angles(const JacobiState& js, const MassContext& ctx);

Distances distances(const JacobiState& js, const MassContext& ctx);

RegionLabel classify_region(const JacobiState& js, const MassContext& ctx);

PolarState jacobi_to_polar(const JacobiState& js, const MassContext& ctx);
JacobiState polar_to_jacobi(const PolarState& ps, const MassContext& ctx);

// u = k pi + (-1)^k asin(theta / theta*) on branch k.
RegularizedState polar_to_regularized(const PolarState& ps, const MassContext& ctx, int branch = 0);
PolarState regularized_to_polar(const RegularizedState& rs, const MassContext& ctx);
int branch_of(double u);

// Shape point of a regularized state, without velocities.
JacobiState regularized_configuration(double r, double u, const MassContext& ctx);

// Twice the kinetic energy.
double kinetic2_angles(const AngularConfig& cfg, const MassContext& ctx);
double kinetic2_jacobi(const JacobiState& js, const MassContext& ctx);
double angular_momentum(const AngularConfig& cfg, const MassContext& ctx);

}  // namespace schubart
