#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "schubart/model.hpp"

namespace schubart {

enum class ClaimStatus { Pass, Fail, Indeterminate };

std::string to_string(ClaimStatus status);

// Points per axis of the (r, u) rectangle [0, r*] x [0, pi/2] (Claim 1 uses [-pi/2, pi/2]).
struct ClaimGrid {
  int nr = 41;
  int nu = 41;
};

inline constexpr double kStrictMargin = 1e-10;
inline constexpr double kExactZero = 1e-12;

struct NamedValue {
  std::string name;
  double value = 0;
};

struct ClaimResult {
  int id = 0;
  ClaimStatus status = ClaimStatus::Indeterminate;
  // Smallest slack against the claim's tolerance; negative means violated.
  double worst_margin = 0;
  double worst_r = 0;
  double worst_u = 0;
  std::vector<NamedValue> constants;
  std::vector<std::pair<double, double>> curve;  // (r, u) points, Claim 6 only
  std::string detail;

  double constant(const std::string& name) const;
};

// Parity in theta of U and r^2 U_r, parity in r of all scaled fields, rU_theta = 0 on
// theta = 0, and the r^2 decay of -r^2 U_r - rU toward the collision manifold.
ClaimResult verify_claim1(const MassContext& ctx, ClaimGrid grid = {});

// rU_theta_theta(0, 0) > 0, analytic against finite differences.
ClaimResult verify_claim2(const MassContext& ctx);

// On r = 0 the maximum of 2 rU cos^2 u over u is at u = 0.
ClaimResult verify_claim3(const MassContext& ctx, ClaimGrid grid = {});

// 2 rU cos^2 u at u = pi/2 is positive and independent of r.
ClaimResult verify_claim4(const MassContext& ctx, ClaimGrid grid = {});

// rU_theta cos^4 u / sin u has a positive lower bound on [u0, pi/2] x [0, r*].
ClaimResult verify_claim5(const MassContext& ctx, double u0 = 0.05, ClaimGrid grid = {});

// F = 2rU + r^2 U_r - 2r has F_u > 0 off u = 0; the curve F = 0 runs from A on u = 0
// to B on r = r*.
ClaimResult verify_claim6(const MassContext& ctx, ClaimGrid grid = {});

struct ClaimReport {
  double m = 0;
  ClaimGrid grid;
  double u0 = 0.05;
  std::array<ClaimResult, 6> claims;
  bool all_pass = false;
};

ClaimReport verify_all_claims(const MassContext& ctx, ClaimGrid grid = {}, double u0 = 0.05);

// The side part of rU_theta, mn r^2 A2 (cos(t* - t) / sin^2[r A2 sin(t* - t)] - cos(t + t*) / sin^2[...]).
double side_term_g(double r, double theta, const MassContext& ctx);

// cos^2 t - cos^2 t* - (1 - cos^2 t*) cos^2 u cos t with sin u = t / t*.
double claim3_J(double theta_star, double theta);

}  // namespace schubart
