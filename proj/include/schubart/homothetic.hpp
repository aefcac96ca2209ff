#pragma once

#include <optional>
#include <string>
#include <vector>

namespace schubart {

// Isosceles slice x2 = 0 with masses ((1-m)/2, (1-m)/2, m).
struct IsoscelesState {
  double x1 = 0;
  double p1 = 0;  // mu1 * dx1/dt
};

double iso_mu1(double m);
double iso_prefactor(double m);  // (1 - m)^2 / 4

// Unscaled profile: cot x1 + 4m/(1-m) cot(x1/2) on (0, pi), -cot x1 + ... on (pi, 2 pi).
double iso_profile(double x1, double m);
// (1/2) tan(x1/2) + (9m-1)/(2(1-m)) cot(x1/2), valid on (pi, 2 pi).
double iso_profile_tan_form(double x1, double m);
// Physical potential: prefactor times the profile.
double iso_potential(double x1, double m);
double iso_energy(const IsoscelesState& s, double m);

enum class MassRegime { Below, Critical, Above };

enum class MotionClass {
  CollisionAntipodalInfiniteVelocity,
  CollisionAntipodalFiniteVelocity,
  Periodic,
  Equilibrium,
  Forbidden,
};

struct TrichotomyReport {
  double m = 0;
  double h = 0;
  MassRegime regime = MassRegime::Below;
  std::optional<double> x1_eq;
  std::optional<double> h0;
  MotionClass motion = MotionClass::Forbidden;
};

std::string to_string(MassRegime regime);
std::string to_string(MotionClass motion);

TrichotomyReport classify_trichotomy(double m, double h);

enum class IsoDiagnosis { TripleCollision, CollisionAntipodal, Periodic, Equilibrium, DurationElapsed };
std::string to_string(IsoDiagnosis d);

struct IsoTrajectory {
  std::vector<double> t;
  std::vector<IsoscelesState> states;
  std::vector<double> turning_times;
  IsoDiagnosis diagnosis = IsoDiagnosis::DurationElapsed;
  bool velocity_blowup = false;
  double energy = 0;
  double max_energy_drift = 0;  // |E - E0| / max(1, kinetic energy)
  double max_excursion = 0;  // max |x1(t) - x1(0)|
  double t_final = 0;
  IsoscelesState final;
};

inline constexpr double kBlowupMomentum = 1e6;

// Every accepted step is returned.
IsoTrajectory integrate_iso(const IsoscelesState& s0, double m, double duration);

}  // namespace schubart
