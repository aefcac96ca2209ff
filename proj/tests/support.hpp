#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "schubart/dynamics.hpp"

namespace schubart::testing {

struct OracleComparison {
  double max_error = 0;     // positions and velocities, max norm
  double min_distance = 0;  // smallest d_ij (or pi - d_ij) along the segment
  std::size_t points = 0;
  bool oracle_margin_violation = false;
};

// Maps the regularized samples to Jacobi variables at their physical times and compares
// them with the unregularized flow started from the first sample.
inline OracleComparison compare_with_oracle(const Trajectory& tr, const MassContext& ctx) {
  OracleComparison out;
  std::vector<double> times;
  std::vector<JacobiState> expected;
  out.min_distance = 10;
  for (const auto& s : tr.samples) {
    const auto js = regularized_to_jacobi(s.state, ctx);
    const auto d = distances(js, ctx);
    for (double v : {d.d12, d.d13, d.d23}) out.min_distance = std::min({out.min_distance, v, 3.141592653589793 - v});
    if (!times.empty() && s.t_phys <= times.back()) continue;
    times.push_back(s.t_phys - tr.samples.front().t_phys);
    expected.push_back(js);
  }
  const auto orc = oracle_flow(expected.front(), ctx, times.back(), times);
  out.oracle_margin_violation = orc.margin_violation;
  out.points = orc.states.size();
  for (std::size_t k = 0; k < orc.states.size(); ++k) {
    const auto& a = orc.states[k];
    const auto& b = expected[k];
    out.max_error = std::max({out.max_error, std::abs(a.x1 - b.x1), std::abs(a.x2 - b.x2), std::abs(a.u1 - b.u1),
                              std::abs(a.u2 - b.u2)});
  }
  if (out.points != times.size()) out.max_error = INFINITY;
  return out;
}

}  // namespace schubart::testing
