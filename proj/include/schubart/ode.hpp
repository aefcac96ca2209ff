#pragma once

// Dormand-Prince 5(4) with PI step control, 4th-order dense output and event
// location by root finding on re-taken steps.

#include <boost/math/tools/toms748_solve.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace schubart::ode {

template <std::size_t N>
using Vec = std::array<double, N>;

struct Options {
  double rel_tol = 1e-12;
  double abs_tol = 1e-12;
  double initial_step = 1e-4;
  double max_step = 0.05;
  double min_step = 1e-14;
  std::size_t max_steps = 5'000'000;
  bool record_steps = true;
};

template <std::size_t N>
struct Event {
  std::function<double(double, const Vec<N>&)> g;
  int direction = 0;  // +1 upward crossings only, -1 downward, 0 both
  bool terminal = true;
};

template <std::size_t N>
struct EventHit {
  std::size_t index = 0;
  double t = 0;
  Vec<N> y{};
};

enum class Status { Completed, EventReached, StepFailure, StepBudget };

template <std::size_t N>
struct Result {
  Status status = Status::Completed;
  std::vector<double> t;
  std::vector<Vec<N>> y;
  std::vector<double> out_t;
  std::vector<Vec<N>> out_y;
  std::vector<EventHit<N>> hits;
  double t_final = 0;
  Vec<N> y_final{};
  std::size_t accepted = 0;
  std::size_t rejected = 0;
};

namespace dp {
inline constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
inline constexpr double a21 = 1.0 / 5;
inline constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
inline constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
inline constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
inline constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                        a65 = -5103.0 / 18656;
inline constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                        a76 = 11.0 / 84;
inline constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                        e6 = 22.0 / 525, e7 = -1.0 / 40;
inline constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                        d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                        d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;
}  // namespace dp

template <std::size_t N>
struct Step {
  Vec<N> y1{};
  Vec<N> k7{};
  Vec<N> err{};
  std::array<Vec<N>, 7> k{};
  bool finite = true;
};

// One Dormand-Prince step from (t, y) with slope k1 = f(t, y).
template <std::size_t N, class Rhs>
Step<N> dp_step(Rhs& f, double t, const Vec<N>& y, const Vec<N>& k1, double h) {
  using namespace dp;
  Step<N> s;
  auto& k = s.k;
  k[0] = k1;
  Vec<N> z;
  auto stage = [&](auto&& combine) {
    for (std::size_t i = 0; i < N; ++i) z[i] = y[i] + h * combine(i);
  };
  stage([&](std::size_t i) { return a21 * k[0][i]; });
  k[1] = f(t + c2 * h, z);
  stage([&](std::size_t i) { return a31 * k[0][i] + a32 * k[1][i]; });
  k[2] = f(t + c3 * h, z);
  stage([&](std::size_t i) { return a41 * k[0][i] + a42 * k[1][i] + a43 * k[2][i]; });
  k[3] = f(t + c4 * h, z);
  stage([&](std::size_t i) { return a51 * k[0][i] + a52 * k[1][i] + a53 * k[2][i] + a54 * k[3][i]; });
  k[4] = f(t + c5 * h, z);
  stage([&](std::size_t i) {
    return a61 * k[0][i] + a62 * k[1][i] + a63 * k[2][i] + a64 * k[3][i] + a65 * k[4][i];
  });
  k[5] = f(t + h, z);
  stage([&](std::size_t i) {
    return a71 * k[0][i] + a73 * k[2][i] + a74 * k[3][i] + a75 * k[4][i] + a76 * k[5][i];
  });
  s.y1 = z;
  k[6] = f(t + h, s.y1);
  s.k7 = k[6];
  for (std::size_t i = 0; i < N; ++i) {
    s.err[i] = h * (e1 * k[0][i] + e3 * k[2][i] + e4 * k[3][i] + e5 * k[4][i] + e6 * k[5][i] + e7 * k[6][i]);
    if (!std::isfinite(s.y1[i]) || !std::isfinite(s.err[i])) s.finite = false;
  }
  return s;
}

template <std::size_t N>
struct Dense {
  double t0 = 0, h = 0;
  std::array<Vec<N>, 5> rc{};

  Vec<N> operator()(double t) const {
    const double th = (t - t0) / h, th1 = 1.0 - th;
    Vec<N> out;
    for (std::size_t i = 0; i < N; ++i)
      out[i] = rc[0][i] + th * (rc[1][i] + th1 * (rc[2][i] + th * (rc[3][i] + th1 * rc[4][i])));
    return out;
  }
};

template <std::size_t N>
Dense<N> make_dense(double t0, double h, const Vec<N>& y0, const Step<N>& s) {
  using namespace dp;
  Dense<N> d;
  d.t0 = t0;
  d.h = h;
  const auto& k = s.k;
  for (std::size_t i = 0; i < N; ++i) {
    const double ydiff = s.y1[i] - y0[i];
    const double bspl = h * k[0][i] - ydiff;
    d.rc[0][i] = y0[i];
    d.rc[1][i] = ydiff;
    d.rc[2][i] = bspl;
    d.rc[3][i] = ydiff - h * k[6][i] - bspl;
    d.rc[4][i] = h * (d1 * k[0][i] + d3 * k[2][i] + d4 * k[3][i] + d5 * k[4][i] + d6 * k[5][i] + d7 * k[6][i]);
  }
  return d;
}

// Integrates y' = f(t, y) forward from t0 to t_end.
//   after_step(t, y) may modify the accepted state (projection) and returns true if it did.
//   Events are located to the precision of t by root finding on a fresh step from the
//   start of the step that bracketed the sign change.
template <std::size_t N, class Rhs, class AfterStep>
Result<N> integrate(Rhs&& f, double t0, Vec<N> y0, double t_end, const Options& opt,
                    std::span<const Event<N>> events, std::span<const double> output_times,
                    AfterStep&& after_step) {
  Result<N> res;
  double t = t0;
  Vec<N> y = y0;
  Vec<N> k1 = f(t, y);
  if (opt.record_steps) {
    res.t.push_back(t);
    res.y.push_back(y);
  }
  std::vector<double> gprev(events.size());
  for (std::size_t e = 0; e < events.size(); ++e) gprev[e] = events[e].g(t, y);
  std::size_t next_out = 0;
  while (next_out < output_times.size() && output_times[next_out] <= t) {
    if (output_times[next_out] == t) {
      res.out_t.push_back(t);
      res.out_y.push_back(y);
    }
    ++next_out;
  }

  constexpr double beta = 0.04, expo1 = 0.2 - beta * 0.75, safe = 0.9;
  constexpr double facc1 = 0.2, facc2 = 10.0;
  double facold = 1e-4;
  double h = std::min(opt.initial_step, opt.max_step);
  bool last_rejected = false;

  auto finish = [&](Status st) {
    res.status = st;
    res.t_final = t;
    res.y_final = y;
    return res;
  };

  while (true) {
    if (t >= t_end) return finish(Status::Completed);
    if (res.accepted >= opt.max_steps) return finish(Status::StepBudget);
    bool hits_end = false;
    if (t + h >= t_end) {
      h = t_end - t;
      hits_end = true;
    }
    if (h < opt.min_step * std::max(1.0, std::abs(t)) || !(t + h > t)) return finish(Status::StepFailure);

    Step<N> s = dp_step<N>(f, t, y, k1, h);
    double err = 0;
    if (s.finite) {
      for (std::size_t i = 0; i < N; ++i) {
        const double sk = opt.abs_tol + opt.rel_tol * std::max(std::abs(y[i]), std::abs(s.y1[i]));
        const double q = s.err[i] / sk;
        err += q * q;
      }
      err = std::sqrt(err / N);
    }
    if (!s.finite || !std::isfinite(err)) {
      h *= 0.25;
      hits_end = false;
      ++res.rejected;
      last_rejected = true;
      continue;
    }
    const double fac11 = std::pow(err, expo1);
    if (err > 1.0) {
      h /= std::min(1.0 / facc1, fac11 / safe);
      ++res.rejected;
      last_rejected = true;
      continue;
    }

    // Accepted.
    double fac = fac11 / std::pow(facold, beta);
    fac = std::max(1.0 / facc2, std::min(1.0 / facc1, fac / safe));
    facold = std::max(err, 1e-4);
    double hnew = std::min(h / fac, opt.max_step);
    if (last_rejected) hnew = std::min(hnew, h);
    last_rejected = false;

    const double t1 = hits_end ? t_end : t + h;
    const Dense<N> dense = make_dense<N>(t, h, y, s);

    // Earliest event in (t, t1].
    std::vector<EventHit<N>> found;
    for (std::size_t e = 0; e < events.size(); ++e) {
      const double g0 = gprev[e];
      const double g1 = events[e].g(t1, s.y1);
      const int dir = events[e].direction;
      const bool up = g0 < 0 && g1 >= 0, down = g0 > 0 && g1 <= 0;
      if (!((dir >= 0 && up) || (dir <= 0 && down))) continue;
      auto restep = [&](double tau) {
        if (tau <= t) return y;
        if (tau >= t1) return s.y1;
        return dp_step<N>(f, t, y, k1, tau - t).y1;
      };
      auto gfun = [&](double tau) { return events[e].g(tau, restep(tau)); };
      double te = t1;
      if (g1 != 0.0) {
        std::uintmax_t iters = 200;
        auto tol = [](double a, double b) { return std::abs(b - a) <= 4e-16 * std::max(1.0, std::abs(a)); };
        auto [lo, hi] = boost::math::tools::toms748_solve(gfun, t, t1, g0, g1, tol, iters);
        te = std::abs(gfun(lo)) < std::abs(gfun(hi)) ? lo : hi;
        if (te <= t) te = hi;
      }
      found.push_back({e, te, restep(te)});
    }
    std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) { return a.t < b.t; });
    const EventHit<N>* terminal = nullptr;
    for (const auto& hit : found) {
      res.hits.push_back(hit);
      if (events[hit.index].terminal) {
        terminal = &res.hits.back();
        break;
      }
    }

    const double t_stop = terminal ? terminal->t : t1;
    while (next_out < output_times.size() && output_times[next_out] <= t_stop) {
      res.out_t.push_back(output_times[next_out]);
      res.out_y.push_back(output_times[next_out] == t1 ? s.y1 : dense(output_times[next_out]));
      ++next_out;
    }

    if (terminal) {
      t = terminal->t;
      y = terminal->y;
      after_step(t, y);
      res.hits.back().y = y;
      ++res.accepted;
      if (opt.record_steps) {
        res.t.push_back(t);
        res.y.push_back(y);
      }
      return finish(Status::EventReached);
    }

    t = t1;
    y = s.y1;
    if (after_step(t, y)) {
      k1 = f(t, y);
    } else {
      k1 = s.k7;
    }
    ++res.accepted;
    if (opt.record_steps) {
      res.t.push_back(t);
      res.y.push_back(y);
    }
    for (std::size_t e = 0; e < events.size(); ++e) gprev[e] = events[e].g(t, y);
    h = hnew;
  }
}

template <std::size_t N, class Rhs>
Result<N> integrate(Rhs&& f, double t0, Vec<N> y0, double t_end, const Options& opt,
                    std::span<const Event<N>> events = {}, std::span<const double> output_times = {}) {
  return integrate<N>(std::forward<Rhs>(f), t0, y0, t_end, opt, events, output_times,
                      [](double, Vec<N>&) { return false; });
}

}  // namespace schubart::ode
