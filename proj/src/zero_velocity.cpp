#include <boost/math/tools/toms748_solve.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numbers>

#include "schubart/error.hpp"
#include "schubart/potential.hpp"

namespace schubart {

namespace {

constexpr double kPi = std::numbers::pi;

struct Triangle {
  ContourPoint v0, v1, v2;
};

// Each sub-triangle is parameterized by (a, b) in the unit square with the edge a = 0
// collapsed onto v0.  Every side of the triangle is then a side of the square, so the
// grid reaches all the way to the singular lines.
Triangle region_triangle(Region region, const MassContext& ctx) {
  const ContourPoint O{0, 0};
  const ContourPoint C1{2 * kPi, 2 * kPi * ctx.alpha1};
  const ContourPoint C2{2 * kPi, -2 * kPi * ctx.alpha2};
  const ContourPoint Mq{kPi, kPi * ctx.alpha1};
  const ContourPoint Ms{kPi, -kPi * ctx.alpha2};
  const ContourPoint Mp{2 * kPi, kPi * (ctx.alpha1 - ctx.alpha2)};
  switch (region) {
    case Region::I: return {O, Mq, Ms};
    case Region::II: return {Mp, Mq, Ms};
    case Region::III: return {C1, Mq, Mp};
    case Region::IV: return {C2, Ms, Mp};
  }
  return {O, Mq, Ms};
}

ContourPoint map_point(const Triangle& t, double a, double b) {
  const double ex = (1 - b) * t.v1.x1 + b * t.v2.x1 - t.v0.x1;
  const double ey = (1 - b) * t.v1.x2 + b * t.v2.x2 - t.v0.x2;
  return {t.v0.x1 + a * ex, t.v0.x2 + a * ey};
}

double level(double x1, double x2, double h, const MassContext& ctx) {
  try {
    return potential_xy(x1, x2, ctx) + h;
  } catch (const Error&) {
    return std::numeric_limits<double>::quiet_NaN();
  }
}

struct Segment {
  long e0, e1;
};

}  // namespace

std::vector<ContourPolyline> zero_velocity_curve(double h, Region region, GridSpec grid,
                                                 const MassContext& ctx) {
  if (grid.n1 < 2 || grid.n2 < 2) throw Error(ErrorKind::InvalidArgument, "grid needs at least 2x2 nodes");
  const Triangle tri = region_triangle(region, ctx);
  const int na = grid.n1, nb = grid.n2;
  const double margin = 1e-9;
  auto acoord = [&](int i) { return margin + (1 - 2 * margin) * i / double(na - 1); };
  auto bcoord = [&](int j) { return margin + (1 - 2 * margin) * j / double(nb - 1); };

  std::vector<double> f(static_cast<std::size_t>(na) * nb);
  auto at = [&](int i, int j) -> double& { return f[static_cast<std::size_t>(j) * na + i]; };
  for (int j = 0; j < nb; ++j)
    for (int i = 0; i < na; ++i) {
      const auto p = map_point(tri, acoord(i), bcoord(j));
      at(i, j) = level(p.x1, p.x2, h, ctx);
    }

  // Edge ids: 2 * node for the edge towards +a, 2 * node + 1 towards +b.
  auto hedge = [&](int i, int j) { return 2L * (static_cast<long>(j) * na + i); };
  auto vedge = [&](int i, int j) { return 2L * (static_cast<long>(j) * na + i) + 1; };

  std::map<long, ContourPoint> crossing;
  auto locate = [&](long id) {
    if (crossing.count(id)) return;
    const long node = id / 2;
    const int i = static_cast<int>(node % na), j = static_cast<int>(node / na);
    const bool horizontal = (id % 2) == 0;
    const double a0 = acoord(i), b0 = bcoord(j);
    const double a1 = horizontal ? acoord(i + 1) : a0;
    const double b1 = horizontal ? b0 : bcoord(j + 1);
    auto g = [&](double t) {
      const auto p = map_point(tri, a0 + t * (a1 - a0), b0 + t * (b1 - b0));
      return level(p.x1, p.x2, h, ctx);
    };
    double ga = g(0.0), gb = g(1.0);
    double t = 0.0;
    if (ga == 0.0) {
      t = 0.0;
    } else if (gb == 0.0) {
      t = 1.0;
    } else {
      std::uintmax_t iters = 100;
      auto tol = [](double x, double y) { return std::abs(y - x) <= 1e-16; };
      auto [lo, hi] = boost::math::tools::toms748_solve(g, 0.0, 1.0, ga, gb, tol, iters);
      t = std::abs(g(lo)) <= std::abs(g(hi)) ? lo : hi;
    }
    crossing[id] = map_point(tri, a0 + t * (a1 - a0), b0 + t * (b1 - b0));
  };

  std::vector<Segment> segments;
  for (int j = 0; j + 1 < nb; ++j) {
    for (int i = 0; i + 1 < na; ++i) {
      const double f00 = at(i, j), f10 = at(i + 1, j), f11 = at(i + 1, j + 1), f01 = at(i, j + 1);
      if (!std::isfinite(f00) || !std::isfinite(f10) || !std::isfinite(f11) || !std::isfinite(f01)) continue;
      const int code = (f00 > 0) | ((f10 > 0) << 1) | ((f11 > 0) << 2) | ((f01 > 0) << 3);
      if (code == 0 || code == 15) continue;
      // Cell edges in counterclockwise order: bottom, right, top, left.
      const std::array<long, 4> e{hedge(i, j), vedge(i + 1, j), hedge(i, j + 1), vedge(i, j)};
      const std::array<double, 4> corner{f00, f10, f11, f01};
      std::vector<long> cut;
      for (int k = 0; k < 4; ++k) {
        const double fa = corner[k], fb = corner[(k + 1) % 4];
        if ((fa > 0) != (fb > 0)) cut.push_back(e[k]);
      }
      for (long id : cut) locate(id);
      if (cut.size() == 2) {
        segments.push_back({cut[0], cut[1]});
      } else if (cut.size() == 4) {
        // Saddle: the centre value decides which corners are joined.
        const double centre = 0.25 * (f00 + f10 + f11 + f01);
        const bool centre_pos = centre > 0;
        if (centre_pos == (f00 > 0)) {
          segments.push_back({cut[0], cut[1]});
          segments.push_back({cut[2], cut[3]});
        } else {
          segments.push_back({cut[3], cut[0]});
          segments.push_back({cut[1], cut[2]});
        }
      }
    }
  }

  std::map<long, std::vector<std::size_t>> incident;
  for (std::size_t k = 0; k < segments.size(); ++k) {
    incident[segments[k].e0].push_back(k);
    incident[segments[k].e1].push_back(k);
  }
  std::vector<bool> used(segments.size(), false);

  auto walk = [&](long start) {
    ContourPolyline line;
    line.region = region;
    line.h = h;
    long cur = start;
    line.points.push_back(crossing[cur]);
    while (true) {
      std::size_t next = segments.size();
      for (std::size_t k : incident[cur])
        if (!used[k]) {
          next = k;
          break;
        }
      if (next == segments.size()) break;
      used[next] = true;
      cur = segments[next].e0 == cur ? segments[next].e1 : segments[next].e0;
      const auto& p = crossing[cur];
      const auto& q = line.points.back();
      if (p.x1 != q.x1 || p.x2 != q.x2) line.points.push_back(p);
      if (cur == start) {
        line.closed = true;
        break;
      }
    }
    return line;
  };

  std::vector<ContourPolyline> out;
  // Open chains start at edges with a single incident segment, then closed loops.
  for (const auto& [id, list] : incident)
    if (list.size() == 1 && !used[list[0]]) {
      auto line = walk(id);
      if (line.points.size() >= 2) out.push_back(std::move(line));
    }
  for (const auto& [id, list] : incident)
    for (std::size_t k : list)
      if (!used[k]) {
        auto line = walk(id);
        if (line.points.size() >= 2) out.push_back(std::move(line));
      }
  return out;
}

double max_potential_near_midsegments(const MassContext& ctx, double offset, double endpoint_margin,
                                      int samples) {
  const ContourPoint Mq{kPi, kPi * ctx.alpha1};
  const ContourPoint Ms{kPi, -kPi * ctx.alpha2};
  const ContourPoint Mp{2 * kPi, kPi * (ctx.alpha1 - ctx.alpha2)};
  const std::array<std::pair<ContourPoint, ContourPoint>, 3> mids{{{Mq, Ms}, {Mq, Mp}, {Ms, Mp}}};
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& [a, b] : mids) {
    const double dx = b.x1 - a.x1, dy = b.x2 - a.x2;
    const double len = std::hypot(dx, dy);
    const double nx = -dy / len, ny = dx / len;
    for (int k = 0; k < samples; ++k) {
      const double t = endpoint_margin + (1 - 2 * endpoint_margin) * k / double(samples - 1);
      for (double d : {offset, 0.5 * offset, 0.1 * offset, -0.1 * offset, -0.5 * offset, -offset}) {
        const double x1 = a.x1 + t * dx + d * nx;
        const double x2 = a.x2 + t * dy + d * ny;
        worst = std::max(worst, potential_xy(x1, x2, ctx));
      }
    }
  }
  return worst;
}

}  // namespace schubart
