#include "crowdflow/contour.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace crowdflow {

namespace {

struct Segment {
  long a;  // edge ids of the two end points
  long b;
};

}  // namespace

std::vector<Polyline> extract_contour(const std::vector<double>& xs, const std::vector<double>& ys,
                                      const Eigen::MatrixXd& values, double level) {
  const long nx = static_cast<long>(xs.size());
  const long ny = static_cast<long>(ys.size());
  if (values.rows() != nx || values.cols() != ny)
    throw std::invalid_argument("contour grid and value matrix disagree");
  if (nx < 2 || ny < 2) return {};

  // Edge ids: horizontal (i,j)-(i+1,j) -> 2 (i + nx j); vertical
  // (i,j)-(i,j+1) -> 2 (i + nx j) + 1.
  const auto h_edge = [&](long i, long j) { return 2 * (i + nx * j); };
  const auto v_edge = [&](long i, long j) { return 2 * (i + nx * j) + 1; };
  std::map<long, Eigen::Vector2d> points;
  const auto crossing = [&](long id) -> long {
    if (points.count(id)) return id;
    const long base = id / 2;
    const long i = base % nx, j = base / nx;
    const bool vertical = id % 2 == 1;
    const long i1 = vertical ? i : i + 1, j1 = vertical ? j + 1 : j;
    const double f0 = values(i, j), f1 = values(i1, j1);
    const double t = f1 != f0 ? std::clamp((level - f0) / (f1 - f0), 0.0, 1.0) : 0.5;
    points[id] = {xs[i] + t * (xs[i1] - xs[i]), ys[j] + t * (ys[j1] - ys[j])};
    return id;
  };

  std::vector<Segment> segments;
  for (long j = 0; j + 1 < ny; ++j) {
    for (long i = 0; i + 1 < nx; ++i) {
      const double c0 = values(i, j), c1 = values(i + 1, j), c2 = values(i + 1, j + 1),
                   c3 = values(i, j + 1);
      if (!std::isfinite(c0) || !std::isfinite(c1) || !std::isfinite(c2) || !std::isfinite(c3))
        continue;
      const int mask = (c0 >= level) | (c1 >= level) << 1 | (c2 >= level) << 2 | (c3 >= level) << 3;
      if (mask == 0 || mask == 15) continue;
      // Edges: 0 bottom (c0-c1), 1 right (c1-c2), 2 top (c3-c2), 3 left (c0-c3).
      const std::array<long, 4> e{h_edge(i, j), v_edge(i + 1, j), h_edge(i, j + 1), v_edge(i, j)};
      const auto add = [&](int p, int q) { segments.push_back({crossing(e[p]), crossing(e[q])}); };
      if (mask == 5 || mask == 10) {
        const bool centre_in = 0.25 * (c0 + c1 + c2 + c3) >= level;
        // Cut off corners 1 and 3 when they are separated from the centre.
        if ((mask == 5) == centre_in) {
          add(0, 1);
          add(2, 3);
        } else {
          add(3, 0);
          add(1, 2);
        }
        continue;
      }
      std::array<int, 2> hit{};
      int n = 0;
      const std::array<std::array<int, 2>, 4> ends{{{0, 1}, {1, 2}, {3, 2}, {0, 3}}};
      for (int k = 0; k < 4; ++k)
        if (((mask >> ends[k][0]) & 1) != ((mask >> ends[k][1]) & 1)) hit[n++] = k;
      add(hit[0], hit[1]);
    }
  }

  // Chain segments through shared edge points.
  std::map<long, std::vector<std::size_t>> at;
  for (std::size_t s = 0; s < segments.size(); ++s) {
    at[segments[s].a].push_back(s);
    at[segments[s].b].push_back(s);
  }
  std::vector<char> used(segments.size(), 0);
  std::vector<Polyline> lines;
  const auto walk = [&](std::size_t s, long from, std::vector<long>& ids) {
    long cur = from;
    while (true) {
      used[s] = 1;
      const long next = segments[s].a == cur ? segments[s].b : segments[s].a;
      ids.push_back(next);
      cur = next;
      std::size_t follow = segments.size();
      for (std::size_t t : at[cur])
        if (!used[t]) follow = t;
      if (follow == segments.size()) break;
      s = follow;
    }
  };
  // Open chains start at points used by a single segment (the grid border).
  for (int pass = 0; pass < 2; ++pass) {
    for (std::size_t s = 0; s < segments.size(); ++s) {
      if (used[s]) continue;
      long start;
      if (pass == 0) {
        if (at[segments[s].a].size() == 1)
          start = segments[s].a;
        else if (at[segments[s].b].size() == 1)
          start = segments[s].b;
        else
          continue;
      } else {
        start = segments[s].a;
      }
      std::vector<long> ids{start};
      walk(s, start, ids);
      Polyline line;
      line.reserve(ids.size());
      for (long id : ids) line.push_back(points[id]);
      lines.push_back(std::move(line));
    }
  }
  return lines;
}

namespace {

double point_segment(const Eigen::Vector2d& p, const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  const Eigen::Vector2d d = b - a;
  const double len2 = d.squaredNorm();
  const double t = len2 > 0.0 ? std::clamp((p - a).dot(d) / len2, 0.0, 1.0) : 0.0;
  return (a + t * d - p).norm();
}

double directed(const std::vector<Polyline>& from, const std::vector<Polyline>& to,
                double resolution) {
  double worst = 0.0;
  for (const auto& line : from) {
    for (std::size_t k = 0; k < line.size(); ++k) {
      if (k + 1 == line.size()) {
        worst = std::max(worst, distance_to_polylines(line[k], to));
        break;
      }
      const double len = (line[k + 1] - line[k]).norm();
      const int n = std::max(1, static_cast<int>(std::ceil(len / resolution)));
      for (int m = 0; m < n; ++m)
        worst = std::max(worst, distance_to_polylines(
                                    line[k] + (line[k + 1] - line[k]) * (double(m) / n), to));
    }
  }
  return worst;
}

}  // namespace

double distance_to_polylines(const Eigen::Vector2d& p, const std::vector<Polyline>& lines) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& line : lines) {
    if (line.size() == 1) best = std::min(best, (line[0] - p).norm());
    for (std::size_t k = 0; k + 1 < line.size(); ++k)
      best = std::min(best, point_segment(p, line[k], line[k + 1]));
  }
  return best;
}

double hausdorff_distance(const std::vector<Polyline>& a, const std::vector<Polyline>& b,
                          double resolution) {
  if (!(resolution > 0.0)) throw std::invalid_argument("resolution must be positive");
  if (a.empty() && b.empty()) return 0.0;
  if (a.empty() || b.empty()) return std::numeric_limits<double>::infinity();
  return std::max(directed(a, b, resolution), directed(b, a, resolution));
}

}  // namespace crowdflow
