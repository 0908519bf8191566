#include "tcurv/polygon.hpp"

#include <algorithm>
#include <limits>
#include <cmath>

namespace tcurv {

using Eigen::Vector2d;

namespace {

double cross2(const Vector2d& a, const Vector2d& b) { return a.x() * b.y() - a.y() * b.x(); }

double diameter_sq(const std::vector<Vector2d>& pts) {
  double lo_x = pts[0].x(), hi_x = lo_x, lo_y = pts[0].y(), hi_y = lo_y;
  for (const auto& p : pts) {
    lo_x = std::min(lo_x, p.x());
    hi_x = std::max(hi_x, p.x());
    lo_y = std::min(lo_y, p.y());
    hi_y = std::max(hi_y, p.y());
  }
  const double dx = hi_x - lo_x, dy = hi_y - lo_y;
  return dx * dx + dy * dy;
}

// All points within tol of the hull boundary; points are assumed inside the
// hull, so line distances agree with segment distances.
bool all_on_hull_boundary(const std::vector<Vector2d>& pts, const std::vector<int>& hull,
                          double tol) {
  const int h = static_cast<int>(hull.size());
  for (const auto& p : pts) {
    double dist = std::numeric_limits<double>::infinity();
    for (int k = 0; k < h; ++k) {
      const Vector2d A = pts[hull[k]];
      const Vector2d d = pts[hull[(k + 1) % h]] - A;
      const double len = d.norm();
      if (len < 1e-14) continue;
      dist = std::min(dist, std::abs(cross2(d, p - A)) / len);
    }
    if (dist > tol) return false;
  }
  return true;
}

}  // namespace

double signed_area(const std::vector<Vector2d>& cycle) {
  double a = 0.0;
  const int n = static_cast<int>(cycle.size());
  for (int i = 0; i < n; ++i) a += cross2(cycle[i], cycle[(i + 1) % n]);
  return a / 2.0;
}

bool is_convex_cycle(const std::vector<Vector2d>& cycle, double tol) {
  const int n = static_cast<int>(cycle.size());
  if (n < 3) return false;
  std::vector<Vector2d> edges;
  edges.reserve(n);
  for (int i = 0; i < n; ++i) {
    const Vector2d e = cycle[(i + 1) % n] - cycle[i];
    if (e.norm() > 1e-14) edges.push_back(e);
  }
  if (edges.size() < 3) return false;
  // Either orientation counts: all turns share a sign and total +-2 pi.
  double total = 0.0, min_turn = M_PI, max_turn = -M_PI;
  for (size_t i = 0; i < edges.size(); ++i) {
    const Vector2d &a = edges[i], &b = edges[(i + 1) % edges.size()];
    const double turn = std::atan2(cross2(a, b), a.dot(b));
    min_turn = std::min(min_turn, turn);
    max_turn = std::max(max_turn, turn);
    total += turn;
  }
  if (min_turn < -tol && max_turn > tol) return false;
  return std::abs(std::abs(total) - 2.0 * M_PI) <= 1e-6;
}

std::vector<int> convex_hull_indices(const std::vector<Vector2d>& pts) {
  const int n = static_cast<int>(pts.size());
  std::vector<int> idx(n);
  for (int i = 0; i < n; ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](int a, int b) {
    if (pts[a].x() != pts[b].x()) return pts[a].x() < pts[b].x();
    return pts[a].y() < pts[b].y();
  });
  const double eps = 1e-12 * std::max(1e-30, diameter_sq(pts));
  auto build = [&](auto begin, auto end) {
    std::vector<int> out;
    for (auto it = begin; it != end; ++it) {
      while (out.size() >= 2 &&
             cross2(pts[out[out.size() - 1]] - pts[out[out.size() - 2]],
                    pts[*it] - pts[out[out.size() - 2]]) <= eps)
        out.pop_back();
      out.push_back(*it);
    }
    return out;
  };
  std::vector<int> lower = build(idx.begin(), idx.end());
  std::vector<int> upper = build(idx.rbegin(), idx.rend());
  lower.pop_back();
  upper.pop_back();
  lower.insert(lower.end(), upper.begin(), upper.end());
  return lower;
}

int convexify_by_flips(std::vector<Vector2d>& cycle, int max_flips) {
  const int n = static_cast<int>(cycle.size());
  if (n < 3) return 0;
  int flips = 0;
  while (!is_convex_cycle(cycle)) {
    if (flips >= max_flips) return -1;
    const std::vector<int> hull = convex_hull_indices(cycle);
    const int h = static_cast<int>(hull.size());
    std::vector<int> hpos(n, -1);
    for (int k = 0; k < h; ++k) hpos[hull[k]] = k;
    const double diam = std::sqrt(diameter_sq(cycle));
    // A pocket is a maximal run of non-extreme vertices whose bracketing
    // extreme vertices are adjacent on the hull.  Its lid is then a hull
    // edge: a supporting line of the whole vertex set, so reflecting the run
    // cannot shrink any chord, and the hull area strictly grows.  Flip the
    // deepest pocket.
    const double min_dev = 1e-14 * diam;
    int best_start = -1, best_end = -1;
    double best_dev = min_dev;
    for (int i = 0; i < n; ++i) {
      if (hpos[i] < 0 || hpos[(i + 1) % n] >= 0) continue;
      int end = (i + 1) % n;
      while (hpos[end] < 0) end = (end + 1) % n;
      const int pa = hpos[i], pb = hpos[end];
      if ((pa + 1) % h != pb && (pb + 1) % h != pa) continue;
      const Vector2d A = cycle[i];
      const Vector2d d = cycle[end] - A;
      const double dd = d.squaredNorm();
      if (dd < 1e-28) continue;
      const double inv_len = 1.0 / std::sqrt(dd);
      double dev = 0.0;
      for (int k = (i + 1) % n; k != end; k = (k + 1) % n)
        dev = std::max(dev, std::abs(cross2(d, cycle[k] - A)) * inv_len);
      if (dev > best_dev) {
        best_dev = dev;
        best_start = i;
        best_end = end;
      }
    }
    if (best_start < 0) {
      // No pocket deviates from its lid.  Either the remaining non-extreme
      // vertices all sit on the hull boundary (a convex cycle with collinear
      // runs, possibly zero area) or the traversal order disagrees with the
      // hull order and flips cannot help.
      return all_on_hull_boundary(cycle, hull, 1e-12 * diam) ? flips : -1;
    }
    const Vector2d A = cycle[best_start];
    const Vector2d d = cycle[best_end] - A;
    const double dd = d.squaredNorm();
    for (int i = (best_start + 1) % n; i != best_end; i = (i + 1) % n) {
      const Vector2d w = cycle[i] - A;
      const Vector2d proj = A + d * (w.dot(d) / dd);
      cycle[i] = 2.0 * proj - cycle[i];
    }
    ++flips;
  }
  return flips;
}

}  // namespace tcurv
