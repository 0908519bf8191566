#include "tcurv/hull.hpp"

#include <algorithm>
#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <sstream>
#include <vector>

#include "tcurv/errors.hpp"
#include "tcurv/parallel.hpp"
#include "tcurv/surface.hpp"

namespace tcurv {

using Eigen::Matrix3d;
using Eigen::MatrixXd;
using Eigen::Vector3d;
using Eigen::VectorXd;

namespace {

// ---------------------------------------------------------------------------
// Orientation predicate.  orient(a, b, c, p) is the sign of
// (b-a) x (c-a) . (p-a): positive iff p lies on the outward side of the
// counterclockwise triangle (a, b, c).  A floating evaluation with a forward
// error bound decides the generic case; near-zero determinants are
// recomputed in exact rational arithmetic (doubles are dyadic rationals, so
// the fallback sign is exact).

using Rational = boost::multiprecision::cpp_rational;

int orient_exact(const Vector3d& a, const Vector3d& b, const Vector3d& c, const Vector3d& p) {
  Rational ux = Rational(b.x()) - Rational(a.x());
  Rational uy = Rational(b.y()) - Rational(a.y());
  Rational uz = Rational(b.z()) - Rational(a.z());
  Rational vx = Rational(c.x()) - Rational(a.x());
  Rational vy = Rational(c.y()) - Rational(a.y());
  Rational vz = Rational(c.z()) - Rational(a.z());
  Rational wx = Rational(p.x()) - Rational(a.x());
  Rational wy = Rational(p.y()) - Rational(a.y());
  Rational wz = Rational(p.z()) - Rational(a.z());
  Rational det = wx * (uy * vz - uz * vy) + wy * (uz * vx - ux * vz) + wz * (ux * vy - uy * vx);
  if (det > 0) return 1;
  if (det < 0) return -1;
  return 0;
}

// Error constant for the 3x3 difference determinant (covers the rounding of
// the nine differences and the products that follow).
constexpr double kOrientFilter = 7.7715611723761027e-16;

int orient(const Vector3d& a, const Vector3d& b, const Vector3d& c, const Vector3d& p) {
  const double ux = b.x() - a.x(), uy = b.y() - a.y(), uz = b.z() - a.z();
  const double vx = c.x() - a.x(), vy = c.y() - a.y(), vz = c.z() - a.z();
  const double wx = p.x() - a.x(), wy = p.y() - a.y(), wz = p.z() - a.z();
  const double det = wx * (uy * vz - uz * vy) + wy * (uz * vx - ux * vz) + wz * (ux * vy - uy * vx);
  const double perm = std::abs(wx) * (std::abs(uy * vz) + std::abs(uz * vy)) +
                      std::abs(wy) * (std::abs(uz * vx) + std::abs(ux * vz)) +
                      std::abs(wz) * (std::abs(ux * vy) + std::abs(uy * vx));
  const double bound = kOrientFilter * perm;
  if (det > bound) return 1;
  if (det < -bound) return -1;
  return orient_exact(a, b, c, p);
}

// ---------------------------------------------------------------------------
// Quickhull over work coordinates.  Faces carry their unassigned visible
// points; each pending point lives in exactly one face list, and the
// farthest one is inserted first, so the construction is deterministic.

struct QFace {
  int a, b, c;
  std::array<int, 3> nb{{-1, -1, -1}};  // across edges (a,b), (b,c), (c,a)
  std::vector<int> pts;
  Vector3d n;     // floating outward normal, for farthest-point selection
  double off = 0.0;
  bool alive = true;

  int vertex(int k) const { return k == 0 ? a : (k == 1 ? b : c); }
  std::pair<int, int> edge(int k) const {
    return {vertex(k), vertex((k + 1) % 3)};
  }
};

struct Builder {
  const std::vector<Vector3d>& P;
  std::vector<QFace> faces;
  double scale = 1.0;

  explicit Builder(const std::vector<Vector3d>& pts) : P(pts) {}

  int visible(const QFace& f, int p) const { return orient(P[f.a], P[f.b], P[f.c], P[p]); }

  void set_plane(QFace& f) {
    f.n = (P[f.b] - P[f.a]).cross(P[f.c] - P[f.a]);
    f.off = f.n.dot(P[f.a]);
  }

  int make_face(int a, int b, int c) {
    QFace f;
    f.a = a; f.b = b; f.c = c;
    set_plane(f);
    faces.push_back(std::move(f));
    return static_cast<int>(faces.size()) - 1;
  }

  // Neighbor slot of face f holding edge (u, w).
  int edge_slot(int f, int u, int w) const {
    for (int k = 0; k < 3; ++k)
      if (faces[f].edge(k) == std::make_pair(u, w)) return k;
    throw Error("hull adjacency lost an edge");
  }

  void build();
};

void Builder::build() {
  const int n = static_cast<int>(P.size());
  if (n < 4) throw DegenerateInput("hull needs at least 4 points");

  // Initial simplex: lexicographic minimum, the farthest point from it, the
  // point maximizing triangle area, the point maximizing tetra volume.
  int i0 = 0;
  for (int i = 1; i < n; ++i)
    if (std::lexicographical_compare(P[i].data(), P[i].data() + 3, P[i0].data(), P[i0].data() + 3))
      i0 = i;
  int i1 = -1;
  double best = 0.0;
  for (int i = 0; i < n; ++i) {
    double d = (P[i] - P[i0]).squaredNorm();
    if (d > best) { best = d; i1 = i; }
  }
  if (i1 < 0 || best == 0.0) throw DegenerateInput("all hull input points coincide");
  scale = std::sqrt(best);

  int i2 = -1;
  best = 0.0;
  for (int i = 0; i < n; ++i) {
    double d = (P[i1] - P[i0]).cross(P[i] - P[i0]).squaredNorm();
    if (d > best) { best = d; i2 = i; }
  }
  if (i2 < 0 || best <= 1e-24 * std::pow(scale, 4))
    throw DegenerateInput("hull input points are collinear");

  int i3 = -1;
  best = 0.0;
  for (int i = 0; i < n; ++i) {
    double d = std::abs((P[i] - P[i0]).dot((P[i1] - P[i0]).cross(P[i2] - P[i0])));
    if (d > best) { best = d; i3 = i; }
  }
  if (i3 < 0 || best <= 1e-18 * std::pow(scale, 3) ||
      orient(P[i0], P[i1], P[i2], P[i3]) == 0)
    throw DegenerateInput("hull input points are coplanar");

  if (orient(P[i0], P[i1], P[i2], P[i3]) > 0) std::swap(i2, i3);
  // Outward tetra faces for orient(i0,i1,i2,i3) < 0.
  make_face(i0, i1, i2);
  make_face(i0, i2, i3);
  make_face(i0, i3, i1);
  make_face(i1, i3, i2);
  std::map<std::pair<int, int>, int> edges;
  for (int f = 0; f < 4; ++f)
    for (int k = 0; k < 3; ++k) edges[faces[f].edge(k)] = f;
  for (int f = 0; f < 4; ++f)
    for (int k = 0; k < 3; ++k) {
      auto [u, w] = faces[f].edge(k);
      faces[f].nb[k] = edges.at({w, u});
    }

  for (int i = 0; i < n; ++i) {
    if (i == i0 || i == i1 || i == i2 || i == i3) continue;
    for (int f = 0; f < 4; ++f)
      if (visible(faces[f], i) > 0) { faces[f].pts.push_back(i); break; }
  }

  std::vector<int> pending;
  for (int f = 0; f < 4; ++f)
    if (!faces[f].pts.empty()) pending.push_back(f);

  std::vector<int> visible_faces, stack, orphans, horizon_faces;
  while (!pending.empty()) {
    int f = pending.back();
    pending.pop_back();
    if (!faces[f].alive || faces[f].pts.empty()) continue;

    // Farthest pending point of this face (floating selection only).
    int p = -1;
    double far = -1.0;
    for (int q : faces[f].pts) {
      double d = faces[f].n.dot(P[q]) - faces[f].off;
      if (d > far) { far = d; p = q; }
    }

    // Grow the exactly-visible region from f.
    visible_faces.clear();
    stack.assign(1, f);
    std::vector<char> mark(faces.size(), 0);
    mark[f] = 1;
    if (visible(faces[f], p) <= 0) {
      // The witness face is no longer strictly visible (the point may be on
      // its plane); other faces may still see the point.
      bool found = false;
      for (size_t g = 0; g < faces.size() && !found; ++g)
        if (faces[g].alive && visible(faces[g], static_cast<int>(p)) > 0) {
          stack.assign(1, static_cast<int>(g));
          mark.assign(faces.size(), 0);
          mark[g] = 1;
          found = true;
        }
      if (!found) {
        // Interior or on the boundary: drop the point, keep the rest.
        auto& pts = faces[f].pts;
        pts.erase(std::remove(pts.begin(), pts.end(), p), pts.end());
        if (!pts.empty()) pending.push_back(f);
        continue;
      }
    }
    while (!stack.empty()) {
      int g = stack.back();
      stack.pop_back();
      visible_faces.push_back(g);
      for (int k = 0; k < 3; ++k) {
        int h = faces[g].nb[k];
        if (!mark[h] && faces[h].alive && visible(faces[h], p) > 0) {
          mark[h] = 1;
          stack.push_back(h);
        }
      }
    }

    // Horizon: directed edges of visible faces whose neighbor is hidden.
    struct HorizonEdge { int u, w, hidden, slot; };
    std::vector<HorizonEdge> horizon;
    for (int g : visible_faces)
      for (int k = 0; k < 3; ++k) {
        int h = faces[g].nb[k];
        if (mark[h]) continue;
        auto [u, w] = faces[g].edge(k);
        horizon.push_back({u, w, h, edge_slot(h, w, u)});
      }
    if (horizon.size() < 3) throw Error("hull horizon degenerated");

    orphans.clear();
    for (int g : visible_faces) {
      faces[g].alive = false;
      for (int q : faces[g].pts)
        if (q != p) orphans.push_back(q);
      faces[g].pts.clear();
    }

    // One new face per horizon edge; stitch p-edges through the cycle maps.
    std::map<int, int> start_of, end_of;
    horizon_faces.clear();
    for (const auto& e : horizon) {
      int nf = make_face(e.u, e.w, p);
      faces[nf].nb[0] = e.hidden;
      faces[e.hidden].nb[e.slot] = nf;
      if (!start_of.emplace(e.u, nf).second || !end_of.emplace(e.w, nf).second)
        throw Error("hull horizon is not a simple cycle");
      horizon_faces.push_back(nf);
    }
    for (int nf : horizon_faces) {
      faces[nf].nb[1] = start_of.at(faces[nf].b);  // edge (w, p)
      faces[nf].nb[2] = end_of.at(faces[nf].a);    // edge (p, u)
    }

    for (int q : orphans)
      for (int nf : horizon_faces)
        if (visible(faces[nf], q) > 0) {
          faces[nf].pts.push_back(q);
          break;
        }
    for (int nf : horizon_faces)
      if (!faces[nf].pts.empty()) pending.push_back(nf);
  }
}

// Chart <-> work-coordinate conversions.

Vector3d to_work(const ModelSpace& space, const VectorXd& x) {
  switch (space.kind()) {
    case SpaceKind::euclidean: return x;
    case SpaceKind::hyperbolic: return klein_from_hyperboloid(x);
    case SpaceKind::hyperbolic_klein: return x;
    default:
      throw UnsupportedSpace("hulls need a geodesically linear chart (euclidean3 or hyperbolic3)");
  }
}

VectorXd chart_from_work(const ModelSpace& space, const Vector3d& w) {
  switch (space.kind()) {
    case SpaceKind::euclidean: return w;
    case SpaceKind::hyperbolic: return hyperboloid_from_klein(w);
    default: return w;
  }
}

// Tangent of the chart at the chart point of `w` matching the work-space
// direction d based at w.
VectorXd chart_tangent_from_work(const ModelSpace& space, const Vector3d& w, const Vector3d& d) {
  switch (space.kind()) {
    case SpaceKind::euclidean: return d;
    case SpaceKind::hyperbolic: return hyperboloid_tangent_from_klein(w, d);
    default: return d;
  }
}

double solid_angle(const Vector3d& a, const Vector3d& b, const Vector3d& c) {
  double num = a.dot(b.cross(c));
  double den = 1.0 + a.dot(b) + b.dot(c) + c.dot(a);
  return 2.0 * std::atan2(num, den);
}

// Outward unit normal (in the metric at the vertex, expressed in the
// g-orthonormal frame E with E^{-1} = E^T g) of the geodesic plane spanned
// by the facet, evaluated at work point w0 on the facet.
Vector3d facet_normal_in_frame(const ModelSpace& space, const ConvexHull& h, int f,
                               const Vector3d& w0, const MatrixXd& Einv_g,
                               const Vector3d& interior_dir_frame) {
  const auto& t = h.facets[f];
  std::array<Vector3d, 3> corners = {h.work[t[0]], h.work[t[1]], h.work[t[2]]};
  // Two independent in-plane directions from w0, in work coordinates.
  Vector3d d1 = corners[0] - w0, d2 = corners[1] - w0;
  if (d1.cross(d2).squaredNorm() < 1e-20 * h.diameter * h.diameter) {
    d1 = corners[1] - w0;
    d2 = corners[2] - w0;
  }
  if (d1.cross(d2).squaredNorm() < 1e-20 * h.diameter * h.diameter) {
    d1 = corners[2] - w0;
    d2 = corners[0] - w0;
  }
  Vector3d u1 = Einv_g * VectorXd(chart_tangent_from_work(space, w0, d1));
  Vector3d u2 = Einv_g * VectorXd(chart_tangent_from_work(space, w0, d2));
  Vector3d nf = u1.cross(u2).normalized();
  if (nf.dot(interior_dir_frame) > 0.0) nf = -nf;
  return nf;
}

}  // namespace

ConvexHull convex_hull(const SpacePtr& space, const std::vector<VectorXd>& pts) {
  if (!space || space->dimension() != 3)
    throw UnsupportedSpace("hulls are implemented for 3-dimensional spaces");
  ConvexHull h;
  h.space = space;
  h.points = pts;
  h.work.resize(pts.size());
  for (size_t i = 0; i < pts.size(); ++i) h.work[i] = to_work(*space, pts[i]);

  Builder builder(h.work);
  builder.build();

  Vector3d lo = h.work[0], hi = h.work[0];
  for (const auto& w : h.work) {
    lo = lo.cwiseMin(w);
    hi = hi.cwiseMax(w);
  }
  h.diameter = (hi - lo).norm();

  // Compact alive faces and remap adjacency.
  std::vector<int> remap(builder.faces.size(), -1);
  for (size_t f = 0; f < builder.faces.size(); ++f)
    if (builder.faces[f].alive) {
      remap[f] = static_cast<int>(h.facets.size());
      h.facets.push_back({builder.faces[f].a, builder.faces[f].b, builder.faces[f].c});
    }
  for (size_t f = 0; f < builder.faces.size(); ++f)
    if (builder.faces[f].alive) {
      std::array<int, 3> nb;
      for (int k = 0; k < 3; ++k) nb[k] = remap[builder.faces[f].nb[k]];
      h.neighbor.push_back(nb);
    }
  std::vector<int> ext;
  for (const auto& t : h.facets) ext.insert(ext.end(), t.begin(), t.end());
  std::sort(ext.begin(), ext.end());
  ext.erase(std::unique(ext.begin(), ext.end()), ext.end());
  h.extreme = std::move(ext);

  h.interior = Vector3d::Zero();
  for (int v : h.extreme) h.interior += h.work[v];
  h.interior /= static_cast<double>(h.extreme.size());
  return h;
}

double facet_side(const ConvexHull& h, int f, const Vector3d& p) {
  const auto& t = h.facets[f];
  const Vector3d& a = h.work[t[0]];
  Vector3d n = (h.work[t[1]] - a).cross(h.work[t[2]] - a);
  double len = n.norm();
  if (len == 0.0) return 0.0;
  return n.dot(p - a) / len;
}

ConvexityCert certify_convex(const TriSurface& s, double tol_rel) {
  require_closed_surface(s);
  ConvexHull h = convex_hull(s.space, s.x);
  const double tol = tol_rel * h.diameter;

  const int n = static_cast<int>(s.x.size());
  std::vector<double> depth(n, 0.0);
  // Precompute facet planes once.
  const int m = static_cast<int>(h.facets.size());
  std::vector<Vector3d> base(m), nrm(m);
  for (int f = 0; f < m; ++f) {
    const auto& t = h.facets[f];
    base[f] = h.work[t[0]];
    nrm[f] = (h.work[t[1]] - base[f]).cross(h.work[t[2]] - base[f]).normalized();
  }
  // The early exit must be far below tol so that reported violations of
  // on-hull vertices stay at roundoff scale rather than at the tolerance.
  const double exit_at = -1e-12 * h.diameter;
  parallel_for(n, [&](int i) {
    double side_max = -std::numeric_limits<double>::infinity();
    for (int f = 0; f < m; ++f) {
      side_max = std::max(side_max, nrm[f].dot(h.work[i] - base[f]));
      if (side_max >= exit_at) break;
    }
    depth[i] = std::max(0.0, -side_max);
  });

  ConvexityCert cert;
  for (int i = 0; i < n; ++i) {
    cert.max_violation = std::max(cert.max_violation, depth[i]);
    if (depth[i] > tol) ++cert.interior_count;
  }
  cert.convex = cert.interior_count == 0;
  return cert;
}

double hull_boundary_curvature(const ConvexHull& h) {
  if (h.facets.size() < 4) throw DegenerateHull("hull has fewer than 4 facets");
  const ModelSpace& space = *h.space;

  // Ring of facets around each hull vertex, in rotational order.
  std::map<std::pair<int, int>, int> after;  // (v, second vertex) -> facet
  for (size_t f = 0; f < h.facets.size(); ++f) {
    const auto& t = h.facets[f];
    for (int k = 0; k < 3; ++k) after[{t[k], t[(k + 1) % 3]}] = static_cast<int>(f);
  }
  auto third = [&](int f, int v) {
    const auto& t = h.facets[f];
    for (int k = 0; k < 3; ++k)
      if (t[k] == v) return t[(k + 2) % 3];
    throw Error("facet ring bookkeeping failed");
  };

  double total = 0.0;
  for (int v : h.extreme) {
    // Walk the facet ring.
    auto it = after.lower_bound({v, -1});
    if (it == after.end() || it->first.first != v) continue;
    int first = it->second;
    std::vector<int> ring;
    int f = first;
    do {
      ring.push_back(f);
      int w = third(f, v);  // edge (v, w) borders the next facet in the ring
      f = after.at({v, w});
    } while (f != first && ring.size() <= h.facets.size());
    if (f != first) throw Error("facet ring around a hull vertex did not close");
    if (ring.size() < 3) continue;

    const VectorXd xv = h.points[v];
    MatrixXd E = space.orthonormal_basis(xv);
    MatrixXd Einv_g = E.transpose() * space.metric(xv);
    Vector3d dir_in = Einv_g * space.log_map(xv, chart_from_work(space, h.interior));
    dir_in.normalize();

    std::vector<Vector3d> normals;
    normals.reserve(ring.size());
    for (int rf : ring)
      normals.push_back(facet_normal_in_frame(space, h, rf, h.work[v], Einv_g, dir_in));

    double omega = 0.0;
    for (size_t k = 1; k + 1 < normals.size(); ++k)
      omega += solid_angle(normals[0], normals[k], normals[k + 1]);
    total += std::abs(omega);
  }
  return total;
}

ChainReport kleiner_chain(const TriSurface& s, double slack) {
  CurvatureReport rep = curvature_report(s);
  ConvexHull h = convex_hull(s.space, s.x);

  std::vector<double> gk = vertex_gauss_kronecker(s);
  std::vector<double> area = vertex_areas(s);

  const int m = static_cast<int>(h.facets.size());
  std::vector<Vector3d> base(m), nrm(m);
  for (int f = 0; f < m; ++f) {
    const auto& t = h.facets[f];
    base[f] = h.work[t[0]];
    nrm[f] = (h.work[t[1]] - base[f]).cross(h.work[t[2]] - base[f]).normalized();
  }
  const double on_tol = 1e-7 * h.diameter;
  const int n = static_cast<int>(s.x.size());
  std::vector<char> on_hull(n, 0);
  parallel_for(n, [&](int i) {
    double side_max = -std::numeric_limits<double>::infinity();
    for (int f = 0; f < m; ++f) {
      side_max = std::max(side_max, nrm[f].dot(h.work[i] - base[f]));
      if (side_max >= -on_tol) break;
    }
    on_hull[i] = side_max >= -on_tol ? 1 : 0;
  });

  ChainReport chain;
  chain.slack = slack;
  chain.total_abs = rep.total_abs;
  chain.total_pos = rep.total_positive;
  for (int i = 0; i < n; ++i)
    if (on_hull[i] && gk[i] >= 1e-9) chain.restricted_pos += gk[i] * area[i];
  chain.hull_curv = hull_boundary_curvature(h);
  chain.pass = chain.total_abs + 1e-12 >= chain.total_pos &&
               chain.total_pos + 1e-12 >= chain.restricted_pos &&
               std::abs(chain.restricted_pos - chain.hull_curv) <= slack &&
               chain.hull_curv >= 4.0 * M_PI - slack;
  return chain;
}

double tangent_cone_aperture(const ConvexHull& h, int index) {
  if (index < 0 || index >= static_cast<int>(h.work.size()))
    throw DegenerateInput("hull point index out of range");
  const Vector3d& w0 = h.work[index];
  const double tol = 1e-9 * std::max(1.0, h.diameter);

  std::vector<int> support;
  double side_max = -std::numeric_limits<double>::infinity();
  for (int f = 0; f < static_cast<int>(h.facets.size()); ++f) {
    double s = facet_side(h, f, w0);
    side_max = std::max(side_max, s);
    if (std::abs(s) <= tol) support.push_back(f);
  }
  if (support.empty() || side_max < -tol) {
    std::ostringstream msg;
    msg << "point " << index << " lies strictly inside the hull (depth " << -side_max << ")";
    throw InteriorPoint(msg.str());
  }

  const ModelSpace& space = *h.space;
  const VectorXd xv = h.points[index];
  MatrixXd E = space.orthonormal_basis(xv);
  MatrixXd Einv_g = E.transpose() * space.metric(xv);
  Vector3d dir_in = Einv_g * space.log_map(xv, chart_from_work(space, h.interior));
  dir_in.normalize();

  double worst = 0.0;
  std::vector<Vector3d> normals;
  for (int f : support)
    normals.push_back(facet_normal_in_frame(space, h, f, w0, Einv_g, dir_in));
  for (size_t i = 0; i < normals.size(); ++i)
    for (size_t j = i + 1; j < normals.size(); ++j)
      worst = std::max(worst, std::acos(std::clamp(normals[i].dot(normals[j]), -1.0, 1.0)));
  return M_PI - worst;
}

}  // namespace tcurv
