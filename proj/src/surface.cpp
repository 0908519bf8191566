#include "tcurv/surface.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <sstream>

#include "tcurv/errors.hpp"
#include "tcurv/hull.hpp"
#include "tcurv/parallel.hpp"
#include "tcurv/rng.hpp"
#include "tcurv/transport.hpp"

namespace tcurv {

using Eigen::Matrix2d;
using Eigen::MatrixXd;
using Eigen::Vector2d;
using Eigen::Vector3d;
using Eigen::VectorXd;

MeshTopology mesh_topology(const TriSurface& s) {
  MeshTopology topo;
  topo.vertices = s.vertices();
  topo.faces = s.triangles();
  topo.link.resize(s.vertices());

  // A closed oriented 2-manifold has every undirected edge exactly once in
  // each direction.  Directed edges are packed into sorted 64-bit keys.
  auto key = [](int a, int b) { return (static_cast<uint64_t>(a) << 32) | static_cast<uint32_t>(b); };
  std::vector<uint64_t> de;
  de.reserve(3 * s.tri.size());
  for (const auto& t : s.tri)
    for (int e = 0; e < 3; ++e) de.push_back(key(t[e], t[(e + 1) % 3]));
  std::sort(de.begin(), de.end());
  topo.oriented = std::adjacent_find(de.begin(), de.end()) == de.end();
  auto has = [&](int a, int b) { return std::binary_search(de.begin(), de.end(), key(a, b)); };

  topo.closed = true;
  uint64_t prev = ~uint64_t(0);
  for (uint64_t k : de) {
    if (k == prev) continue;
    prev = k;
    int a = static_cast<int>(k >> 32), b = static_cast<int>(k & 0xffffffffu);
    bool reverse = has(b, a);
    if (!reverse) topo.closed = false;
    if (a < b || !reverse) {
      ++topo.edges;
      topo.link[a].push_back(b);
      topo.link[b].push_back(a);
    }
  }
  topo.euler = topo.vertices - topo.edges + topo.faces;
  return topo;
}

namespace {

void check_closed(const TriSurface& s, const MeshTopology& topo) {
  if (!s.space || s.space->dimension() != 3)
    throw DegenerateInput("surface requires a 3-dimensional ambient space");
  if (s.x.size() != s.nu.size())
    throw DegenerateInput("surface has mismatched vertex and normal counts");
  if (!topo.closed || !topo.oriented) {
    std::ostringstream msg;
    msg << "mesh is not a closed oriented 2-manifold (closed=" << topo.closed
        << ", oriented=" << topo.oriented << ")";
    throw DegenerateInput(msg.str());
  }
  int expected = 2 - 2 * s.genus;
  if (topo.euler != expected) {
    std::ostringstream msg;
    msg << "Euler characteristic " << topo.euler << " does not match genus " << s.genus;
    throw DegenerateInput(msg.str());
  }
  for (int i = 0; i < s.vertices(); ++i) {
    double len = s.space->norm(s.x[i], s.nu[i]);
    if (std::abs(len - 1.0) > 1e-8) {
      std::ostringstream msg;
      msg << "normal at vertex " << i << " has metric norm " << len;
      throw DegenerateInput(msg.str());
    }
  }
}

}  // namespace

void require_closed_surface(const TriSurface& s) { check_closed(s, mesh_topology(s)); }

NormalQuality normal_quality(const TriSurface& s) {
  NormalQuality q;
  const ModelSpace& sp = *s.space;
  for (int i = 0; i < s.vertices(); ++i)
    q.max_unit_defect = std::max(q.max_unit_defect, std::abs(sp.norm(s.x[i], s.nu[i]) - 1.0));
  for (const auto& t : s.tri)
    for (int e = 0; e < 3; ++e) {
      int a = t[e], b = t[(e + 1) % 3];
      VectorXd dir = sp.log_map(s.x[a], s.x[b]);
      double dn = sp.norm(s.x[a], dir);
      if (dn == 0.0) continue;
      double c = sp.inner(s.x[a], dir, s.nu[a]) / dn;
      q.max_edge_angle_defect = std::max(q.max_edge_angle_defect, std::abs(std::asin(std::clamp(c, -1.0, 1.0))));
    }
  return q;
}

namespace {

struct TriangleShape {
  double area = 0.0;
  double corner_area[3] = {0.0, 0.0, 0.0};  // mixed Voronoi split
};

// Euclidean comparison triangle from geodesic edge lengths; areas follow
// the mixed rule: circumcenter cells for acute triangles, half the area to
// an obtuse corner and a quarter to the others.
TriangleShape mixed_areas(double la, double lb, double lc) {
  // la = |v1 v2|, lb = |v2 v0|, lc = |v0 v1|.
  double s = 0.5 * (la + lb + lc);
  double under = s * (s - la) * (s - lb) * (s - lc);
  TriangleShape out;
  out.area = std::sqrt(std::max(0.0, under));
  double m = std::max({la, lb, lc});
  if (out.area < 1e-12 * m * m)
    throw DegenerateInput("degenerate triangle in mesh (area ~ 0)");

  double ca = (lb * lb + lc * lc - la * la) / (2.0 * lb * lc);  // cos at v0
  double cb = (la * la + lc * lc - lb * lb) / (2.0 * la * lc);  // cos at v1
  double cc = (la * la + lb * lb - lc * lc) / (2.0 * la * lb);  // cos at v2
  if (ca < 0.0 || cb < 0.0 || cc < 0.0) {
    int obtuse = ca < 0.0 ? 0 : (cb < 0.0 ? 1 : 2);
    for (int k = 0; k < 3; ++k) out.corner_area[k] = out.area * (k == obtuse ? 0.5 : 0.25);
    return out;
  }
  auto cot = [](double cosv) { return cosv / std::sqrt(std::max(1e-300, 1.0 - cosv * cosv)); };
  // Voronoi cell of corner k: (1/8) (sum over the two edges at k of
  // squared length times cot of the opposite angle).
  out.corner_area[0] = (lc * lc * cot(cc) + lb * lb * cot(cb)) / 8.0;
  out.corner_area[1] = (lc * lc * cot(cc) + la * la * cot(ca)) / 8.0;
  out.corner_area[2] = (lb * lb * cot(cb) + la * la * cot(ca)) / 8.0;
  return out;
}

// Metric-orthonormal tangent basis at vertex i, orthogonal to the normal.
MatrixXd tangent_basis(const ModelSpace& sp, const VectorXd& x, const VectorXd& nu) {
  MatrixXd E = sp.orthonormal_basis(x);  // columns g-orthonormal
  MatrixXd g = sp.metric(x);
  Eigen::Vector3d c;
  for (int k = 0; k < 3; ++k) c[k] = nu.dot(g * E.col(k));
  int drop = 0;
  c.cwiseAbs().maxCoeff(&drop);
  MatrixXd T(x.size(), 2);
  int col = 0;
  for (int k = 0; k < 3; ++k)
    if (k != drop) T.col(col++) = E.col(k);
  // Gram-Schmidt against nu, then between the two columns, in the metric.
  for (int k = 0; k < 2; ++k) {
    VectorXd v = T.col(k);
    v -= nu * (v.dot(g * nu)) / nu.dot(g * nu);
    if (k == 1) v -= T.col(0) * (v.dot(g * T.col(0)));
    double len = std::sqrt(std::max(1e-300, v.dot(g * v)));
    T.col(k) = v / len;
  }
  return T;
}

}  // namespace

std::vector<double> vertex_areas(const TriSurface& s) {
  const ModelSpace& sp = *s.space;
  std::vector<double> area(s.vertices(), 0.0);
  std::vector<TriangleShape> shapes(s.triangles());
  parallel_for(s.triangles(), [&](int f) {
    const auto& t = s.tri[f];
    double la = sp.distance(s.x[t[1]], s.x[t[2]]);
    double lb = sp.distance(s.x[t[2]], s.x[t[0]]);
    double lc = sp.distance(s.x[t[0]], s.x[t[1]]);
    shapes[f] = mixed_areas(la, lb, lc);
  });
  for (int f = 0; f < s.triangles(); ++f)
    for (int k = 0; k < 3; ++k) area[s.tri[f][k]] += shapes[f].corner_area[k];
  return area;
}

namespace {

VertexShape shape_operator_with_link(const TriSurface& s, int vertex,
                                     const std::vector<int>& link) {
  const ModelSpace& sp = *s.space;
  if (static_cast<int>(link.size()) < 3)
    throw DegenerateLink("vertex has fewer than 3 neighbors");
  const VectorXd& p = s.x[vertex];
  const VectorXd& nu = s.nu[vertex];
  MatrixXd g = sp.metric(p);
  MatrixXd T = tangent_basis(sp, p, nu);

  const int m = static_cast<int>(link.size());
  MatrixXd U(2, m), R(2, m);
  for (int j = 0; j < m; ++j) {
    VectorXd e = sp.log_map(p, s.x[link[j]]);
    VectorXd dnu = geodesic_transport(sp, s.x[link[j]], p, s.nu[link[j]]) - nu;
    U.col(j) = Vector2d(e.dot(g * T.col(0)), e.dot(g * T.col(1)));
    R.col(j) = Vector2d(dnu.dot(g * T.col(0)), dnu.dot(g * T.col(1)));
  }
  Eigen::JacobiSVD<MatrixXd> svd(U.transpose(), Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.singularValues()[1] <= 1e-6 * svd.singularValues()[0])
    throw DegenerateLink("1-ring directions do not span the tangent plane");
  // Solve S U = R in least squares: S^T columns from U^T \ R^T.
  Matrix2d St = svd.solve(R.transpose());
  Matrix2d S = St.transpose();

  VertexShape out;
  double scale = S.norm();
  out.asymmetry = scale > 0.0 ? std::abs(S(0, 1) - S(1, 0)) / scale : 0.0;
  out.S = 0.5 * (S + S.transpose());
  out.gk = out.S.determinant();
  out.basis = T;
  return out;
}

}  // namespace

VertexShape shape_operator(const TriSurface& s, int vertex) {
  MeshTopology topo = mesh_topology(s);
  return shape_operator_with_link(s, vertex, topo.link[vertex]);
}

CurvatureReport curvature_report(const TriSurface& s) {
  MeshTopology topo = mesh_topology(s);
  check_closed(s, topo);
  std::vector<double> area = vertex_areas(s);

  const int n = s.vertices();
  std::vector<double> gk(n), ambient(n), asym(n);
  parallel_for(n, [&](int i) {
    VertexShape vs = shape_operator_with_link(s, i, topo.link[i]);
    gk[i] = vs.gk;
    asym[i] = vs.asymmetry;
    ambient[i] = s.space->sectional_curvature(s.x[i], vs.basis.col(0), vs.basis.col(1));
  });

  CurvatureReport rep;
  for (int i = 0; i < n; ++i) {
    rep.total_abs += std::abs(gk[i]) * area[i];
    rep.total_signed += gk[i] * area[i];
    // Dead band: parabolic-noise vertices count as zero curvature.
    if (gk[i] >= 1e-9) rep.total_positive += gk[i] * area[i];
    rep.ambient += ambient[i] * area[i];
    rep.area += area[i];
    rep.max_asymmetry = std::max(rep.max_asymmetry, asym[i]);
  }
  rep.gauss_bonnet = rep.total_signed + rep.ambient;
  rep.gb_defect = std::abs(rep.gauss_bonnet - 2.0 * M_PI * (2.0 - 2.0 * s.genus));
  return rep;
}

std::vector<double> vertex_gauss_kronecker(const TriSurface& s) {
  MeshTopology topo = mesh_topology(s);
  std::vector<double> gk(s.vertices(), 0.0);
  parallel_for(s.vertices(), [&](int i) {
    gk[i] = shape_operator_with_link(s, i, topo.link[i]).gk;
  });
  return gk;
}

TriSurface parallel_surface(const TriSurface& s, double t) {
  if (!s.space->cartan_hadamard())
    throw NotCartanHadamard("parallel surfaces need a Cartan-Hadamard ambient");
  if (t <= 0.0) throw DegenerateInput("parallel distance must be positive");
  ConvexityCert cert = certify_convex(s);
  if (!cert.convex) {
    std::ostringstream msg;
    msg << "surface is not convex: " << cert.interior_count
        << " vertices inside the hull, max depth " << cert.max_violation;
    throw NotConvex(msg.str());
  }
  TriSurface out;
  out.space = s.space;
  out.tri = s.tri;
  out.genus = s.genus;
  out.x.resize(s.x.size());
  out.nu.resize(s.nu.size());
  parallel_for(s.vertices(), [&](int i) {
    VectorXd pos, vel;
    s.space->geodesic_state(s.x[i], s.nu[i], t, &pos, &vel);
    out.x[i] = pos;
    out.nu[i] = vel;
  });
  return out;
}

namespace {

// Signed solid angle of the spherical triangle (a, b, c), unit vectors.
double solid_angle(const Vector3d& a, const Vector3d& b, const Vector3d& c) {
  double num = a.dot(b.cross(c));
  double den = 1.0 + a.dot(b) + b.dot(c) + c.dot(a);
  return 2.0 * std::atan2(num, den);
}

}  // namespace

GaussMapArea gauss_map_area(const TriSurface& s, int directions, uint64_t seed) {
  if (s.space->kind() != SpaceKind::euclidean || s.space->dimension() != 3)
    throw AmbientNotEuclidean("the normal map lives on the unit sphere of euclidean3");
  require_closed_surface(s);

  GaussMapArea out;
  std::vector<Vector3d> nrm(s.vertices());
  for (int i = 0; i < s.vertices(); ++i) nrm[i] = Vector3d(s.nu[i]).normalized();
  for (const auto& t : s.tri)
    out.area_with_multiplicity += std::abs(solid_angle(nrm[t[0]], nrm[t[1]], nrm[t[2]]));

  // Preimage count of the projective point {w, -w}: triangles of the normal
  // image that strictly contain either direction.
  std::mt19937_64 rng(stream_seed(seed, 0));
  std::normal_distribution<double> gauss(0.0, 1.0);
  int min_mult = -1;
  for (int d = 0; d < directions; ++d) {
    Vector3d w(gauss(rng), gauss(rng), gauss(rng));
    if (w.norm() < 1e-6) { --d; continue; }
    w.normalize();
    // All-same-sign means the great-circle cone over the normal triangle
    // contains w (positive) or -w (negative), so one pass over the
    // triangles already counts the preimages of the full pair {w, -w}.
    int count = 0;
    for (const auto& t : s.tri) {
      double d0 = w.dot(nrm[t[0]].cross(nrm[t[1]]));
      double d1 = w.dot(nrm[t[1]].cross(nrm[t[2]]));
      double d2 = w.dot(nrm[t[2]].cross(nrm[t[0]]));
      if ((d0 > 0 && d1 > 0 && d2 > 0) || (d0 < 0 && d1 < 0 && d2 < 0)) ++count;
    }
    if (min_mult < 0 || count < min_mult) min_mult = count;
  }
  out.min_multiplicity = std::max(0, min_mult);
  return out;
}

double flatness_scan(const TriSurface& s) {
  const int n = s.vertices();
  std::vector<double> k(n, 0.0);
  parallel_for(n, [&](int i) {
    MatrixXd T = tangent_basis(*s.space, s.x[i], s.nu[i]);
    k[i] = std::abs(s.space->sectional_curvature(s.x[i], T.col(0), T.col(1)));
  });
  return n == 0 ? 0.0 : *std::max_element(k.begin(), k.end());
}

}  // namespace tcurv
