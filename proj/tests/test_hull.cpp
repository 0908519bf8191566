#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "tcurv/errors.hpp"
#include "tcurv/hull.hpp"
#include "tcurv/mesh_fixtures.hpp"
#include "tcurv/rng.hpp"
#include "tcurv/surface.hpp"

using namespace tcurv;
using Eigen::Matrix3d;
using Eigen::Matrix4d;
using Eigen::Vector3d;
using Eigen::Vector4d;
using Eigen::VectorXd;

namespace {

constexpr double kFourPi = 12.566370614359173;

std::vector<VectorXd> seeded_cloud(uint64_t seed, int count, double radius) {
  std::mt19937_64 rng(stream_seed(seed, 0));
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.2, 1.0);
  std::vector<VectorXd> pts;
  for (int i = 0; i < count; ++i) {
    Vector3d d(gauss(rng), gauss(rng), gauss(rng));
    pts.push_back(radius * unif(rng) * d.normalized());
  }
  return pts;
}

std::vector<VectorXd> cone_cloud(double alpha, int m) {
  std::vector<VectorXd> pts;
  pts.push_back(Vector3d(0, 0, 0));
  for (int k = 0; k < m; ++k) {
    double th = 2.0 * M_PI * k / m;
    pts.push_back(Vector3d(std::tan(alpha) * std::cos(th), std::tan(alpha) * std::sin(th), 1.0));
  }
  return pts;
}

double max_side(const ConvexHull& h, const Vector3d& p) {
  double worst = -1e300;
  for (size_t f = 0; f < h.facets.size(); ++f)
    worst = std::max(worst, facet_side(h, static_cast<int>(f), p));
  return worst;
}

// Angle at vertex a of the geodesic triangle abc.
double corner_angle(const ModelSpace& sp, const VectorXd& a, const VectorXd& b,
                    const VectorXd& c) {
  VectorXd u = sp.log_map(a, b);
  VectorXd v = sp.log_map(a, c);
  double cs = sp.inner(a, u, v) / (sp.norm(a, u) * sp.norm(a, v));
  return std::acos(std::clamp(cs, -1.0, 1.0));
}

// Isometry of the hyperboloid model: rotation, boost along x, rotation.
Matrix4d random_lorentz(uint64_t seed, double rapidity) {
  std::mt19937_64 rng(stream_seed(seed, 1));
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto rot = [&]() {
    Matrix3d a;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) a(i, j) = gauss(rng);
    Eigen::HouseholderQR<Matrix3d> qr(a);
    Matrix3d q = qr.householderQ();
    if (q.determinant() < 0) q.col(0) *= -1.0;
    Matrix4d r = Matrix4d::Identity();
    r.block<3, 3>(1, 1) = q;
    return r;
  };
  Matrix4d boost = Matrix4d::Identity();
  boost(0, 0) = boost(1, 1) = std::cosh(rapidity);
  boost(0, 1) = boost(1, 0) = std::sinh(rapidity);
  return rot() * boost * rot();
}

VectorXd apply_lorentz(const Matrix4d& L, const VectorXd& x) {
  Vector4d X;
  X << std::sqrt(1.0 + x.squaredNorm()), x(0), x(1), x(2);
  Vector4d Y = L * X;
  return Y.tail(3);
}

}  // namespace

TEST_CASE("euclidean polytope normal cones tile the sphere") {
  auto e3 = make_space("euclidean3");

  std::vector<VectorXd> tet = {Vector3d(0.8, 0.8, 0.8), Vector3d(0.8, -0.8, -0.8),
                               Vector3d(-0.8, 0.8, -0.8), Vector3d(-0.8, -0.8, 0.8)};
  ConvexHull ht = convex_hull(e3, tet);
  CHECK(ht.facets.size() == 4);
  CHECK(ht.extreme.size() == 4);
  CHECK(std::abs(hull_boundary_curvature(ht) - kFourPi) <= 1e-9);

  // A denser cloud with interior points changes nothing about the total.
  std::vector<VectorXd> cloud = seeded_cloud(42, 60, 1.3);
  cloud.push_back(Vector3d(0, 0, 0));
  ConvexHull hc = convex_hull(e3, cloud);
  CHECK(std::abs(hull_boundary_curvature(hc) - kFourPi) <= 1e-9);
  CHECK(hc.extreme.size() < cloud.size());
  for (const auto& p : cloud) CHECK(max_side(hc, Vector3d(p)) <= 1e-9);
}

TEST_CASE("hyperbolic tetrahedron satisfies the polytope curvature identity") {
  auto h3 = make_space("hyperbolic3");
  std::vector<VectorXd> tet = {Vector3d(0.8, 0.8, 0.8), Vector3d(0.8, -0.8, -0.8),
                               Vector3d(-0.8, 0.8, -0.8), Vector3d(-0.8, -0.8, 0.8)};
  ConvexHull h = convex_hull(h3, tet);
  REQUIRE(h.facets.size() == 4);
  double curv = hull_boundary_curvature(h);

  // Each geodesic facet has area pi minus its angle sum, and the vertex
  // cone areas must absorb exactly 4 pi plus the facet areas.
  double facet_area = 0.0;
  for (const auto& f : h.facets) {
    const VectorXd &a = h.points[f[0]], &b = h.points[f[1]], &c = h.points[f[2]];
    facet_area += M_PI - corner_angle(*h3, a, b, c) - corner_angle(*h3, b, c, a) -
                  corner_angle(*h3, c, a, b);
  }
  CHECK(std::abs(curv - (kFourPi + facet_area)) <= 1e-9);
  CHECK(curv >= kFourPi + 1.0);
  CHECK(std::abs(curv - 17.032641434937265) <= 1e-9);
}

TEST_CASE("hyperbolic hull contains the geodesics between its members") {
  auto h3 = make_space("hyperbolic3");
  std::vector<VectorXd> cloud = seeded_cloud(7, 40, 1.2);
  ConvexHull h = convex_hull(h3, cloud);

  std::mt19937_64 rng(stream_seed(7, 2));
  std::uniform_int_distribution<int> pick(0, static_cast<int>(cloud.size()) - 1);
  for (int trial = 0; trial < 50; ++trial) {
    const VectorXd& a = cloud[pick(rng)];
    const VectorXd& b = cloud[pick(rng)];
    VectorXd v = h3->log_map(a, b);
    for (int k = 0; k <= 16; ++k) {
      VectorXd pos, vel;
      h3->geodesic_state(a, v, k / 16.0, &pos, &vel);
      // Work coordinates are the Klein ball; the invariant is that no
      // geodesic sample escapes any supporting plane.
      Vector3d w = pos / std::sqrt(1.0 + pos.squaredNorm());
      CHECK(max_side(h, w) <= 1e-9);
    }
  }
}

TEST_CASE("rehulling the extreme points is idempotent") {
  for (const char* tag : {"euclidean3", "hyperbolic3"}) {
    auto sp = make_space(tag);
    std::vector<VectorXd> cloud = seeded_cloud(13, 50, 1.1);
    ConvexHull h1 = convex_hull(sp, cloud);
    std::vector<VectorXd> ext;
    for (int i : h1.extreme) ext.push_back(cloud[i]);
    ConvexHull h2 = convex_hull(sp, ext);
    CHECK(h2.extreme.size() == h1.extreme.size());
    CHECK(h2.facets.size() == h1.facets.size());
    CHECK(std::abs(hull_boundary_curvature(h2) - hull_boundary_curvature(h1)) <= 1e-9);
  }
}

TEST_CASE("hull curvature is a hyperbolic isometry invariant") {
  auto h3 = make_space("hyperbolic3");
  std::vector<VectorXd> cloud = seeded_cloud(29, 32, 1.0);
  ConvexHull h1 = convex_hull(h3, cloud);

  Matrix4d L = random_lorentz(29, 0.7);
  std::vector<VectorXd> moved;
  for (const auto& p : cloud) moved.push_back(apply_lorentz(L, p));
  ConvexHull h2 = convex_hull(h3, moved);

  CHECK(h2.extreme == h1.extreme);
  CHECK(std::abs(hull_boundary_curvature(h2) - hull_boundary_curvature(h1)) <= 1e-8);
  for (int i : h1.extreme)
    CHECK(std::abs(tangent_cone_aperture(h2, i) - tangent_cone_aperture(h1, i)) <= 1e-7);
}

TEST_CASE("tangent cone aperture separates corners, edges, faces") {
  auto e3 = make_space("euclidean3");
  std::vector<VectorXd> cube;
  for (int i = 0; i < 8; ++i)
    cube.push_back(Vector3d(i & 1 ? 1 : -1, i & 2 ? 1 : -1, i & 4 ? 1 : -1));
  cube.push_back(Vector3d(1.0, 0.3, 0.2));   // face interior
  cube.push_back(Vector3d(1.0, 1.0, 0.0));   // edge interior
  cube.push_back(Vector3d(0.1, 0.0, 0.0));   // strictly inside
  ConvexHull h = convex_hull(e3, cube);

  CHECK(std::abs(tangent_cone_aperture(h, 0) - M_PI / 2) <= 1e-12);
  CHECK(std::abs(tangent_cone_aperture(h, 8) - M_PI) <= 1e-12);
  CHECK(std::abs(tangent_cone_aperture(h, 9) - M_PI / 2) <= 1e-12);
  CHECK_THROWS_AS(tangent_cone_aperture(h, 10), InteriorPoint);
}

TEST_CASE("cone apex aperture matches the opening angle and is resolution-stable") {
  auto e3 = make_space("euclidean3");
  ConvexHull h64 = convex_hull(e3, cone_cloud(0.5, 64));
  ConvexHull h128 = convex_hull(e3, cone_cloud(0.5, 128));
  double a64 = tangent_cone_aperture(h64, 0);
  double a128 = tangent_cone_aperture(h128, 0);
  CHECK(std::abs(a64 - 1.0) <= 2e-3);
  CHECK(std::abs(a128 - 1.0) <= 5e-4);
  CHECK(std::abs(a128 - 1.0) < std::abs(a64 - 1.0));
}

TEST_CASE("aperture defect of inscribed convex surfaces vanishes with refinement") {
  auto worst_defect = [](const TriSurface& s) {
    ConvexHull h = convex_hull(s.space, s.x);
    double worst = 0.0;
    for (int i : h.extreme) worst = std::max(worst, M_PI - tangent_cone_aperture(h, i));
    return worst;
  };
  double d1 = worst_defect(geodesic_sphere(1.0, 1));
  double d2 = worst_defect(geodesic_sphere(1.0, 2));
  double d3 = worst_defect(geodesic_sphere(1.0, 3));
  CHECK(d2 <= d1 / 1.5);
  CHECK(d3 <= d2 / 1.5);
  CHECK(d3 <= 0.3);
}

TEST_CASE("convexity certificates") {
  ConvexityCert c1 = certify_convex(geodesic_sphere(1.0, 3));
  CHECK(c1.convex);
  CHECK(c1.max_violation <= 1e-9);
  CHECK(c1.interior_count == 0);

  CHECK(certify_convex(icosphere(3)).convex);

  ConvexityCert c2 = certify_convex(bumpy_sphere(1.0, 0.8, 19, 3));
  CHECK_FALSE(c2.convex);
  CHECK(c2.max_violation >= 1e-3);
  CHECK(c2.interior_count > 0);

  CHECK_FALSE(certify_convex(bumpy_geodesic_sphere(1.0, 0.6, 7, 3)).convex);

  ConvexityCert c3 = certify_convex(torus_surface(2.0, 1.0, 48, 24));
  CHECK_FALSE(c3.convex);
  CHECK(c3.max_violation >= 0.5);
}

TEST_CASE("degenerate and unsupported hull inputs") {
  auto e3 = make_space("euclidean3");
  auto h3 = make_space("hyperbolic3");

  CHECK_THROWS_AS(convex_hull(e3, {}), DegenerateInput);
  CHECK_THROWS_AS(convex_hull(e3, {Vector3d(0, 0, 0), Vector3d(1, 0, 0), Vector3d(0, 1, 0)}),
                  DegenerateInput);

  std::vector<VectorXd> collinear;
  for (int i = 0; i < 10; ++i) collinear.push_back(Vector3d(0.05 * i, 0, 0));
  CHECK_THROWS_AS(convex_hull(h3, collinear), DegenerateInput);

  std::vector<VectorXd> coplanar;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) coplanar.push_back(Vector3d(0.1 * i, 0.1 * j, 0.0));
  CHECK_THROWS_AS(convex_hull(e3, coplanar), DegenerateInput);

  CHECK_THROWS_AS(convex_hull(make_space("h2xr"), seeded_cloud(1, 8, 0.5)), UnsupportedSpace);
  CHECK_THROWS_AS(convex_hull(make_space("sphere2"), {}), UnsupportedSpace);
}

TEST_CASE("curvature chain on a convex surface collapses to equalities") {
  ChainReport r = kleiner_chain(icosphere(4));
  CHECK(r.pass);
  CHECK(r.total_abs == r.total_pos);
  CHECK(r.total_pos == r.restricted_pos);
  CHECK(std::abs(r.hull_curv - kFourPi) <= 1e-9);
  CHECK(std::abs(r.restricted_pos - kFourPi) <= 0.005 * kFourPi);
}

TEST_CASE("curvature chain orders a dented euclidean sphere") {
  ChainReport r = kleiner_chain(bumpy_sphere(1.0, 0.8, 19, 4));
  CHECK(r.pass);
  CHECK(r.total_abs > r.total_pos + 0.05);
  CHECK(r.total_pos > r.restricted_pos + 0.05);
  CHECK(std::abs(r.hull_curv - kFourPi) <= 1e-9);
  CHECK(r.restricted_pos >= kFourPi - r.slack);
}

TEST_CASE("curvature chain orders a dented hyperbolic sphere") {
  ChainReport r = kleiner_chain(bumpy_geodesic_sphere(1.0, 0.6, 7, 5));
  CHECK(r.pass);
  CHECK(r.total_abs > r.total_pos);
  CHECK(r.total_pos > r.restricted_pos);
  CHECK(r.hull_curv >= kFourPi + 1.0);
  CHECK(std::abs(r.restricted_pos - r.hull_curv) <= r.slack);
}
