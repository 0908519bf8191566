#include <cmath>

#include "doctest.h"
#include "tcurv/develop.hpp"
#include "tcurv/errors.hpp"
#include "tcurv/mesh_fixtures.hpp"

using namespace tcurv;
using Eigen::Vector3d;

namespace {

std::vector<std::array<int, 2>> row_path(const GridPatch& p, int i) {
  std::vector<std::array<int, 2>> path;
  for (int j = 0; j < p.cols; ++j) path.push_back({i, j});
  return path;
}

std::vector<std::array<int, 2>> col_path(const GridPatch& p, int j) {
  std::vector<std::array<int, 2>> path;
  for (int i = 0; i < p.rows; ++i) path.push_back({i, j});
  return path;
}

// Circumradius of the circle through three points of the (f1, f3) plane.
double circumradius(const Vector3d& a, const Vector3d& b, const Vector3d& c) {
  double la = (b - c).norm(), lb = (a - c).norm(), lc = (a - b).norm();
  double p = 0.5 * (la + lb + lc);
  double area = std::sqrt(p * (p - la) * (p - lb) * (p - lc));
  return la * lb * lc / (4.0 * area);
}

}  // namespace

TEST_CASE("rotated plane patch develops rigidly") {
  GridPatch p = plane_patch(1.0, 21, 21, 4);
  CHECK(patch_flatness(p) == 0.0);

  SurfaceFrame f = surface_frame(p);
  CHECK(f.max_path_defect <= 1e-13);
  CHECK(f.max_orthonormality_defect <= 1e-12);

  DevelopedPatch dev = develop_map(p, f);
  CHECK(dev.path_mismatch <= 1e-12);
  CHECK(dev.differential_defect <= 1e-12);
  CHECK(dev.max_circulation <= 1e-12);

  // Congruence: every chord of the image matches the source chord.
  for (int a : {0, 20, 220, 440})
    for (int b : {7, 143, 404}) {
      double ds = (p.x[a] - p.x[b]).norm();
      double di = (dev.image.x[a] - dev.image.x[b]).norm();
      CHECK(std::abs(ds - di) <= 1e-8 * std::max(1.0, ds));
    }

  IsometryReport rep = verify_isometry(p, dev.image);
  CHECK(rep.pass);
  CHECK(rep.max_inner_mismatch <= 1e-8);
  CHECK(rep.max_path_mismatch <= 1e-8);
  CHECK(rep.max_chord_mismatch <= 1e-8);
  CHECK(verify_normal_correspondence(p, f, dev.image) <= 1e-10);
}

TEST_CASE("flat strip develops to a planar rectangle") {
  GridPatch p = strip_patch(1.0, 1.0, 100, 100);
  CHECK(patch_flatness(p) <= 1e-10);

  SurfaceFrame f = surface_frame(p);
  CHECK(f.max_path_defect <= 1e-6);

  DevelopedPatch dev = develop_map(p, f);
  CHECK(dev.path_mismatch <= 1e-6 * std::sqrt(5.0));
  CHECK(dev.differential_defect <= 1e-4);
  CHECK(dev.max_circulation <= 1e-7);

  // The image lies in the plane spanned by the first two frame directions
  // and reproduces the 2 x 1 rectangle of intrinsic distances.
  for (const auto& q : dev.image.x) CHECK(std::abs(q(2)) <= 1e-10);
  const int last = p.nodes() - 1;
  CHECK(std::abs((dev.image.x[0] - dev.image.x[p.idx(0, 99)]).norm() - 2.0) <= 1e-4);
  CHECK(std::abs((dev.image.x[0] - dev.image.x[p.idx(99, 0)]).norm() - 1.0) <= 1e-4);
  CHECK(std::abs((dev.image.x[0] - dev.image.x[last]).norm() - std::sqrt(5.0)) <= 1e-4);

  IsometryReport rep = verify_isometry(p, dev.image);
  CHECK(rep.pass);
  CHECK(rep.max_inner_mismatch <= 1e-4);
  CHECK(rep.max_path_mismatch <= 1e-4);
  CHECK(rep.max_chord_mismatch <= 1e-4);

  CHECK(verify_normal_correspondence(p, f, dev.image) <= 1e-4);

  // A vertical grid line is a geodesic of the strip and stays straight.
  auto [ts, ti] = verify_tau_preservation(p, dev.image, col_path(p, 50));
  CHECK(ts <= 1e-5);
  CHECK(ti <= 1e-5);
}

TEST_CASE("arc strip develops to a cylinder over a circle of equal curvature") {
  // Base circle of hyperbolic radius 1: geodesic curvature coth(1).
  GridPatch p = arc_strip_patch(1.0, 1.0, 1.0, 40, 100);
  CHECK(patch_flatness(p) <= 1e-10);

  SurfaceFrame f = surface_frame(p);
  CHECK(f.max_path_defect <= 1e-6);

  DevelopedPatch dev = develop_map(p, f);
  CHECK(dev.differential_defect <= 1e-4);
  CHECK(dev.max_circulation <= 1e-7);

  // The indicatrix only turns at the cols-2 interior vertices, so it sees
  // kappa * (L - h) of the total turning kappa * L.
  const double coth1 = 1.3130352854993312;
  const double expected = coth1 * (1.0 - 1.0 / 99.0);
  auto [ts, ti] = verify_tau_preservation(p, dev.image, row_path(p, 0));
  CHECK(std::abs(ts - expected) <= 1e-4 * (1.0 + coth1));
  CHECK(std::abs(ti - expected) <= 1e-4 * (1.0 + coth1));
  CHECK(std::abs(ts - ti) <= 1e-3 * (1.0 + ts));

  // The image base row is planar (second frame coordinate vanishes) and its
  // circumradius matches 1/coth(1) = tanh(1).
  const Vector3d a = dev.image.x[p.idx(0, 0)];
  const Vector3d b = dev.image.x[p.idx(0, 49)];
  const Vector3d c = dev.image.x[p.idx(0, 99)];
  CHECK(std::abs(a(1)) + std::abs(b(1)) + std::abs(c(1)) <= 1e-10);
  CHECK(std::abs(circumradius(a, b, c) - 0.7615941559557649) <= 1e-3);

  IsometryReport rep = verify_isometry(p, dev.image);
  CHECK(rep.pass);

  // Chords of the image circle meet the radial normal at half the per-edge
  // turning angle, so the edge-normal defect pins down kappa * h / 2.
  double nd = verify_normal_correspondence(p, f, dev.image);
  CHECK(std::abs(nd - coth1 / (2.0 * 99.0)) <= 1e-4);

  // Diagonal staircase: both sides compute the same turning.
  std::vector<std::array<int, 2>> diag;
  for (int k = 0; k < 40; ++k) diag.push_back({k, 2 * k});
  auto [ds, di] = verify_tau_preservation(p, dev.image, diag);
  CHECK(std::abs(ds - di) <= 1e-3 * (1.0 + ds));
}

TEST_CASE("curved tangent planes are rejected") {
  GridPatch p = sphere_cap_patch(1.0, 12, 12);
  CHECK(std::abs(patch_flatness(p) - 1.0) <= 1e-8);
  CHECK_THROWS_AS(surface_frame(p), NotFlatOnTangentPlanes);
  // Overriding the flatness gate only moves the failure to the transport
  // commutator.
  CHECK_THROWS_AS(surface_frame(p, 2.0), PathDependence);
}

TEST_CASE("negative control: scaled image fails the isometry check") {
  GridPatch p = strip_patch(1.0, 1.0, 40, 40);
  SurfaceFrame f = surface_frame(p);
  DevelopedPatch dev = develop_map(p, f);
  GridPatch scaled = dev.image;
  for (auto& q : scaled.x) q *= 1.01;
  IsometryReport rep = verify_isometry(p, scaled);
  CHECK_FALSE(rep.pass);
  CHECK(rep.max_inner_mismatch >= 5e-3);
  CHECK(rep.max_path_mismatch >= 5e-3);
}

TEST_CASE("negative control: perturbed frame fails normal correspondence") {
  GridPatch p = strip_patch(1.0, 1.0, 40, 40);
  SurfaceFrame f = surface_frame(p);
  DevelopedPatch dev = develop_map(p, f);
  CHECK(verify_normal_correspondence(p, f, dev.image) <= 1e-4);

  SurfaceFrame bad = f;
  const double th = 0.01;
  for (int i = 0; i < p.rows; ++i) {
    Eigen::Matrix3d& e = bad.e[p.idx(i, 20)];
    Eigen::Vector3d e1 = e.col(1), e2 = e.col(2);
    e.col(1) = std::cos(th) * e1 + std::sin(th) * e2;
    e.col(2) = -std::sin(th) * e1 + std::cos(th) * e2;
  }
  double defect = verify_normal_correspondence(p, bad, dev.image);
  CHECK(defect >= 5e-3);
  CHECK(defect <= 5e-2);
}

TEST_CASE("grid mismatches are rejected") {
  GridPatch p = strip_patch(1.0, 1.0, 20, 20);
  GridPatch q = strip_patch(1.0, 1.0, 30, 30);
  SurfaceFrame f = surface_frame(p);
  CHECK_THROWS_AS(develop_map(q, f), GridMismatch);
  DevelopedPatch dev = develop_map(p, f);
  CHECK_THROWS_AS(verify_isometry(q, dev.image), GridMismatch);
}

TEST_CASE("cube-sphere atlas develops consistently across seams") {
  std::vector<GridPatch> charts = cube_sphere_charts(17, 1.0, 0.12, 9);
  REQUIRE(charts.size() == 6);
  AtlasReport rep = develop_atlas(charts);
  // Every cube edge contributes a seam of shared nodes.
  CHECK(rep.seam_nodes >= 12 * 17);
  CHECK(rep.max_frame_mismatch <= 1e-12);
  CHECK(rep.max_seam_drift <= 1e-9);
  for (const auto& c : rep.charts) {
    CHECK(c.path_mismatch <= 1e-12);
    CHECK(c.differential_defect <= 1e-12);
  }
}
