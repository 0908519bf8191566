#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <vector>

#include "tcurv/space.hpp"

namespace tcurv {

// Triangulated surface immersed in a 3-dimensional model space.  Vertices
// are chart coordinates, normals are chart tangent vectors of unit metric
// norm pointing outward, triangles are index triples oriented
// counterclockwise seen from outside.  Open meshes (strips) are legal for
// the per-vertex operations; the integral reports require a closed surface.
struct TriSurface {
  SpacePtr space;
  std::vector<Eigen::VectorXd> x;
  std::vector<Eigen::VectorXd> nu;
  std::vector<std::array<int, 3>> tri;
  int genus = 0;

  int vertices() const { return static_cast<int>(x.size()); }
  int triangles() const { return static_cast<int>(tri.size()); }
};

// Connectivity summary.  `link[i]` lists the 1-ring neighbor vertices of i
// (unordered); `closed` means every edge lies in exactly two triangles with
// opposite orientations.
struct MeshTopology {
  int vertices = 0;
  int edges = 0;
  int faces = 0;
  bool closed = false;
  bool oriented = false;
  int euler = 0;
  std::vector<std::vector<int>> link;
};
MeshTopology mesh_topology(const TriSurface& s);

// Throws DegenerateInput unless the mesh is a closed, consistently oriented
// 2-manifold whose Euler characteristic matches 2 - 2 genus and whose
// normals are unit within 1e-8.
void require_closed_surface(const TriSurface& s);

// Mesh quality figures used by the tests: worst |nu|_g deviation from 1 and
// worst angle defect (radians) between normals and incident edge directions
// measured from pi/2.
struct NormalQuality {
  double max_unit_defect = 0.0;
  double max_edge_angle_defect = 0.0;
};
NormalQuality normal_quality(const TriSurface& s);

// Mixed Voronoi vertex areas: within each triangle the circumcenter cell of
// a vertex when the triangle is acute, else half or a quarter of the
// triangle area depending on where the obtuse angle sits.  Triangle shapes
// are taken from geodesic edge lengths.  The areas of the triangles are
// partitioned exactly.
std::vector<double> vertex_areas(const TriSurface& s);

// Shape operator at a vertex: least-squares fit of S in
// nabla_e nu = S e over the 1-ring, both sides projected to the tangent
// plane of nu in a metric-orthonormal basis.  gk is det of the symmetrized
// operator; asymmetry is |S - S^T| / |S| before symmetrization.
struct VertexShape {
  Eigen::Matrix2d S;
  double gk = 0.0;
  double asymmetry = 0.0;
  Eigen::MatrixXd basis;  // n x 2, metric-orthonormal tangent basis used
};
VertexShape shape_operator(const TriSurface& s, int vertex);

// Integral curvature summary.  total_abs/total_signed/total_positive
// integrate |GK|, GK, and max(GK, 0) against the mixed Voronoi areas;
// ambient integrates the sectional curvature of the tangent planes; and
// gauss_bonnet = total_signed + ambient is the intrinsic curvature
// integral, to be compared with 2 pi chi.
struct CurvatureReport {
  double total_abs = 0.0;
  double total_signed = 0.0;
  double total_positive = 0.0;
  double ambient = 0.0;
  double gauss_bonnet = 0.0;
  double area = 0.0;
  double gb_defect = 0.0;       // |gauss_bonnet - 2 pi chi|
  double max_asymmetry = 0.0;   // worst shape-operator asymmetry seen
};
CurvatureReport curvature_report(const TriSurface& s);

// Per-vertex Gauss-Kronecker curvatures (det of the symmetrized shape
// operator), for callers that integrate over vertex subsets.
std::vector<double> vertex_gauss_kronecker(const TriSurface& s);

// Flows every vertex the distance t along its outward normal geodesic and
// carries the normals along (the flow velocity is the normal of the offset
// surface).  Requires a Cartan-Hadamard ambient and a surface certified
// convex by the hull module.
TriSurface parallel_surface(const TriSurface& s, double t);

// Area of the image of the normal map on the unit sphere, counted with
// multiplicity: the sum of |solid angle| of the per-triangle normal
// triangles.  min_multiplicity is the smallest number of triangles covering
// +-w over `directions` sampled directions w (preimage count of a projective
// point).  Euclidean ambient only.
struct GaussMapArea {
  double area_with_multiplicity = 0.0;
  int min_multiplicity = 0;
};
GaussMapArea gauss_map_area(const TriSurface& s, int directions = 64, uint64_t seed = 2026);

// Largest |sectional curvature of the tangent plane| over the vertices.
double flatness_scan(const TriSurface& s);

}  // namespace tcurv
