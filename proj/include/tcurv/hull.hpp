#pragma once

#include <Eigen/Dense>
#include <array>
#include <vector>

#include "tcurv/space.hpp"
#include "tcurv/surface.hpp"

namespace tcurv {

// Convex hull of points in a 3-dimensional Euclidean or hyperbolic space.
// Hyperbolic inputs are mapped to the Klein ball, where geodesic planes are
// affine planes, so the combinatorics reduce to a Euclidean hull; metric
// quantities are evaluated back in the original chart.  `facets` index the
// input points, oriented outward; `neighbor[f][e]` is the facet across edge
// e of facet f (edges in the order ab, bc, ca).
struct ConvexHull {
  SpacePtr space;
  std::vector<Eigen::VectorXd> points;   // input chart coordinates
  std::vector<Eigen::Vector3d> work;     // Klein (or Euclidean) coordinates
  std::vector<int> extreme;              // sorted indices of facet vertices
  std::vector<std::array<int, 3>> facets;
  std::vector<std::array<int, 3>> neighbor;
  Eigen::Vector3d interior;              // point strictly inside, work coords
  double diameter = 0.0;                 // work-coordinate diameter estimate
};

ConvexHull convex_hull(const SpacePtr& space, const std::vector<Eigen::VectorXd>& pts);

// Signed sidedness of point `p` against facet `f` in work coordinates:
// positive outside, ~0 on the supporting plane, negative inside, scaled to
// Euclidean distance.
double facet_side(const ConvexHull& h, int f, const Eigen::Vector3d& p);

// Convexity certificate for a closed surface: the hull of its vertices must
// leave no vertex strictly inside.  max_violation is the largest depth of a
// vertex below the hull boundary (work coordinates); interior_count counts
// vertices deeper than the tolerance.
struct ConvexityCert {
  bool convex = false;
  double max_violation = 0.0;
  int interior_count = 0;
};
ConvexityCert certify_convex(const TriSurface& s, double tol_rel = 1e-7);

// Total curvature of the hull boundary: the sum over hull vertices of the
// solid angle of the outward normal cone, measured in a metric-orthonormal
// frame at the vertex.  Exactly 4 pi for Euclidean polytopes.
double hull_boundary_curvature(const ConvexHull& h);

// The chain total_abs >= total_pos >= restricted_pos ~= hull_curv >= 4 pi
// evaluated on one surface; restricted_pos integrates max(GK, 0) over the
// vertices lying on the hull boundary.  `pass` asserts the ordering within
// `slack`.
struct ChainReport {
  double total_abs = 0.0;
  double total_pos = 0.0;
  double restricted_pos = 0.0;
  double hull_curv = 0.0;
  double slack = 0.0;
  bool pass = false;
};
ChainReport kleiner_chain(const TriSurface& s, double slack = 0.005 * 4.0 * M_PI);

// Aperture of the tangent cone at input point `index`, which must lie on the
// hull boundary: pi minus the largest metric angle between supporting-facet
// normals at the point.  Smooth boundary points have aperture pi; cone
// apexes stay bounded away from it.  Throws InteriorPoint for points
// strictly inside.
double tangent_cone_aperture(const ConvexHull& h, int index);

}  // namespace tcurv
