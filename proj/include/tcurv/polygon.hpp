#pragma once

#include <Eigen/Dense>
#include <vector>

namespace tcurv {

// Planar helpers for closed vertex cycles (implicit edge from the last
// vertex back to the first).

double signed_area(const std::vector<Eigen::Vector2d>& cycle);

// A cycle is convex when every turn has the same sign (up to tol) and the
// total turning is 2 pi.  Zero-length edges are skipped.
bool is_convex_cycle(const std::vector<Eigen::Vector2d>& cycle, double tol = 1e-9);

// Indices of the extreme points of the set, counterclockwise (monotone
// chain); points interior to hull edges are not included.
std::vector<int> convex_hull_indices(const std::vector<Eigen::Vector2d>& pts);

// Reflects pockets (maximal runs of non-extreme vertices) across the line
// through their bracketing extreme vertices, one pocket per iteration, until
// the cycle is convex or the flip budget runs out.  Reflection preserves
// every edge length; each flip is chord-nondecreasing because all vertices
// lie on one side of a supporting line of the hull.  Returns the number of
// flips, or -1 when the budget was exhausted before reaching convexity.
int convexify_by_flips(std::vector<Eigen::Vector2d>& cycle, int max_flips);

}  // namespace tcurv
