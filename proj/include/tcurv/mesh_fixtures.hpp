#pragma once

#include <cstdint>
#include <vector>

#include "tcurv/develop.hpp"
#include "tcurv/surface.hpp"

namespace tcurv {

// All fixtures carry normals evaluated from the parametrization, not from
// the mesh, so shape-operator errors stay second order in the edge length.

// Sphere of radius `radius` about the origin of euclidean3, built by
// subdividing an icosahedron `subdiv` times: 20 * 4^subdiv triangles.
TriSurface icosphere(int subdiv, double radius = 1.0);

// Torus of revolution in euclidean3: axis circle radius R, tube radius r,
// nu x nv parameter grid (2 nu nv triangles), genus 1.
TriSurface torus_surface(double R, double r, int nu, int nv);

// Geodesic sphere of radius r about the chart origin of hyperbolic3; chart
// points sit at Euclidean radius sinh(r).
TriSurface geodesic_sphere(double r, int subdiv);

// Radial graph over the unit sphere in euclidean3: rho(u) = radius * (1 +
// amplitude * B(u)) with B a seeded smooth bump field of unit sup-norm scale
// (sums of powers of dot products with random directions).  amplitude = 0
// reproduces the round sphere.
TriSurface bumpy_sphere(double radius, double amplitude, uint64_t seed, int subdiv);

// Radial graph in hyperbolic3: hyperbolic radius r(u) = r0 * (1 + amplitude
// * B(u)) along direction u.
TriSurface bumpy_geodesic_sphere(double r0, double amplitude, uint64_t seed, int subdiv);

// Open strip (geodesic segment in H^2) x (interval) inside h2xr: arclength
// s in [-half_length, half_length] along the geodesic through the origin,
// height z in [0, height].  Totally geodesic, GK = 0, flat tangent planes.
TriSurface flat_strip(double half_length, double height, int nu, int nv);

// ---------------------------------------------------------------------------
// Grid-parametrized patches for the developing pipeline.

// Planar rectangle [-extent, extent]^2 in euclidean3, pushed through a
// seeded rigid motion so nothing is axis aligned.
GridPatch plane_patch(double extent, int rows, int cols, uint64_t seed);

// The flat_strip surface as a grid: rows sample the height, columns the
// base geodesic.  Totally geodesic in h2xr.
GridPatch strip_patch(double half_length, double height, int rows, int cols);

// Vertical cylinder in h2xr over a circle of hyperbolic radius r (geodesic
// curvature coth r): columns sample an arc of length arc_length centered on
// azimuth 0, rows the height.  Tangent planes contain the line factor, so
// they are flat, but the strip is not totally geodesic.
GridPatch arc_strip_patch(double r, double arc_length, double height, int rows, int cols);

// Patch of the geodesic sphere of radius r in hyperbolic3 (polar box).
// Its tangent planes have sectional curvature -1.
GridPatch sphere_cap_patch(double r, int rows, int cols);

// Six-chart cube-sphere atlas of the bumpy sphere (amplitude 0 gives the
// round sphere) in euclidean3.  Each chart is an n x n node grid over one
// cube face, radially projected; adjacent charts share their edge nodes
// bitwise, so seams are detectable by coincidence.
std::vector<GridPatch> cube_sphere_charts(int n, double radius, double amplitude,
                                          uint64_t seed);

}  // namespace tcurv
