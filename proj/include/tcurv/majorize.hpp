#pragma once

#include <Eigen/Dense>
#include <vector>

#include "tcurv/curve.hpp"
#include "tcurv/space.hpp"

namespace tcurv {

// Planar polygonal curve of nondecreasing direction: constant speed, knots
// t_0 <= ... <= t_m, edge j pointing at angle theta_j on [t_j, t_{j+1}).
// Vertices are cached; they always satisfy
//   verts[j+1] = verts[j] + speed (t_{j+1} - t_j) (cos theta_j, sin theta_j).
struct TurningCurve {
  double speed = 1.0;
  std::vector<double> knots;
  std::vector<double> theta;
  std::vector<Eigen::Vector2d> verts;

  int edges() const { return static_cast<int>(theta.size()); }
  double span() const { return knots.back() - knots.front(); }
  double length() const { return speed * span(); }
  double total_turn() const { return theta.back() - theta.front(); }

  // Index of the edge whose half-open parameter cell contains t.
  int edge_of(double t) const;
  Eigen::Vector2d point_at(double t) const;
  Eigen::Vector2d chord() const { return verts.back() - verts.front(); }

  // Turning measure of [a, b]: theta at the edge containing b minus theta at
  // the edge containing a.
  double turning(double a, double b) const;

  // Max deviation between stored vertices and vertices rebuilt from
  // (speed, knots, theta).
  double reconstruction_error() const;

  // Whether the curve closed by its endpoint chord bounds a convex region.
  bool chord_convex(double tol = 1e-9) const;
};

// Builds a TurningCurve with the given knot grid whose edge angles are the
// averages of an integrated direction profile; used to generate analytic
// comparison curves.  theta_fn must be nondecreasing.
TurningCurve turning_curve_from_direction(const std::vector<double>& knots,
                                          const std::function<double(double)>& theta_fn,
                                          double speed = 1.0);

struct MajorizeOptions {
  double tol_chord_rel = 1e-6;  // relative chord-domination slack
  double tol_length = 1e-8;     // polygon arclength must match this closely
  double tol_proper = 1e-8;     // endpoint chord mismatch, per unit length
  double tol_turn = 1e-4;       // turning may exceed curve turning by this
  int max_flips = 100000;
  int max_refine = 3;  // construction grids m, 2m, 4m, ...
};

struct MajorizeReport {
  TurningCurve majorant;
  SampledCurve used;         // the curve samples the certificate refers to
  bool closed = false;       // endpoint chord degenerate
  int refinement = 1;        // grid multiplier of the verified construction
  int flips = 0;
  double worst_chord_deficit = 0.0;  // max of dist(q_i,q_j) - |p_i - p_j|
  double arclength_error = 0.0;
  double properness_error = 0.0;
  double worst_turning_excess = 0.0;
};

// Convex planar majorant of a unit-speed curve: comparison triangles against
// the starting point are developed into the plane as a fan and the resulting
// polygon is convexified by pocket flips, which preserve edge lengths and
// never shrink a chord.  All postconditions are then verified on the sample
// grid; failing grids are refined up to max_refine times before
// MajorizationUnverified is thrown.
MajorizeReport majorize(const ModelSpace& space, const SampledCurve& c,
                        const MajorizeOptions& opt = {});

// Worst window excess of majorant turning over curve turning; the majorant
// edge grid must match the curve cells (GridMismatch otherwise).  Windows
// are aligned at cell midpoints on the curve side.
double curvature_nonincrease_check(const ModelSpace& space, const SampledCurve& c,
                                   const TurningCurve& majorant);

struct SchurOptions {
  int dyadic_levels = 10;
  double tol_rel = 1e-8;
};

struct SchurReport {
  bool chord_convex = false;
  double hypothesis_margin = 0.0;  // max over dyadic I of tau_2(I) - tau_1(I)
  double conclusion_margin = 0.0;  // d(gamma_2 ends) - |gamma_1 chord|
  bool hypothesis_ok = false;      // chord convex and margin <= tolerance
  bool conclusion_ok = false;
  bool pass = false;  // hypothesis_ok implies conclusion_ok
};

// Checks the comparison statement: if the planar convex curve turns at least
// as much as gamma_2 on every dyadic parameter window, its endpoint chord
// can be no longer than gamma_2's.  Both curves must share their parameter
// span; the ambient space must be Cartan-Hadamard.
SchurReport schur_verify(const ModelSpace& space, const TurningCurve& g1, const SampledCurve& g2,
                         const SchurOptions& opt = {});

}  // namespace tcurv
