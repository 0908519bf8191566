#pragma once

#include <Eigen/Dense>
#include <vector>

#include "tcurv/curve.hpp"
#include "tcurv/space.hpp"

namespace tcurv {

// Components of the unit tangent in a parallel orthonormal frame along the
// curve.  Total curvature over [a, b] is the length of this spherical
// polyline (the tangent indicatrix), with fractional cells weighted
// linearly, which corresponds to great-circle interpolation and makes
// tau(a,b) + tau(b,c) = tau(a,c) hold to roundoff.
struct TurningProfile {
  std::vector<double> t;
  std::vector<Eigen::VectorXd> a;   // unit tangent components, one per sample
  std::vector<double> prefix;       // prefix[i] = indicatrix length over [t_0, t_i]

  double tau(double ta, double tb) const;
  double total() const { return prefix.back(); }
};

TurningProfile turning_profile(const ModelSpace& space, const SampledCurve& c);

// Indicatrix length of the unit tangent over [a, b]; requires unit speed.
double total_curvature(const ModelSpace& space, const SampledCurve& c, double a, double b);
double total_curvature(const ModelSpace& space, const SampledCurve& c);

// Pointwise geodesic curvature |nabla_t gamma'| at the interior samples,
// by centered differences of the sampled velocities; first and last samples
// are omitted.
struct CurvatureProfile {
  std::vector<double> t;
  std::vector<double> kappa;
  double max_kappa() const;
};
CurvatureProfile geodesic_curvature_profile(const ModelSpace& space, const SampledCurve& c);

// Fits |gamma(t-h) gamma(t+h)| = 2h - (kappa^2/3) h^3 over the given h list
// and returns the fitted kappa plus diagnostics.  Throws BoundaryParameter
// when a stencil leaves the domain and NegativeFitCoefficient when the
// fitted h^3 coefficient is negative beyond noise.
struct ChordFit {
  double kappa_hat = 0.0;
  double coefficient = 0.0;   // fitted (kappa^2 / 3)
  double max_residual = 0.0;  // worst absolute misfit of the model over the h list
};
ChordFit chord_curvature_fit(const ModelSpace& space, const SampledCurve& c, double t,
                             const std::vector<double>& hs);

// Checks the uniform two-sided bound |gamma(t-h) gamma(t+h)| <= 2h - C h^3
// on the whole sample grid for h up to h_max.  worst_margin is the minimum
// of (2h - C h^3 - chord); the bound holds when it is >= -tol.
struct ChordBoundReport {
  bool holds = false;
  double worst_margin = 0.0;
  double worst_t = 0.0;
  double worst_h = 0.0;
};
ChordBoundReport uniform_chord_bound_check(const ModelSpace& space, const SampledCurve& c, double C,
                                           double h_max, double tol = 1e-12);

// Second-order defect of two-point distances in normal coordinates:
// d(exp_o a, exp_o b)^2 - |a - b|^2_o, against the curvature prediction
// -(1/3) R_o(a, b, b, a).  Throws RadiusTooLarge when |a| or |b| exceeds
// max_radius.
struct TwoPointDefect {
  double measured_sq = 0.0;   // squared two-point distance
  double flat_sq = 0.0;       // |a - b|^2 in the metric at o
  double defect = 0.0;        // measured_sq - flat_sq
  double predicted = 0.0;     // -(1/3) R(a,b,b,a)
};
TwoPointDefect two_point_defect(const ModelSpace& space, const Eigen::VectorXd& o,
                                const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                                double max_radius = 0.75);

}  // namespace tcurv
