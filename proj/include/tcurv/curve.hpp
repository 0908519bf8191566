#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "tcurv/space.hpp"

namespace tcurv {

// A curve sampled on a parameter grid, carrying chart points and chart
// velocities.  For arclength-parametrized curves the velocities have unit
// metric norm at every sample.  Between samples the curve is evaluated by
// cubic Hermite interpolation, which reproduces positions and velocities at
// the samples exactly.
struct SampledCurve {
  std::vector<double> t;
  std::vector<Eigen::VectorXd> x;
  std::vector<Eigen::VectorXd> v;

  int size() const { return static_cast<int>(t.size()); }
  double t0() const { return t.front(); }
  double t1() const { return t.back(); }
  double span() const { return t.back() - t.front(); }

  // Index of the cell [t_j, t_{j+1}] containing s; throws BoundaryParameter
  // outside the domain (with a 1e-9-span slack at the ends).
  int locate(double s) const;
  Eigen::VectorXd position(double s) const;
  Eigen::VectorXd velocity(double s) const;

  // Whether the chart endpoints coincide within tol.
  bool endpoints_coincide(double tol = 1e-9) const;
};

// Throws NonUnitSpeedCurve when any sampled velocity deviates from unit
// metric norm by more than tol.
void require_unit_speed(const ModelSpace& space, const SampledCurve& c, double tol = 1e-6);

// Curve traversed backwards: parameter s -> t0 + t1 - s.
SampledCurve reverse(const SampledCurve& c);

// Restriction to [a, b] sampled at m+1 points of the Hermite interpolant,
// with velocities rescaled to unit metric norm.
SampledCurve resample(const ModelSpace& space, const SampledCurve& c, double a, double b, int m);

// The geodesic from p to q sampled at m+1 points, unit speed, in closed
// form.  Throws DegenerateInput when p == q.
SampledCurve geodesic(const ModelSpace& space, const Eigen::VectorXd& p, const Eigen::VectorXd& q,
                      int m);

// --------------------------------------------------------------------------
// Fixtures.

// Metric circle of radius r about the chart origin, arclength parametrized
// over `turns` full revolutions (turns <= 1), m+1 samples.  Supported for
// euclidean2, hyperbolic2, and sphere2.
SampledCurve circle_curve(const ModelSpace& space, double r, int m, double turns = 1.0);

// Unit-speed curve of prescribed geodesic curvature kappa(s) >= 0 in a
// two-dimensional space, integrated from the chart origin.
SampledCurve prescribed_plane_curve(const ModelSpace& space, const std::function<double(double)>& kappa,
                                    double length, int m);

// Unit-speed curve in a three-dimensional space with |nabla_t gamma'| =
// kappa(s) and normal direction precessing at rate twist(s) about the
// tangent.  Starts at `origin` with tangent/normal given by the first two
// orthonormal basis directions there.
SampledCurve prescribed_space_curve(const ModelSpace& space, const std::function<double(double)>& kappa,
                                    const std::function<double(double)>& twist, double length, int m,
                                    const Eigen::VectorXd& origin);

// Random closed loop in euclidean3: low-order Fourier chart coordinates,
// reparametrized to unit speed, m+1 samples with matching endpoints.
SampledCurve random_loop_e3(uint64_t seed, int m, double scale = 1.0);

}  // namespace tcurv
