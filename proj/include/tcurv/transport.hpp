#pragma once

#include <Eigen/Dense>
#include <vector>

#include "tcurv/curve.hpp"
#include "tcurv/ode.hpp"
#include "tcurv/space.hpp"

namespace tcurv {

// Parallel frames along a curve: frame[i] is an n x k matrix whose columns
// are the transported vectors at sample i.
struct FrameField {
  std::vector<double> t;
  std::vector<Eigen::VectorXd> x;
  std::vector<Eigen::MatrixXd> frame;
};

// Transports the columns of V (n x k) along the curve from parameter a to b
// by integrating dV^k/dt = -Gamma^k_ij gamma'^i V^j.  a may exceed b.
Eigen::MatrixXd parallel_transport(const ModelSpace& space, const SampledCurve& c,
                                   const Eigen::MatrixXd& V, double a, double b,
                                   const OdeOptions& opt = {});

// Transports the columns of V0 from the first sample to every sample in one
// integrator sweep.
FrameField propagate_frame(const ModelSpace& space, const SampledCurve& c,
                           const Eigen::MatrixXd& V0, const OdeOptions& opt = {});

// Parallel transport of the chart tangent w from p to q along the connecting
// geodesic, in closed form for the constant-curvature and product charts; the
// stereographic sphere chart falls back to the integrator.  Returns w when
// the chart points coincide.
Eigen::VectorXd geodesic_transport(const ModelSpace& space, const Eigen::VectorXd& p,
                                   const Eigen::VectorXd& q, const Eigen::VectorXd& w);

// Operator-norm defect || P - I ||_2 of the holonomy map of a closed loop,
// expressed in a metric-orthonormal basis at the start point.  Throws
// OpenLoop when the chart endpoints differ.
double holonomy_defect(const ModelSpace& space, const SampledCurve& loop,
                       const OdeOptions& opt = {});

// Holonomy matrix itself, in the orthonormal basis at the start point.
Eigen::MatrixXd holonomy_matrix(const ModelSpace& space, const SampledCurve& loop,
                                const OdeOptions& opt = {});

}  // namespace tcurv
