#pragma once

#include <Eigen/Dense>
#include <memory>
#include <string>

#include "tcurv/tensor.hpp"

namespace tcurv {

enum class SpaceKind {
  euclidean,         // R^n, identity metric
  hyperbolic,        // H^n, curvature -1, hyperboloid chart (spatial coordinates)
  hyperbolic_klein,  // H^n, curvature -1, Klein ball chart (geodesics are straight)
  product_h2_r,      // H^2 x R, coordinates (x0, x1, z) with x in the H^2 hyperboloid chart
  sphere,            // S^2, curvature +1, stereographic chart; not Cartan-Hadamard
};

// A Riemannian model space presented in a single global chart.  Points and
// tangent vectors are chart coordinates; all inner products go through the
// metric.  Instances are immutable and safe to share across threads.
class ModelSpace {
 public:
  virtual ~ModelSpace() = default;

  int dimension() const { return n_; }
  SpaceKind kind() const { return kind_; }
  // True when the space is complete, simply connected, and every sectional
  // curvature is nonpositive.
  bool cartan_hadamard() const { return ch_; }
  std::string name() const;

  virtual bool chart_valid(const Eigen::VectorXd& x) const;

  virtual Eigen::MatrixXd metric(const Eigen::VectorXd& x) const = 0;
  // d(i,j,k) = d g_ij / d x^k, in closed form per space.
  virtual Tensor3 metric_derivative(const Eigen::VectorXd& x) const = 0;
  // c(k,i,j) = Gamma^k_{ij}, assembled from the metric and its derivative.
  Tensor3 christoffel(const Eigen::VectorXd& x) const;
  // Fully lowered tensor with R(i,j,k,l) = <R(e_i,e_j) e_k, e_l> where
  // R(X,Y) = [nabla_X, nabla_Y] - nabla_[X,Y].  Constant curvature K gives
  // R(i,j,k,l) = K (g_il g_jk - g_ik g_jl).
  virtual Tensor4 riemann(const Eigen::VectorXd& x) const = 0;

  virtual Eigen::VectorXd exp_map(const Eigen::VectorXd& x, const Eigen::VectorXd& v) const = 0;
  virtual Eigen::VectorXd log_map(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const = 0;
  virtual double distance(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const = 0;
  // Position and chart velocity at time t of the geodesic with gamma(0) = x,
  // gamma'(0) = u.  Closed form; the ODE route lives in transport code.
  virtual void geodesic_state(const Eigen::VectorXd& x, const Eigen::VectorXd& u, double t,
                              Eigen::VectorXd* pos, Eigen::VectorXd* vel) const = 0;

  double inner(const Eigen::VectorXd& x, const Eigen::VectorXd& u, const Eigen::VectorXd& v) const {
    return u.dot(metric(x) * v);
  }
  double norm(const Eigen::VectorXd& x, const Eigen::VectorXd& u) const {
    return std::sqrt(std::max(0.0, inner(x, u, u)));
  }
  // Columns form a g-orthonormal frame at x (inverse transpose Cholesky
  // factor of the metric); deterministic in x.
  Eigen::MatrixXd orthonormal_basis(const Eigen::VectorXd& x) const;

  // K(u,v) = R(u,v,v,u) / (|u|^2 |v|^2 - <u,v>^2).  Throws DegeneratePlane
  // when u, v fail to span a 2-plane.
  double sectional_curvature(const Eigen::VectorXd& x, const Eigen::VectorXd& u,
                             const Eigen::VectorXd& v) const;

 protected:
  ModelSpace(SpaceKind kind, int n, bool ch) : n_(n), kind_(kind), ch_(ch) {}

  int n_;
  SpaceKind kind_;
  bool ch_;
};

using SpacePtr = std::shared_ptr<const ModelSpace>;

// Tags: euclidean2, euclidean3, hyperbolic2, hyperbolic3, klein2, klein3,
// h2xr, sphere2.
SpacePtr make_space(SpaceKind kind, int n);
SpacePtr make_space(const std::string& tag);

// Chart conversions between the hyperboloid spatial chart and the Klein ball
// chart of the same hyperbolic space.
Eigen::VectorXd klein_from_hyperboloid(const Eigen::VectorXd& x);
Eigen::VectorXd hyperboloid_from_klein(const Eigen::VectorXd& y);
Eigen::VectorXd klein_tangent_from_hyperboloid(const Eigen::VectorXd& x, const Eigen::VectorXd& v);
Eigen::VectorXd hyperboloid_tangent_from_klein(const Eigen::VectorXd& y, const Eigen::VectorXd& w);

// Finite-difference cross-checks.  christoffel_fd differentiates the metric
// numerically; riemann_fd differentiates the analytic Christoffel symbols.
// Both are independent of the closed-form tensors they are checked against.
Tensor3 christoffel_fd(const ModelSpace& space, const Eigen::VectorXd& x, double h = 1e-5);
Tensor4 riemann_fd(const ModelSpace& space, const Eigen::VectorXd& x, double h = 1e-5);

}  // namespace tcurv
