#pragma once

#include <Eigen/Dense>
#include <cmath>

namespace tcurv {
namespace hyperboloid {

// A chart point xb in R^n lifts to X = (x0, xb) with x0 = sqrt(1 + |xb|^2)
// on the upper sheet of <X,X>_M = -1, where <U,V>_M = -U0 V0 + Ub . Vb.
// A chart tangent vb lifts to V = ((xb . vb)/x0, vb), Minkowski-orthogonal
// to X.  Projecting an ambient tangent back to the chart drops the first
// component.

inline Eigen::VectorXd lift_point(const Eigen::VectorXd& xb) {
  Eigen::VectorXd X(xb.size() + 1);
  X[0] = std::sqrt(1.0 + xb.squaredNorm());
  X.tail(xb.size()) = xb;
  return X;
}

inline Eigen::VectorXd lift_tangent(const Eigen::VectorXd& xb, const Eigen::VectorXd& vb) {
  Eigen::VectorXd V(vb.size() + 1);
  V[0] = xb.dot(vb) / std::sqrt(1.0 + xb.squaredNorm());
  V.tail(vb.size()) = vb;
  return V;
}

inline double minkowski(const Eigen::VectorXd& U, const Eigen::VectorXd& V) {
  return -U[0] * V[0] + U.tail(U.size() - 1).dot(V.tail(V.size() - 1));
}

// c - 1 for c = -<X,Y>_M, computed as -<X-Y,X-Y>_M / 2.  Differencing first
// avoids the cancellation of -<X,Y> against 1 for nearby points, where the
// direct product only resolves c - 1 to about 1e-16 |X|^2.
inline double minkowski_cm1(const Eigen::VectorXd& X, const Eigen::VectorXd& Y) {
  const Eigen::VectorXd D = X - Y;
  return (D.tail(D.size() - 1).squaredNorm() - D[0] * D[0]) / 2.0;
}

// Distance from c - 1; the form 2 asinh(sqrt((c-1)/2)) stays accurate for
// nearby points where acosh(c) loses digits.
inline double distance_from_cm1(double cm1) {
  return 2.0 * std::asinh(std::sqrt(std::max(0.0, cm1 / 2.0)));
}

// Parallel transport of the ambient tangent W from X to Y along the
// connecting geodesic: W + <W, Y>_M / (1 - <X,Y>_M) (X + Y).  Verified by
// transporting the departing velocity onto the arriving velocity.
inline Eigen::VectorXd transport(const Eigen::VectorXd& X, const Eigen::VectorXd& Y,
                                 const Eigen::VectorXd& W) {
  const double denom = 2.0 + minkowski_cm1(X, Y);
  // <W, Y> = <W, Y - X> since W is tangent at X; the difference form keeps
  // accuracy for nearby points.
  const double wy = minkowski(W, Y - X);
  return W + (wy / denom) * (X + Y);
}

}  // namespace hyperboloid
}  // namespace tcurv
