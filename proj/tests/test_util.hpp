#pragma once

#include <Eigen/Dense>
#include <random>
#include <vector>

#include "tcurv/space.hpp"

namespace tcurv::testutil {

inline Eigen::VectorXd gaussian(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> N(0.0, 1.0);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = N(rng);
  return v;
}

// Chart point at a scale where every chart is comfortably valid.
inline Eigen::VectorXd random_point(const ModelSpace& space, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const int n = space.dimension();
  Eigen::VectorXd dir = gaussian(rng, n).normalized();
  switch (space.kind()) {
    case SpaceKind::euclidean: return 2.0 * U(rng) * dir;
    case SpaceKind::hyperbolic: return 1.5 * U(rng) * dir;
    case SpaceKind::hyperbolic_klein: return 0.7 * U(rng) * dir;
    case SpaceKind::sphere: return 0.8 * U(rng) * dir;
    case SpaceKind::product_h2_r: {
      Eigen::VectorXd x(3);
      x.head(2) = 1.2 * U(rng) * gaussian(rng, 2).normalized();
      x[2] = 2.0 * U(rng) - 1.0;
      return x;
    }
  }
  return Eigen::VectorXd::Zero(n);
}

inline Eigen::VectorXd random_tangent(const ModelSpace& space, const Eigen::VectorXd& x,
                                      std::mt19937_64& rng, double norm = 1.0) {
  Eigen::VectorXd v = gaussian(rng, space.dimension());
  return v * (norm / space.norm(x, v));
}

// Least-squares slope of log(y) against log(x).
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const int n = static_cast<int>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

inline std::vector<SpacePtr> all_spaces() {
  return {make_space(SpaceKind::euclidean, 2),       make_space(SpaceKind::euclidean, 3),
          make_space(SpaceKind::hyperbolic, 2),      make_space(SpaceKind::hyperbolic, 3),
          make_space(SpaceKind::hyperbolic_klein, 3), make_space(SpaceKind::product_h2_r, 3),
          make_space(SpaceKind::sphere, 2)};
}

inline std::vector<SpacePtr> curved_spaces() {
  return {make_space(SpaceKind::hyperbolic, 2), make_space(SpaceKind::hyperbolic, 3),
          make_space(SpaceKind::hyperbolic_klein, 3), make_space(SpaceKind::product_h2_r, 3),
          make_space(SpaceKind::sphere, 2)};
}

}  // namespace tcurv::testutil
