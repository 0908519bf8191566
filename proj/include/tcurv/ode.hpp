#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

namespace tcurv {

struct OdeOptions {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  // Step budget per observation interval; exceeding it raises
  // IntegrationFailure.
  int max_steps = 1000000;
};

// Right-hand side of dy/dt = f(y, t), writing into dydt.
using OdeRhs = std::function<void(const Eigen::VectorXd& y, Eigen::VectorXd& dydt, double t)>;

// Integrates from times.front() to times.back() with adaptive Dormand-Prince
// stepping and returns the states at every entry of `times`, which must be
// strictly increasing.  The first returned state is y0 itself.
std::vector<Eigen::VectorXd> integrate_at(const OdeRhs& f, const Eigen::VectorXd& y0,
                                          const std::vector<double>& times,
                                          const OdeOptions& opt = {});

// Final state only.
Eigen::VectorXd integrate_to(const OdeRhs& f, const Eigen::VectorXd& y0, double t0, double t1,
                             const OdeOptions& opt = {});

}  // namespace tcurv
