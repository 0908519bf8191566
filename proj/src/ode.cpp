#include "tcurv/ode.hpp"

#include <boost/numeric/odeint.hpp>
#include <boost/numeric/odeint/external/eigen/eigen.hpp>

#include "tcurv/errors.hpp"

namespace tcurv {

namespace odeint = boost::numeric::odeint;

std::vector<Eigen::VectorXd> integrate_at(const OdeRhs& f, const Eigen::VectorXd& y0,
                                          const std::vector<double>& times,
                                          const OdeOptions& opt) {
  if (times.empty()) return {};
  for (size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1]))
      throw IntegrationFailure("integration times must be strictly increasing");
  if (times.size() == 1) return {y0};

  using State = Eigen::VectorXd;
  auto stepper = odeint::make_controlled(
      opt.abs_tol, opt.rel_tol,
      odeint::runge_kutta_dopri5<State, double, State, double, odeint::vector_space_algebra>());

  std::vector<State> out;
  out.reserve(times.size());
  State y = y0;
  const double dt0 = (times.back() - times.front()) / 100.0;
  try {
    odeint::integrate_times(
        stepper, [&](const State& s, State& dsdt, double t) { f(s, dsdt, t); }, y, times.begin(),
        times.end(), dt0, [&](const State& s, double) { out.push_back(s); },
        odeint::max_step_checker(opt.max_steps));
  } catch (const std::exception& e) {
    throw IntegrationFailure(std::string("adaptive integration failed: ") + e.what());
  }
  if (out.size() != times.size())
    throw IntegrationFailure("integration did not reach all requested times");
  return out;
}

Eigen::VectorXd integrate_to(const OdeRhs& f, const Eigen::VectorXd& y0, double t0, double t1,
                             const OdeOptions& opt) {
  if (t1 == t0) return y0;
  if (t1 < t0) {
    // Reverse time: integrate s -> y(t0 + (t1 - t0) s) for s in [0, 1].
    const double span = t1 - t0;
    return integrate_to(
        [&](const Eigen::VectorXd& y, Eigen::VectorXd& dyds, double s) {
          f(y, dyds, t0 + span * s);
          dyds *= span;
        },
        y0, 0.0, 1.0, opt);
  }
  return integrate_at(f, y0, {t0, t1}, opt).back();
}

}  // namespace tcurv
