#include "tcurv/curve_ops.hpp"

#include <algorithm>
#include <cmath>

#include "tcurv/errors.hpp"
#include "tcurv/transport.hpp"

namespace tcurv {

using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

double sphere_angle(const VectorXd& a, const VectorXd& b) {
  return 2.0 * std::asin(std::min(1.0, (b - a).norm() / 2.0));
}

int cell_of(const std::vector<double>& t, double s) {
  const auto it = std::upper_bound(t.begin(), t.end(), s);
  return std::clamp(static_cast<int>(it - t.begin()) - 1, 0, static_cast<int>(t.size()) - 2);
}

}  // namespace

double TurningProfile::tau(double ta, double tb) const {
  if (tb < ta) std::swap(ta, tb);
  const double slack = 1e-9 * std::max(1.0, t.back() - t.front());
  if (ta < t.front() - slack || tb > t.back() + slack)
    throw BoundaryParameter("turning interval outside curve domain");
  ta = std::clamp(ta, t.front(), t.back());
  tb = std::clamp(tb, t.front(), t.back());
  const int i = cell_of(t, ta), j = cell_of(t, tb);
  const double wi = (ta - t[i]) / (t[i + 1] - t[i]);
  const double wj = (tb - t[j]) / (t[j + 1] - t[j]);
  const double angle_i = prefix[i + 1] - prefix[i];
  const double angle_j = prefix[j + 1] - prefix[j];
  if (i == j) return (wj - wi) * angle_i;
  return (1.0 - wi) * angle_i + (prefix[j] - prefix[i + 1]) + wj * angle_j;
}

TurningProfile turning_profile(const ModelSpace& space, const SampledCurve& c) {
  require_unit_speed(space, c);
  const int n = space.dimension();
  const FrameField f = propagate_frame(space, c, space.orthonormal_basis(c.x.front()));
  TurningProfile p;
  p.t = c.t;
  p.a.resize(c.size());
  p.prefix.assign(c.size(), 0.0);
  for (int i = 0; i < c.size(); ++i) {
    // Components of the unit tangent in the transported frame.  The frame
    // stays orthonormal under transport, so a least-squares solve against
    // the metric Gram matrix recovers them; normalize to absorb integration
    // error.
    const MatrixXd& E = f.frame[i];
    const MatrixXd g = space.metric(c.x[i]);
    VectorXd a(n);
    for (int k = 0; k < n; ++k) a[k] = c.v[i].dot(g * E.col(k));
    p.a[i] = a / a.norm();
  }
  for (int i = 1; i < c.size(); ++i)
    p.prefix[i] = p.prefix[i - 1] + sphere_angle(p.a[i - 1], p.a[i]);
  return p;
}

double total_curvature(const ModelSpace& space, const SampledCurve& c, double a, double b) {
  return turning_profile(space, c).tau(a, b);
}

double total_curvature(const ModelSpace& space, const SampledCurve& c) {
  return turning_profile(space, c).total();
}

double CurvatureProfile::max_kappa() const {
  double m = 0.0;
  for (double k : kappa) m = std::max(m, k);
  return m;
}

CurvatureProfile geodesic_curvature_profile(const ModelSpace& space, const SampledCurve& c) {
  require_unit_speed(space, c);
  const int m = c.size();
  if (m < 3) throw DegenerateInput("curvature profile needs at least three samples");
  CurvatureProfile out;
  out.t.reserve(m - 2);
  out.kappa.reserve(m - 2);
  for (int i = 1; i + 1 < m; ++i) {
    const VectorXd vdot = (c.v[i + 1] - c.v[i - 1]) / (c.t[i + 1] - c.t[i - 1]);
    VectorXd cov = vdot;
    const Tensor3 G = space.christoffel(c.x[i]);
    const int n = space.dimension();
    for (int k = 0; k < n; ++k) {
      double s = 0.0;
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) s += G(k, a, b) * c.v[i][a] * c.v[i][b];
      cov[k] += s;
    }
    out.t.push_back(c.t[i]);
    out.kappa.push_back(space.norm(c.x[i], cov));
  }
  return out;
}

namespace {

// Chord length 2h centered at t, evaluated at exact samples when t +- h hits
// the grid (to machine precision) and through the Hermite interpolant
// otherwise.
double chord(const ModelSpace& space, const SampledCurve& c, double t, double h) {
  auto eval = [&](double s) -> VectorXd {
    const int j = cell_of(c.t, s);
    if (std::abs(s - c.t[j]) < 1e-9) return c.x[j];
    if (std::abs(s - c.t[j + 1]) < 1e-9) return c.x[j + 1];
    return c.position(s);
  };
  return space.distance(eval(t - h), eval(t + h));
}

}  // namespace

ChordFit chord_curvature_fit(const ModelSpace& space, const SampledCurve& c, double t,
                             const std::vector<double>& hs) {
  require_unit_speed(space, c);
  if (hs.empty()) throw DegenerateInput("chord fit needs at least one stencil width");
  double num = 0.0, den = 0.0;
  std::vector<double> gap(hs.size());
  for (size_t i = 0; i < hs.size(); ++i) {
    const double h = hs[i];
    if (h <= 0.0) throw DegenerateInput("chord stencil width must be positive");
    if (t - h < c.t.front() - 1e-12 || t + h > c.t.back() + 1e-12)
      throw BoundaryParameter("chord stencil leaves the curve domain");
    gap[i] = 2.0 * h - chord(space, c, t, h);
    num += gap[i] * h * h * h;
    den += std::pow(h, 6);
  }
  ChordFit fit;
  fit.coefficient = num / den;
  const double hmin = *std::min_element(hs.begin(), hs.end());
  if (fit.coefficient < -1e-7 / (hmin * hmin * hmin))
    throw NegativeFitCoefficient("chord gap fit gave a negative h^3 coefficient");
  fit.kappa_hat = std::sqrt(3.0 * std::max(0.0, fit.coefficient));
  for (size_t i = 0; i < hs.size(); ++i)
    fit.max_residual = std::max(fit.max_residual,
                                std::abs(gap[i] - fit.coefficient * hs[i] * hs[i] * hs[i]));
  return fit;
}

ChordBoundReport uniform_chord_bound_check(const ModelSpace& space, const SampledCurve& c, double C,
                                           double h_max, double tol) {
  require_unit_speed(space, c);
  ChordBoundReport rep;
  rep.worst_margin = std::numeric_limits<double>::infinity();
  const int m = c.size();
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      const double h = (c.t[j] - c.t[i]) / 2.0;
      if (h > h_max) break;
      const double t = (c.t[i] + c.t[j]) / 2.0;
      const double margin = 2.0 * h - C * h * h * h - space.distance(c.x[i], c.x[j]);
      if (margin < rep.worst_margin) {
        rep.worst_margin = margin;
        rep.worst_t = t;
        rep.worst_h = h;
      }
    }
  }
  rep.holds = rep.worst_margin >= -tol;
  return rep;
}

TwoPointDefect two_point_defect(const ModelSpace& space, const VectorXd& o, const VectorXd& a,
                                const VectorXd& b, double max_radius) {
  const double na = space.norm(o, a), nb = space.norm(o, b);
  if (na > max_radius || nb > max_radius)
    throw RadiusTooLarge("two-point probe outside the allowed normal ball");
  TwoPointDefect d;
  const double dist = space.distance(space.exp_map(o, a), space.exp_map(o, b));
  d.measured_sq = dist * dist;
  const VectorXd diff = a - b;
  d.flat_sq = space.inner(o, diff, diff);
  d.defect = d.measured_sq - d.flat_sq;
  d.predicted = -contract(space.riemann(o), a, b, b, a) / 3.0;
  return d;
}

}  // namespace tcurv
