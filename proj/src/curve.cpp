#include "tcurv/curve.hpp"

#include <algorithm>
#include <cmath>

#include "tcurv/errors.hpp"
#include "tcurv/ode.hpp"
#include "tcurv/rng.hpp"

namespace tcurv {

using Eigen::MatrixXd;
using Eigen::VectorXd;

int SampledCurve::locate(double s) const {
  const double slack = 1e-9 * std::max(1.0, span());
  if (s < t.front() - slack || s > t.back() + slack)
    throw BoundaryParameter("parameter outside curve domain");
  const auto it = std::upper_bound(t.begin(), t.end(), s);
  int j = static_cast<int>(it - t.begin()) - 1;
  return std::clamp(j, 0, size() - 2);
}

namespace {

// Cubic Hermite value and derivative on one cell.
void hermite(const SampledCurve& c, int j, double s, VectorXd* pos, VectorXd* vel) {
  const double dt = c.t[j + 1] - c.t[j];
  const double u = (s - c.t[j]) / dt;
  const double u2 = u * u, u3 = u2 * u;
  if (pos) {
    *pos = (2 * u3 - 3 * u2 + 1) * c.x[j] + (u3 - 2 * u2 + u) * dt * c.v[j] +
           (-2 * u3 + 3 * u2) * c.x[j + 1] + (u3 - u2) * dt * c.v[j + 1];
  }
  if (vel) {
    *vel = ((6 * u2 - 6 * u) / dt) * c.x[j] + (3 * u2 - 4 * u + 1) * c.v[j] +
           ((-6 * u2 + 6 * u) / dt) * c.x[j + 1] + (3 * u2 - 2 * u) * c.v[j + 1];
  }
}

}  // namespace

VectorXd SampledCurve::position(double s) const {
  VectorXd p;
  hermite(*this, locate(s), s, &p, nullptr);
  return p;
}

VectorXd SampledCurve::velocity(double s) const {
  VectorXd v;
  hermite(*this, locate(s), s, nullptr, &v);
  return v;
}

bool SampledCurve::endpoints_coincide(double tol) const { return (x.front() - x.back()).norm() <= tol; }

void require_unit_speed(const ModelSpace& space, const SampledCurve& c, double tol) {
  for (int i = 0; i < c.size(); ++i) {
    const double s = space.norm(c.x[i], c.v[i]);
    if (std::abs(s - 1.0) > tol)
      throw NonUnitSpeedCurve("sampled speed " + std::to_string(s) + " at index " +
                              std::to_string(i));
  }
}

SampledCurve reverse(const SampledCurve& c) {
  SampledCurve r;
  const int m = c.size();
  r.t.resize(m);
  r.x.resize(m);
  r.v.resize(m);
  const double a = c.t.front(), b = c.t.back();
  for (int i = 0; i < m; ++i) {
    r.t[i] = a + (b - c.t[m - 1 - i]);
    r.x[i] = c.x[m - 1 - i];
    r.v[i] = -c.v[m - 1 - i];
  }
  return r;
}

SampledCurve resample(const ModelSpace& space, const SampledCurve& c, double a, double b, int m) {
  SampledCurve r;
  r.t.resize(m + 1);
  r.x.resize(m + 1);
  r.v.resize(m + 1);
  for (int i = 0; i <= m; ++i) {
    const double s = a + (b - a) * i / m;
    r.t[i] = s;
    VectorXd p, v;
    hermite(c, c.locate(s), s, &p, &v);
    const double sp = space.norm(p, v);
    r.x[i] = p;
    r.v[i] = sp > 1e-300 ? VectorXd(v / sp) : v;
  }
  return r;
}

SampledCurve geodesic(const ModelSpace& space, const VectorXd& p, const VectorXd& q, int m) {
  const double d = space.distance(p, q);
  if (d < 1e-14) throw DegenerateInput("geodesic endpoints coincide");
  const VectorXd u = space.log_map(p, q) / d;
  SampledCurve c;
  c.t.resize(m + 1);
  c.x.resize(m + 1);
  c.v.resize(m + 1);
  for (int i = 0; i <= m; ++i) {
    c.t[i] = d * i / m;
    space.geodesic_state(p, u, c.t[i], &c.x[i], &c.v[i]);
  }
  return c;
}

SampledCurve circle_curve(const ModelSpace& space, double r, int m, double turns) {
  if (r <= 0.0) throw DegenerateInput("circle radius must be positive");
  SampledCurve c;
  c.t.resize(m + 1);
  c.x.resize(m + 1);
  c.v.resize(m + 1);
  auto fill = [&](double circumference, auto point, auto tangent) {
    const double L = turns * circumference;
    for (int i = 0; i <= m; ++i) {
      const double s = L * i / m;
      const double phi = 2.0 * M_PI * turns * i / m;
      c.t[i] = s;
      c.x[i] = point(phi);
      c.v[i] = tangent(phi);
    }
  };
  const auto dir = [](double phi) { return Eigen::Vector2d(std::cos(phi), std::sin(phi)); };
  const auto ccw = [](double phi) { return Eigen::Vector2d(-std::sin(phi), std::cos(phi)); };
  switch (space.kind()) {
    case SpaceKind::euclidean:
      if (space.dimension() != 2) throw UnsupportedSpace("circle fixture is planar");
      fill(2.0 * M_PI * r, [&](double phi) { return VectorXd(r * dir(phi)); },
           [&](double phi) { return VectorXd(ccw(phi)); });
      return c;
    case SpaceKind::hyperbolic:
      if (space.dimension() != 2) throw UnsupportedSpace("circle fixture is planar");
      // Geodesic circle of radius r about the origin lies at chart radius
      // sinh(r); its circumference is 2 pi sinh(r).
      fill(2.0 * M_PI * std::sinh(r), [&](double phi) { return VectorXd(std::sinh(r) * dir(phi)); },
           [&](double phi) { return VectorXd(ccw(phi)); });
      return c;
    case SpaceKind::sphere: {
      if (r >= M_PI) throw DegenerateInput("sphere circle radius must be below pi");
      const double rho = std::tan(r / 2.0);
      fill(2.0 * M_PI * std::sin(r), [&](double phi) { return VectorXd(rho * dir(phi)); },
           [&](double phi) { return VectorXd((rho / std::sin(r)) * ccw(phi)); });
      return c;
    }
    default:
      throw UnsupportedSpace("circle fixture not defined for " + space.name());
  }
}

namespace {

// Oriented rotation by +90 degrees in the metric sense: J v is the unit
// normal of unit v with (v, Jv) positively oriented in the chart.
VectorXd rotate90(const ModelSpace& space, const VectorXd& x, const VectorXd& v) {
  const MatrixXd B = space.orthonormal_basis(x);  // upper triangular, det > 0
  const Eigen::Vector2d a = B.inverse() * v;
  return B * Eigen::Vector2d(-a[1], a[0]);
}

// Metric cross product in a three-dimensional space via an oriented
// orthonormal frame.
VectorXd cross_g(const ModelSpace& space, const VectorXd& x, const VectorXd& u, const VectorXd& w) {
  const MatrixXd B = space.orthonormal_basis(x);
  const MatrixXd Binv = B.inverse();
  const Eigen::Vector3d a = Binv * u, b = Binv * w;
  return B * a.cross(b);
}

VectorXd gamma_quadratic(const Tensor3& G, const VectorXd& u, const VectorXd& w) {
  const int n = G.dim();
  VectorXd out = VectorXd::Zero(n);
  for (int k = 0; k < n; ++k) {
    double s = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) s += G(k, i, j) * u[i] * w[j];
    out[k] = s;
  }
  return out;
}

SampledCurve curve_from_states(const ModelSpace& space, const std::vector<double>& times,
                               const std::vector<VectorXd>& states) {
  const int n = space.dimension();
  SampledCurve c;
  c.t = times;
  c.x.resize(states.size());
  c.v.resize(states.size());
  for (size_t i = 0; i < states.size(); ++i) {
    c.x[i] = states[i].head(n);
    VectorXd v = states[i].segment(n, n);
    c.v[i] = v / space.norm(c.x[i], v);
  }
  return c;
}

}  // namespace

SampledCurve prescribed_plane_curve(const ModelSpace& space, const std::function<double(double)>& kappa,
                                    double length, int m) {
  if (space.dimension() != 2) throw UnsupportedSpace("prescribed-curvature plane curve needs n = 2");
  const VectorXd origin = VectorXd::Zero(2);
  VectorXd y0(4);
  y0.head(2) = origin;
  y0.tail(2) = space.orthonormal_basis(origin).col(0);
  auto rhs = [&](const VectorXd& y, VectorXd& dydt, double s) {
    const VectorXd x = y.head(2), v = y.tail(2);
    dydt.resize(4);
    dydt.head(2) = v;
    dydt.tail(2) = -gamma_quadratic(space.christoffel(x), v, v) + kappa(s) * rotate90(space, x, v);
  };
  std::vector<double> times(m + 1);
  for (int i = 0; i <= m; ++i) times[i] = length * i / m;
  return curve_from_states(space, times, integrate_at(rhs, y0, times));
}

SampledCurve prescribed_space_curve(const ModelSpace& space, const std::function<double(double)>& kappa,
                                    const std::function<double(double)>& twist, double length, int m,
                                    const VectorXd& origin) {
  if (space.dimension() != 3) throw UnsupportedSpace("prescribed-curvature space curve needs n = 3");
  const MatrixXd B = space.orthonormal_basis(origin);
  VectorXd y0(9);
  y0.head(3) = origin;
  y0.segment(3, 3) = B.col(0);
  y0.tail(3) = B.col(1);
  auto rhs = [&](const VectorXd& y, VectorXd& dydt, double s) {
    const VectorXd x = y.head(3), v = y.segment(3, 3), N = y.tail(3);
    const Tensor3 G = space.christoffel(x);
    dydt.resize(9);
    dydt.head(3) = v;
    // nabla_t v = kappa N and nabla_t N = -kappa v + twist (v x N) keep the
    // pair orthonormal, so |nabla_t gamma'| = kappa along the whole curve.
    dydt.segment(3, 3) = -gamma_quadratic(G, v, v) + kappa(s) * N;
    dydt.tail(3) = -gamma_quadratic(G, v, N) - kappa(s) * v + twist(s) * cross_g(space, x, v, N);
  };
  std::vector<double> times(m + 1);
  for (int i = 0; i <= m; ++i) times[i] = length * i / m;
  return curve_from_states(space, times, integrate_at(rhs, y0, times));
}

SampledCurve random_loop_e3(uint64_t seed, int m, double scale) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  constexpr int kModes = 4;
  double A[3][kModes], B[3][kModes];
  for (int d = 0; d < 3; ++d)
    for (int k = 0; k < kModes; ++k) {
      A[d][k] = scale * normal(rng) / ((k + 1) * (k + 1));
      B[d][k] = scale * normal(rng) / ((k + 1) * (k + 1));
    }
  auto point = [&](double th) {
    Eigen::Vector3d p = Eigen::Vector3d::Zero();
    for (int d = 0; d < 3; ++d)
      for (int k = 0; k < kModes; ++k)
        p[d] += A[d][k] * std::cos((k + 1) * th) + B[d][k] * std::sin((k + 1) * th);
    return p;
  };
  auto deriv = [&](double th) {
    Eigen::Vector3d p = Eigen::Vector3d::Zero();
    for (int d = 0; d < 3; ++d)
      for (int k = 0; k < kModes; ++k)
        p[d] += (k + 1) * (B[d][k] * std::cos((k + 1) * th) - A[d][k] * std::sin((k + 1) * th));
    return p;
  };

  // Arclength table on a dense grid, then equal-arclength samples evaluated
  // through the analytic parametrization so the loop closes exactly.
  const int dense = 40 * m;
  std::vector<double> cum(dense + 1, 0.0);
  Eigen::Vector3d prev = point(0.0);
  for (int i = 1; i <= dense; ++i) {
    const Eigen::Vector3d cur = point(2.0 * M_PI * i / dense);
    cum[i] = cum[i - 1] + (cur - prev).norm();
    prev = cur;
  }
  const double L = cum[dense];
  if (L < 1e-9) throw DegenerateInput("degenerate random loop");

  SampledCurve c;
  c.t.resize(m + 1);
  c.x.resize(m + 1);
  c.v.resize(m + 1);
  for (int i = 0; i <= m; ++i) {
    const double s = L * i / m;
    const auto it = std::lower_bound(cum.begin(), cum.end(), s);
    int j = std::clamp(static_cast<int>(it - cum.begin()), 1, dense);
    const double w = (s - cum[j - 1]) / std::max(1e-300, cum[j] - cum[j - 1]);
    const double th = 2.0 * M_PI * (j - 1 + w) / dense;
    c.t[i] = s;
    c.x[i] = point(th);
    c.v[i] = deriv(th).normalized();
  }
  // Seal the seam bitwise so closed-loop checks see an exact match.
  c.x[m] = c.x[0];
  c.v[m] = c.v[0];
  return c;
}

}  // namespace tcurv
