#include "tcurv/transport.hpp"

#include <cmath>

#include "hyperboloid.hpp"
#include "tcurv/errors.hpp"

namespace tcurv {

using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

// Right-hand side of the transport system for an n x k column stack.
OdeRhs transport_rhs(const ModelSpace& space, const SampledCurve& c, int k) {
  const int n = space.dimension();
  return [&space, &c, n, k](const VectorXd& y, VectorXd& dydt, double t) {
    const VectorXd x = c.position(t);
    const VectorXd xdot = c.velocity(t);
    const Tensor3 G = space.christoffel(x);
    dydt.resize(n * k);
    for (int col = 0; col < k; ++col) {
      for (int a = 0; a < n; ++a) {
        double s = 0.0;
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) s += G(a, i, j) * xdot[i] * y[col * n + j];
        dydt[col * n + a] = -s;
      }
    }
  };
}

VectorXd flatten(const MatrixXd& V) {
  VectorXd y(V.size());
  for (int c = 0; c < V.cols(); ++c) y.segment(c * V.rows(), V.rows()) = V.col(c);
  return y;
}

MatrixXd unflatten(const VectorXd& y, int n, int k) {
  MatrixXd V(n, k);
  for (int c = 0; c < k; ++c) V.col(c) = y.segment(c * n, n);
  return V;
}

}  // namespace

MatrixXd parallel_transport(const ModelSpace& space, const SampledCurve& c, const MatrixXd& V,
                            double a, double b, const OdeOptions& opt) {
  const int n = space.dimension();
  const int k = static_cast<int>(V.cols());
  if (V.rows() != n) throw DegenerateInput("transport vectors have wrong dimension");
  if (a == b) return V;
  const auto rhs = transport_rhs(space, c, k);
  if (a < b) return unflatten(integrate_at(rhs, flatten(V), {a, b}, opt).back(), n, k);
  // Backwards: integrate the reversed parameter.
  auto rev = [&](const VectorXd& y, VectorXd& dydt, double s) {
    rhs(y, dydt, a + b - s);
    dydt = -dydt;
  };
  return unflatten(integrate_at(rev, flatten(V), {b, a}, opt).back(), n, k);
}

FrameField propagate_frame(const ModelSpace& space, const SampledCurve& c, const MatrixXd& V0,
                           const OdeOptions& opt) {
  const int n = space.dimension();
  const int k = static_cast<int>(V0.cols());
  const auto states = integrate_at(transport_rhs(space, c, k), flatten(V0), c.t, opt);
  FrameField f;
  f.t = c.t;
  f.x = c.x;
  f.frame.resize(states.size());
  for (size_t i = 0; i < states.size(); ++i) f.frame[i] = unflatten(states[i], n, k);
  return f;
}

MatrixXd holonomy_matrix(const ModelSpace& space, const SampledCurve& loop, const OdeOptions& opt) {
  if (!loop.endpoints_coincide(1e-9 * std::max(1.0, loop.span())))
    throw OpenLoop("holonomy needs a closed loop");
  const MatrixXd B = space.orthonormal_basis(loop.x.front());
  const MatrixXd PB = parallel_transport(space, loop, B, loop.t.front(), loop.t.back(), opt);
  // Components of the transported frame in the original orthonormal basis:
  // P = B^-1 PB is orthogonal up to integration error.
  return B.fullPivLu().solve(PB);
}

double holonomy_defect(const ModelSpace& space, const SampledCurve& loop, const OdeOptions& opt) {
  const MatrixXd P = holonomy_matrix(space, loop, opt);
  const MatrixXd D = P - MatrixXd::Identity(P.rows(), P.cols());
  return D.jacobiSvd().singularValues()[0];
}

namespace {

// Transport between hyperboloid chart points through the ambient Minkowski
// formula; exact along the connecting geodesic.
VectorXd transport_hyperbolic(const VectorXd& p, const VectorXd& q, const VectorXd& w) {
  namespace hb = hyperboloid;
  const VectorXd X = hb::lift_point(p), Y = hb::lift_point(q);
  const VectorXd W = hb::lift_tangent(p, w);
  const VectorXd T = hb::transport(X, Y, W);
  return T.tail(p.size());
}

}  // namespace

VectorXd geodesic_transport(const ModelSpace& space, const VectorXd& p, const VectorXd& q,
                            const VectorXd& w) {
  if ((p - q).norm() == 0.0) return w;
  switch (space.kind()) {
    case SpaceKind::euclidean:
      return w;
    case SpaceKind::hyperbolic:
      return transport_hyperbolic(p, q, w);
    case SpaceKind::hyperbolic_klein: {
      const VectorXd ph = hyperboloid_from_klein(p), qh = hyperboloid_from_klein(q);
      const VectorXd wh = hyperboloid_tangent_from_klein(p, w);
      return klein_tangent_from_hyperboloid(qh, transport_hyperbolic(ph, qh, wh));
    }
    case SpaceKind::product_h2_r: {
      // Factor-wise: the H^2 block transports hyperbolically, the line block
      // is constant.
      VectorXd out(3);
      const Eigen::VectorXd p2 = p.head(2), q2 = q.head(2), w2 = w.head(2);
      out.head(2) = (p2 - q2).norm() == 0.0 ? w2 : transport_hyperbolic(p2, q2, w2);
      out[2] = w[2];
      return out;
    }
    default: {
      // No linear chart formula; integrate along the closed-form geodesic.
      const SampledCurve g = geodesic(space, p, q, 32);
      return parallel_transport(space, g, w, g.t0(), g.t1());
    }
  }
}

}  // namespace tcurv
