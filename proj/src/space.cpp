#include "tcurv/space.hpp"

#include <cmath>

#include "hyperboloid.hpp"
#include "tcurv/errors.hpp"

namespace tcurv {

using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

// sinh(t)/t and t/sinh(t) with series fallbacks near zero.
double sinhc(double t) {
  if (std::abs(t) < 1e-8) return 1.0 + t * t / 6.0;
  return std::sinh(t) / t;
}
double inv_sinhc(double t) {
  if (std::abs(t) < 1e-8) return 1.0 - t * t / 6.0;
  return t / std::sinh(t);
}
double sinc(double t) {
  if (std::abs(t) < 1e-8) return 1.0 - t * t / 6.0;
  return std::sin(t) / t;
}

// Lowered constant-curvature tensor R_ijkl = K (g_il g_jk - g_ik g_jl).
Tensor4 constant_curvature_tensor(double K, const MatrixXd& g) {
  const int n = static_cast<int>(g.rows());
  Tensor4 R(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          R(i, j, k, l) = K * (g(i, l) * g(j, k) - g(i, k) * g(j, l));
  return R;
}

// ---------------------------------------------------------------------------
// Euclidean space.

class EuclideanSpace final : public ModelSpace {
 public:
  explicit EuclideanSpace(int n) : ModelSpace(SpaceKind::euclidean, n, true) {}

  MatrixXd metric(const VectorXd&) const override { return MatrixXd::Identity(n_, n_); }
  Tensor3 metric_derivative(const VectorXd&) const override { return Tensor3(n_); }
  Tensor4 riemann(const VectorXd&) const override { return Tensor4(n_); }

  VectorXd exp_map(const VectorXd& x, const VectorXd& v) const override { return x + v; }
  VectorXd log_map(const VectorXd& x, const VectorXd& y) const override { return y - x; }
  double distance(const VectorXd& x, const VectorXd& y) const override { return (y - x).norm(); }
  void geodesic_state(const VectorXd& x, const VectorXd& u, double t, VectorXd* pos,
                      VectorXd* vel) const override {
    if (pos) *pos = x + t * u;
    if (vel) *vel = u;
  }
};

// Hyperbolic spaces work through the hyperboloid lift helpers shared with
// the transport and surface code.
using hyperboloid::lift_point;
using hyperboloid::lift_tangent;
using hyperboloid::minkowski;
using hyperboloid::minkowski_cm1;
const auto hyperbolic_distance_from_cm1 = hyperboloid::distance_from_cm1;

class HyperbolicSpace final : public ModelSpace {
 public:
  explicit HyperbolicSpace(int n) : ModelSpace(SpaceKind::hyperbolic, n, true) {}

  MatrixXd metric(const VectorXd& x) const override {
    const double s = 1.0 + x.squaredNorm();
    return MatrixXd::Identity(n_, n_) - x * x.transpose() / s;
  }

  Tensor3 metric_derivative(const VectorXd& x) const override {
    const double s = 1.0 + x.squaredNorm();
    Tensor3 d(n_);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j)
        for (int k = 0; k < n_; ++k) {
          double v = 2.0 * x[i] * x[j] * x[k] / (s * s);
          if (i == k) v -= x[j] / s;
          if (j == k) v -= x[i] / s;
          d(i, j, k) = v;
        }
    return d;
  }

  Tensor4 riemann(const VectorXd& x) const override {
    return constant_curvature_tensor(-1.0, metric(x));
  }

  VectorXd exp_map(const VectorXd& x, const VectorXd& v) const override {
    const VectorXd X = lift_point(x), V = lift_tangent(x, v);
    const double theta = std::sqrt(std::max(0.0, minkowski(V, V)));
    const VectorXd Y = std::cosh(theta) * X + sinhc(theta) * V;
    return Y.tail(n_);
  }

  VectorXd log_map(const VectorXd& x, const VectorXd& y) const override {
    const VectorXd X = lift_point(x), Y = lift_point(y);
    const double cm1 = std::max(0.0, minkowski_cm1(X, Y));
    const double d = hyperbolic_distance_from_cm1(cm1);
    const VectorXd W = Y - (1.0 + cm1) * X;
    return (inv_sinhc(d) * W).tail(n_);
  }

  double distance(const VectorXd& x, const VectorXd& y) const override {
    return hyperbolic_distance_from_cm1(minkowski_cm1(lift_point(x), lift_point(y)));
  }

  void geodesic_state(const VectorXd& x, const VectorXd& u, double t, VectorXd* pos,
                      VectorXd* vel) const override {
    const VectorXd X = lift_point(x), U = lift_tangent(x, u);
    const double theta = std::sqrt(std::max(0.0, minkowski(U, U)));
    const double a = t * theta;
    if (pos) *pos = (std::cosh(a) * X + t * sinhc(a) * U).tail(n_);
    if (vel) *vel = (theta * std::sinh(a) * X + std::cosh(a) * U).tail(n_);
  }
};

// ---------------------------------------------------------------------------
// Klein ball chart of hyperbolic space: |y| < 1, geodesics are straight
// chords.  Metric g_ij = delta_ij / s + y_i y_j / s^2 with s = 1 - |y|^2.
// Exponential and logarithm are delegated to the hyperboloid chart through
// the conversion maps; only the metric data is native here.

class KleinSpace final : public ModelSpace {
 public:
  explicit KleinSpace(int n)
      : ModelSpace(SpaceKind::hyperbolic_klein, n, true), hyper_(new HyperbolicSpace(n)) {}

  bool chart_valid(const VectorXd& y) const override { return y.squaredNorm() < 1.0 - 1e-12; }

  MatrixXd metric(const VectorXd& y) const override {
    const double s = 1.0 - y.squaredNorm();
    return MatrixXd::Identity(n_, n_) / s + y * y.transpose() / (s * s);
  }

  Tensor3 metric_derivative(const VectorXd& y) const override {
    const double s = 1.0 - y.squaredNorm();
    Tensor3 d(n_);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j)
        for (int k = 0; k < n_; ++k) {
          double v = 4.0 * y[i] * y[j] * y[k] / (s * s * s);
          if (i == j) v += 2.0 * y[k] / (s * s);
          if (i == k) v += y[j] / (s * s);
          if (j == k) v += y[i] / (s * s);
          d(i, j, k) = v;
        }
    return d;
  }

  Tensor4 riemann(const VectorXd& y) const override {
    return constant_curvature_tensor(-1.0, metric(y));
  }

  VectorXd exp_map(const VectorXd& y, const VectorXd& w) const override {
    const VectorXd x = hyperboloid_from_klein(y);
    return klein_from_hyperboloid(hyper_->exp_map(x, hyperboloid_tangent_from_klein(y, w)));
  }

  VectorXd log_map(const VectorXd& y, const VectorXd& z) const override {
    const VectorXd x = hyperboloid_from_klein(y);
    return klein_tangent_from_hyperboloid(x,
                                          hyper_->log_map(x, hyperboloid_from_klein(z)));
  }

  double distance(const VectorXd& y, const VectorXd& z) const override {
    return hyper_->distance(hyperboloid_from_klein(y), hyperboloid_from_klein(z));
  }

  void geodesic_state(const VectorXd& y, const VectorXd& w, double t, VectorXd* pos,
                      VectorXd* vel) const override {
    const VectorXd x = hyperboloid_from_klein(y);
    VectorXd p, v;
    hyper_->geodesic_state(x, hyperboloid_tangent_from_klein(y, w), t, &p, &v);
    if (pos) *pos = klein_from_hyperboloid(p);
    if (vel) *vel = klein_tangent_from_hyperboloid(p, v);
  }

 private:
  std::shared_ptr<HyperbolicSpace> hyper_;
};

// ---------------------------------------------------------------------------
// Product H^2 x R.  Coordinates (x0, x1, z); the first two are the H^2
// hyperboloid chart.  Geodesics split into a hyperbolic geodesic and a
// linear height, each at constant speed.

class ProductH2RSpace final : public ModelSpace {
 public:
  ProductH2RSpace() : ModelSpace(SpaceKind::product_h2_r, 3, true), h2_(new HyperbolicSpace(2)) {}

  MatrixXd metric(const VectorXd& x) const override {
    MatrixXd g = MatrixXd::Identity(3, 3);
    g.topLeftCorner(2, 2) = h2_->metric(x.head(2));
    return g;
  }

  Tensor3 metric_derivative(const VectorXd& x) const override {
    Tensor3 d(3);
    const Tensor3 dh = h2_->metric_derivative(x.head(2));
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k) d(i, j, k) = dh(i, j, k);
    return d;
  }

  Tensor4 riemann(const VectorXd& x) const override {
    Tensor4 R(3);
    const MatrixXd h = h2_->metric(x.head(2));
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k)
          for (int l = 0; l < 2; ++l)
            R(i, j, k, l) = -(h(i, l) * h(j, k) - h(i, k) * h(j, l));
    return R;
  }

  VectorXd exp_map(const VectorXd& x, const VectorXd& v) const override {
    VectorXd y(3);
    y.head(2) = h2_->exp_map(x.head(2), v.head(2));
    y[2] = x[2] + v[2];
    return y;
  }

  VectorXd log_map(const VectorXd& x, const VectorXd& y) const override {
    VectorXd v(3);
    v.head(2) = h2_->log_map(x.head(2), y.head(2));
    v[2] = y[2] - x[2];
    return v;
  }

  double distance(const VectorXd& x, const VectorXd& y) const override {
    const double dh = h2_->distance(x.head(2), y.head(2));
    return std::hypot(dh, y[2] - x[2]);
  }

  void geodesic_state(const VectorXd& x, const VectorXd& u, double t, VectorXd* pos,
                      VectorXd* vel) const override {
    VectorXd ph, vh;
    h2_->geodesic_state(x.head(2), u.head(2), t, &ph, &vh);
    if (pos) {
      pos->resize(3);
      pos->head(2) = ph;
      (*pos)[2] = x[2] + t * u[2];
    }
    if (vel) {
      vel->resize(3);
      vel->head(2) = vh;
      (*vel)[2] = u[2];
    }
  }

 private:
  std::shared_ptr<HyperbolicSpace> h2_;
};

// ---------------------------------------------------------------------------
// Round sphere S^2 in the stereographic chart from the south pole:
// s(x) = (2 x1, 2 x2, 1 - |x|^2) / (1 + |x|^2), conformal metric
// g = lambda I with lambda = 4 / (1 + |x|^2)^2.  Positive curvature; serves
// as the negative control for Cartan-Hadamard-only operations.

class SphereSpace final : public ModelSpace {
 public:
  SphereSpace() : ModelSpace(SpaceKind::sphere, 2, false) {}

  MatrixXd metric(const VectorXd& x) const override {
    const double w = 1.0 + x.squaredNorm();
    return (4.0 / (w * w)) * MatrixXd::Identity(2, 2);
  }

  Tensor3 metric_derivative(const VectorXd& x) const override {
    const double w = 1.0 + x.squaredNorm();
    const double dl = -16.0 / (w * w * w);
    Tensor3 d(2);
    for (int i = 0; i < 2; ++i)
      for (int k = 0; k < 2; ++k) d(i, i, k) = dl * x[k];
    return d;
  }

  Tensor4 riemann(const VectorXd& x) const override {
    return constant_curvature_tensor(1.0, metric(x));
  }

  VectorXd exp_map(const VectorXd& x, const VectorXd& v) const override {
    const Eigen::Vector3d s = embed(x);
    const Eigen::Vector3d V = embed_jacobian(x) * v;
    const double theta = V.norm();
    return project(std::cos(theta) * s + sinc(theta) * V);
  }

  VectorXd log_map(const VectorXd& x, const VectorXd& y) const override {
    const Eigen::Vector3d s = embed(x), sy = embed(y);
    const double c = std::clamp(s.dot(sy), -1.0, 1.0);
    const double d = 2.0 * std::asin(std::min(1.0, (sy - s).norm() / 2.0));
    const Eigen::Vector3d W = sy - c * s;
    const Eigen::Vector3d V = (std::abs(d) < 1e-8 ? 1.0 + d * d / 6.0 : d / std::sin(d)) * W;
    // J^T J = lambda I, so the chart preimage of an embedded tangent is
    // J^T V / lambda.
    const double w = 1.0 + x.squaredNorm();
    return (embed_jacobian(x).transpose() * V) * (w * w / 4.0);
  }

  double distance(const VectorXd& x, const VectorXd& y) const override {
    return 2.0 * std::asin(std::min(1.0, (embed(y) - embed(x)).norm() / 2.0));
  }

  void geodesic_state(const VectorXd& x, const VectorXd& u, double t, VectorXd* pos,
                      VectorXd* vel) const override {
    const Eigen::Vector3d s = embed(x);
    const Eigen::Vector3d U = embed_jacobian(x) * u;
    const double theta = U.norm();
    const double a = t * theta;
    const Eigen::Vector3d y = std::cos(a) * s + t * sinc(a) * U;
    const Eigen::Vector3d Vy = -theta * std::sin(a) * s + std::cos(a) * U;
    if (pos) *pos = project(y);
    if (vel) {
      // Chart velocity of x_i = y_i / (1 + y_3).
      const double q = 1.0 + y[2];
      if (q < 1e-9) throw RadiusTooLarge("sphere geodesic reached the chart antipode");
      VectorXd vv(2);
      vv[0] = Vy[0] / q - y[0] * Vy[2] / (q * q);
      vv[1] = Vy[1] / q - y[1] * Vy[2] / (q * q);
      *vel = vv;
    }
  }

 private:
  static Eigen::Vector3d embed(const VectorXd& x) {
    const double w = 1.0 + x.squaredNorm();
    return Eigen::Vector3d(2.0 * x[0] / w, 2.0 * x[1] / w, (2.0 - w) / w);
  }
  static Eigen::Matrix<double, 3, 2> embed_jacobian(const VectorXd& x) {
    const double w = 1.0 + x.squaredNorm();
    Eigen::Matrix<double, 3, 2> J;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) J(i, j) = (i == j ? 2.0 / w : 0.0) - 4.0 * x[i] * x[j] / (w * w);
    for (int j = 0; j < 2; ++j) J(2, j) = -4.0 * x[j] / (w * w);
    return J;
  }
  static VectorXd project(const Eigen::Vector3d& s) {
    const double q = 1.0 + s[2];
    if (q < 1e-9) throw RadiusTooLarge("sphere point too close to the chart antipode");
    VectorXd x(2);
    x[0] = s[0] / q;
    x[1] = s[1] / q;
    return x;
  }
};

}  // namespace

// ---------------------------------------------------------------------------
// Shared machinery.

bool ModelSpace::chart_valid(const VectorXd& x) const {
  return x.size() == n_ && x.allFinite();
}

Tensor3 ModelSpace::christoffel(const VectorXd& x) const {
  const MatrixXd g = metric(x);
  const MatrixXd ginv = g.inverse();
  const Tensor3 d = metric_derivative(x);
  Tensor3 c(n_);
  for (int k = 0; k < n_; ++k)
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) {
        double s = 0.0;
        for (int l = 0; l < n_; ++l)
          s += ginv(k, l) * (d(j, l, i) + d(i, l, j) - d(i, j, l));
        c(k, i, j) = 0.5 * s;
      }
  return c;
}

MatrixXd ModelSpace::orthonormal_basis(const VectorXd& x) const {
  const Eigen::LLT<MatrixXd> llt(metric(x));
  // G = L L^T, so B = L^{-T} satisfies B^T G B = I.
  return llt.matrixL().transpose().solve(MatrixXd::Identity(n_, n_));
}

double ModelSpace::sectional_curvature(const VectorXd& x, const VectorXd& u,
                                       const VectorXd& v) const {
  const MatrixXd g = metric(x);
  const double uu = u.dot(g * u), vv = v.dot(g * v), uv = u.dot(g * v);
  const double gram = uu * vv - uv * uv;
  if (gram <= 1e-14 * std::max(1e-300, uu * vv))
    throw DegeneratePlane("sectional curvature of a degenerate 2-plane");
  return contract(riemann(x), u, v, v, u) / gram;
}

std::string ModelSpace::name() const {
  switch (kind_) {
    case SpaceKind::euclidean: return "euclidean" + std::to_string(n_);
    case SpaceKind::hyperbolic: return "hyperbolic" + std::to_string(n_);
    case SpaceKind::hyperbolic_klein: return "klein" + std::to_string(n_);
    case SpaceKind::product_h2_r: return "h2xr";
    case SpaceKind::sphere: return "sphere2";
  }
  return "unknown";
}

SpacePtr make_space(SpaceKind kind, int n) {
  switch (kind) {
    case SpaceKind::euclidean:
      if (n < 2) throw UnsupportedSpace("euclidean space needs dimension >= 2");
      return std::make_shared<EuclideanSpace>(n);
    case SpaceKind::hyperbolic:
      if (n < 2) throw UnsupportedSpace("hyperbolic space needs dimension >= 2");
      return std::make_shared<HyperbolicSpace>(n);
    case SpaceKind::hyperbolic_klein:
      if (n < 2) throw UnsupportedSpace("Klein chart needs dimension >= 2");
      return std::make_shared<KleinSpace>(n);
    case SpaceKind::product_h2_r:
      if (n != 3) throw UnsupportedSpace("the product space is three dimensional");
      return std::make_shared<ProductH2RSpace>();
    case SpaceKind::sphere:
      if (n != 2) throw UnsupportedSpace("the sphere fixture is two dimensional");
      return std::make_shared<SphereSpace>();
  }
  throw UnsupportedSpace("unknown space kind");
}

SpacePtr make_space(const std::string& tag) {
  if (tag == "h2xr") return make_space(SpaceKind::product_h2_r, 3);
  if (tag == "sphere2") return make_space(SpaceKind::sphere, 2);
  auto split = [&](const std::string& prefix, SpaceKind kind) -> SpacePtr {
    if (tag.rfind(prefix, 0) != 0) return nullptr;
    const std::string num = tag.substr(prefix.size());
    if (num.empty() || num.find_first_not_of("0123456789") != std::string::npos) return nullptr;
    return make_space(kind, std::stoi(num));
  };
  if (auto s = split("euclidean", SpaceKind::euclidean)) return s;
  if (auto s = split("hyperbolic", SpaceKind::hyperbolic)) return s;
  if (auto s = split("klein", SpaceKind::hyperbolic_klein)) return s;
  throw UnsupportedSpace("unknown space tag: " + tag);
}

// ---------------------------------------------------------------------------
// Chart conversions.

VectorXd klein_from_hyperboloid(const VectorXd& x) {
  return x / std::sqrt(1.0 + x.squaredNorm());
}

VectorXd hyperboloid_from_klein(const VectorXd& y) {
  const double s = 1.0 - y.squaredNorm();
  if (s <= 0.0) throw RadiusTooLarge("point outside the Klein ball");
  return y / std::sqrt(s);
}

VectorXd klein_tangent_from_hyperboloid(const VectorXd& x, const VectorXd& v) {
  const double c = std::sqrt(1.0 + x.squaredNorm());
  return v / c - x * (x.dot(v)) / (c * c * c);
}

VectorXd hyperboloid_tangent_from_klein(const VectorXd& y, const VectorXd& w) {
  const double s = 1.0 - y.squaredNorm();
  if (s <= 0.0) throw RadiusTooLarge("point outside the Klein ball");
  const double r = std::sqrt(s);
  return w / r + y * (y.dot(w)) / (r * r * r);
}

// ---------------------------------------------------------------------------
// Finite-difference oracles.

Tensor3 christoffel_fd(const ModelSpace& space, const VectorXd& x, double h) {
  const int n = space.dimension();
  const MatrixXd ginv = space.metric(x).inverse();
  Tensor3 d(n);
  for (int k = 0; k < n; ++k) {
    VectorXd xp = x, xm = x;
    xp[k] += h;
    xm[k] -= h;
    const MatrixXd gd = (space.metric(xp) - space.metric(xm)) / (2.0 * h);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) d(i, j, k) = gd(i, j);
  }
  Tensor3 c(n);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int l = 0; l < n; ++l) s += ginv(k, l) * (d(j, l, i) + d(i, l, j) - d(i, j, l));
        c(k, i, j) = 0.5 * s;
      }
  return c;
}

Tensor4 riemann_fd(const ModelSpace& space, const VectorXd& x, double h) {
  const int n = space.dimension();
  const MatrixXd g = space.metric(x);
  const Tensor3 c = space.christoffel(x);
  // dGamma[i](k, j, k2) = d Gamma^k_{j k2} / d x^i by central differences of
  // the analytic symbols.
  std::vector<Tensor3> dGamma(n);
  for (int i = 0; i < n; ++i) {
    VectorXd xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    const Tensor3 cp = space.christoffel(xp), cm = space.christoffel(xm);
    Tensor3 d(n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int e = 0; e < n; ++e) d(a, b, e) = (cp(a, b, e) - cm(a, b, e)) / (2.0 * h);
    dGamma[i] = d;
  }
  // R(d_i, d_j) d_k = (d_i Gamma^l_jk - d_j Gamma^l_ik
  //                    + Gamma^l_im Gamma^m_jk - Gamma^l_jm Gamma^m_ik) d_l.
  Tensor4 R(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        VectorXd A = VectorXd::Zero(n);
        for (int l = 0; l < n; ++l) {
          double v = dGamma[i](l, j, k) - dGamma[j](l, i, k);
          for (int m = 0; m < n; ++m) v += c(l, i, m) * c(m, j, k) - c(l, j, m) * c(m, i, k);
          A[l] = v;
        }
        for (int l = 0; l < n; ++l) {
          double s = 0.0;
          for (int m = 0; m < n; ++m) s += g(l, m) * A[m];
          R(i, j, k, l) = s;
        }
      }
  return R;
}

}  // namespace tcurv
