#include "tcurv/majorize.hpp"

#include <algorithm>
#include <cmath>

#include "tcurv/curve_ops.hpp"
#include "tcurv/errors.hpp"
#include "tcurv/polygon.hpp"

namespace tcurv {

using Eigen::Vector2d;
using Eigen::VectorXd;

int TurningCurve::edge_of(double t) const {
  const auto it = std::upper_bound(knots.begin(), knots.end(), t);
  return std::clamp(static_cast<int>(it - knots.begin()) - 1, 0, edges() - 1);
}

Vector2d TurningCurve::point_at(double t) const {
  const int j = edge_of(t);
  const double s = std::clamp(t, knots.front(), knots.back()) - knots[j];
  return verts[j] + speed * s * Vector2d(std::cos(theta[j]), std::sin(theta[j]));
}

double TurningCurve::turning(double a, double b) const { return theta[edge_of(b)] - theta[edge_of(a)]; }

double TurningCurve::reconstruction_error() const {
  Vector2d p = verts.front();
  double worst = 0.0;
  for (int j = 0; j < edges(); ++j) {
    p += speed * (knots[j + 1] - knots[j]) * Vector2d(std::cos(theta[j]), std::sin(theta[j]));
    worst = std::max(worst, (p - verts[j + 1]).norm());
  }
  return worst;
}

bool TurningCurve::chord_convex(double tol) const {
  std::vector<Vector2d> cycle = verts;
  if ((verts.back() - verts.front()).norm() <= 1e-12 * std::max(1.0, length()))
    cycle.pop_back();  // closed curve: no chord edge needed
  return is_convex_cycle(cycle, tol);
}

TurningCurve turning_curve_from_direction(const std::vector<double>& knots,
                                          const std::function<double(double)>& theta_fn,
                                          double speed) {
  TurningCurve tc;
  tc.speed = speed;
  tc.knots = knots;
  const int m = static_cast<int>(knots.size()) - 1;
  tc.theta.resize(m);
  for (int j = 0; j < m; ++j) tc.theta[j] = theta_fn(0.5 * (knots[j] + knots[j + 1]));
  tc.verts.assign(m + 1, Vector2d::Zero());
  for (int j = 0; j < m; ++j)
    tc.verts[j + 1] = tc.verts[j] + speed * (knots[j + 1] - knots[j]) *
                                        Vector2d(std::cos(tc.theta[j]), std::sin(tc.theta[j]));
  return tc;
}

namespace {

// Fast pairwise distance evaluation: hyperbolic points are lifted once.
struct DistanceTable {
  const ModelSpace& space;
  std::vector<VectorXd> lift;  // per point, when a lift accelerates things

  explicit DistanceTable(const ModelSpace& sp, const std::vector<VectorXd>& pts) : space(sp) {
    if (sp.kind() == SpaceKind::hyperbolic || sp.kind() == SpaceKind::hyperbolic_klein ||
        sp.kind() == SpaceKind::product_h2_r) {
      lift.reserve(pts.size());
      for (const auto& p : pts) lift.push_back(lift_one(p));
    } else {
      lift = pts;
    }
  }

  VectorXd lift_one(const VectorXd& p) const {
    auto lift_h = [](const VectorXd& xb) {
      VectorXd X(xb.size() + 1);
      X[0] = std::sqrt(1.0 + xb.squaredNorm());
      X.tail(xb.size()) = xb;
      return X;
    };
    switch (space.kind()) {
      case SpaceKind::hyperbolic: return lift_h(p);
      case SpaceKind::hyperbolic_klein: return lift_h(hyperboloid_from_klein(p));
      case SpaceKind::product_h2_r: {
        VectorXd X(4);
        X.head(3) = lift_h(p.head(2));
        X[3] = p[2];
        return X;
      }
      default: return p;
    }
  }

  double operator()(int i, int j) const {
    // c - 1 via the Minkowski norm of the difference; stable for nearby points.
    auto dist_h = [](const VectorXd& X, const VectorXd& Y, int n) {
      double cm1 = 0.0;
      for (int k = 1; k <= n; ++k) cm1 += (X[k] - Y[k]) * (X[k] - Y[k]);
      cm1 = (cm1 - (X[0] - Y[0]) * (X[0] - Y[0])) / 2.0;
      return 2.0 * std::asinh(std::sqrt(std::max(0.0, cm1 / 2.0)));
    };
    switch (space.kind()) {
      case SpaceKind::euclidean: return (lift[i] - lift[j]).norm();
      case SpaceKind::hyperbolic:
      case SpaceKind::hyperbolic_klein:
        return dist_h(lift[i], lift[j], static_cast<int>(lift[i].size()) - 1);
      case SpaceKind::product_h2_r: {
        const double dh = dist_h(lift[i], lift[j], 2);
        return std::hypot(dh, lift[i][3] - lift[j][3]);
      }
      default: return space.distance(lift[i], lift[j]);
    }
  }
};

struct Construction {
  TurningCurve tc;
  bool closed = false;
  int flips = 0;
  bool convexified = false;
};

Construction build_majorant(const SampledCurve& c, const DistanceTable& dist, int max_flips) {
  const int m = c.size() - 1;
  const double ell = c.span();

  std::vector<double> L(m), a(m + 1);
  for (int j = 0; j < m; ++j) {
    L[j] = dist(j, j + 1);
    if (L[j] < 1e-14) throw DegenerateInput("repeated consecutive curve samples");
  }
  for (int j = 0; j <= m; ++j) a[j] = dist(0, j);

  Construction out;
  // Chart coordinates identify the endpoints reliably; metric distance at
  // near-coincident points is itself noisy.
  out.closed = (c.x.front() - c.x.back()).norm() < 1e-9 * std::max(1.0, ell);

  // Fan development: comparison triangles (q_0, q_j, q_{j+1}) laid out with
  // cumulative apex angles.
  std::vector<Vector2d> verts(m + 1);
  verts[0] = Vector2d::Zero();
  double beta = 0.0;
  verts[1] = Vector2d(a[1], 0.0);
  const double eps = 1e-12 * std::max(1.0, ell);
  for (int j = 1; j < m; ++j) {
    double alpha = 0.0;
    if (a[j] > eps && a[j + 1] > eps) {
      const double cosv = (a[j] * a[j] + a[j + 1] * a[j + 1] - L[j] * L[j]) /
                          (2.0 * a[j] * a[j + 1]);
      alpha = std::acos(std::clamp(cosv, -1.0, 1.0));
    }
    beta += alpha;
    verts[j + 1] = a[j + 1] * Vector2d(std::cos(beta), std::sin(beta));
  }

  // Convexify the closed cycle; for a closed curve the duplicate endpoint is
  // dropped so the last arc edge doubles as the cycle-closing edge.
  std::vector<Vector2d> cycle(verts.begin(), verts.end() - (out.closed ? 1 : 0));
  const int flips = convexify_by_flips(cycle, max_flips);
  out.flips = std::max(flips, 0);
  out.convexified = flips >= 0;
  if (!out.convexified) return out;
  if (signed_area(cycle) < 0.0)
    for (auto& p : cycle) p.y() = -p.y();
  std::copy(cycle.begin(), cycle.end(), verts.begin());
  if (out.closed) verts[m] = verts[0];

  // Edge angles, unwrapped to a nondecreasing profile starting at zero, and
  // vertices rebuilt from the angles so the reconstruction identity holds
  // bitwise.
  std::vector<double> theta(m);
  Vector2d prev = verts[1] - verts[0];
  theta[0] = 0.0;
  for (int j = 1; j < m; ++j) {
    const Vector2d e = verts[j + 1] - verts[j];
    double turn = std::atan2(prev.x() * e.y() - prev.y() * e.x(), prev.dot(e));
    if (turn < 0.0 && turn > -1e-9) turn = 0.0;
    theta[j] = theta[j - 1] + turn;
    prev = e;
  }
  if (!std::is_sorted(theta.begin(), theta.end())) {
    // Convex up to collinear degeneracies but doubling back along the hull.
    out.convexified = false;
    return out;
  }

  TurningCurve& tc = out.tc;
  double total_len = 0.0;
  for (int j = 0; j < m; ++j) total_len += L[j];
  tc.speed = total_len / ell;
  tc.knots.resize(m + 1);
  tc.theta = theta;
  double s = 0.0;
  tc.knots[0] = 0.0;
  for (int j = 0; j < m; ++j) {
    s += L[j];
    tc.knots[j + 1] = s / tc.speed;
  }
  tc.knots[m] = ell;  // guard the last knot against cumulative roundoff
  tc.verts.assign(m + 1, Vector2d::Zero());
  for (int j = 0; j < m; ++j)
    tc.verts[j + 1] = tc.verts[j] + L[j] * Vector2d(std::cos(theta[j]), std::sin(theta[j]));
  return out;
}

// Worst excess of the edge-angle profile over curve turning, windows aligned
// at curve cell midpoints.
double turning_excess(const ModelSpace& space, const SampledCurve& c,
                      const std::vector<double>& theta) {
  const TurningProfile prof = turning_profile(space, c);
  const int m = static_cast<int>(theta.size());
  double excess = -std::numeric_limits<double>::infinity();
  double min_gap = std::numeric_limits<double>::infinity();
  for (int j = 0; j < m; ++j) {
    const double taumid = prof.tau(c.t[0], 0.5 * (c.t[j] + c.t[j + 1]));
    const double gap = theta[j] - taumid;
    min_gap = std::min(min_gap, gap);
    excess = std::max(excess, gap - min_gap);
  }
  return excess;
}

}  // namespace

MajorizeReport majorize(const ModelSpace& space, const SampledCurve& c, const MajorizeOptions& opt) {
  if (!space.cartan_hadamard())
    throw NotCartanHadamard("majorization requires a nonpositively curved space");
  if (c.size() < 3) throw DegenerateInput("majorization needs at least three samples");
  require_unit_speed(space, c);

  std::string failure = "unverified";
  for (int round = 0; round < std::max(1, opt.max_refine); ++round) {
    const int factor = 1 << round;
    const SampledCurve cur =
        round == 0 ? c : resample(space, c, c.t0(), c.t1(), (c.size() - 1) * factor);
    const int m = cur.size() - 1;
    const DistanceTable dist(space, cur.x);
    Construction built = build_majorant(cur, dist, opt.max_flips);
    if (!built.convexified) {
      failure = "pocket flips did not reach a convex polygon";
      continue;
    }

    MajorizeReport rep;
    rep.majorant = std::move(built.tc);
    rep.used = cur;
    rep.closed = built.closed;
    rep.refinement = factor;
    rep.flips = built.flips;

    const TurningCurve& tc = rep.majorant;
    double poly_len = 0.0, chord_len = 0.0;
    for (int j = 0; j < m; ++j) poly_len += (tc.verts[j + 1] - tc.verts[j]).norm();
    for (int j = 0; j < m; ++j) chord_len += dist(j, j + 1);
    rep.arclength_error = std::abs(poly_len - chord_len);
    rep.properness_error =
        built.closed ? tc.chord().norm() : std::abs(tc.chord().norm() - dist(0, m));

    bool chords_ok = true;
    rep.worst_chord_deficit = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < m && chords_ok; ++i) {
      for (int j = i + 1; j <= m; ++j) {
        const double d = dist(i, j);
        const double deficit = d - (tc.verts[j] - tc.verts[i]).norm();
        rep.worst_chord_deficit = std::max(rep.worst_chord_deficit, deficit);
        if (deficit > opt.tol_chord_rel * d + 1e-9) {
          chords_ok = false;
          break;
        }
      }
    }

    rep.worst_turning_excess = turning_excess(space, cur, tc.theta);

    if (!chords_ok) {
      failure = "chord domination failed at refinement " + std::to_string(factor);
      continue;
    }
    if (rep.arclength_error > opt.tol_length) {
      failure = "arclength mismatch " + std::to_string(rep.arclength_error);
      continue;
    }
    if (rep.properness_error > opt.tol_proper * std::max(1.0, cur.span())) {
      failure = "endpoint chord mismatch " + std::to_string(rep.properness_error);
      continue;
    }
    if (rep.worst_turning_excess > opt.tol_turn) {
      failure = "turning excess " + std::to_string(rep.worst_turning_excess);
      continue;
    }
    if (tc.reconstruction_error() > 1e-10 * std::max(1.0, tc.length())) {
      failure = "reconstruction drift";
      continue;
    }
    return rep;
  }
  throw MajorizationUnverified(failure);
}

double curvature_nonincrease_check(const ModelSpace& space, const SampledCurve& c,
                                   const TurningCurve& majorant) {
  if (majorant.edges() != c.size() - 1)
    throw GridMismatch("majorant edges do not match curve cells");
  return turning_excess(space, c, majorant.theta);
}

SchurReport schur_verify(const ModelSpace& space, const TurningCurve& g1, const SampledCurve& g2,
                         const SchurOptions& opt) {
  if (!space.cartan_hadamard())
    throw NotCartanHadamard("comparison requires a nonpositively curved space");
  require_unit_speed(space, g2);
  const double ell = g2.span();
  if (std::abs(g1.span() - ell) > 1e-8 * std::max(1.0, ell))
    throw LengthMismatch("curves must share their parameter span");

  SchurReport rep;
  rep.chord_convex = g1.chord_convex();

  const TurningProfile prof = turning_profile(space, g2);
  double margin = -std::numeric_limits<double>::infinity();
  for (int level = 0; level <= opt.dyadic_levels; ++level) {
    const int cells = 1 << level;
    for (int k = 0; k < cells; ++k) {
      const double a = ell * k / cells, b = ell * (k + 1) / cells;
      const double tau2 = prof.tau(g2.t0() + a, g2.t0() + b);
      const double tau1 = g1.turning(g1.knots.front() + a, g1.knots.front() + b);
      margin = std::max(margin, tau2 - tau1);
    }
  }
  rep.hypothesis_margin = margin;
  rep.hypothesis_ok = rep.chord_convex && margin <= opt.tol_rel;

  const double d2 = space.distance(g2.x.front(), g2.x.back());
  const double c1 = g1.chord().norm();
  rep.conclusion_margin = d2 - c1;
  rep.conclusion_ok = rep.conclusion_margin >= -opt.tol_rel * std::max(1.0, c1);
  rep.pass = !rep.hypothesis_ok || rep.conclusion_ok;
  return rep;
}

}  // namespace tcurv
