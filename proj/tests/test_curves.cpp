#include <doctest.h>

#include <cmath>
#include <random>

#include "tcurv/curve.hpp"
#include "tcurv/curve_ops.hpp"
#include "tcurv/errors.hpp"
#include "test_util.hpp"

using namespace tcurv;
using namespace tcurv::testutil;
using Eigen::VectorXd;

TEST_CASE("total curvature of circles: exact plane value, hyperbolic closed form") {
  const auto e2 = make_space(SpaceKind::euclidean, 2);
  const SampledCurve c1 = circle_curve(*e2, 2.0, 512);
  CHECK(total_curvature(*e2, c1) == doctest::Approx(2.0 * M_PI).epsilon(1e-12));

  // Hyperbolic circle of radius 1: curvature coth(1), length 2 pi sinh(1),
  // so the total curvature is their product 2 pi cosh(1) = 9.6954615725.
  const auto h2 = make_space(SpaceKind::hyperbolic, 2);
  const SampledCurve c2 = circle_curve(*h2, 1.0, 2048);
  CHECK(total_curvature(*h2, c2) == doctest::Approx(9.6954615725).epsilon(1e-6));
}

TEST_CASE("total curvature is additive and reversal invariant") {
  const auto h2 = make_space(SpaceKind::hyperbolic, 2);
  const SampledCurve c = circle_curve(*h2, 1.0, 512, 0.8);
  const TurningProfile p = turning_profile(*h2, c);
  const double a = c.t0(), b = c.t1();
  // Interval endpoints off the sample grid exercise the fractional-cell
  // interpolation, which is exactly additive by construction.
  const double m1 = a + 0.2371 * (b - a), m2 = a + 0.81234 * (b - a);
  CHECK(p.tau(a, m1) + p.tau(m1, m2) + p.tau(m2, b) == doctest::Approx(p.tau(a, b)).epsilon(1e-12));
  CHECK(total_curvature(*h2, reverse(c)) == doctest::Approx(p.total()).epsilon(1e-9));
}

TEST_CASE("geodesics have vanishing total curvature") {
  std::mt19937_64 rng(301);
  for (const auto& sp : all_spaces()) {
    const VectorXd p = random_point(*sp, rng);
    VectorXd q = random_point(*sp, rng);
    while (sp->distance(p, q) < 0.3) q = random_point(*sp, rng);
    CHECK(total_curvature(*sp, geodesic(*sp, p, q, 512)) <= 1e-8);
  }
}

TEST_CASE("closed space curves have total curvature at least 2 pi") {
  const auto e3 = make_space(SpaceKind::euclidean, 3);
  for (uint64_t seed : {1, 2, 3, 4, 5, 6, 7, 8, 9, 10}) {
    const SampledCurve loop = random_loop_e3(seed, 1024);
    CHECK(total_curvature(*e3, loop) >= 2.0 * M_PI - 1e-9);
  }
}

TEST_CASE("curvature profile recovers prescribed curvature") {
  const auto h2 = make_space(SpaceKind::hyperbolic, 2);
  const SampledCurve circ = circle_curve(*h2, 1.0, 2048);
  const CurvatureProfile prof = geodesic_curvature_profile(*h2, circ);
  const double coth1 = 1.3130352854993312;
  for (double k : prof.kappa) CHECK(std::abs(k - coth1) <= 1e-4);

  auto kappa = [](double s) { return 0.5 + 0.3 * std::sin(s); };
  const SampledCurve c = prescribed_plane_curve(*h2, kappa, 2.0, 2048);
  const CurvatureProfile prof2 = geodesic_curvature_profile(*h2, c);
  double worst = 0.0;
  for (size_t i = 0; i < prof2.t.size(); ++i)
    worst = std::max(worst, std::abs(prof2.kappa[i] - kappa(prof2.t[i])));
  CHECK(worst <= 1e-5);
  // Total curvature equals the integral of the prescribed profile,
  // 1 + 0.3 (1 - cos 2).
  const double expected = 1.0 + 0.3 * (1.0 - std::cos(2.0));
  CHECK(total_curvature(*h2, c) == doctest::Approx(expected).epsilon(1e-5));
}

TEST_CASE("prescribed-curvature space curves have the requested curvature") {
  const auto h3 = make_space(SpaceKind::hyperbolic, 3);
  auto kappa = [](double s) { return 0.8 + 0.4 * std::cos(s); };
  auto twist = [](double s) { return 0.5 * std::sin(s); };
  const SampledCurve c =
      prescribed_space_curve(*h3, kappa, twist, 2.0, 2048, VectorXd::Zero(3));
  require_unit_speed(*h3, c, 1e-8);
  const CurvatureProfile prof = geodesic_curvature_profile(*h3, c);
  double worst = 0.0;
  for (size_t i = 0; i < prof.t.size(); ++i)
    worst = std::max(worst, std::abs(prof.kappa[i] - kappa(prof.t[i])));
  CHECK(worst <= 1e-5);
}

TEST_CASE("chord-gap fit recovers curvature") {
  const std::vector<double> hs = {0.1, 0.05, 0.025, 0.0125, 0.00625, 0.003125};

  const auto e2 = make_space(SpaceKind::euclidean, 2);
  const SampledCurve c1 = circle_curve(*e2, 1.0, 4096);
  const ChordFit f1 = chord_curvature_fit(*e2, c1, M_PI, hs);
  CHECK(std::abs(f1.kappa_hat - 1.0) <= 0.02);

  const auto h2 = make_space(SpaceKind::hyperbolic, 2);
  const SampledCurve c2 = circle_curve(*h2, 1.0, 4096);
  const ChordFit f2 = chord_curvature_fit(*h2, c2, c2.span() / 2.0, hs);
  CHECK(std::abs(f2.kappa_hat - 1.3130352854993312) <= 0.02 * 1.3130352854993312);
}

TEST_CASE("chord-gap fit on a geodesic gives nearly zero curvature") {
  // Stencil widths aligned with the sample grid so chords use exact sample
  // points; the fitted curvature is then pure roundoff.
  const auto h3 = make_space(SpaceKind::hyperbolic, 3);
  VectorXd p = VectorXd::Zero(3), q(3);
  q << 1.1, 0.7, -0.4;
  SampledCurve g = geodesic(*h3, p, q, 1000);
  const double dt = g.span() / 1000.0;
  const std::vector<double> hs = {25 * dt, 50 * dt, 100 * dt};
  const ChordFit f = chord_curvature_fit(*h3, g, g.t[500], hs);
  CHECK(f.kappa_hat <= 1e-5);
}

TEST_CASE("chord fit error paths") {
  const auto e2 = make_space(SpaceKind::euclidean, 2);
  const SampledCurve c = circle_curve(*e2, 1.0, 256);
  CHECK_THROWS_AS((void)chord_curvature_fit(*e2, c, 0.01, {0.1}), BoundaryParameter);

  // Fabricated data whose chords exceed twice the parameter gap: the h^3
  // coefficient comes out negative.
  SampledCurve fake;
  const int m = 64;
  for (int i = 0; i <= m; ++i) {
    fake.t.push_back(i * 0.01);
    fake.x.push_back(Eigen::Vector2d(1.02 * i * 0.01, 0.0));
    fake.v.push_back(Eigen::Vector2d(1.0, 0.0));
  }
  CHECK_THROWS_AS((void)chord_curvature_fit(*e2, fake, 0.32, {0.05, 0.1}), NegativeFitCoefficient);
}

TEST_CASE("uniform chord bound threshold on plane and hyperbolic circles") {
  const auto e2 = make_space(SpaceKind::euclidean, 2);
  const SampledCurve c = circle_curve(*e2, 1.0, 512);
  CHECK(uniform_chord_bound_check(*e2, c, 0.32, 0.5).holds);
  CHECK_FALSE(uniform_chord_bound_check(*e2, c, 0.34, 0.5).holds);

  // kappa^2/3 = coth(1)^2/3 = 0.5747 separates passing from failing bounds.
  const auto h2 = make_space(SpaceKind::hyperbolic, 2);
  const SampledCurve ch = circle_curve(*h2, 1.0, 512);
  CHECK(uniform_chord_bound_check(*h2, ch, 0.50, 0.5).holds);
  CHECK_FALSE(uniform_chord_bound_check(*h2, ch, 0.60, 0.5).holds);
}

TEST_CASE("two-point distance defect matches the curvature prediction") {
  const auto h3 = make_space(SpaceKind::hyperbolic, 3);
  const VectorXd o = VectorXd::Zero(3);
  VectorXd a = VectorXd::Zero(3), b = VectorXd::Zero(3);
  a[0] = 0.1;
  b[1] = 0.1;
  const TwoPointDefect d = two_point_defect(*h3, o, a, b);
  // Orthogonal legs of length eps: prediction is eps^4 / 3 = 3.3333e-5.
  CHECK(d.predicted == doctest::Approx(3.3333333333e-5).epsilon(1e-9));
  CHECK(std::abs(d.defect - d.predicted) <= 0.05 * d.predicted);

  CHECK_THROWS_AS((void)two_point_defect(*h3, o, 8.0 * a, b), RadiusTooLarge);

  const auto e3 = make_space(SpaceKind::euclidean, 3);
  CHECK(std::abs(two_point_defect(*e3, o, a, b).defect) <= 1e-14);
}

TEST_CASE("two-point defect converges at high order") {
  std::mt19937_64 rng(302);
  for (const auto& sp : {make_space(SpaceKind::hyperbolic, 3), make_space(SpaceKind::sphere, 2)}) {
    const VectorXd o = random_point(*sp, rng);
    const VectorXd u = random_tangent(*sp, o, rng);
    VectorXd w = random_tangent(*sp, o, rng);
    std::vector<double> rho, err;
    for (double r : {0.01, 0.02, 0.04, 0.08, 0.16}) {
      const TwoPointDefect d = two_point_defect(*sp, o, (r / 2.0) * u, (r / 2.0) * w);
      rho.push_back(r);
      err.push_back(std::max(std::abs(d.defect - d.predicted), 1e-300));
    }
    CHECK(loglog_slope(rho, err) >= 4.5);
  }
}

TEST_CASE("curve plumbing: domains, resampling, unit speed") {
  const auto h2 = make_space(SpaceKind::hyperbolic, 2);
  const SampledCurve c = circle_curve(*h2, 1.0, 128);
  CHECK_THROWS_AS((void)c.position(c.t1() + 0.5), BoundaryParameter);
  const SampledCurve r = resample(*h2, c, c.t0() + 0.1, c.t1() - 0.1, 200);
  require_unit_speed(*h2, r, 1e-6);
  CHECK(r.size() == 201);
  CHECK((r.x.front() - c.position(c.t0() + 0.1)).norm() <= 1e-12);

  SampledCurve bad = c;
  bad.v[3] *= 1.5;
  CHECK_THROWS_AS(require_unit_speed(*h2, bad), NonUnitSpeedCurve);
}
