#include "tcurv/mesh_fixtures.hpp"

#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <utility>

#include "tcurv/errors.hpp"
#include "tcurv/rng.hpp"

namespace tcurv {

using Eigen::Vector3d;
using Eigen::VectorXd;

namespace {

struct IcoMesh {
  std::vector<Vector3d> v;  // unit directions
  std::vector<std::array<int, 3>> f;
};

// Icosahedron subdivided `subdiv` times, vertices on the unit sphere,
// faces oriented counterclockwise from outside.
IcoMesh unit_icosphere(int subdiv) {
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  IcoMesh m;
  m.v = {{-1, t, 0}, {1, t, 0},  {-1, -t, 0}, {1, -t, 0}, {0, -1, t},  {0, 1, t},
         {0, -1, -t}, {0, 1, -t}, {t, 0, -1},  {t, 0, 1},  {-t, 0, -1}, {-t, 0, 1}};
  for (auto& p : m.v) p.normalize();
  m.f = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9},  {5, 11, 4},
         {11, 10, 2}, {10, 7, 6}, {7, 1, 8},   {3, 9, 4},  {3, 4, 2},   {3, 2, 6},  {3, 6, 8},
         {3, 8, 9},   {4, 9, 5},  {2, 4, 11},  {6, 2, 10}, {8, 6, 7},   {9, 8, 1}};

  for (int round = 0; round < subdiv; ++round) {
    std::map<uint64_t, int> midpoint;
    auto mid = [&](int a, int b) {
      uint64_t k = (static_cast<uint64_t>(std::min(a, b)) << 32) | static_cast<uint32_t>(std::max(a, b));
      auto it = midpoint.find(k);
      if (it != midpoint.end()) return it->second;
      m.v.push_back((m.v[a] + m.v[b]).normalized());
      int idx = static_cast<int>(m.v.size()) - 1;
      midpoint.emplace(k, idx);
      return idx;
    };
    std::vector<std::array<int, 3>> next;
    next.reserve(4 * m.f.size());
    for (const auto& tr : m.f) {
      int ab = mid(tr[0], tr[1]), bc = mid(tr[1], tr[2]), ca = mid(tr[2], tr[0]);
      next.push_back({tr[0], ab, ca});
      next.push_back({tr[1], bc, ab});
      next.push_back({tr[2], ca, bc});
      next.push_back({ab, bc, ca});
    }
    m.f = std::move(next);
  }
  return m;
}

// Seeded smooth bump field on directions: B(u) = sum_j a_j (d_j . u)^{p_j}
// with unit directions d_j, coefficients normalized so the coefficient
// magnitudes sum to 1.  The power mix includes sharp even terms so that
// moderate amplitudes already dent a radial graph into saddle regions.
// Gradient in the ambient is analytic.
struct BumpField {
  std::vector<Vector3d> dir;
  std::vector<double> amp;
  std::vector<int> pow;

  explicit BumpField(uint64_t seed) {
    std::mt19937_64 rng(stream_seed(seed, 17));
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.5, 1.0);
    const int powers[6] = {2, 12, 4, 16, 6, 9};
    double total = 0.0;
    for (int j = 0; j < 6; ++j) {
      Vector3d d(gauss(rng), gauss(rng), gauss(rng));
      while (d.norm() < 1e-3) d = Vector3d(gauss(rng), gauss(rng), gauss(rng));
      dir.push_back(d.normalized());
      double a = unif(rng) * (j % 2 == 0 ? 1.0 : -1.0);
      amp.push_back(a);
      pow.push_back(powers[j]);
      total += std::abs(a);
    }
    for (auto& a : amp) a /= total;
  }

  double value(const Vector3d& u) const {
    double b = 0.0;
    for (size_t j = 0; j < dir.size(); ++j) b += amp[j] * std::pow(dir[j].dot(u), pow[j]);
    return b;
  }
  Vector3d gradient(const Vector3d& u) const {
    Vector3d g = Vector3d::Zero();
    for (size_t j = 0; j < dir.size(); ++j)
      g += amp[j] * pow[j] * std::pow(dir[j].dot(u), pow[j] - 1) * dir[j];
    return g;
  }
  // Tangential gradient on the unit sphere at u.
  Vector3d sphere_gradient(const Vector3d& u) const {
    Vector3d g = gradient(u);
    return g - u * g.dot(u);
  }
};

TriSurface from_ico(const IcoMesh& m, SpacePtr space) {
  TriSurface s;
  s.space = std::move(space);
  s.genus = 0;
  s.tri = m.f;
  s.x.resize(m.v.size());
  s.nu.resize(m.v.size());
  return s;
}

}  // namespace

TriSurface icosphere(int subdiv, double radius) {
  IcoMesh m = unit_icosphere(subdiv);
  TriSurface s = from_ico(m, make_space("euclidean3"));
  for (size_t i = 0; i < m.v.size(); ++i) {
    s.x[i] = radius * m.v[i];
    s.nu[i] = m.v[i];
  }
  return s;
}

TriSurface torus_surface(double R, double r, int nu, int nv) {
  if (R <= r || r <= 0.0) throw DegenerateInput("torus needs R > r > 0");
  TriSurface s;
  s.space = make_space("euclidean3");
  s.genus = 1;
  auto idx = [&](int i, int j) { return (i % nu) * nv + (j % nv); };
  s.x.resize(nu * nv);
  s.nu.resize(nu * nv);
  for (int i = 0; i < nu; ++i) {
    double u = 2.0 * M_PI * i / nu;
    for (int j = 0; j < nv; ++j) {
      double v = 2.0 * M_PI * j / nv;
      Vector3d n(std::cos(v) * std::cos(u), std::cos(v) * std::sin(u), std::sin(v));
      s.x[idx(i, j)] = Vector3d((R + r * std::cos(v)) * std::cos(u),
                                (R + r * std::cos(v)) * std::sin(u), r * std::sin(v));
      s.nu[idx(i, j)] = n;
    }
  }
  for (int i = 0; i < nu; ++i)
    for (int j = 0; j < nv; ++j) {
      int a = idx(i, j), b = idx(i + 1, j), c = idx(i + 1, j + 1), d = idx(i, j + 1);
      s.tri.push_back({a, b, c});
      s.tri.push_back({a, c, d});
    }
  return s;
}

TriSurface geodesic_sphere(double r, int subdiv) {
  if (r <= 0.0) throw DegenerateInput("geodesic sphere needs r > 0");
  IcoMesh m = unit_icosphere(subdiv);
  TriSurface s = from_ico(m, make_space("hyperbolic3"));
  // The chart point at hyperbolic distance r along u is sinh(r) u, and the
  // unit radial tangent there is cosh(r) u.
  for (size_t i = 0; i < m.v.size(); ++i) {
    s.x[i] = std::sinh(r) * m.v[i];
    s.nu[i] = std::cosh(r) * m.v[i];
  }
  return s;
}

TriSurface bumpy_sphere(double radius, double amplitude, uint64_t seed, int subdiv) {
  IcoMesh m = unit_icosphere(subdiv);
  BumpField bump(seed);
  TriSurface s = from_ico(m, make_space("euclidean3"));
  for (size_t i = 0; i < m.v.size(); ++i) {
    const Vector3d& u = m.v[i];
    double rho = radius * (1.0 + amplitude * bump.value(u));
    Vector3d grad = radius * amplitude * bump.sphere_gradient(u);
    s.x[i] = rho * u;
    // Normal of a radial graph: u - (tangential gradient)/rho, normalized.
    s.nu[i] = (u - grad / rho).normalized();
  }
  return s;
}

TriSurface bumpy_geodesic_sphere(double r0, double amplitude, uint64_t seed, int subdiv) {
  IcoMesh m = unit_icosphere(subdiv);
  BumpField bump(seed);
  TriSurface s = from_ico(m, make_space("hyperbolic3"));
  for (size_t i = 0; i < m.v.size(); ++i) {
    const Vector3d& u = m.v[i];
    double rho = r0 * (1.0 + amplitude * bump.value(u));
    Vector3d grad = r0 * amplitude * bump.sphere_gradient(u);  // hyperbolic radius gradient
    s.x[i] = std::sinh(rho) * u;
    // Radial-graph normal in the hyperboloid chart: the tangents are
    // cosh(rho)(grad . w) u + sinh(rho) w for w orthogonal to u, and
    // nu = lambda (cosh(rho) u - grad / sinh(rho)) is metric-orthogonal to
    // them with |nu|_g = lambda sqrt(1 + |grad|^2 / sinh(rho)^2).
    double lambda = 1.0 / std::sqrt(1.0 + grad.squaredNorm() / (std::sinh(rho) * std::sinh(rho)));
    s.nu[i] = lambda * (std::cosh(rho) * u - grad / std::sinh(rho));
  }
  return s;
}

TriSurface flat_strip(double half_length, double height, int nu, int nv) {
  TriSurface s;
  s.space = make_space("h2xr");
  s.genus = 0;
  auto idx = [&](int i, int j) { return i * (nv + 1) + j; };
  s.x.resize((nu + 1) * (nv + 1));
  s.nu.resize(s.x.size());
  for (int i = 0; i <= nu; ++i) {
    double a = -half_length + 2.0 * half_length * i / nu;
    for (int j = 0; j <= nv; ++j) {
      double z = height * j / nv;
      // Base geodesic through the H^2 origin along the first axis: the
      // point at arclength a is (sinh a, 0).  The normal (0, 1, 0) has unit
      // metric norm there and is orthogonal to both surface directions.
      s.x[idx(i, j)] = Vector3d(std::sinh(a), 0.0, z);
      s.nu[idx(i, j)] = Vector3d(0.0, 1.0, 0.0);
    }
  }
  for (int i = 0; i < nu; ++i)
    for (int j = 0; j < nv; ++j) {
      int a = idx(i, j), b = idx(i + 1, j), c = idx(i + 1, j + 1), d = idx(i, j + 1);
      s.tri.push_back({a, b, c});
      s.tri.push_back({a, c, d});
    }
  return s;
}

GridPatch plane_patch(double extent, int rows, int cols, uint64_t seed) {
  std::mt19937_64 rng(stream_seed(seed, 23));
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::Matrix3d a;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) a(i, j) = gauss(rng);
  Eigen::HouseholderQR<Eigen::Matrix3d> qr(a);
  Eigen::Matrix3d rot = qr.householderQ();
  if (rot.determinant() < 0) rot.col(0) *= -1.0;
  Vector3d shift(gauss(rng), gauss(rng), gauss(rng));

  GridPatch p;
  p.space = make_space("euclidean3");
  p.rows = rows;
  p.cols = cols;
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) {
      double u = -extent + 2.0 * extent * j / (cols - 1);
      double v = -extent + 2.0 * extent * i / (rows - 1);
      p.x.push_back(rot * Vector3d(u, v, 0.0) + shift);
      p.nu.push_back(rot * Vector3d(0.0, 0.0, 1.0));
    }
  return p;
}

GridPatch strip_patch(double half_length, double height, int rows, int cols) {
  GridPatch p;
  p.space = make_space("h2xr");
  p.rows = rows;
  p.cols = cols;
  for (int i = 0; i < rows; ++i) {
    double z = height * i / (rows - 1);
    for (int j = 0; j < cols; ++j) {
      double a = -half_length + 2.0 * half_length * j / (cols - 1);
      p.x.push_back(Vector3d(std::sinh(a), 0.0, z));
      p.nu.push_back(Vector3d(0.0, 1.0, 0.0));
    }
  }
  return p;
}

GridPatch arc_strip_patch(double r, double arc_length, double height, int rows, int cols) {
  GridPatch p;
  p.space = make_space("h2xr");
  p.rows = rows;
  p.cols = cols;
  for (int i = 0; i < rows; ++i) {
    double z = height * i / (rows - 1);
    for (int j = 0; j < cols; ++j) {
      double s = -0.5 * arc_length + arc_length * j / (cols - 1);
      double phi = s / std::sinh(r);
      // Circle of hyperbolic radius r about the origin, arclength
      // parametrized; the outward radial direction cosh(r) u has unit
      // metric norm in the spatial chart.
      p.x.push_back(Vector3d(std::sinh(r) * std::cos(phi), std::sinh(r) * std::sin(phi), z));
      p.nu.push_back(Vector3d(std::cosh(r) * std::cos(phi), std::cosh(r) * std::sin(phi), 0.0));
    }
  }
  return p;
}

GridPatch sphere_cap_patch(double r, int rows, int cols) {
  GridPatch p;
  p.space = make_space("hyperbolic3");
  p.rows = rows;
  p.cols = cols;
  for (int i = 0; i < rows; ++i) {
    double theta = 0.6 + 0.5 * i / (rows - 1);
    for (int j = 0; j < cols; ++j) {
      double phi = 0.5 * j / (cols - 1);
      Vector3d u(std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi),
                 std::cos(theta));
      p.x.push_back(std::sinh(r) * u);
      p.nu.push_back(std::cosh(r) * u);
    }
  }
  return p;
}

std::vector<GridPatch> cube_sphere_charts(int n, double radius, double amplitude,
                                          uint64_t seed) {
  BumpField bump(seed);
  auto at = [&](const Vector3d& cube_point) {
    Vector3d u = cube_point.normalized();
    double rho = radius * (1.0 + amplitude * bump.value(u));
    Vector3d grad = radius * amplitude * bump.sphere_gradient(u);
    return std::pair<Vector3d, Vector3d>(rho * u, (u - grad / rho).normalized());
  };
  std::vector<GridPatch> charts;
  // Face frames: (axis, tangent a, tangent b) for the +-x, +-y, +-z faces.
  const Vector3d ex(1, 0, 0), ey(0, 1, 0), ez(0, 0, 1);
  const std::array<std::array<Vector3d, 3>, 6> faces = {{{ex, ey, ez},
                                                         {-ex, ez, ey},
                                                         {ey, ez, ex},
                                                         {-ey, ex, ez},
                                                         {ez, ex, ey},
                                                         {-ez, ey, ex}}};
  for (const auto& f : faces) {
    GridPatch p;
    p.space = make_space("euclidean3");
    p.rows = n;
    p.cols = n;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double a = -1.0 + 2.0 * j / (n - 1);
        double b = -1.0 + 2.0 * i / (n - 1);
        auto [x, nu] = at(f[0] + a * f[1] + b * f[2]);
        p.x.push_back(x);
        p.nu.push_back(nu);
      }
    charts.push_back(std::move(p));
  }
  return charts;
}

}  // namespace tcurv
