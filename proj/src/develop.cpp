#include "tcurv/develop.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "tcurv/errors.hpp"
#include "tcurv/parallel.hpp"
#include "tcurv/rng.hpp"
#include "tcurv/transport.hpp"

namespace tcurv {

using Eigen::Matrix3d;
using Eigen::MatrixXd;
using Eigen::Vector3d;
using Eigen::VectorXd;

namespace {

void check_patch(const GridPatch& p) {
  if (!p.space) throw DegenerateInput("grid patch has no space");
  if (p.space->dimension() != 3)
    throw UnsupportedSpace("developing needs a 3-dimensional ambient, got " + p.space->name());
  if (p.rows < 2 || p.cols < 2)
    throw DegenerateInput("grid patch needs at least 2x2 nodes");
  if (static_cast<int>(p.x.size()) != p.nodes() || static_cast<int>(p.nu.size()) != p.nodes())
    throw DegenerateInput("grid patch arrays do not match rows*cols");
}

void check_dims(const GridPatch& a, const GridPatch& b) {
  if (a.rows != b.rows || a.cols != b.cols)
    throw GridMismatch("grids are " + std::to_string(a.rows) + "x" + std::to_string(a.cols) +
                       " vs " + std::to_string(b.rows) + "x" + std::to_string(b.cols));
}

Matrix3d transport_frame(const ModelSpace& sp, const VectorXd& from, const VectorXd& to,
                         const Matrix3d& e) {
  Matrix3d out;
  for (int k = 0; k < 3; ++k) out.col(k) = geodesic_transport(sp, from, to, e.col(k));
  return out;
}

// Frame coefficients against the g-orthonormal basis at x; op-norm
// differences of these matrices are chart independent.
Matrix3d frame_coefficients(const ModelSpace& sp, const VectorXd& x, const Matrix3d& e) {
  MatrixXd b = sp.orthonormal_basis(x);
  return (b.transpose() * sp.metric(x) * e).eval();
}

double operator_norm(const Matrix3d& m) {
  return m.jacobiSvd().singularValues()(0);
}

// Trapezoid increment of the coframe along the edge geodesic a -> b:
// integrates <gamma'(t), e_i(gamma(t))> with endpoint samples, using the
// arriving velocity of the connecting geodesic at b.
Vector3d edge_increment(const ModelSpace& sp, const VectorXd& a, const VectorXd& b,
                        const Matrix3d& ea, const Matrix3d& eb) {
  VectorXd v = sp.log_map(a, b);
  VectorXd pos, vel;
  sp.geodesic_state(a, v, 1.0, &pos, &vel);
  MatrixXd ga = sp.metric(a), gb = sp.metric(b);
  Vector3d out;
  for (int k = 0; k < 3; ++k)
    out(k) = 0.5 * (v.dot(ga * ea.col(k)) + vel.dot(gb * eb.col(k)));
  return out;
}

double comparison_area(double la, double lb, double lc) {
  double p = 0.5 * (la + lb + lc);
  double s = p * (p - la) * (p - lb) * (p - lc);
  return s > 0.0 ? std::sqrt(s) : 0.0;
}

}  // namespace

double patch_flatness(const GridPatch& p) {
  check_patch(p);
  const ModelSpace& sp = *p.space;
  std::vector<double> worst(p.rows, 0.0);
  parallel_for(p.rows, [&](int i) {
    for (int j = 0; j < p.cols; ++j) {
      const VectorXd& a = p.at(i, j);
      VectorXd u = sp.log_map(a, p.at(i, j + 1 < p.cols ? j + 1 : j - 1));
      VectorXd w = sp.log_map(a, p.at(i + 1 < p.rows ? i + 1 : i - 1, j));
      worst[i] = std::max(worst[i], std::abs(sp.sectional_curvature(a, u, w)));
    }
  }, 8);
  return *std::max_element(worst.begin(), worst.end());
}

SurfaceFrame surface_frame(const GridPatch& p, double flat_tol, double defect_tol,
                         const Matrix3d* base) {
  check_patch(p);
  const ModelSpace& sp = *p.space;

  double flat = patch_flatness(p);
  if (flat > flat_tol) {
    std::ostringstream msg;
    msg << "tangent-plane sectional curvature " << flat << " exceeds " << flat_tol;
    throw NotFlatOnTangentPlanes(msg.str());
  }

  SurfaceFrame f;
  f.rows = p.rows;
  f.cols = p.cols;
  f.e.resize(p.nodes());

  if (base) {
    f.e[0] = *base;
  } else {
    // Metric Gram-Schmidt of (row tangent, column tangent, normal).
    const VectorXd& o = p.at(0, 0);
    MatrixXd g = sp.metric(o);
    Matrix3d raw;
    raw.col(0) = sp.log_map(o, p.at(0, 1));
    raw.col(1) = sp.log_map(o, p.at(1, 0));
    raw.col(2) = p.nu[0];
    Matrix3d e;
    for (int k = 0; k < 3; ++k) {
      VectorXd v = raw.col(k);
      for (int m = 0; m < k; ++m) v -= (v.dot(g * e.col(m))) * e.col(m);
      double n = std::sqrt(v.dot(g * v));
      if (n < 1e-12) throw DegenerateInput("degenerate tangent data at the base corner");
      e.col(k) = v / n;
    }
    f.e[0] = e;
  }

  for (int j = 1; j < p.cols; ++j)
    f.e[p.idx(0, j)] = transport_frame(sp, p.at(0, j - 1), p.at(0, j), f.e[p.idx(0, j - 1)]);
  for (int j = 0; j < p.cols; ++j)
    for (int i = 1; i < p.rows; ++i)
      f.e[p.idx(i, j)] = transport_frame(sp, p.at(i - 1, j), p.at(i, j), f.e[p.idx(i - 1, j)]);

  std::vector<double> defect(p.rows - 1, 0.0), ortho(p.rows, 0.0);
  parallel_for(p.rows - 1, [&](int i) {
    for (int j = 0; j + 1 < p.cols; ++j) {
      const VectorXd &a = p.at(i, j), &b = p.at(i, j + 1), &c = p.at(i + 1, j);
      const VectorXd& d = p.at(i + 1, j + 1);
      Matrix3d via_b = transport_frame(sp, b, d, transport_frame(sp, a, b, f.e[p.idx(i, j)]));
      Matrix3d via_c = transport_frame(sp, c, d, transport_frame(sp, a, c, f.e[p.idx(i, j)]));
      defect[i] = std::max(defect[i], operator_norm(frame_coefficients(sp, d, via_b) -
                                                    frame_coefficients(sp, d, via_c)));
    }
  }, 4);
  parallel_for(p.rows, [&](int i) {
    for (int j = 0; j < p.cols; ++j) {
      const Matrix3d& e = f.e[p.idx(i, j)];
      MatrixXd g = sp.metric(p.at(i, j));
      ortho[i] = std::max(ortho[i], (e.transpose() * g * e - Matrix3d::Identity())
                                        .cwiseAbs().maxCoeff());
    }
  }, 8);
  f.max_path_defect = *std::max_element(defect.begin(), defect.end());
  f.max_orthonormality_defect = *std::max_element(ortho.begin(), ortho.end());

  if (f.max_path_defect > defect_tol) {
    std::ostringstream msg;
    msg << "cell transport defect " << f.max_path_defect << " exceeds " << defect_tol;
    throw PathDependence(msg.str());
  }
  return f;
}

DevelopedPatch develop_map(const GridPatch& p, const SurfaceFrame& f) {
  check_patch(p);
  if (f.rows != p.rows || f.cols != p.cols)
    throw GridMismatch("frame field does not match the patch grid");
  const ModelSpace& sp = *p.space;
  const int rows = p.rows, cols = p.cols;

  // Edge increments of the coframe: hor(i,j) spans (i,j)->(i,j+1),
  // ver(i,j) spans (i,j)->(i+1,j).
  std::vector<Vector3d> hor(rows * (cols - 1)), ver((rows - 1) * cols);
  parallel_for(rows, [&](int i) {
    for (int j = 0; j + 1 < cols; ++j)
      hor[i * (cols - 1) + j] = edge_increment(sp, p.at(i, j), p.at(i, j + 1),
                                               f.e[p.idx(i, j)], f.e[p.idx(i, j + 1)]);
  }, 8);
  parallel_for(rows - 1, [&](int i) {
    for (int j = 0; j < cols; ++j)
      ver[i * cols + j] = edge_increment(sp, p.at(i, j), p.at(i + 1, j),
                                         f.e[p.idx(i, j)], f.e[p.idx(i + 1, j)]);
  }, 8);
  auto h = [&](int i, int j) -> const Vector3d& { return hor[i * (cols - 1) + j]; };
  auto v = [&](int i, int j) -> const Vector3d& { return ver[i * cols + j]; };

  // Row-0-then-column staircase (the emitted map) and its transpose.
  std::vector<Vector3d> fa(p.nodes()), fb(p.nodes());
  fa[0] = fb[0] = Vector3d::Zero();
  for (int j = 1; j < cols; ++j) fa[p.idx(0, j)] = fa[p.idx(0, j - 1)] + h(0, j - 1);
  for (int j = 0; j < cols; ++j)
    for (int i = 1; i < rows; ++i) fa[p.idx(i, j)] = fa[p.idx(i - 1, j)] + v(i - 1, j);
  for (int i = 1; i < rows; ++i) fb[p.idx(i, 0)] = fb[p.idx(i - 1, 0)] + v(i - 1, 0);
  for (int i = 0; i < rows; ++i)
    for (int j = 1; j < cols; ++j) fb[p.idx(i, j)] = fb[p.idx(i, j - 1)] + h(i, j - 1);

  DevelopedPatch out;
  for (int k = 0; k < p.nodes(); ++k)
    out.path_mismatch = std::max(out.path_mismatch, (fa[k] - fb[k]).norm());

  for (int i = 0; i < rows; ++i)
    for (int j = 0; j + 1 < cols; ++j) {
      double len = sp.distance(p.at(i, j), p.at(i, j + 1));
      Vector3d df = fa[p.idx(i, j + 1)] - fa[p.idx(i, j)];
      out.differential_defect = std::max(out.differential_defect, (df - h(i, j)).norm() / len);
    }
  for (int i = 0; i + 1 < rows; ++i)
    for (int j = 0; j < cols; ++j) {
      double len = sp.distance(p.at(i, j), p.at(i + 1, j));
      Vector3d df = fa[p.idx(i + 1, j)] - fa[p.idx(i, j)];
      out.differential_defect = std::max(out.differential_defect, (df - v(i, j)).norm() / len);
    }

  for (int i = 0; i + 1 < rows; ++i)
    for (int j = 0; j + 1 < cols; ++j) {
      Vector3d circ = h(i, j) + v(i, j + 1) - h(i + 1, j) - v(i, j);
      double diag = sp.distance(p.at(i, j), p.at(i + 1, j + 1));
      double area = comparison_area(sp.distance(p.at(i, j), p.at(i, j + 1)),
                                    sp.distance(p.at(i, j + 1), p.at(i + 1, j + 1)), diag) +
                    comparison_area(diag, sp.distance(p.at(i + 1, j + 1), p.at(i + 1, j)),
                                    sp.distance(p.at(i + 1, j), p.at(i, j)));
      if (area > 0.0) out.max_circulation = std::max(out.max_circulation, circ.norm() / area);
    }

  out.image.space = make_space("euclidean3");
  out.image.rows = rows;
  out.image.cols = cols;
  out.image.x.reserve(p.nodes());
  out.image.nu.reserve(p.nodes());
  for (int k = 0; k < p.nodes(); ++k) {
    out.image.x.push_back(fa[k]);
    MatrixXd g = sp.metric(p.x[k]);
    Vector3d coeff;
    for (int c = 0; c < 3; ++c) coeff(c) = p.nu[k].dot(g * f.e[k].col(c));
    out.image.nu.push_back(coeff);
  }
  return out;
}

IsometryReport verify_isometry(const GridPatch& src, const GridPatch& img, int paths,
                               uint64_t seed, double tol, int chord_window) {
  check_patch(src);
  check_dims(src, img);
  const ModelSpace& sp = *src.space;
  const int rows = src.rows, cols = src.cols;
  auto fx = [&](int i, int j) { return Vector3d(img.x[img.idx(i, j)]); };

  IsometryReport rep;
  std::vector<double> inner_worst(rows - 1, 0.0);
  parallel_for(rows - 1, [&](int i) {
    for (int j = 0; j + 1 < cols; ++j) {
      const VectorXd& a = src.at(i, j);
      VectorXd u = sp.log_map(a, src.at(i, j + 1));
      VectorXd w = sp.log_map(a, src.at(i + 1, j));
      MatrixXd g = sp.metric(a);
      double suu = u.dot(g * u), sww = w.dot(g * w), suw = u.dot(g * w);
      Vector3d cu = fx(i, j + 1) - fx(i, j), cw = fx(i + 1, j) - fx(i, j);
      double m = std::max({std::abs(cu.squaredNorm() - suu) / suu,
                           std::abs(cw.squaredNorm() - sww) / sww,
                           std::abs(cu.dot(cw) - suw) / std::sqrt(suu * sww)});
      inner_worst[i] = std::max(inner_worst[i], m);
    }
  }, 4);
  rep.max_inner_mismatch = *std::max_element(inner_worst.begin(), inner_worst.end());

  std::mt19937_64 rng(stream_seed(seed, 3));
  auto node = [&](int i, int j) { return std::array<int, 2>{i, j}; };
  for (int trial = 0; trial < paths; ++trial) {
    std::uniform_int_distribution<int> ri(0, rows - 1), rj(0, cols - 1);
    int i0 = ri(rng), j0 = rj(rng), i1 = ri(rng), j1 = rj(rng);
    int di = i1 >= i0 ? 1 : -1, dj = j1 >= j0 ? 1 : -1;
    std::vector<std::array<int, 2>> walk = {node(i0, j0)};
    int i = i0, j = j0;
    std::bernoulli_distribution step(0.5);
    while (i != i1 || j != j1) {
      if (i == i1) j += dj;
      else if (j == j1) i += di;
      else if (step(rng)) i += di;
      else j += dj;
      walk.push_back(node(i, j));
    }
    if (walk.size() < 2) { --trial; continue; }
    double ls = 0.0, li = 0.0;
    for (size_t k = 0; k + 1 < walk.size(); ++k) {
      ls += sp.distance(src.at(walk[k][0], walk[k][1]), src.at(walk[k + 1][0], walk[k + 1][1]));
      li += (fx(walk[k][0], walk[k][1]) - fx(walk[k + 1][0], walk[k + 1][1])).norm();
    }
    rep.max_path_mismatch = std::max(rep.max_path_mismatch, std::abs(ls - li) / ls);
  }

  std::uniform_int_distribution<int> ri(0, rows - 1), rj(0, cols - 1);
  std::uniform_int_distribution<int> win(-chord_window, chord_window);
  for (int trial = 0; trial < 200; ++trial) {
    int i0 = ri(rng), j0 = rj(rng);
    int i1 = std::clamp(i0 + win(rng), 0, rows - 1);
    int j1 = std::clamp(j0 + win(rng), 0, cols - 1);
    if (i0 == i1 && j0 == j1) continue;
    double ds = sp.distance(src.at(i0, j0), src.at(i1, j1));
    double di = (fx(i0, j0) - fx(i1, j1)).norm();
    rep.max_chord_mismatch = std::max(rep.max_chord_mismatch, std::abs(ds - di) / ds);
  }

  rep.pass = rep.max_inner_mismatch <= tol && rep.max_path_mismatch <= tol &&
             rep.max_chord_mismatch <= tol;
  return rep;
}

std::pair<double, double> verify_tau_preservation(const GridPatch& src, const GridPatch& img,
                                                  const std::vector<std::array<int, 2>>& path) {
  check_patch(src);
  check_dims(src, img);
  if (path.size() < 3) return {0.0, 0.0};
  const ModelSpace& sp = *src.space;

  auto angle = [](double cosv) { return std::acos(std::clamp(cosv, -1.0, 1.0)); };
  double tau_src = 0.0, tau_img = 0.0;
  for (size_t k = 0; k + 2 < path.size(); ++k) {
    const VectorXd& a = src.at(path[k][0], path[k][1]);
    const VectorXd& b = src.at(path[k + 1][0], path[k + 1][1]);
    const VectorXd& c = src.at(path[k + 2][0], path[k + 2][1]);
    VectorXd pos, arrive;
    sp.geodesic_state(a, sp.log_map(a, b), 1.0, &pos, &arrive);
    VectorXd depart = sp.log_map(b, c);
    MatrixXd g = sp.metric(b);
    tau_src += angle(arrive.dot(g * depart) /
                     (std::sqrt(arrive.dot(g * arrive)) * std::sqrt(depart.dot(g * depart))));

    Vector3d ia = img.x[img.idx(path[k][0], path[k][1])];
    Vector3d ib = img.x[img.idx(path[k + 1][0], path[k + 1][1])];
    Vector3d ic = img.x[img.idx(path[k + 2][0], path[k + 2][1])];
    tau_img += angle((ib - ia).normalized().dot((ic - ib).normalized()));
  }
  return {tau_src, tau_img};
}

double verify_normal_correspondence(const GridPatch& src, const SurfaceFrame& f,
                                    const GridPatch& img) {
  check_patch(src);
  check_dims(src, img);
  if (f.rows != src.rows || f.cols != src.cols)
    throw GridMismatch("frame field does not match the patch grid");
  const ModelSpace& sp = *src.space;

  std::vector<Vector3d> nup(src.nodes());
  double defect = 0.0;
  for (int k = 0; k < src.nodes(); ++k) {
    MatrixXd g = sp.metric(src.x[k]);
    for (int c = 0; c < 3; ++c) nup[k](c) = src.nu[k].dot(g * f.e[k].col(c));
    defect = std::max(defect, std::abs(nup[k].norm() - 1.0));
  }
  auto edge = [&](int ka, int kb) {
    Vector3d d = Vector3d(img.x[kb]) - Vector3d(img.x[ka]);
    double n = d.norm();
    if (n == 0.0) return;
    d /= n;
    defect = std::max({defect, std::abs(d.dot(nup[ka])), std::abs(d.dot(nup[kb]))});
  };
  for (int i = 0; i < src.rows; ++i)
    for (int j = 0; j + 1 < src.cols; ++j) edge(src.idx(i, j), src.idx(i, j + 1));
  for (int i = 0; i + 1 < src.rows; ++i)
    for (int j = 0; j < src.cols; ++j) edge(src.idx(i, j), src.idx(i + 1, j));
  return defect;
}

AtlasReport develop_atlas(const std::vector<GridPatch>& charts, double flat_tol,
                          double defect_tol) {
  if (charts.empty()) throw DegenerateInput("atlas without charts");
  for (const auto& c : charts) check_patch(c);
  const ModelSpace& sp = *charts[0].space;

  std::vector<SurfaceFrame> frames;
  frames.push_back(surface_frame(charts[0], flat_tol, defect_tol));
  for (size_t c = 1; c < charts.size(); ++c) {
    Matrix3d base = transport_frame(sp, charts[0].x[0], charts[c].x[0], frames[0].e[0]);
    frames.push_back(surface_frame(charts[c], flat_tol, defect_tol, &base));
  }

  AtlasReport rep;
  rep.charts.resize(charts.size());
  parallel_for(static_cast<int>(charts.size()),
               [&](int c) { rep.charts[c] = develop_map(charts[c], frames[c]); }, 1);

  for (size_t c1 = 0; c1 < charts.size(); ++c1)
    for (size_t c2 = c1 + 1; c2 < charts.size(); ++c2) {
      std::vector<Vector3d> diffs;
      for (int a = 0; a < charts[c1].nodes(); ++a)
        for (int b = 0; b < charts[c2].nodes(); ++b) {
          if ((charts[c1].x[a] - charts[c2].x[b]).norm() > 1e-9) continue;
          const VectorXd& x = charts[c1].x[a];
          rep.max_frame_mismatch =
              std::max(rep.max_frame_mismatch,
                       operator_norm(frame_coefficients(sp, x, frames[c1].e[a]) -
                                     frame_coefficients(sp, x, frames[c2].e[b])));
          diffs.push_back(Vector3d(rep.charts[c1].image.x[a]) -
                          Vector3d(rep.charts[c2].image.x[b]));
        }
      if (diffs.empty()) continue;
      rep.seam_nodes += static_cast<int>(diffs.size());
      Vector3d mean = Vector3d::Zero();
      for (const auto& d : diffs) mean += d;
      mean /= static_cast<double>(diffs.size());
      for (const auto& d : diffs)
        rep.max_seam_drift = std::max(rep.max_seam_drift, (d - mean).norm());
    }
  return rep;
}

}  // namespace tcurv
