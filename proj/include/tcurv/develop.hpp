#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "tcurv/space.hpp"

namespace tcurv {

// A surface sampled on a simply connected parameter grid: rows x cols chart
// points in row-major order with outward unit normals.  Grid edges connect
// parameter neighbors; all constructions treat the short ambient geodesics
// between neighboring nodes as the surface curves they approximate.
struct GridPatch {
  SpacePtr space;
  int rows = 0, cols = 0;
  std::vector<Eigen::VectorXd> x;
  std::vector<Eigen::VectorXd> nu;

  int idx(int i, int j) const { return i * cols + j; }
  int nodes() const { return rows * cols; }
  const Eigen::VectorXd& at(int i, int j) const { return x[idx(i, j)]; }
};

// Max |sectional curvature| of the ambient along the tangent planes sampled
// at every node (spanned by the grid log-map directions).
double patch_flatness(const GridPatch& p);

// Orthonormal ambient frame (e_1, e_2, e_3) at every node, parallel along
// the grid to the extent the max path defect certifies: the frame is
// transported from the base corner along row 0 and then down each column,
// and max_path_defect is the worst operator-norm mismatch between
// row-then-column and column-then-row transport across a grid cell.  That
// equals the holonomy defect of the cell loop, since transport is metric.
struct SurfaceFrame {
  int rows = 0, cols = 0;
  std::vector<Eigen::Matrix3d> e;   // columns are e_1, e_2, e_3 in chart coords
  double max_path_defect = 0.0;
  double max_orthonormality_defect = 0.0;
};

// Builds the parallel frame.  The base frame is the metric Gram-Schmidt of
// (row tangent, column tangent, normal) at node (0,0) unless `base` is
// given.  Throws NotFlatOnTangentPlanes when patch_flatness exceeds
// flat_tol and PathDependence when the defect exceeds defect_tol.
SurfaceFrame surface_frame(const GridPatch& p, double flat_tol = 1e-6,
                         double defect_tol = 1e-5,
                         const Eigen::Matrix3d* base = nullptr);

// Integral of the dual coframe theta_i = <., e_i> along staircase grid
// paths from node (0,0), by the composite trapezoid rule on grid edges.
// The emitted map uses the row-0-then-column staircase; the transposed
// staircase is always integrated too and compared.
struct DevelopedPatch {
  GridPatch image;                  // euclidean3 grid; nu from the frame coefficients
  double path_mismatch = 0.0;       // max |f_row_last - f_col_last| over nodes
  double differential_defect = 0.0; // max |df - theta| / edge length over all edges
  double max_circulation = 0.0;     // max cell circulation of theta per unit cell area
};
DevelopedPatch develop_map(const GridPatch& p, const SurfaceFrame& f);

// First-fundamental-form comparison of a source patch and a developed
// image: log-map inner products at every node against image chord inner
// products, lengths of seeded monotone staircase paths, and chords of
// seeded node pairs at most `chord_window` cells apart.
struct IsometryReport {
  double max_inner_mismatch = 0.0;  // relative, over node tangent pairs
  double max_path_mismatch = 0.0;   // relative, over sampled grid paths
  double max_chord_mismatch = 0.0;  // relative, over sampled node pairs
  bool pass = false;
};
IsometryReport verify_isometry(const GridPatch& src, const GridPatch& img, int paths = 50,
                               uint64_t seed = 2026, double tol = 1e-4,
                               int chord_window = 4);

// Total curvature (discrete tangent indicatrix length) of the polyline
// through the listed grid nodes, measured in the source space and in the
// image.  Diagnostic: returns the pair, no tolerance enforced.
std::pair<double, double> verify_tau_preservation(const GridPatch& src, const GridPatch& img,
                                                  const std::vector<std::array<int, 2>>& path);

// Normal correspondence: nu' := sum_i <nu, e_i> e_i' with e_i' the standard
// basis of the image.  Returns the max over nodes and edges of
// | |nu'| - 1 | and |<image edge direction, nu'>|.
double verify_normal_correspondence(const GridPatch& src, const SurfaceFrame& f,
                                    const GridPatch& img);

// Develops an atlas of overlapping patches with a shared base frame: chart
// 0 anchors the frame, every other chart's base is parallel-transported
// from chart 0's origin along the connecting geodesic.  Nodes of different
// charts closer than 1e-9 are seams; the report carries the worst frame
// mismatch at seams and the worst drift of the per-pair translation between
// images (a consistent development differs by one translation per pair).
struct AtlasReport {
  std::vector<DevelopedPatch> charts;
  double max_frame_mismatch = 0.0;
  double max_seam_drift = 0.0;
  int seam_nodes = 0;
};
AtlasReport develop_atlas(const std::vector<GridPatch>& charts, double flat_tol = 1e-6,
                          double defect_tol = 1e-5);

}  // namespace tcurv
