#pragma once

#include <Eigen/Dense>
#include <vector>

namespace tcurv {

// Dense rank-3 array of doubles, sized n x n x n.  Used for Christoffel
// symbols with the index convention c(k,i,j) = Gamma^k_{ij}; the storage is
// generic and symmetry is not enforced.
class Tensor3 {
 public:
  Tensor3() : n_(0) {}
  explicit Tensor3(int n) : n_(n), a_(static_cast<size_t>(n) * n * n, 0.0) {}

  int dim() const { return n_; }
  double& operator()(int i, int j, int k) { return a_[(static_cast<size_t>(i) * n_ + j) * n_ + k]; }
  double operator()(int i, int j, int k) const { return a_[(static_cast<size_t>(i) * n_ + j) * n_ + k]; }

  double max_abs() const {
    double m = 0.0;
    for (double v : a_) m = std::max(m, std::abs(v));
    return m;
  }

 private:
  int n_;
  std::vector<double> a_;
};

// Dense rank-4 array, sized n^4.  Used for the fully lowered curvature
// tensor R_{ijkl} = <R(e_i,e_j) e_k, e_l>.
class Tensor4 {
 public:
  Tensor4() : n_(0) {}
  explicit Tensor4(int n) : n_(n), a_(static_cast<size_t>(n) * n * n * n, 0.0) {}

  int dim() const { return n_; }
  double& operator()(int i, int j, int k, int l) {
    return a_[((static_cast<size_t>(i) * n_ + j) * n_ + k) * n_ + l];
  }
  double operator()(int i, int j, int k, int l) const {
    return a_[((static_cast<size_t>(i) * n_ + j) * n_ + k) * n_ + l];
  }

  double max_abs() const {
    double m = 0.0;
    for (double v : a_) m = std::max(m, std::abs(v));
    return m;
  }

 private:
  int n_;
  std::vector<double> a_;
};

// Evaluates the quadrilinear form R(a,b,c,d) = R_{ijkl} a^i b^j c^k d^l.
inline double contract(const Tensor4& R, const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                       const Eigen::VectorXd& c, const Eigen::VectorXd& d) {
  const int n = R.dim();
  double s = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) s += R(i, j, k, l) * a[i] * b[j] * c[k] * d[l];
  return s;
}

}  // namespace tcurv
