#pragma once

#include <Eigen/Dense>
#include <vector>

namespace biconf {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

inline double g_inner(const Mat& g, const Vec& a, const Vec& b) {
  return a.dot(g * b);
}

inline double g_norm(const Mat& g, const Vec& a) {
  return std::sqrt(g_inner(g, a, a));
}

// Smallest singular value of a (possibly rectangular) matrix.
double smallest_singular_value(const Mat& a);

// Smallest eigenvalue of a symmetric matrix.
double smallest_eigenvalue(const Mat& sym);

// Modified Gram-Schmidt in the inner product g, processing `vectors` in
// order. Returns an empty optional-like vector (size < input) on breakdown:
// callers compare sizes.
std::vector<Vec> gram_schmidt(const Mat& g, const std::vector<Vec>& vectors,
                              double breakdown_tol);

// Removes from v its g-projection onto an orthonormal family.
Vec orthogonalize(const Mat& g, Vec v, const std::vector<Vec>& orthonormal);

// Central difference along `dir` with one Richardson step:
//   D(h) = (f(p + h dir) - f(p - h dir)) / 2h,  result = (4 D(h) - D(2h)) / 3.
template <class F>
auto richardson_directional(F&& f, const Vec& p, const Vec& dir, double h) {
  using R = std::decay_t<decltype(f(p))>;
  const R fp1 = f(Vec(p + h * dir));
  const R fm1 = f(Vec(p - h * dir));
  const R fp2 = f(Vec(p + 2.0 * h * dir));
  const R fm2 = f(Vec(p - 2.0 * h * dir));
  const R d1 = (fp1 - fm1) / (2.0 * h);
  const R d2 = (fp2 - fm2) / (4.0 * h);
  return R((4.0 * d1 - d2) / 3.0);
}

}  // namespace biconf
