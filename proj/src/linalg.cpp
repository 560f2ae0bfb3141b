#include "biconf/linalg.hpp"

namespace biconf {

double smallest_singular_value(const Mat& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<Mat> svd(a);
  return svd.singularValues().minCoeff();
}

double smallest_eigenvalue(const Mat& sym) {
  Eigen::SelfAdjointEigenSolver<Mat> es(sym, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

Vec orthogonalize(const Mat& g, Vec v, const std::vector<Vec>& orthonormal) {
  for (const Vec& e : orthonormal) v -= g_inner(g, e, v) * e;
  return v;
}

std::vector<Vec> gram_schmidt(const Mat& g, const std::vector<Vec>& vectors,
                              double breakdown_tol) {
  std::vector<Vec> out;
  out.reserve(vectors.size());
  for (const Vec& v : vectors) {
    const double scale = g_norm(g, v);
    Vec w = orthogonalize(g, v, out);
    // Second pass keeps orthogonality at roundoff level.
    w = orthogonalize(g, w, out);
    const double n = g_norm(g, w);
    if (!(n > breakdown_tol * std::max(scale, 1e-300))) return out;
    out.push_back(w / n);
  }
  return out;
}

}  // namespace biconf
