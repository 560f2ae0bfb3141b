#pragma once

// Shared builders and independent finite-difference oracles for the tests.

#include <cmath>
#include <functional>
#include <memory>

#include "biconf/map_geometry.hpp"
#include "biconf/scenarios.hpp"

namespace biconf::testing {

inline int jet_dim(std::span<const Jet2> x) { return x.empty() ? 0 : x.front().dim; }

inline MatrixJetField constant_matrix(const Mat& value) {
  return [value](std::span<const Jet2> x) {
    const int d = jet_dim(x);
    JetVector out;
    for (int i = 0; i < value.rows(); ++i) {
      for (int j = 0; j < value.cols(); ++j) out.push_back(Jet2::constant(value(i, j), d));
    }
    return out;
  };
}

inline MatrixJetField diagonal_metric(int dim,
                                      std::function<Jet2(std::span<const Jet2>, int)> entry) {
  return [dim, entry](std::span<const Jet2> x) {
    JetVector g(dim * dim, Jet2::constant(0.0, jet_dim(x)));
    for (int i = 0; i < dim; ++i) g[i * dim + i] = entry(x, i);
    return g;
  };
}

inline ChartedRiemannianManifold chart(int dim, MatrixJetField metric, double lo = -1.0,
                                       double hi = 1.0) {
  ChartedRiemannianManifold m;
  m.name = "test chart";
  m.dim = dim;
  m.metric = std::move(metric);
  m.sample_region = Box::cube(dim, lo, hi);
  return m;
}

inline std::shared_ptr<const TargetSpace> flat_target(int two_n) {
  auto t = std::make_shared<TargetSpace>();
  t->manifold = euclidean_space(two_n, Box::cube(two_n, -1.0, 1.0));
  t->complex_structure = constant_matrix(standard_complex_structure(two_n));
  return t;
}

inline MapGeometry geometry(ChartedRiemannianManifold source,
                            std::shared_ptr<const TargetSpace> target, VectorJetField map,
                            GeometryOptions options = {}) {
  const int m = source.dim;
  auto src = std::make_shared<const ChartedRiemannianManifold>(std::move(source));
  auto metric = std::make_shared<const ChartMetricField>(src);
  auto phi = std::make_shared<const SmoothMap>(m, std::move(target), std::move(map));
  return MapGeometry(metric, phi, options);
}

inline VectorJetField projection(int two_n) {
  return [two_n](std::span<const Jet2> x) { return JetVector(x.begin(), x.begin() + two_n); };
}

// Central difference of a matrix-valued function along coordinate k.
template <class F>
Mat fd_partial(F&& f, const Vec& p, int k, double h) {
  Vec a = p, b = p;
  a[k] += h;
  b[k] -= h;
  return (f(a) - f(b)) / (2.0 * h);
}

// Christoffel symbols from metric values only, by the Koszul formula with
// central-difference metric derivatives. out[k](i, j) = Gamma^k_ij.
inline std::vector<Mat> fd_christoffel(const std::function<Mat(const Vec&)>& g, const Vec& p,
                                       double h = 1e-5) {
  const int m = static_cast<int>(p.size());
  std::vector<Mat> dg;
  for (int k = 0; k < m; ++k) dg.push_back(fd_partial(g, p, k, h));
  const Mat gi = g(p).inverse();
  std::vector<Mat> out(m, Mat::Zero(m, m));
  for (int k = 0; k < m; ++k) {
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) {
        double acc = 0.0;
        for (int l = 0; l < m; ++l) {
          acc += gi(k, l) * (dg[i](j, l) + dg[j](i, l) - dg[l](i, j));
        }
        out[k](i, j) = 0.5 * acc;
      }
    }
  }
  return out;
}

inline Mat connection_along(const std::vector<Mat>& gamma, const Vec& x) {
  const int m = static_cast<int>(x.size());
  Mat c = Mat::Zero(m, m);
  for (int k = 0; k < m; ++k) {
    for (int l = 0; l < m; ++l) {
      for (int i = 0; i < m; ++i) c(k, l) += x[i] * gamma[k](i, l);
    }
  }
  return c;
}

// Metric values read from a chart, without derivatives.
inline std::function<Mat(const Vec&)> metric_values(const ChartedRiemannianManifold& m) {
  return [&m](const Vec& p) { return metric_at(m, p); };
}

inline Vec random_point(SampleRng& rng, const Box& box) {
  Vec p(box.lower.size());
  for (Eigen::Index i = 0; i < p.size(); ++i) p[i] = rng.uniform(box.lower[i], box.upper[i]);
  return p;
}

inline Vec random_vector(SampleRng& rng, int m) {
  Vec v(m);
  for (int i = 0; i < m; ++i) v[i] = rng.uniform(-1.0, 1.0);
  return v;
}

}  // namespace biconf::testing
