#include "biconf/manifold.hpp"

#include <cmath>
#include <sstream>

#include "biconf/errors.hpp"

namespace biconf {
namespace {

std::string describe(const Vec& p) {
  std::ostringstream os;
  os << "(";
  for (Eigen::Index i = 0; i < p.size(); ++i) os << (i ? ", " : "") << p[i];
  os << ")";
  return os.str();
}

}  // namespace

bool Box::contains(const Vec& p) const {
  if (p.size() != lower.size()) return false;
  return (p.array() >= lower.array()).all() && (p.array() <= upper.array()).all();
}

Box Box::cube(int dim, double lo, double hi) {
  return Box{Vec::Constant(dim, lo), Vec::Constant(dim, hi)};
}

ChartedRiemannianManifold euclidean_space(int dim, Box region) {
  ChartedRiemannianManifold m;
  m.name = "R" + std::to_string(dim);
  m.dim = dim;
  m.metric = [dim](std::span<const Jet2> x) {
    const int d = x.empty() ? 0 : x.front().dim;
    JetVector g(dim * dim, Jet2::constant(0.0, d));
    for (int i = 0; i < dim; ++i) g[i * dim + i] = Jet2::constant(1.0, d);
    return g;
  };
  m.sample_region = std::move(region);
  return m;
}

std::string_view to_string(DerivativeStrategy s) {
  return s == DerivativeStrategy::kAutomatic ? "automatic" : "finite-difference";
}

JetVector seed_point(const Vec& p) {
  return seed_coordinates(std::span<const double>(p.data(), p.size()));
}

void check_metric(const Mat& g) {
  if (!g.allFinite()) throw GeometryError("metric has non-finite entries");
  const double asym = (g - g.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * std::max(1.0, g.cwiseAbs().maxCoeff())) {
    throw GeometryError("metric is not symmetric");
  }
  const double lmin = smallest_eigenvalue(g);
  if (!(lmin > 1e-12)) {
    std::ostringstream os;
    os << "metric is not positive definite (smallest eigenvalue " << lmin << ")";
    throw GeometryError(os.str());
  }
}

// ---- ChartMetricField ----------------------------------------------------

ChartMetricField::ChartMetricField(
    std::shared_ptr<const ChartedRiemannianManifold> m)
    : manifold_(std::move(m)) {}

Mat ChartMetricField::value(const Vec& p) const {
  return metric_at(*manifold_, p);
}

MetricSample ChartMetricField::sample(const Vec& p) const {
  return sample_metric(*manifold_, p);
}

MetricSample sample_metric(const ChartedRiemannianManifold& manifold, const Vec& p) {
  if (!manifold.contains(p)) {
    throw GeometryError("point " + describe(p) + " outside chart domain of " +
                        manifold.name);
  }
  const int m = manifold.dim;
  const JetVector x = seed_point(p);
  const JetVector comps = manifold.metric(x);
  MetricSample s;
  s.g.resize(m, m);
  s.dg.assign(m, Mat(m, m));
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      const Jet2& c = comps[i * m + j];
      s.g(i, j) = c.value;
      for (int k = 0; k < m; ++k) s.dg[k](i, j) = c.grad[k];
    }
  }
  check_metric(s.g);
  s.g_inv = s.g.ldlt().solve(Mat::Identity(m, m));
  return s;
}

Mat metric_at(const ChartedRiemannianManifold& m, const Vec& p) {
  if (!m.contains(p)) {
    throw GeometryError("point " + describe(p) + " outside chart domain of " +
                        m.name);
  }
  std::vector<Jet2> x;
  x.reserve(p.size());
  for (Eigen::Index i = 0; i < p.size(); ++i) x.emplace_back(p[i]);
  const JetVector comps = m.metric(x);
  Mat g(m.dim, m.dim);
  for (int i = 0; i < m.dim; ++i) {
    for (int j = 0; j < m.dim; ++j) g(i, j) = comps[i * m.dim + j].value;
  }
  check_metric(g);
  return g;
}

Mat inverse_metric_at(const ChartedRiemannianManifold& m, const Vec& p) {
  const Mat g = metric_at(m, p);
  return g.ldlt().solve(Mat::Identity(m.dim, m.dim));
}

// ---- FiniteDifferenceMetricField -----------------------------------------

FiniteDifferenceMetricField::FiniteDifferenceMetricField(
    int dim, std::function<Mat(const Vec&)> value, PointPredicate domain,
    double step)
    : dim_(dim), value_(std::move(value)), domain_(std::move(domain)), step_(step) {
  if (!(step_ > 0.0)) throw std::invalid_argument("finite-difference step must be positive");
}

bool FiniteDifferenceMetricField::contains(const Vec& p) const {
  return p.size() == dim_ && (!domain_ || domain_(p));
}

Mat FiniteDifferenceMetricField::value(const Vec& p) const {
  if (!contains(p)) throw GeometryError("point " + describe(p) + " outside chart domain");
  return value_(p);
}

MetricSample FiniteDifferenceMetricField::sample(const Vec& p) const {
  MetricSample s;
  s.g = value(p);
  check_metric(s.g);
  s.g_inv = s.g.ldlt().solve(Mat::Identity(dim_, dim_));
  s.dg.reserve(dim_);
  for (int k = 0; k < dim_; ++k) {
    const Vec ek = Vec::Unit(dim_, k);
    Mat d = richardson_directional([this](const Vec& q) { return value_(q); },
                                   p, ek, step_);
    s.dg.push_back(0.5 * (d + d.transpose()));
  }
  return s;
}

// ---- connection ----------------------------------------------------------

Mat Christoffel::along(const Vec& x) const {
  Mat c = Mat::Zero(dim_, dim_);
  for (int k = 0; k < dim_; ++k) {
    for (int l = 0; l < dim_; ++l) {
      double acc = 0.0;
      for (int i = 0; i < dim_; ++i) acc += x[i] * (*this)(k, i, l);
      c(k, l) = acc;
    }
  }
  return c;
}

double Christoffel::max_abs() const {
  double m = 0.0;
  for (double v : c_) m = std::max(m, std::abs(v));
  return m;
}

Christoffel christoffel(const MetricSample& s) {
  const int m = static_cast<int>(s.g.rows());
  // First kind: Gamma_{l,ij} = 1/2 (d_i g_jl + d_j g_il - d_l g_ij).
  std::vector<double> first(m * m * m);
  auto f = [&](int l, int i, int j) -> double& { return first[(l * m + i) * m + j]; };
  for (int l = 0; l < m; ++l) {
    for (int i = 0; i < m; ++i) {
      for (int j = i; j < m; ++j) {
        const double v = 0.5 * (s.dg[i](j, l) + s.dg[j](i, l) - s.dg[l](i, j));
        f(l, i, j) = v;
        f(l, j, i) = v;
      }
    }
  }
  Christoffel gamma(m);
  for (int k = 0; k < m; ++k) {
    for (int i = 0; i < m; ++i) {
      for (int j = i; j < m; ++j) {
        double acc = 0.0;
        for (int l = 0; l < m; ++l) acc += s.g_inv(k, l) * f(l, i, j);
        gamma(k, i, j) = acc;
        gamma(k, j, i) = acc;
      }
    }
  }
  return gamma;
}

Christoffel christoffel(const MetricField& metric, const Vec& p) {
  return christoffel(metric.sample(p));
}

Vec gradient(const Mat& g_inv, const Vec& df) { return g_inv * df; }

Vec gradient(const MetricField& metric, const ScalarJetField& f, const Vec& p) {
  const MetricSample s = metric.sample(p);
  const JetVector x = seed_point(p);
  const Jet2 v = f(x);
  Vec df(p.size());
  for (Eigen::Index i = 0; i < p.size(); ++i) df[i] = v.grad[i];
  return gradient(s.g_inv, df);
}

Vec covariant_derivative(const Christoffel& gamma, const Vec& y,
                         const Vec& dy_along_x, const Vec& x) {
  return dy_along_x + gamma.along(x) * y;
}

Mat covariant_derivative_tensor(const Christoffel& gamma, const Mat& t,
                                const Mat& dt_along_x, const Vec& x) {
  const Mat c = gamma.along(x);
  return dt_along_x + c * t - t * c;
}

Vec covariant_derivative(const MetricField& metric, const VectorJetField& y,
                         const Vec& p, const Vec& x) {
  const Christoffel gamma = christoffel(metric, p);
  const JetVector comps = y(seed_point(p));
  const int m = static_cast<int>(p.size());
  Vec yv(m), dy(m);
  for (int k = 0; k < m; ++k) {
    yv[k] = comps[k].value;
    double acc = 0.0;
    for (int i = 0; i < m; ++i) acc += x[i] * comps[k].grad[i];
    dy[k] = acc;
  }
  return covariant_derivative(gamma, yv, dy, x);
}

double laplace_beltrami(const MetricSample& s, const Christoffel& gamma,
                        const Jet2& f) {
  const int m = static_cast<int>(s.g.rows());
  double acc = 0.0;
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      double t = f.h(i, j);
      for (int k = 0; k < m; ++k) t -= gamma(k, i, j) * f.grad[k];
      acc += s.g_inv(i, j) * t;
    }
  }
  return acc;
}

double laplace_beltrami(const MetricField& metric, const ScalarJetField& f,
                        const Vec& p) {
  const MetricSample s = metric.sample(p);
  return laplace_beltrami(s, christoffel(s), f(seed_point(p)));
}

}  // namespace biconf
