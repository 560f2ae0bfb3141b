#pragma once

// Charted Riemannian manifolds, metric fields with automatic or
// finite-difference derivatives, and the Levi-Civita connection.

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "biconf/jet.hpp"
#include "biconf/linalg.hpp"

namespace biconf {

using JetVector = std::vector<Jet2>;
using ScalarJetField = std::function<Jet2(std::span<const Jet2>)>;
// Vector fields return one jet per component; matrix fields return
// row-major n*n jets.
using VectorJetField = std::function<JetVector(std::span<const Jet2>)>;
using MatrixJetField = std::function<JetVector(std::span<const Jet2>)>;
using PointPredicate = std::function<bool(const Vec&)>;

struct Box {
  Vec lower;
  Vec upper;

  bool contains(const Vec& p) const;
  static Box cube(int dim, double lo, double hi);
};

struct ChartedRiemannianManifold {
  std::string name;
  int dim = 0;
  MatrixJetField metric;
  PointPredicate in_domain;  // empty: the whole chart
  Box sample_region;

  bool contains(const Vec& p) const {
    return p.size() == dim && (!in_domain || in_domain(p));
  }
};

// Euclidean R^d with the identity metric.
ChartedRiemannianManifold euclidean_space(int dim, Box region);

enum class DerivativeStrategy { kAutomatic, kFiniteDifference };
std::string_view to_string(DerivativeStrategy s);

struct MetricSample {
  Mat g;
  Mat g_inv;
  std::vector<Mat> dg;  // dg[k](i, j) = d_k g_ij
};

class MetricField {
 public:
  virtual ~MetricField() = default;
  virtual int dim() const = 0;
  virtual bool contains(const Vec& p) const = 0;
  // Values only. Throws GeometryError outside the domain.
  virtual Mat value(const Vec& p) const = 0;
  // Value, inverse and first derivatives. The metric is checked symmetric
  // positive definite at p.
  virtual MetricSample sample(const Vec& p) const = 0;
  virtual DerivativeStrategy strategy() const = 0;
};

// Metric read from a chart's jet-valued metric components.
class ChartMetricField final : public MetricField {
 public:
  explicit ChartMetricField(std::shared_ptr<const ChartedRiemannianManifold> m);
  int dim() const override { return manifold_->dim; }
  bool contains(const Vec& p) const override { return manifold_->contains(p); }
  Mat value(const Vec& p) const override;
  MetricSample sample(const Vec& p) const override;
  DerivativeStrategy strategy() const override {
    return DerivativeStrategy::kAutomatic;
  }
  const ChartedRiemannianManifold& manifold() const { return *manifold_; }

 private:
  std::shared_ptr<const ChartedRiemannianManifold> manifold_;
};

// Metric given only by values; derivatives by Richardson-extrapolated
// central differences with the configured step.
class FiniteDifferenceMetricField final : public MetricField {
 public:
  FiniteDifferenceMetricField(int dim, std::function<Mat(const Vec&)> value,
                              PointPredicate domain, double step);
  int dim() const override { return dim_; }
  bool contains(const Vec& p) const override;
  Mat value(const Vec& p) const override;
  MetricSample sample(const Vec& p) const override;
  DerivativeStrategy strategy() const override {
    return DerivativeStrategy::kFiniteDifference;
  }
  double step() const { return step_; }

 private:
  int dim_;
  std::function<Mat(const Vec&)> value_;
  PointPredicate domain_;
  double step_;
};

// Gamma^k_ij of the Levi-Civita connection, exactly symmetric in (i, j).
class Christoffel {
 public:
  Christoffel() = default;
  explicit Christoffel(int dim) : dim_(dim), c_(dim * dim * dim, 0.0) {}

  int dim() const { return dim_; }
  double operator()(int k, int i, int j) const { return c_[index(k, i, j)]; }
  double& operator()(int k, int i, int j) { return c_[index(k, i, j)]; }

  // Connection matrix along X: C(X)^k_l = X^i Gamma^k_il, so that
  // nabla_X Y = D_X Y + C(X) Y.
  Mat along(const Vec& x) const;
  double max_abs() const;

 private:
  int index(int k, int i, int j) const { return (k * dim_ + i) * dim_ + j; }
  int dim_ = 0;
  std::vector<double> c_;
};

// Validates symmetry and positive definiteness (smallest eigenvalue above
// 1e-12); throws GeometryError otherwise.
void check_metric(const Mat& g);

Mat metric_at(const ChartedRiemannianManifold& m, const Vec& p);
MetricSample sample_metric(const ChartedRiemannianManifold& m, const Vec& p);
Mat inverse_metric_at(const ChartedRiemannianManifold& m, const Vec& p);

Christoffel christoffel(const MetricSample& s);
Christoffel christoffel(const MetricField& metric, const Vec& p);

// grad f = g^{-1} df.
Vec gradient(const MetricField& metric, const ScalarJetField& f, const Vec& p);
Vec gradient(const Mat& g_inv, const Vec& df);

// (nabla_X Y)^k = X^i (d_i Y^k + Gamma^k_ij Y^j) with Y given as jets.
Vec covariant_derivative(const MetricField& metric, const VectorJetField& y,
                         const Vec& p, const Vec& x);
// Same, from the directional derivative D_X Y = X^i d_i Y already at hand.
Vec covariant_derivative(const Christoffel& gamma, const Vec& y,
                         const Vec& dy_along_x, const Vec& x);
// (nabla_X T) for a (1,1)-tensor: D_X T + C(X) T - T C(X).
Mat covariant_derivative_tensor(const Christoffel& gamma, const Mat& t,
                                const Mat& dt_along_x, const Vec& x);

// Delta f = g^ij (d_i d_j f - Gamma^k_ij d_k f).
double laplace_beltrami(const MetricField& metric, const ScalarJetField& f,
                        const Vec& p);
double laplace_beltrami(const MetricSample& s, const Christoffel& gamma,
                        const Jet2& f);

JetVector seed_point(const Vec& p);

}  // namespace biconf
