#include "biconf/map_geometry.hpp"

#include <sstream>
#include <stdexcept>

#include "biconf/errors.hpp"

namespace biconf {
namespace {

Mat read_matrix(const JetVector& comps, int n) {
  Mat out(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) out(i, j) = comps[i * n + j].value;
  }
  return out;
}

}  // namespace

TargetSample sample_target(const TargetSpace& target, const Vec& y) {
  const int d = target.manifold.dim;
  if (!target.manifold.contains(y)) {
    throw GeometryError("image point outside target chart " + target.manifold.name);
  }
  const MetricSample hs = sample_metric(target.manifold, y);
  TargetSample t;
  t.y = y;
  t.h = hs.g;
  t.h_inv = hs.g_inv;
  t.gamma = christoffel(hs);
  const JetVector x = seed_point(y);
  const JetVector j = target.complex_structure(x);
  t.J = read_matrix(j, d);
  t.dJ.assign(d, Mat(d, d));
  for (int r = 0; r < d; ++r) {
    for (int c = 0; c < d; ++c) {
      for (int b = 0; b < d; ++b) t.dJ[b](r, c) = j[r * d + c].grad[b];
    }
  }
  return t;
}

// ---- SmoothMap -----------------------------------------------------------

SmoothMap::SmoothMap(int source_dim, std::shared_ptr<const TargetSpace> target,
                     VectorJetField components)
    : source_dim_(source_dim),
      target_(std::move(target)),
      components_(std::move(components)) {
  if (target_->manifold.dim % 2 != 0) {
    throw std::invalid_argument("target dimension must be even");
  }
  if (source_dim_ < target_->manifold.dim) {
    throw std::invalid_argument("source dimension below target dimension");
  }
}

JetVector SmoothMap::components(std::span<const Jet2> x) const {
  JetVector out = components_(x);
  if (static_cast<int>(out.size()) != target_dim()) {
    throw std::logic_error("map returned wrong number of components");
  }
  return out;
}

SmoothMap::Jet SmoothMap::evaluate(const Vec& p) const {
  const int m = source_dim_;
  const int t = target_dim();
  const JetVector comps = components(seed_point(p));
  Jet out;
  out.value.resize(t);
  out.jacobian.resize(t, m);
  out.hessians.assign(t, Mat(m, m));
  for (int a = 0; a < t; ++a) {
    const Jet2& c = comps[a];
    if (!c.is_finite()) throw DomainError("map component is not finite");
    out.value[a] = c.value;
    for (int i = 0; i < m; ++i) {
      out.jacobian(a, i) = c.grad[i];
      for (int j = 0; j < m; ++j) out.hessians[a](i, j) = c.h(i, j);
    }
  }
  return out;
}

// ---- MapGeometry ---------------------------------------------------------

MapGeometry::MapGeometry(std::shared_ptr<const MetricField> metric,
                         std::shared_ptr<const SmoothMap> map,
                         GeometryOptions options)
    : metric_(std::move(metric)), map_(std::move(map)), options_(options) {
  if (metric_->dim() != map_->source_dim()) {
    throw std::invalid_argument("metric and map disagree on source dimension");
  }
}

bool MapGeometry::analytic() const {
  return options_.tensor_derivatives == TensorDerivatives::kAutomatic &&
         metric_->strategy() == DerivativeStrategy::kAutomatic;
}

DerivativeStrategy MapGeometry::tensor_strategy() const {
  return analytic() ? DerivativeStrategy::kAutomatic
                    : DerivativeStrategy::kFiniteDifference;
}

Mat MapGeometry::differential(const Vec& p) const {
  if (!metric_->contains(p)) throw GeometryError("point outside source chart");
  return map_->evaluate(p).jacobian;
}

Mat MapGeometry::adjoint_differential(const Vec& p) const {
  const Mat g = metric_->value(p);
  const SmoothMap::Jet j = map_->evaluate(p);
  const Mat h = metric_at(map_->target().manifold, j.value);
  return g.ldlt().solve(j.jacobian.transpose() * h);
}

void MapGeometry::require_submersion(const Vec& p) const {
  const Mat a = differential(p);
  Eigen::JacobiSVD<Mat> svd(a);
  const Vec s = svd.singularValues();
  const double smin = s.size() ? s.minCoeff() : 0.0;
  if (!(smin > options_.rank_tol)) {
    int rank = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i) rank += s[i] > options_.rank_tol;
    std::ostringstream os;
    os << "differential is not onto: rank " << rank << " < " << a.rows()
       << " (smallest singular value " << smin << ")";
    throw GeometryError(os.str());
  }
}

PointTensors MapGeometry::tensors_at(const Vec& p) const {
  require_submersion(p);
  PointTensors t;
  t.g = metric_->value(p);
  const int m = this->m();
  t.g_inv = t.g.ldlt().solve(Mat::Identity(m, m));
  const SmoothMap::Jet j = map_->evaluate(p);
  t.dphi = j.jacobian;
  const JetVector jc = map_->target().complex_structure(seed_point(j.value));
  t.J = read_matrix(jc, two_n());
  const Mat up = t.g_inv * t.dphi.transpose();  // m x 2n
  const Mat gram = t.dphi * up;                 // 2n x 2n
  t.lift = up * gram.ldlt().solve(Mat::Identity(two_n(), two_n()));
  t.proj_h = t.lift * t.dphi;
  t.proj_v = Mat::Identity(m, m) - t.proj_h;
  t.f = t.lift * t.J * t.dphi;
  return t;
}

OrthoSplit MapGeometry::ortho_split(const Vec& p) const {
  const PointTensors t = tensors_at(p);
  const int m = this->m();
  const int verticals = m - two_n();
  // Pivoted selection: repeatedly take the coordinate direction whose
  // vertical projection has the largest residual; ties go to the lower
  // index, so the plan is deterministic.
  SplitPlan plan;
  std::vector<Vec> chosen;
  std::vector<bool> used(m, false);
  for (int s = 0; s < verticals; ++s) {
    int best = -1;
    double best_norm = -1.0;
    Vec best_vec;
    for (int k = 0; k < m; ++k) {
      if (used[k]) continue;
      Vec v = orthogonalize(t.g, t.proj_v.col(k), chosen);
      const double nv = g_norm(t.g, v);
      if (nv > best_norm) {
        best = k;
        best_norm = nv;
        best_vec = v;
      }
    }
    if (!(best_norm > 1e-8)) throw GeometryError("vertical frame breakdown");
    used[best] = true;
    plan.vertical_seeds.push_back(best);
    chosen.push_back(best_vec / best_norm);
  }
  return ortho_split(p, plan);
}

OrthoSplit MapGeometry::ortho_split(const Vec& p, const SplitPlan& plan) const {
  const PointTensors t = tensors_at(p);
  const int verticals = m() - two_n();
  if (static_cast<int>(plan.vertical_seeds.size()) != verticals) {
    throw std::invalid_argument("split plan has wrong number of seeds");
  }
  OrthoSplit out;
  out.base = p;
  out.plan = plan;

  std::vector<Vec> vseeds;
  for (int k : plan.vertical_seeds) vseeds.push_back(t.proj_v.col(k));
  out.vertical = gram_schmidt(t.g, vseeds, 1e-8);
  if (static_cast<int>(out.vertical.size()) != verticals) {
    throw GeometryError("vertical frame breakdown");
  }

  const Mat up = t.g_inv * t.dphi.transpose();
  std::vector<Vec> hseeds;
  for (int a = 0; a < two_n(); ++a) hseeds.push_back(up.col(a));
  out.horizontal = gram_schmidt(t.g, hseeds, 1e-8);
  if (static_cast<int>(out.horizontal.size()) != two_n()) {
    throw GeometryError("horizontal frame breakdown");
  }
  return out;
}

Christoffel MapGeometry::christoffel_at(const Vec& p) const {
  return christoffel(*metric_, p);
}

Vec MapGeometry::tension_field(const Vec& p) const {
  const MetricSample s = metric_->sample(p);
  const Christoffel gm = christoffel(s);
  const SmoothMap::Jet j = map_->evaluate(p);
  const TargetSample tn = sample_target(map_->target(), j.value);
  const int m = this->m();
  const int t = two_n();
  Vec tau = Vec::Zero(t);
  for (int a = 0; a < t; ++a) {
    double acc = 0.0;
    for (int i = 0; i < m; ++i) {
      for (int k = 0; k < m; ++k) {
        double term = j.hessians[a](i, k);
        for (int l = 0; l < m; ++l) term -= gm(l, i, k) * j.jacobian(a, l);
        for (int b = 0; b < t; ++b) {
          for (int c = 0; c < t; ++c) {
            term += tn.gamma(a, b, c) * j.jacobian(b, i) * j.jacobian(c, k);
          }
        }
        acc += s.g_inv(i, k) * term;
      }
    }
    tau[a] = acc;
  }
  return tau;
}

MapGeometry::TensorDerivativesAt MapGeometry::analytic_derivatives(
    const Vec& p) const {
  require_submersion(p);
  const MetricSample s = metric_->sample(p);
  const SmoothMap::Jet j = map_->evaluate(p);
  const TargetSample tn = sample_target(map_->target(), j.value);
  const int m = this->m();
  const int t = two_n();
  const Mat& G = s.g_inv;
  const Mat& A = j.jacobian;
  const Mat M = A * G * A.transpose();
  const Mat Minv = M.ldlt().solve(Mat::Identity(t, t));
  const Mat L = G * A.transpose() * Minv;

  TensorDerivativesAt d;
  d.d_proj_h.reserve(m);
  d.d_f.reserve(m);
  for (int k = 0; k < m; ++k) {
    Mat dA(t, m);
    for (int a = 0; a < t; ++a) dA.row(a) = j.hessians[a].col(k).transpose();
    Mat dJ = Mat::Zero(t, t);
    for (int b = 0; b < t; ++b) dJ += tn.dJ[b] * A(b, k);
    const Mat dG = -G * s.dg[k] * G;
    const Mat dM = dA * G * A.transpose() + A * dG * A.transpose() +
                   A * G * dA.transpose();
    const Mat dMinv = -Minv * dM * Minv;
    const Mat dL = dG * A.transpose() * Minv + G * dA.transpose() * Minv +
                   G * A.transpose() * dMinv;
    d.d_proj_h.push_back(dL * A + L * dA);
    d.d_f.push_back(dL * tn.J * A + L * dJ * A + L * tn.J * dA);
  }
  return d;
}

Mat MapGeometry::directional_f(const Vec& p, const Vec& x) const {
  if (analytic()) {
    const TensorDerivativesAt d = analytic_derivatives(p);
    Mat out = Mat::Zero(m(), m());
    for (int k = 0; k < m(); ++k) out += x[k] * d.d_f[k];
    return out;
  }
  return richardson_directional([this](const Vec& q) { return tensors_at(q).f; },
                                p, x, options_.fd_step);
}

Mat MapGeometry::directional_proj_h(const Vec& p, const Vec& x) const {
  if (analytic()) {
    const TensorDerivativesAt d = analytic_derivatives(p);
    Mat out = Mat::Zero(m(), m());
    for (int k = 0; k < m(); ++k) out += x[k] * d.d_proj_h[k];
    return out;
  }
  return richardson_directional(
      [this](const Vec& q) { return tensors_at(q).proj_h; }, p, x,
      options_.fd_step);
}

Mat MapGeometry::nabla_f(const Vec& p, const Vec& x) const {
  return nabla_f(p, x, christoffel_at(p));
}

Mat MapGeometry::nabla_f(const Vec& p, const Vec& x,
                         const Christoffel& gamma) const {
  return covariant_derivative_tensor(gamma, tensors_at(p).f, directional_f(p, x), x);
}

Mat MapGeometry::nabla_proj_h(const Vec& p, const Vec& x,
                              const Christoffel& gamma) const {
  return covariant_derivative_tensor(gamma, tensors_at(p).proj_h,
                                     directional_proj_h(p, x), x);
}

Vec MapGeometry::mean_curvature_vertical(const Vec& p) const {
  return analytic() ? mean_curvature_vertical_projector(p)
                    : mean_curvature_vertical_frames(p);
}

Vec MapGeometry::mean_curvature_vertical_frames(const Vec& p) const {
  const int fibre = m() - two_n();
  if (fibre <= 0) throw GeometryError("mean curvature of fibres needs m > 2n");
  const OrthoSplit split = ortho_split(p);
  const PointTensors t = tensors_at(p);
  const Christoffel gamma = christoffel_at(p);
  Vec acc = Vec::Zero(m());
  for (int a = 0; a < fibre; ++a) {
    const Vec& e = split.vertical[a];
    const Vec de = richardson_directional(
        [&](const Vec& q) -> Vec { return ortho_split(q, split.plan).vertical[a]; },
        p, e, options_.fd_step);
    acc += t.proj_h * covariant_derivative(gamma, e, de, e);
  }
  return acc / fibre;
}

Vec MapGeometry::mean_curvature_vertical_projector(const Vec& p) const {
  const int fibre = m() - two_n();
  if (fibre <= 0) throw GeometryError("mean curvature of fibres needs m > 2n");
  const OrthoSplit split = ortho_split(p);
  const Christoffel gamma = christoffel_at(p);
  Vec acc = Vec::Zero(m());
  for (const Vec& e : split.vertical) acc -= nabla_proj_h(p, e, gamma) * e;
  return acc / fibre;
}

}  // namespace biconf
