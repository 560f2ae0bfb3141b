#pragma once

// Smooth maps from a Riemannian chart into a Hermitian chart: differential,
// adjoint, vertical/horizontal splitting, tension field and the mean
// curvature of the fibres.

#include <memory>
#include <span>
#include <vector>

#include "biconf/manifold.hpp"

namespace biconf {

// (N, J, h). Column b of J is J(d/dy_b).
struct TargetSpace {
  ChartedRiemannianManifold manifold;
  MatrixJetField complex_structure;
  bool kahler = true;
};

struct TargetSample {
  Vec y;
  Mat h;
  Mat h_inv;
  Christoffel gamma;
  Mat J;
  std::vector<Mat> dJ;  // dJ[b] = d J / d y_b
};

TargetSample sample_target(const TargetSpace& target, const Vec& y);

class SmoothMap {
 public:
  struct Jet {
    Vec value;
    Mat jacobian;                // 2n x m
    std::vector<Mat> hessians;   // one m x m per target component
  };

  SmoothMap(int source_dim, std::shared_ptr<const TargetSpace> target,
            VectorJetField components);

  int source_dim() const { return source_dim_; }
  int target_dim() const { return target_->manifold.dim; }
  const TargetSpace& target() const { return *target_; }
  std::shared_ptr<const TargetSpace> target_ptr() const { return target_; }

  JetVector components(std::span<const Jet2> x) const;
  Jet evaluate(const Vec& p) const;

 private:
  int source_dim_;
  std::shared_ptr<const TargetSpace> target_;
  VectorJetField components_;
};

struct SplitPlan {
  // Coordinate directions whose vertical projections seed the vertical
  // frame, in Gram-Schmidt order.
  std::vector<int> vertical_seeds;
};

struct OrthoSplit {
  Vec base;
  std::vector<Vec> vertical;
  std::vector<Vec> horizontal;
  SplitPlan plan;
};

// Values (no derivatives) of the tensors induced by the map at one point.
struct PointTensors {
  Mat g;
  Mat g_inv;
  Mat dphi;    // 2n x m
  Mat J;       // at phi(p)
  Mat lift;    // m x 2n: horizontal preimage, dphi * lift = I
  Mat proj_h;  // projection onto H along V
  Mat proj_v;
  Mat f;       // lift * J * dphi: J_H extended by zero on V
};

enum class TensorDerivatives { kFiniteDifference, kAutomatic };

struct GeometryOptions {
  double fd_step = 1e-4;
  double rank_tol = 1e-8;
  // kAutomatic differentiates F and the projectors analytically from the
  // metric and map jets; it needs an automatic metric field and falls back
  // to finite differences otherwise.
  TensorDerivatives tensor_derivatives = TensorDerivatives::kFiniteDifference;
};

class MapGeometry {
 public:
  MapGeometry(std::shared_ptr<const MetricField> metric,
              std::shared_ptr<const SmoothMap> map, GeometryOptions options = {});

  int m() const { return map_->source_dim(); }
  int two_n() const { return map_->target_dim(); }
  int n() const { return map_->target_dim() / 2; }

  const MetricField& metric() const { return *metric_; }
  const SmoothMap& map() const { return *map_; }
  std::shared_ptr<const MetricField> metric_ptr() const { return metric_; }
  std::shared_ptr<const SmoothMap> map_ptr() const { return map_; }
  const GeometryOptions& options() const { return options_; }
  // Strategy actually used for derivatives of F, the projectors and frames.
  DerivativeStrategy tensor_strategy() const;

  Mat differential(const Vec& p) const;
  // dphi* = g^{-1} dphi^T h.
  Mat adjoint_differential(const Vec& p) const;
  // Throws GeometryError reporting rank and smallest singular value when
  // dphi(p) is not onto.
  void require_submersion(const Vec& p) const;

  PointTensors tensors_at(const Vec& p) const;
  OrthoSplit ortho_split(const Vec& p) const;
  OrthoSplit ortho_split(const Vec& p, const SplitPlan& plan) const;

  Christoffel christoffel_at(const Vec& p) const;

  // Trace formula tau^a = g^ij (d_ij phi^a - Gamma^k_ij d_k phi^a
  //                               + NGamma^a_bc d_i phi^b d_j phi^c).
  Vec tension_field(const Vec& p) const;

  // Normalized: (1 / (m - 2n)) sum_alpha H(nabla_{e_alpha} e_alpha).
  // Uses the projector route under automatic tensor derivatives and the
  // frame-field route otherwise.
  Vec mean_curvature_vertical(const Vec& p) const;
  // Vertical frame extended as a field by ortho_split at displaced points.
  Vec mean_curvature_vertical_frames(const Vec& p) const;
  // H(nabla_V W) = -(nabla_V P_H) W for vertical W.
  Vec mean_curvature_vertical_projector(const Vec& p) const;

  // Directional derivatives of tensor components along x (no connection).
  Mat directional_f(const Vec& p, const Vec& x) const;
  Mat directional_proj_h(const Vec& p, const Vec& x) const;

  // (nabla_X F) and (nabla_X P_H) as matrices acting on vectors.
  Mat nabla_f(const Vec& p, const Vec& x) const;
  Mat nabla_f(const Vec& p, const Vec& x, const Christoffel& gamma) const;
  Mat nabla_proj_h(const Vec& p, const Vec& x, const Christoffel& gamma) const;

 private:
  struct TensorDerivativesAt {
    std::vector<Mat> d_proj_h;
    std::vector<Mat> d_f;
  };
  TensorDerivativesAt analytic_derivatives(const Vec& p) const;
  bool analytic() const;

  std::shared_ptr<const MetricField> metric_;
  std::shared_ptr<const SmoothMap> map_;
  GeometryOptions options_;
};

}  // namespace biconf
