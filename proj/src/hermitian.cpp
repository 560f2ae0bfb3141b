#include "biconf/hermitian.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "biconf/errors.hpp"

namespace biconf {

ComplexStructureCheck check_complex_structure(const TargetSpace& target,
                                              const Vec& y) {
  const TargetSample t = sample_target(target, y);
  const int d = target.manifold.dim;
  ComplexStructureCheck c;
  c.square_defect = (t.J * t.J + Mat::Identity(d, d)).cwiseAbs().maxCoeff();
  c.hermitian_defect = (t.J.transpose() * t.h * t.J - t.h).cwiseAbs().maxCoeff();
  for (int b = 0; b < d; ++b) {
    // (nabla_b J) = d_b J + C(e_b) J - J C(e_b)
    const Mat nj = covariant_derivative_tensor(t.gamma, t.J, t.dJ[b], Vec::Unit(d, b));
    c.kahler_defect = std::max(c.kahler_defect, nj.cwiseAbs().maxCoeff());
  }
  return c;
}

Mat induced_jh(const MapGeometry& geo, const Vec& p) {
  const PointTensors t = geo.tensors_at(p);
  const OrthoSplit split = geo.ortho_split(p);
  const int k = geo.two_n();
  Mat jh(k, k);
  for (int a = 0; a < k; ++a) {
    for (int b = 0; b < k; ++b) {
      jh(a, b) = g_inner(t.g, split.horizontal[a], t.f * split.horizontal[b]);
    }
  }
  return jh;
}

Mat f_structure(const MapGeometry& geo, const Vec& p) { return geo.tensors_at(p).f; }

Defect phwc_defect(const MapGeometry& geo, const Vec& p) {
  const Mat g = geo.metric().value(p);
  const SmoothMap::Jet j = geo.map().evaluate(p);
  const TargetSample tn = sample_target(geo.map().target(), j.value);
  const Mat d = j.jacobian * g.ldlt().solve(j.jacobian.transpose()) * tn.h;
  const Mat comm = d * tn.J - tn.J * d;
  Defect out;
  out.raw = comm.norm();
  const double scale = d.norm();
  out.normalized = scale > 0.0 ? out.raw / scale : out.raw;
  return out;
}

Defect phwc_metric_defect(const MapGeometry& geo, const Vec& p) {
  const PointTensors t = geo.tensors_at(p);
  const OrthoSplit split = geo.ortho_split(p);
  double worst = 0.0;
  for (const Vec& x : split.horizontal) {
    for (const Vec& y : split.horizontal) {
      const double d = g_inner(t.g, t.f * x, t.f * y) - g_inner(t.g, x, y);
      worst = std::max(worst, std::abs(d));
    }
  }
  return {worst, worst};
}

std::vector<Vec> AdaptedFrame::horizontal() const {
  std::vector<Vec> out(e);
  out.insert(out.end(), fe.begin(), fe.end());
  return out;
}

std::vector<Vec> AdaptedFrame::ordered() const {
  std::vector<Vec> out = horizontal();
  out.insert(out.end(), vertical.begin(), vertical.end());
  return out;
}

AdaptedFrame adapted_frame(const MapGeometry& geo, const Vec& p,
                           const AdaptedFrameOptions& options) {
  const Defect compat = phwc_metric_defect(geo, p);
  if (!(compat.raw < options.compat_tol)) {
    std::ostringstream os;
    os << "J_H is not compatible with the metric (defect " << compat.raw
       << "); no adapted frame";
    throw GeometryError(os.str());
  }
  const PointTensors t = geo.tensors_at(p);
  const OrthoSplit split = geo.ortho_split(p);
  std::vector<Vec> seeds = split.horizontal;
  if (!options.seed_order.empty()) {
    if (options.seed_order.size() != seeds.size()) {
      throw std::invalid_argument("seed_order must permute the horizontal frame");
    }
    std::vector<Vec> permuted;
    for (int k : options.seed_order) permuted.push_back(split.horizontal.at(k));
    seeds = std::move(permuted);
  }

  AdaptedFrame frame;
  std::vector<Vec> basis;
  std::vector<bool> used(seeds.size(), false);
  for (int i = 0; i < geo.n(); ++i) {
    int best = -1;
    double best_norm = -1.0;
    Vec best_vec;
    for (std::size_t k = 0; k < seeds.size(); ++k) {
      if (used[k]) continue;
      const Vec v = orthogonalize(t.g, seeds[k], basis);
      const double nv = g_norm(t.g, v);
      // Strict comparison keeps the earliest seed among near-equal norms.
      if (nv > best_norm + 1e-12) {
        best = static_cast<int>(k);
        best_norm = nv;
        best_vec = v;
      }
    }
    if (!(best_norm > 1e-6)) throw GeometryError("adapted frame breakdown");
    used[best] = true;
    Vec e = orthogonalize(t.g, best_vec / best_norm, basis);
    e /= g_norm(t.g, e);
    const Vec fe = t.f * e;
    basis.push_back(e);
    basis.push_back(fe);
    frame.e.push_back(e);
    frame.fe.push_back(fe);
  }
  frame.vertical = split.vertical;

  const std::vector<Vec> all = frame.ordered();
  double worst = 0.0;
  for (std::size_t a = 0; a < all.size(); ++a) {
    for (std::size_t b = 0; b < all.size(); ++b) {
      const double target = a == b ? 1.0 : 0.0;
      worst = std::max(worst, std::abs(g_inner(t.g, all[a], all[b]) - target));
    }
  }
  if (!(worst < options.ortho_tol)) {
    std::ostringstream os;
    os << "adapted frame is not orthonormal (deviation " << worst << ")";
    throw GeometryError(os.str());
  }
  return frame;
}

Defect phh_defect(const MapGeometry& geo, const Vec& p,
                  const AdaptedFrameOptions& options) {
  const AdaptedFrame frame = adapted_frame(geo, p, options);
  const PointTensors t = geo.tensors_at(p);
  const Christoffel gamma = geo.christoffel_at(p);
  const std::vector<Vec> hs = frame.horizontal();
  double worst = 0.0;
  for (const Vec& x : hs) {
    const Mat nf = geo.nabla_f(p, x, gamma);
    for (const Vec& y : hs) {
      worst = std::max(worst, g_norm(t.g, Vec(t.proj_h * (nf * y))));
    }
  }
  Defect out;
  out.raw = worst;
  out.normalized = worst / (t.f.norm() * (1.0 + gamma.max_abs()));
  return out;
}

Vec f_divergence_horizontal(const MapGeometry& geo, const Vec& p,
                            const AdaptedFrameOptions& options) {
  const AdaptedFrame frame = adapted_frame(geo, p, options);
  const PointTensors t = geo.tensors_at(p);
  const Christoffel gamma = geo.christoffel_at(p);
  Vec acc = Vec::Zero(geo.m());
  for (int i = 0; i < geo.n(); ++i) {
    acc += geo.nabla_f(p, frame.e[i], gamma) * frame.e[i];
    acc += geo.nabla_f(p, frame.fe[i], gamma) * frame.fe[i];
  }
  return t.f * acc;
}

Vec tension_via_f_structure(const MapGeometry& geo, const Vec& p,
                            const AdaptedFrameOptions& options) {
  Vec inner = f_divergence_horizontal(geo, p, options);
  const int fibre = geo.m() - geo.two_n();
  if (fibre > 0) inner += fibre * geo.mean_curvature_vertical(p);
  return -(geo.differential(p) * inner);
}

}  // namespace biconf
