#pragma once

// Induced horizontal complex structure, the f-structure F, adapted frames
// and the PHWC / PHH defect measures.

#include <vector>

#include "biconf/map_geometry.hpp"

namespace biconf {

// Raw norm plus a scale-free version for comparing across scenarios.
struct Defect {
  double raw = 0.0;
  double normalized = 0.0;
};

// Pointwise checks of the target structure at y.
struct ComplexStructureCheck {
  double square_defect = 0.0;     // max |J^2 + I|
  double hermitian_defect = 0.0;  // max |h(JX, JY) - h(X, Y)| over basis
  double kahler_defect = 0.0;     // max |(nabla^N J)| over coordinate directions
};
ComplexStructureCheck check_complex_structure(const TargetSpace& target,
                                              const Vec& y);

// J_H = dphi|_H^{-1} J dphi|_H in the orthonormal horizontal frame of
// ortho_split: entry (a, b) is g(h_a, F h_b).
Mat induced_jh(const MapGeometry& geo, const Vec& p);
Mat f_structure(const MapGeometry& geo, const Vec& p);

// Frobenius norm of [dphi dphi*, J]; defined for any map.
Defect phwc_defect(const MapGeometry& geo, const Vec& p);
// max over horizontal frame pairs of |g(J_H X, J_H Y) - g(X, Y)|.
Defect phwc_metric_defect(const MapGeometry& geo, const Vec& p);

struct AdaptedFrameOptions {
  double compat_tol = 1e-9;
  double ortho_tol = 1e-9;
  // Permutation of the horizontal seeds; empty keeps ortho_split order.
  std::vector<int> seed_order;
};

struct AdaptedFrame {
  std::vector<Vec> e;         // e_1..e_n
  std::vector<Vec> fe;        // F e_1..F e_n
  std::vector<Vec> vertical;  // e_{2n+1}..e_m

  std::vector<Vec> horizontal() const;
  std::vector<Vec> ordered() const;
};

// {e_i, F e_i, e_alpha}. Throws GeometryError when J_H is not compatible
// with g at p or the frame fails its orthonormality check.
AdaptedFrame adapted_frame(const MapGeometry& geo, const Vec& p,
                           const AdaptedFrameOptions& options = {});

// max over adapted-frame pairs of |H((nabla_X F) Y)|_g.
Defect phh_defect(const MapGeometry& geo, const Vec& p,
                  const AdaptedFrameOptions& options = {});

// F div_H F = sum_i F[(nabla_{e_i} F) e_i + (nabla_{F e_i} F)(F e_i)].
Vec f_divergence_horizontal(const MapGeometry& geo, const Vec& p,
                            const AdaptedFrameOptions& options = {});

// tau = -dphi(F div_H F + (m - 2n) mu^V), valid for PHWC maps into a
// Kaehler target.
Vec tension_via_f_structure(const MapGeometry& geo, const Vec& p,
                            const AdaptedFrameOptions& options = {});

}  // namespace biconf
