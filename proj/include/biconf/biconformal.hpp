#pragma once

// Biconformal changes of the domain metric, g_bar = sigma^-2 g^H + rho^-2 g^V,
// and numerical checks of how connection, fibre mean curvature, the
// f-structure divergence and the tension field transform under them.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "biconf/expr.hpp"
#include "biconf/hermitian.hpp"
#include "biconf/scenarios.hpp"

namespace biconf {

struct BiconformalChange {
  Expr sigma = Expr::literal(1.0);
  Expr rho = Expr::literal(1.0);

  bool is_identity() const;
};

// g_sigma = sigma^-2 g^H + sigma^{(4n-4)/(m-2n)} g^V, i.e.
// rho = sigma^{-(2n-2)/(m-2n)}. Throws ConfigError unless m > 2n.
BiconformalChange special_change(const Expr& sigma, int m, int n);

// sigma(p), rho(p) and their logarithmic differentials. Throws DomainError
// when either is not positive at p.
struct ChangeScalars {
  double sigma = 1.0;
  double rho = 1.0;
  Vec dln_sigma;
  Vec dln_rho;
};
ChangeScalars change_scalars(const BiconformalChange& c, const Vec& p);

Mat changed_metric_value(const MapGeometry& base, const BiconformalChange& c,
                         const Vec& p);

// Geometry of the same map under g_bar. The new metric is differentiated by
// finite differences (step from base.options()); the identity change
// returns the base metric itself.
MapGeometry apply_change(const MapGeometry& base, const BiconformalChange& c);

struct ChangeContext {
  ChangeContext(MapGeometry base_geometry, BiconformalChange c);

  MapGeometry base;
  MapGeometry changed;
  BiconformalChange change;
};

struct IdentityResidualReport {
  std::string identity;
  Vec point;
  Vec lhs;
  Vec rhs;
  double abs_residual = 0.0;
  // abs_residual / max(1, |lhs|, |rhs|).
  double rel_residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  DerivativeStrategy strategy = DerivativeStrategy::kAutomatic;
  // Variant that keeps the vertical part of "grad" terms; reported only.
  std::optional<double> abs_residual_full;
  std::optional<double> rel_residual_full;
};

// Relative tolerances by the strategy behind the compared sides.
struct Tolerances {
  double ad = 1e-8;
  double fd = 1e-5;

  double for_strategy(DerivativeStrategy s) const {
    return s == DerivativeStrategy::kAutomatic ? ad : fd;
  }
};

IdentityResidualReport make_report(std::string identity, const Vec& p,
                                   Vec lhs, Vec rhs, const Tolerances& tol,
                                   DerivativeStrategy strategy);

// kAutomatic only when neither metric nor tensor derivatives involve
// finite differences.
DerivativeStrategy strategy_of(const ChangeContext& ctx);

// H(nabla_bar_X Y) against H(nabla_X Y) + sum_i [-X(ln s) g(Y, f_i)
//   - Y(ln s) g(X, f_i) + f_i(ln s) g(X, Y)] f_i.
// x and y must be horizontal at p; Y is extended as P_H(q) y.
IdentityResidualReport verify_koszul_h(const ChangeContext& ctx, const Vec& p,
                                       const Vec& x, const Vec& y, const Tolerances& tol);

// H(nabla_bar_V V) against (s^2 / 2)[2 r^-2 H(nabla_V V)
//   - sum_i f_i(r^-2) g(V, V) f_i]; V extended as P_V(q) v.
IdentityResidualReport verify_koszul_v(const ChangeContext& ctx, const Vec& p,
                                       const Vec& v, const Tolerances& tol);

// mu_bar^V against sigma^2 [mu^V + H(grad ln rho)].
IdentityResidualReport verify_mean_curvature(const ChangeContext& ctx,
                                             const Vec& p, const Tolerances& tol);

// F div_bar_H F against sigma^2 (F div_H F + (2n - 2) grad_H(ln sigma)).
IdentityResidualReport verify_f_divergence(const ChangeContext& ctx,
                                           const Vec& p, const Tolerances& tol);

// tau_bar against sigma^2 [tau + dphi(grad ln(rho^{2n-m} sigma^{2-2n}))].
IdentityResidualReport verify_tension_transform(const ChangeContext& ctx,
                                                const Vec& p, const Tolerances& tol);

// How the sum over the adapted frame in the horizontal correction of
// (nabla_bar_X F) Y is written.
enum class CorrectionForm {
  // -g(X, Y) F grad_H(ln sigma); independent of the frame.
  kInvariant,
  // g(X, Y) sum_i [F e_i(ln sigma) e_i + e_i(ln sigma) F e_i]; changes when
  // e_i is replaced by F e_i, agrees with kInvariant only where
  // e_i(ln sigma) = 0.
  kFrameSum,
};

Vec phh_covariant_rhs(const ChangeContext& ctx, const Vec& p, const Vec& x,
                      const Vec& y, CorrectionForm form,
                      const AdaptedFrameOptions& frame = {});

// H((nabla_bar_X F) Y) against H((nabla_X F) Y) + grad_H(ln s) g(X, FY)
//   - g(X, Y) F grad_H(ln s) - FY(ln s) X + Y(ln s) FX.
IdentityResidualReport verify_phh_covariant_formula(const ChangeContext& ctx,
                                                    const Vec& p, const Vec& x,
                                                    const Vec& y, const Tolerances& tol);

enum class HolomorphicTest { kZ1, kZ1Squared, kExpZ1, kZ1Z2 };
std::string to_string(HolomorphicTest f);
// Tests defined for a target of complex dimension n.
std::vector<HolomorphicTest> holomorphic_tests(int n);

// max(|Delta (Re f o phi)|, |Delta (Im f o phi)|) under geo's metric.
IdentityResidualReport verify_pullback_characterization(const MapGeometry& geo,
                                                        const Vec& p,
                                                        HolomorphicTest f,
                                                        const Tolerances& tol);

struct SampleOutcome {
  int index = 0;
  Vec point;
  bool errored = false;
  std::string error;
  bool flagged = false;  // selected for the judged direction of the check
  bool pass = true;
  double value = 0.0;    // the measured quantity
  std::string detail;
};

struct CorollaryReport {
  std::string name;
  std::vector<SampleOutcome> samples;
  bool skipped = false;
  std::string note;
  bool pass = false;

  int count_passed() const;
  int count_failed() const;
  int count_errored() const;
};

// Harmonic PHWC scenario: tau and the PHWC defect stay below tol under
// g_sigma. Non-harmonic PHWC scenario (or the companion of a harmonic
// one): tau_{g_sigma} = sigma^2 tau_g and stays non-zero where tau_g is.
std::vector<CorollaryReport> check_corollary_psh(
    const Scenario& scenario, const Expr& sigma, int samples, std::uint64_t seed,
    const Tolerances& tol, const GeometryOptions& options = {});

struct PhhCheckOptions {
  double gradient_threshold = 0.05;
  // Defect a flagged sample must exceed; 0 means 10 times the tolerance.
  double break_threshold = 0.0;
};

// PHH harmonic scenario: constant sigma keeps phh_defect below tol under
// g_sigma; non-constant sigma must push it above the break threshold
// wherever |grad_H ln sigma| exceeds gradient_threshold. For n = 1 the
// breaking direction is reported as skipped.
CorollaryReport check_corollary_phh(const Scenario& scenario, const Expr& sigma,
                                    int samples, std::uint64_t seed,
                                    const Tolerances& tol,
                                    const PhhCheckOptions& phh = {},
                                    const GeometryOptions& options = {});

}  // namespace biconf
