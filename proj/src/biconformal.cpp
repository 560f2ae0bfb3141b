#include "biconf/biconformal.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "biconf/errors.hpp"

namespace biconf {

namespace {

bool is_literal_one(const Expr& e) {
  if (!e.is_constant()) return false;
  return e.eval(std::span<const double>()) == 1.0;
}

void require_vars_fit(const Expr& e, int m, const char* what) {
  if (e.max_var_index() >= m) {
    std::ostringstream os;
    os << what << " uses x" << e.max_var_index() + 1 << " but the domain has dimension "
       << m;
    throw ConfigError(os.str());
  }
}

double scale_of(const Vec& lhs, const Vec& rhs) {
  return std::max({1.0, lhs.norm(), rhs.norm()});
}

// Grad of ln s restricted to H, in the metric g.
Vec horizontal_gradient(const PointTensors& t, const Vec& dln) {
  return t.proj_h * (t.g_inv * dln);
}

void require_horizontal(const PointTensors& t, const Vec& x, const char* what) {
  const double total = g_norm(t.g, x);
  if (!(total > 0.0)) {
    throw GeometryError(std::string(what) + " is zero");
  }
  if (g_norm(t.g, Vec(t.proj_v * x)) > 1e-10 * total) {
    throw GeometryError(std::string(what) + " is not horizontal");
  }
}

void require_vertical(const PointTensors& t, const Vec& v, const char* what) {
  const double total = g_norm(t.g, v);
  if (!(total > 0.0)) {
    throw GeometryError(std::string(what) + " is zero");
  }
  if (g_norm(t.g, Vec(t.proj_h * v)) > 1e-10 * total) {
    throw GeometryError(std::string(what) + " is not vertical");
  }
}

}  // namespace

bool BiconformalChange::is_identity() const {
  return is_literal_one(sigma) && is_literal_one(rho);
}

BiconformalChange special_change(const Expr& sigma, int m, int n) {
  if (m <= 2 * n) {
    std::ostringstream os;
    os << "special change needs m > 2n (m = " << m << ", 2n = " << 2 * n << ")";
    throw ConfigError(os.str());
  }
  BiconformalChange c;
  c.sigma = sigma;
  const double exponent = -static_cast<double>(2 * n - 2) / (m - 2 * n);
  c.rho = exponent == 0.0 ? Expr::literal(1.0) : pow(sigma, exponent);
  return c;
}

ChangeScalars change_scalars(const BiconformalChange& c, const Vec& p) {
  const JetVector x = seed_point(p);
  const Jet2 s = c.sigma.eval_jet(x);
  const Jet2 r = c.rho.eval_jet(x);
  if (!(s.value > 0.0)) {
    std::ostringstream os;
    os << "sigma is not positive (" << s.value << ")";
    throw DomainError(os.str());
  }
  if (!(r.value > 0.0)) {
    std::ostringstream os;
    os << "rho is not positive (" << r.value << ")";
    throw DomainError(os.str());
  }
  const int m = static_cast<int>(p.size());
  ChangeScalars out;
  out.sigma = s.value;
  out.rho = r.value;
  out.dln_sigma = Vec::Zero(m);
  out.dln_rho = Vec::Zero(m);
  // Constant expressions evaluate to broadcast jets without gradient storage.
  if (s.dim > 0) {
    for (int k = 0; k < m; ++k) out.dln_sigma[k] = s.grad[k] / s.value;
  }
  if (r.dim > 0) {
    for (int k = 0; k < m; ++k) out.dln_rho[k] = r.grad[k] / r.value;
  }
  return out;
}

Mat changed_metric_value(const MapGeometry& base, const BiconformalChange& c,
                         const Vec& p) {
  const PointTensors t = base.tensors_at(p);
  const std::span<const double> coords(p.data(), p.size());
  const double s = c.sigma.eval(coords);
  const double r = c.rho.eval(coords);
  if (!(s > 0.0)) throw DomainError("sigma is not positive");
  if (!(r > 0.0)) throw DomainError("rho is not positive");
  const Mat gh = t.proj_h.transpose() * t.g * t.proj_h;
  const Mat gv = t.proj_v.transpose() * t.g * t.proj_v;
  const Mat out = gh / (s * s) + gv / (r * r);
  return 0.5 * (out + out.transpose());
}

MapGeometry apply_change(const MapGeometry& base, const BiconformalChange& c) {
  require_vars_fit(c.sigma, base.m(), "sigma");
  require_vars_fit(c.rho, base.m(), "rho");
  if (c.is_identity()) return base;
  auto base_copy = std::make_shared<const MapGeometry>(base);
  auto value = [base_copy, c](const Vec& p) {
    return changed_metric_value(*base_copy, c, p);
  };
  auto domain = [base_copy](const Vec& p) { return base_copy->metric().contains(p); };
  auto field = std::make_shared<const FiniteDifferenceMetricField>(
      base.m(), value, domain, base.options().fd_step);
  GeometryOptions options = base.options();
  options.tensor_derivatives = TensorDerivatives::kFiniteDifference;
  return MapGeometry(field, base.map_ptr(), options);
}

ChangeContext::ChangeContext(MapGeometry base_geometry, BiconformalChange c)
    : base(std::move(base_geometry)),
      changed(apply_change(base, c)),
      change(std::move(c)) {}

DerivativeStrategy strategy_of(const ChangeContext& ctx) {
  const bool ad =
      ctx.changed.metric().strategy() == DerivativeStrategy::kAutomatic &&
      ctx.base.metric().strategy() == DerivativeStrategy::kAutomatic &&
      ctx.changed.tensor_strategy() == DerivativeStrategy::kAutomatic &&
      ctx.base.tensor_strategy() == DerivativeStrategy::kAutomatic;
  return ad ? DerivativeStrategy::kAutomatic : DerivativeStrategy::kFiniteDifference;
}

IdentityResidualReport make_report(std::string identity, const Vec& p, Vec lhs,
                                   Vec rhs, const Tolerances& tol,
                                   DerivativeStrategy strategy) {
  IdentityResidualReport r;
  r.identity = std::move(identity);
  r.point = p;
  r.abs_residual = (lhs - rhs).norm();
  r.rel_residual = r.abs_residual / scale_of(lhs, rhs);
  r.lhs = std::move(lhs);
  r.rhs = std::move(rhs);
  r.strategy = strategy;
  r.tolerance = tol.for_strategy(strategy);
  r.pass = std::isfinite(r.rel_residual) && r.rel_residual < r.tolerance;
  return r;
}

IdentityResidualReport verify_koszul_h(const ChangeContext& ctx, const Vec& p,
                                       const Vec& x, const Vec& y,
                                       const Tolerances& tol) {
  const PointTensors t = ctx.base.tensors_at(p);
  require_horizontal(t, x, "X");
  require_horizontal(t, y, "Y");
  const ChangeScalars cs = change_scalars(ctx.change, p);

  // Y extended as P_H(q) y, so D_X Y = (D_X P_H) y.
  const Vec dy = ctx.base.directional_proj_h(p, x) * y;
  const Vec lhs = t.proj_h * covariant_derivative(ctx.changed.christoffel_at(p),
                                                  y, dy, x);
  const Vec base_term =
      t.proj_h * covariant_derivative(ctx.base.christoffel_at(p), y, dy, x);
  const Vec grad_h = horizontal_gradient(t, cs.dln_sigma);
  const Vec rhs = base_term - cs.dln_sigma.dot(x) * y - cs.dln_sigma.dot(y) * x +
                  g_inner(t.g, x, y) * grad_h;
  return make_report("koszul-horizontal", p, lhs, rhs, tol, strategy_of(ctx));
}

IdentityResidualReport verify_koszul_v(const ChangeContext& ctx, const Vec& p,
                                       const Vec& v, const Tolerances& tol) {
  const PointTensors t = ctx.base.tensors_at(p);
  require_vertical(t, v, "V");
  const ChangeScalars cs = change_scalars(ctx.change, p);

  // V extended as P_V(q) v = v - P_H(q) v.
  const Vec dv = -(ctx.base.directional_proj_h(p, v) * v);
  const Vec lhs = t.proj_h * covariant_derivative(ctx.changed.christoffel_at(p),
                                                  v, dv, v);
  const Vec base_term =
      t.proj_h * covariant_derivative(ctx.base.christoffel_at(p), v, dv, v);
  const double s2 = cs.sigma * cs.sigma;
  const double r_m2 = 1.0 / (cs.rho * cs.rho);
  // f_i(rho^-2) = -2 rho^-2 f_i(ln rho).
  const Vec grad_h_rm2 = -2.0 * r_m2 * horizontal_gradient(t, cs.dln_rho);
  const Vec rhs =
      0.5 * s2 * (2.0 * r_m2 * base_term - g_inner(t.g, v, v) * grad_h_rm2);
  return make_report("koszul-vertical", p, lhs, rhs, tol, strategy_of(ctx));
}

IdentityResidualReport verify_mean_curvature(const ChangeContext& ctx,
                                             const Vec& p, const Tolerances& tol) {
  const PointTensors t = ctx.base.tensors_at(p);
  const ChangeScalars cs = change_scalars(ctx.change, p);
  const Vec lhs = ctx.changed.mean_curvature_vertical(p);
  const Vec rhs = cs.sigma * cs.sigma *
                  (ctx.base.mean_curvature_vertical(p) +
                   horizontal_gradient(t, cs.dln_rho));
  return make_report("mean-curvature", p, lhs, rhs, tol, strategy_of(ctx));
}

IdentityResidualReport verify_f_divergence(const ChangeContext& ctx, const Vec& p,
                                           const Tolerances& tol) {
  const PointTensors t = ctx.base.tensors_at(p);
  const ChangeScalars cs = change_scalars(ctx.change, p);
  const double s2 = cs.sigma * cs.sigma;
  const double k = 2.0 * ctx.base.n() - 2.0;
  const Vec lhs = f_divergence_horizontal(ctx.changed, p);
  const Vec base_term = f_divergence_horizontal(ctx.base, p);
  const Vec rhs = s2 * (base_term + k * horizontal_gradient(t, cs.dln_sigma));
  IdentityResidualReport r =
      make_report("f-divergence", p, lhs, rhs, tol, strategy_of(ctx));
  const Vec rhs_full = s2 * (base_term + k * (t.g_inv * cs.dln_sigma));
  r.abs_residual_full = (lhs - rhs_full).norm();
  r.rel_residual_full = *r.abs_residual_full / scale_of(lhs, rhs_full);
  return r;
}

IdentityResidualReport verify_tension_transform(const ChangeContext& ctx,
                                                const Vec& p,
                                                const Tolerances& tol) {
  const PointTensors t = ctx.base.tensors_at(p);
  const ChangeScalars cs = change_scalars(ctx.change, p);
  const double s2 = cs.sigma * cs.sigma;
  const int m = ctx.base.m();
  const int n = ctx.base.n();
  const Vec dln = (2.0 * n - m) * cs.dln_rho + (2.0 - 2.0 * n) * cs.dln_sigma;
  const Vec lhs = ctx.changed.tension_field(p);
  const Vec base_tau = ctx.base.tension_field(p);
  const Vec rhs = s2 * (base_tau + t.dphi * (t.proj_h * (t.g_inv * dln)));
  IdentityResidualReport r =
      make_report("tension-transform", p, lhs, rhs, tol, strategy_of(ctx));
  const Vec rhs_full = s2 * (base_tau + t.dphi * (t.g_inv * dln));
  r.abs_residual_full = (lhs - rhs_full).norm();
  r.rel_residual_full = *r.abs_residual_full / scale_of(lhs, rhs_full);
  return r;
}

Vec phh_covariant_rhs(const ChangeContext& ctx, const Vec& p, const Vec& x,
                      const Vec& y, CorrectionForm form,
                      const AdaptedFrameOptions& frame_options) {
  const PointTensors t = ctx.base.tensors_at(p);
  require_horizontal(t, x, "X");
  require_horizontal(t, y, "Y");
  const ChangeScalars cs = change_scalars(ctx.change, p);
  const Vec& ds = cs.dln_sigma;
  const Vec grad_h = horizontal_gradient(t, ds);
  const Vec fx = t.f * x;
  const Vec fy = t.f * y;

  const Mat nf = ctx.base.nabla_f(p, x, ctx.base.christoffel_at(p));
  Vec rhs = t.proj_h * (nf * y) + g_inner(t.g, x, fy) * grad_h -
            ds.dot(fy) * x + ds.dot(y) * fx;
  if (form == CorrectionForm::kInvariant) {
    rhs -= g_inner(t.g, x, y) * (t.f * grad_h);
  } else {
    const AdaptedFrame frame = adapted_frame(ctx.base, p, frame_options);
    Vec sum = Vec::Zero(ctx.base.m());
    for (int i = 0; i < ctx.base.n(); ++i) {
      sum += ds.dot(frame.fe[i]) * frame.e[i] + ds.dot(frame.e[i]) * frame.fe[i];
    }
    rhs += g_inner(t.g, x, y) * sum;
  }
  return rhs;
}

IdentityResidualReport verify_phh_covariant_formula(const ChangeContext& ctx,
                                                    const Vec& p, const Vec& x,
                                                    const Vec& y,
                                                    const Tolerances& tol) {
  const Vec rhs = phh_covariant_rhs(ctx, p, x, y, CorrectionForm::kInvariant);
  const PointTensors t = ctx.changed.tensors_at(p);
  const Mat nf = ctx.changed.nabla_f(p, x, ctx.changed.christoffel_at(p));
  const Vec lhs = t.proj_h * (nf * y);
  return make_report("phh-covariant", p, lhs, rhs, tol, strategy_of(ctx));
}

std::string to_string(HolomorphicTest f) {
  switch (f) {
    case HolomorphicTest::kZ1: return "z1";
    case HolomorphicTest::kZ1Squared: return "z1^2";
    case HolomorphicTest::kExpZ1: return "exp(z1)";
    case HolomorphicTest::kZ1Z2: return "z1*z2";
  }
  return "?";
}

std::vector<HolomorphicTest> holomorphic_tests(int n) {
  std::vector<HolomorphicTest> out = {HolomorphicTest::kZ1,
                                      HolomorphicTest::kZ1Squared,
                                      HolomorphicTest::kExpZ1};
  if (n >= 2) out.push_back(HolomorphicTest::kZ1Z2);
  return out;
}

IdentityResidualReport verify_pullback_characterization(const MapGeometry& geo,
                                                        const Vec& p,
                                                        HolomorphicTest f,
                                                        const Tolerances& tol) {
  if (f == HolomorphicTest::kZ1Z2 && geo.n() < 2) {
    throw std::invalid_argument("z1*z2 needs a target of complex dimension 2");
  }
  const JetVector y = geo.map().components(seed_point(p));
  const Jet2& a = y[0];
  const Jet2& b = y[1];
  Jet2 re, im;
  switch (f) {
    case HolomorphicTest::kZ1:
      re = a;
      im = b;
      break;
    case HolomorphicTest::kZ1Squared:
      re = a * a - b * b;
      im = 2.0 * a * b;
      break;
    case HolomorphicTest::kExpZ1:
      re = exp(a) * cos(b);
      im = exp(a) * sin(b);
      break;
    case HolomorphicTest::kZ1Z2:
      re = a * y[2] - b * y[3];
      im = a * y[3] + b * y[2];
      break;
  }
  const MetricSample s = geo.metric().sample(p);
  const Christoffel gamma = christoffel(s);
  Vec lhs(2);
  lhs << laplace_beltrami(s, gamma, re), laplace_beltrami(s, gamma, im);
  return make_report("pullback", p, lhs, Vec::Zero(2), tol,
                     geo.metric().strategy());
}

int CorollaryReport::count_passed() const {
  return static_cast<int>(std::count_if(samples.begin(), samples.end(), [](const auto& s) {
    return !s.errored && s.pass;
  }));
}

int CorollaryReport::count_failed() const {
  return static_cast<int>(std::count_if(samples.begin(), samples.end(), [](const auto& s) {
    return !s.errored && !s.pass;
  }));
}

int CorollaryReport::count_errored() const {
  return static_cast<int>(std::count_if(samples.begin(), samples.end(),
                                        [](const auto& s) { return s.errored; }));
}

namespace {

template <class Fn>
void run_samples(CorollaryReport& report, const std::vector<Vec>& points, Fn&& fn) {
  for (std::size_t i = 0; i < points.size(); ++i) {
    SampleOutcome out;
    out.index = static_cast<int>(i);
    out.point = points[i];
    try {
      fn(out);
    } catch (const std::exception& e) {
      out.errored = true;
      out.pass = false;
      out.error = e.what();
    }
    report.samples.push_back(std::move(out));
  }
}

void finish(CorollaryReport& report) {
  report.pass = !report.skipped && report.count_failed() == 0 &&
                report.count_passed() > 0;
}

}  // namespace

std::vector<CorollaryReport> check_corollary_psh(const Scenario& scenario,
                                                 const Expr& sigma, int samples,
                                                 std::uint64_t seed,
                                                 const Tolerances& tol,
                                                 const GeometryOptions& options) {
  const BiconformalChange change =
      special_change(sigma, scenario.m(), scenario.n());
  std::vector<CorollaryReport> reports;

  auto forward = [&](const Scenario& sc) {
    const ChangeContext ctx(sc.geometry(options), change);
    const double t = tol.for_strategy(strategy_of(ctx));
    CorollaryReport r;
    r.name = "corollary-psh:preserved:" + sc.name;
    run_samples(r, sample_points(sc, samples, seed), [&](SampleOutcome& out) {
      change_scalars(change, out.point);
      const double tau = ctx.changed.tension_field(out.point).norm();
      const double phwc = phwc_defect(ctx.changed, out.point).raw;
      out.flagged = true;
      out.value = std::max(tau, phwc);
      out.pass = tau < t && phwc < t;
      std::ostringstream os;
      os << "|tau| = " << tau << ", phwc defect = " << phwc;
      out.detail = os.str();
    });
    finish(r);
    reports.push_back(std::move(r));
  };

  auto converse = [&](const Scenario& sc) {
    const ChangeContext ctx(sc.geometry(options), change);
    const double t = tol.for_strategy(strategy_of(ctx));
    CorollaryReport r;
    r.name = "corollary-psh:broken:" + sc.name;
    run_samples(r, sample_points(sc, samples, seed), [&](SampleOutcome& out) {
      const ChangeScalars cs = change_scalars(change, out.point);
      const Vec tau = ctx.base.tension_field(out.point);
      const Vec tau_s = ctx.changed.tension_field(out.point);
      const Vec expected = cs.sigma * cs.sigma * tau;
      const double rel = (tau_s - expected).norm() / scale_of(tau_s, expected);
      out.flagged = tau.norm() > 10.0 * t;
      out.value = tau_s.norm();
      out.pass = rel < t && (!out.flagged || tau_s.norm() > t);
      std::ostringstream os;
      os << "|tau_g| = " << tau.norm() << ", |tau_gsigma| = " << tau_s.norm()
         << ", relative residual against sigma^2 tau_g = " << rel;
      out.detail = os.str();
    });
    finish(r);
    reports.push_back(std::move(r));
  };

  if (!scenario.flags.phwc) {
    throw ConfigError("scenario " + scenario.name + " is not PHWC");
  }
  if (scenario.flags.harmonic) {
    forward(scenario);
    if (!scenario.companion.empty()) converse(get_scenario(scenario.companion));
  } else {
    converse(scenario);
  }
  return reports;
}

CorollaryReport check_corollary_phh(const Scenario& scenario, const Expr& sigma,
                                    int samples, std::uint64_t seed,
                                    const Tolerances& tol,
                                    const PhhCheckOptions& phh,
                                    const GeometryOptions& options) {
  if (scenario.flags.phh != std::optional<bool>(true) || !scenario.flags.harmonic) {
    throw ConfigError("scenario " + scenario.name + " is not a harmonic PHH map");
  }
  const BiconformalChange change =
      special_change(sigma, scenario.m(), scenario.n());
  CorollaryReport r;
  r.name = "corollary-phh:" + scenario.name;

  if (!sigma.is_constant() && scenario.n() == 1) {
    r.skipped = true;
    r.note =
        "for n = 1 the correction to the f-structure vanishes, so a "
        "non-constant sigma is not expected to break PHH";
    r.pass = false;
    return r;
  }

  const ChangeContext ctx(scenario.geometry(options), change);
  const double t = tol.for_strategy(strategy_of(ctx));
  const double breaking = phh.break_threshold > 0.0 ? phh.break_threshold : 10.0 * t;
  run_samples(r, sample_points(scenario, samples, seed), [&](SampleOutcome& out) {
    const ChangeScalars cs = change_scalars(change, out.point);
    const double defect = phh_defect(ctx.changed, out.point).raw;
    out.value = defect;
    std::ostringstream os;
    os << "phh defect = " << defect;
    if (sigma.is_constant()) {
      out.flagged = true;
      out.pass = defect < t;
    } else {
      const PointTensors pt = ctx.base.tensors_at(out.point);
      const double grad = g_norm(pt.g, horizontal_gradient(pt, cs.dln_sigma));
      out.flagged = grad > phh.gradient_threshold;
      out.pass = !out.flagged || defect > breaking;
      os << ", |grad_H ln sigma| = " << grad;
    }
    out.detail = os.str();
  });
  finish(r);
  if (!sigma.is_constant()) {
    const auto flagged = std::count_if(r.samples.begin(), r.samples.end(),
                                       [](const auto& s) { return s.flagged; });
    std::ostringstream os;
    os << flagged << " of " << r.samples.size()
       << " samples exceed the gradient threshold";
    r.note = os.str();
  }
  return r;
}

}  // namespace biconf
