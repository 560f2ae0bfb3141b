#include "biconf/report.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include <json.hpp>

#include "biconf/errors.hpp"

namespace biconf {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string fmt(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

ordered_json to_json(const Vec& v) {
  ordered_json a = ordered_json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

std::string point_text(const Vec& v) {
  std::string out;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) out += ' ';
    out += fmt(v[i]);
  }
  return out;
}

std::string csv_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

Vec random_vector(SampleRng& rng, int m) {
  Vec v(m);
  for (int k = 0; k < m; ++k) v[k] = rng.uniform(-1.0, 1.0);
  return v;
}

struct Residual {
  double abs = 0.0;
  double rel = 0.0;
  bool pass = true;
  std::optional<double> rel_full;
  std::string message;
};

Residual from_report(const IdentityResidualReport& r) {
  Residual out;
  out.abs = r.abs_residual;
  out.rel = r.rel_residual;
  out.pass = r.pass;
  out.rel_full = r.rel_residual_full;
  return out;
}

// Worst of several reports on one sample; each judged by its own tolerance.
Residual worst_of(const std::vector<IdentityResidualReport>& reports) {
  Residual out;
  for (const auto& r : reports) {
    out.abs = std::max(out.abs, r.abs_residual);
    out.rel = std::max(out.rel, r.rel_residual);
    out.pass = out.pass && r.pass;
    if (r.rel_residual_full) {
      out.rel_full = std::max(out.rel_full.value_or(0.0), *r.rel_residual_full);
    }
  }
  return out;
}

IdentitySummary not_applicable(const std::string& name, const std::string& why) {
  IdentitySummary s;
  s.name = name;
  s.applicable = false;
  s.note = why;
  return s;
}

IdentitySummary run_identity(const std::string& name, DerivativeStrategy strategy,
                             double tolerance, const std::vector<Vec>& points,
                             const std::function<Residual(int, const Vec&)>& fn) {
  IdentitySummary s;
  s.name = name;
  s.strategy = strategy;
  s.tolerance = tolerance;
  for (std::size_t i = 0; i < points.size(); ++i) {
    SampleRecord rec;
    rec.index = static_cast<int>(i);
    rec.point = points[i];
    try {
      const Residual r = fn(static_cast<int>(i), points[i]);
      rec.abs_residual = r.abs;
      rec.rel_residual = r.rel;
      rec.rel_residual_full = r.rel_full;
      rec.message = r.message;
      rec.status = r.pass ? SampleStatus::kPass : SampleStatus::kFail;
    } catch (const std::exception& e) {
      rec.status = SampleStatus::kError;
      rec.message = e.what();
    }
    s.records.push_back(std::move(rec));
  }
  return s;
}

IdentitySummary from_corollaries(const std::string& name,
                                 const std::vector<CorollaryReport>& reports,
                                 DerivativeStrategy strategy, double tolerance) {
  IdentitySummary s;
  s.name = name;
  s.strategy = strategy;
  s.tolerance = tolerance;
  int index = 0;
  std::vector<std::string> notes;
  for (const CorollaryReport& r : reports) {
    if (r.skipped) s.skipped = true;
    if (!r.note.empty()) notes.push_back(r.note);
    for (const SampleOutcome& o : r.samples) {
      SampleRecord rec;
      rec.index = index++;
      rec.point = o.point;
      rec.abs_residual = o.value;
      rec.rel_residual = o.value;
      if (o.errored) {
        rec.status = SampleStatus::kError;
        rec.message = r.name + ": " + o.error;
      } else {
        rec.status = o.pass ? SampleStatus::kPass : SampleStatus::kFail;
        rec.message = r.name + ": " + o.detail + (o.flagged ? " [judged]" : "");
      }
      s.records.push_back(std::move(rec));
    }
  }
  notes.push_back("residual columns hold the measured quantity of each sample");
  for (std::size_t i = 0; i < notes.size(); ++i) {
    s.note += (i ? "; " : "") + notes[i];
  }
  return s;
}

}  // namespace

ReportFormat parse_format(const std::string& text) {
  if (text == "json") return ReportFormat::kJson;
  if (text == "csv") return ReportFormat::kCsv;
  if (text == "text") return ReportFormat::kText;
  throw ConfigError("unknown format '" + text + "' (expected json, csv or text)");
}

std::string to_string(ReportFormat f) {
  switch (f) {
    case ReportFormat::kJson: return "json";
    case ReportFormat::kCsv: return "csv";
    case ReportFormat::kText: return "text";
  }
  return "?";
}

std::string to_string(SampleStatus s) {
  switch (s) {
    case SampleStatus::kPass: return "pass";
    case SampleStatus::kFail: return "fail";
    case SampleStatus::kError: return "error";
  }
  return "?";
}

const std::vector<std::string>& identity_names() {
  static const std::vector<std::string> names = {
      "tension-f-structure", "tension-transform", "koszul-horizontal",
      "koszul-vertical",     "mean-curvature",    "f-divergence",
      "phh-covariant",       "pullback",          "phwc-equivalence",
      "corollary-psh",       "corollary-phh"};
  return names;
}

void RunConfig::validate() const {
  if (scenario.empty()) throw ConfigError("--scenario is required");
  if (samples < 1) throw ConfigError("--samples must be at least 1");
  if (!(tol_ad > 0.0) || !(tol_fd > 0.0)) {
    throw ConfigError("tolerances must be positive");
  }
  if (!(fd_step > 0.0)) throw ConfigError("--fd-step must be positive");
  if (special_sigma && (sigma || rho)) {
    throw ConfigError("--special-sigma cannot be combined with --sigma or --rho");
  }
  const auto& known = identity_names();
  for (const std::string& id : identities) {
    if (std::find(known.begin(), known.end(), id) == known.end()) {
      std::string list;
      for (const auto& k : known) list += (list.empty() ? "" : ", ") + k;
      throw ConfigError("unknown identity '" + id + "' (available: " + list + ")");
    }
  }
}

int IdentitySummary::count(SampleStatus s) const {
  return static_cast<int>(std::count_if(records.begin(), records.end(),
                                        [s](const auto& r) { return r.status == s; }));
}

double IdentitySummary::max_abs_residual() const {
  double m = 0.0;
  for (const auto& r : records) {
    if (r.status != SampleStatus::kError) m = std::max(m, r.abs_residual);
  }
  return m;
}

double IdentitySummary::max_rel_residual() const {
  double m = 0.0;
  for (const auto& r : records) {
    if (r.status != SampleStatus::kError) m = std::max(m, r.rel_residual);
  }
  return m;
}

std::optional<double> IdentitySummary::max_rel_residual_full() const {
  std::optional<double> m;
  for (const auto& r : records) {
    if (r.status != SampleStatus::kError && r.rel_residual_full) {
      m = std::max(m.value_or(0.0), *r.rel_residual_full);
    }
  }
  return m;
}

std::optional<Vec> IdentitySummary::worst_point() const {
  const SampleRecord* worst = nullptr;
  for (const auto& r : records) {
    if (r.status == SampleStatus::kError) continue;
    if (!worst || r.rel_residual > worst->rel_residual) worst = &r;
  }
  if (!worst) return std::nullopt;
  return worst->point;
}

bool RunReport::flags_confirmed() const {
  return std::all_of(flags.begin(), flags.end(),
                     [](const FlagCheck& f) { return f.confirmed; });
}

bool RunReport::passed() const {
  if (!flags_confirmed()) return false;
  for (const IdentitySummary& s : identities) {
    if (s.failed()) return false;
    // An identity with samples but not a single usable one verifies nothing.
    if (!s.records.empty() && s.count(SampleStatus::kError) ==
                                  static_cast<int>(s.records.size())) {
      return false;
    }
  }
  return true;
}

RunReport run_verification(const RunConfig& config) {
  config.validate();
  const Scenario& sc = get_scenario(config.scenario);

  RunReport report;
  report.config = config;
  report.warnings = registry_warnings();

  BiconformalChange change;
  if (config.special_sigma) {
    report.special_change = true;
    change = special_change(Expr::parse(*config.special_sigma), sc.m(), sc.n());
  } else {
    if (config.sigma) change.sigma = Expr::parse(*config.sigma);
    if (config.rho) change.rho = Expr::parse(*config.rho);
  }
  report.sigma_text = change.sigma.to_string();
  report.rho_text = change.rho.to_string();

  GeometryOptions options;
  options.fd_step = config.fd_step;
  options.tensor_derivatives = TensorDerivatives::kAutomatic;
  const ChangeContext ctx(sc.geometry(options), change);
  const Tolerances tol{config.tol_ad, config.tol_fd};
  const DerivativeStrategy strategy = strategy_of(ctx);
  const double tol_change = tol.for_strategy(strategy);
  const std::vector<Vec> points = sample_points(sc, config.samples, config.seed);
  const bool has_fibres = sc.m() > sc.two_n();

  auto selected = [&](const std::string& name) {
    return config.identities.empty() ||
           std::find(config.identities.begin(), config.identities.end(), name) !=
               config.identities.end();
  };
  auto sample_rng = [&](int i) {
    return SampleRng(config.seed + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(i + 1));
  };
  const bool harmonic_change = change.is_identity() || report.special_change;

  for (const std::string& name : identity_names()) {
    if (!selected(name)) continue;
    IdentitySummary s;
    if (name == "tension-f-structure") {
      if (!sc.flags.phwc) {
        s = not_applicable(name, "map is not PHWC");
      } else {
        s = run_identity(name, strategy, tol_change, points, [&](int, const Vec& p) {
          std::vector<IdentityResidualReport> rs;
          for (const MapGeometry* g : {&ctx.base, &ctx.changed}) {
            DerivativeStrategy st = g->metric().strategy() == DerivativeStrategy::kAutomatic
                                        ? g->tensor_strategy()
                                        : DerivativeStrategy::kFiniteDifference;
            rs.push_back(make_report(name, p, g->tension_field(p),
                                     tension_via_f_structure(*g, p), tol, st));
          }
          return worst_of(rs);
        });
      }
    } else if (name == "tension-transform") {
      if (!sc.flags.phwc) {
        s = not_applicable(name, "map is not PHWC");
      } else {
        s = run_identity(name, strategy, tol_change, points, [&](int, const Vec& p) {
          return from_report(verify_tension_transform(ctx, p, tol));
        });
      }
    } else if (name == "koszul-horizontal") {
      s = run_identity(name, strategy, tol_change, points, [&](int i, const Vec& p) {
        SampleRng rng = sample_rng(i);
        const PointTensors t = ctx.base.tensors_at(p);
        const Vec x = t.proj_h * random_vector(rng, sc.m());
        const Vec y = t.proj_h * random_vector(rng, sc.m());
        return from_report(verify_koszul_h(ctx, p, x, y, tol));
      });
    } else if (name == "koszul-vertical") {
      if (!has_fibres) {
        s = not_applicable(name, "fibres are points (m = 2n)");
      } else {
        s = run_identity(name, strategy, tol_change, points, [&](int i, const Vec& p) {
          SampleRng rng = sample_rng(i);
          const PointTensors t = ctx.base.tensors_at(p);
          random_vector(rng, sc.m());
          random_vector(rng, sc.m());
          const Vec v = t.proj_v * random_vector(rng, sc.m());
          return from_report(verify_koszul_v(ctx, p, v, tol));
        });
      }
    } else if (name == "mean-curvature") {
      if (!has_fibres) {
        s = not_applicable(name, "fibres are points (m = 2n)");
      } else if (!sc.flags.phwc) {
        s = not_applicable(name, "map is not PHWC");
      } else {
        s = run_identity(name, strategy, tol_change, points, [&](int, const Vec& p) {
          return from_report(verify_mean_curvature(ctx, p, tol));
        });
      }
    } else if (name == "f-divergence") {
      if (!sc.flags.phwc) {
        s = not_applicable(name, "map is not PHWC");
      } else {
        s = run_identity(name, strategy, tol_change, points, [&](int, const Vec& p) {
          return from_report(verify_f_divergence(ctx, p, tol));
        });
      }
    } else if (name == "phh-covariant") {
      if (!sc.flags.phwc) {
        s = not_applicable(name, "map is not PHWC");
      } else {
        s = run_identity(name, strategy, tol_change, points, [&](int i, const Vec& p) {
          SampleRng rng = sample_rng(i);
          const PointTensors t = ctx.base.tensors_at(p);
          const Vec x = t.proj_h * random_vector(rng, sc.m());
          const Vec y = t.proj_h * random_vector(rng, sc.m());
          return from_report(verify_phh_covariant_formula(ctx, p, x, y, tol));
        });
      }
    } else if (name == "pullback") {
      if (!sc.flags.phwc || !sc.flags.harmonic) {
        s = not_applicable(name, "map is not a pseudo-harmonic morphism");
      } else {
        s = run_identity(name, strategy, tol_change, points, [&](int, const Vec& p) {
          std::vector<IdentityResidualReport> rs;
          for (HolomorphicTest f : holomorphic_tests(sc.n())) {
            rs.push_back(verify_pullback_characterization(ctx.base, p, f, tol));
            if (harmonic_change && !change.is_identity()) {
              rs.push_back(verify_pullback_characterization(ctx.changed, p, f, tol));
            }
          }
          return worst_of(rs);
        });
        if (!harmonic_change) {
          s.note = "checked under the original metric only: a general change need "
                   "not preserve harmonicity";
        }
      }
    } else if (name == "phwc-equivalence") {
      s = run_identity(name, DerivativeStrategy::kAutomatic, tol.ad, points,
                       [&](int, const Vec& p) {
        Residual r;
        std::ostringstream os;
        for (const MapGeometry* g : {&ctx.base, &ctx.changed}) {
          const double d = phwc_defect(*g, p).raw;
          const double dm = phwc_metric_defect(*g, p).raw;
          r.pass = r.pass && ((d < tol.ad) == (dm < tol.ad));
          r.abs = std::max(r.abs, d);
          r.rel = std::max(r.rel, dm);
          os << (g == &ctx.base ? "g" : "g_bar") << ": commutator " << fmt(d)
             << ", metric " << fmt(dm) << "; ";
        }
        r.message = os.str();
        return r;
      });
      s.note = "abs: commutator defect, rel: metric defect; agreement of the two "
               "tests is judged";
    } else if (name == "corollary-psh") {
      if (!report.special_change) {
        s = not_applicable(name, "needs --special-sigma");
      } else if (!sc.flags.phwc) {
        s = not_applicable(name, "map is not PHWC");
      } else {
        s = from_corollaries(
            name,
            check_corollary_psh(sc, change.sigma, config.samples, config.seed, tol,
                                options),
            strategy, tol_change);
      }
    } else if (name == "corollary-phh") {
      if (!report.special_change) {
        s = not_applicable(name, "needs --special-sigma");
      } else if (sc.flags.phh != std::optional<bool>(true) || !sc.flags.harmonic) {
        s = not_applicable(name, "map is not a harmonic PHH map");
      } else {
        s = from_corollaries(name,
                             {check_corollary_phh(sc, change.sigma, config.samples,
                                                  config.seed, tol, {}, options)},
                             strategy, tol_change);
      }
    }
    report.identities.push_back(std::move(s));
  }

  // Expected flags, measured under the original metric.
  auto measure = [&](const std::string& flag, std::optional<bool> expected,
                     double tolerance, const std::function<double(const Vec&)>& fn) {
    FlagCheck f;
    f.flag = flag;
    f.expected = expected;
    f.tolerance = tolerance;
    for (const Vec& p : points) {
      try {
        f.max_value = std::max(f.max_value, fn(p));
      } catch (const std::exception&) {
        ++f.samples_error;
      }
    }
    f.observed = f.max_value < tolerance;
    f.confirmed = !expected || *expected == f.observed;
    if (f.samples_error == static_cast<int>(points.size())) f.confirmed = !expected;
    report.flags.push_back(f);
  };
  const MapGeometry& base = ctx.base;
  measure("phwc", sc.flags.phwc, tol.ad,
          [&](const Vec& p) { return phwc_defect(base, p).raw; });
  measure("harmonic", sc.flags.harmonic, tol.for_strategy(base.metric().strategy()),
          [&](const Vec& p) { return base.tension_field(p).norm(); });
  if (sc.flags.phwc) {
    const DerivativeStrategy st = base.metric().strategy() == DerivativeStrategy::kAutomatic
                                      ? base.tensor_strategy()
                                      : DerivativeStrategy::kFiniteDifference;
    measure("phh", sc.flags.phh, tol.for_strategy(st),
            [&](const Vec& p) { return phh_defect(base, p).raw; });
  }
  if (sc.holomorphic) {
    const Mat j0 = standard_complex_structure(sc.m());
    measure("holomorphic", true, 1e-10, [&](const Vec& p) {
      const PointTensors t = base.tensors_at(p);
      return (t.dphi * j0 - t.J * t.dphi).cwiseAbs().maxCoeff();
    });
  }
  return report;
}

std::string render_json(const RunReport& report) {
  const RunConfig& c = report.config;
  ordered_json j;
  j["schema_version"] = 1;
  j["scenario"] = c.scenario;
  ordered_json cfg;
  cfg["sigma"] = report.sigma_text;
  cfg["rho"] = report.rho_text;
  cfg["special_change"] = report.special_change;
  cfg["samples"] = c.samples;
  cfg["seed"] = c.seed;
  cfg["tol_ad"] = c.tol_ad;
  cfg["tol_fd"] = c.tol_fd;
  cfg["fd_step"] = c.fd_step;
  cfg["identities"] = c.identities.empty() ? identity_names() : c.identities;
  cfg["format"] = to_string(c.format);
  j["config"] = cfg;
  j["warnings"] = report.warnings;

  ordered_json ids = ordered_json::array();
  for (const IdentitySummary& s : report.identities) {
    ordered_json e;
    e["name"] = s.name;
    e["applicable"] = s.applicable;
    e["skipped"] = s.skipped;
    e["strategy"] = s.applicable ? ordered_json(std::string(to_string(s.strategy)))
                                 : ordered_json(nullptr);
    e["tolerance"] = s.applicable ? ordered_json(s.tolerance) : ordered_json(nullptr);
    e["samples_pass"] = s.count(SampleStatus::kPass);
    e["samples_fail"] = s.count(SampleStatus::kFail);
    e["samples_error"] = s.count(SampleStatus::kError);
    const bool measured = !s.records.empty();
    e["max_abs_residual"] = measured ? ordered_json(s.max_abs_residual()) : ordered_json(nullptr);
    e["max_rel_residual"] = measured ? ordered_json(s.max_rel_residual()) : ordered_json(nullptr);
    if (auto full = s.max_rel_residual_full()) e["max_rel_residual_full"] = *full;
    const auto worst = s.worst_point();
    e["worst_point"] = worst ? to_json(*worst) : ordered_json(nullptr);
    ordered_json errors = ordered_json::array();
    for (const auto& r : s.records) {
      if (r.status == SampleStatus::kError) {
        errors.push_back({{"sample", r.index}, {"message", r.message}});
      }
    }
    e["errors"] = errors;
    if (!s.note.empty()) e["note"] = s.note;
    ids.push_back(e);
  }
  j["per_identity"] = ids;

  ordered_json flags = ordered_json::array();
  for (const FlagCheck& f : report.flags) {
    ordered_json e;
    e["flag"] = f.flag;
    e["expected"] = f.expected ? ordered_json(*f.expected) : ordered_json(nullptr);
    e["observed"] = f.observed;
    e["max_value"] = f.max_value;
    e["tolerance"] = f.tolerance;
    e["samples_error"] = f.samples_error;
    e["confirmed"] = f.confirmed;
    flags.push_back(e);
  }
  j["flags"] = flags;
  j["flags_confirmed"] = report.flags_confirmed();
  j["verdict"] = report.passed() ? "pass" : "fail";
  return j.dump(2) + "\n";
}

std::string render_csv(const RunReport& report) {
  std::ostringstream os;
  os << "identity,sample,status,abs_residual,rel_residual,rel_residual_full,point,"
        "message\n";
  for (const IdentitySummary& s : report.identities) {
    for (const SampleRecord& r : s.records) {
      os << s.name << ',' << r.index << ',' << to_string(r.status) << ','
         << fmt(r.abs_residual) << ',' << fmt(r.rel_residual) << ','
         << (r.rel_residual_full ? fmt(*r.rel_residual_full) : "") << ','
         << csv_quote(point_text(r.point)) << ',' << csv_quote(r.message) << '\n';
    }
  }
  return os.str();
}

std::string render_text(const RunReport& report) {
  std::ostringstream os;
  const RunConfig& c = report.config;
  os << "scenario " << c.scenario << "\n";
  os << "sigma " << report.sigma_text << ", rho " << report.rho_text
     << (report.special_change ? " (special change)" : "") << "\n";
  os << "samples " << c.samples << ", seed " << c.seed << ", tol_ad " << fmt(c.tol_ad)
     << ", tol_fd " << fmt(c.tol_fd) << ", fd_step " << fmt(c.fd_step) << "\n";
  for (const auto& w : report.warnings) os << "warning: " << w << "\n";
  os << "\n";
  for (const IdentitySummary& s : report.identities) {
    os << s.name << ": ";
    if (!s.applicable) {
      os << "n/a (" << s.note << ")\n";
      continue;
    }
    if (s.skipped) {
      os << "skipped (" << s.note << ")\n";
      continue;
    }
    os << s.count(SampleStatus::kPass) << " pass, " << s.count(SampleStatus::kFail)
       << " fail, " << s.count(SampleStatus::kError) << " error; max rel "
       << fmt(s.max_rel_residual()) << " (tol " << fmt(s.tolerance) << ", "
       << to_string(s.strategy) << ")\n";
    if (!s.note.empty()) os << "  " << s.note << "\n";
  }
  os << "\n";
  for (const FlagCheck& f : report.flags) {
    os << "flag " << f.flag << ": expected "
       << (f.expected ? (*f.expected ? "true" : "false") : "unasserted") << ", observed "
       << (f.observed ? "true" : "false") << " (max " << fmt(f.max_value) << ")"
       << (f.confirmed ? "" : " MISMATCH") << "\n";
  }
  os << "verdict " << (report.passed() ? "pass" : "fail") << "\n";
  return os.str();
}

std::string render(const RunReport& report, ReportFormat format) {
  switch (format) {
    case ReportFormat::kJson: return render_json(report);
    case ReportFormat::kCsv: return render_csv(report);
    case ReportFormat::kText: return render_text(report);
  }
  return {};
}

void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string());
    out << content;
    out.close();
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw std::runtime_error("cannot move report into " + path);
  }
}

std::string list_text() {
  std::ostringstream os;
  auto yn = [](bool b) { return b ? "yes" : "no"; };
  for (const std::string& name : list_scenarios()) {
    const Scenario& s = get_scenario(name);
    os << name << " (m=" << s.m() << ", 2n=" << s.two_n() << ")  phwc=" << yn(s.flags.phwc)
       << " phh=" << (s.flags.phh ? yn(*s.flags.phh) : "measured")
       << " harmonic=" << yn(s.flags.harmonic) << "\n";
  }
  for (const auto& w : registry_warnings()) os << "warning: " << w << "\n";
  return os.str();
}

std::string list_json() {
  ordered_json a = ordered_json::array();
  for (const std::string& name : list_scenarios()) {
    const Scenario& s = get_scenario(name);
    ordered_json e;
    e["name"] = name;
    e["m"] = s.m();
    e["two_n"] = s.two_n();
    e["description"] = s.description;
    e["flags"] = {{"phwc", s.flags.phwc},
                  {"phh", s.flags.phh ? ordered_json(*s.flags.phh) : ordered_json(nullptr)},
                  {"harmonic", s.flags.harmonic}};
    e["optional"] = s.optional;
    a.push_back(e);
  }
  return a.dump(2) + "\n";
}

int cmd_verify(const RunConfig& config, std::ostream& out, std::ostream& err) {
  RunReport report;
  try {
    report = run_verification(config);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    err << "error: cannot parse expression: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  const std::string content = render(report, config.format);
  if (config.report_path.empty()) {
    out << content;
  } else {
    try {
      write_atomic(config.report_path, content);
    } catch (const std::exception& e) {
      err << "error: " << e.what() << "\n";
      return 2;
    }
  }
  return report.exit_code();
}

}  // namespace biconf
