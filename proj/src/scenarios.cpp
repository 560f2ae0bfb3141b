#include "biconf/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "biconf/errors.hpp"

namespace biconf {
namespace {

int jet_dim(std::span<const Jet2> x) { return x.empty() ? 0 : x.front().dim; }

MatrixJetField constant_matrix_field(Mat value) {
  return [value](std::span<const Jet2> x) {
    const int d = jet_dim(x);
    const int n = static_cast<int>(value.rows());
    JetVector out;
    out.reserve(n * n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) out.push_back(Jet2::constant(value(i, j), d));
    }
    return out;
  };
}

// Diagonal metric whose entries are given per coordinate.
MatrixJetField diagonal_metric(int dim,
                               std::function<Jet2(std::span<const Jet2>, int)> entry) {
  return [dim, entry](std::span<const Jet2> x) {
    const int d = jet_dim(x);
    JetVector g(dim * dim, Jet2::constant(0.0, d));
    for (int i = 0; i < dim; ++i) g[i * dim + i] = entry(x, i);
    return g;
  };
}

std::shared_ptr<const TargetSpace> flat_complex_space(int two_n) {
  auto t = std::make_shared<TargetSpace>();
  t->manifold = euclidean_space(two_n, Box::cube(two_n, -1.0, 1.0));
  t->manifold.name = "C" + std::to_string(two_n / 2);
  t->complex_structure = constant_matrix_field(standard_complex_structure(two_n));
  t->kahler = true;
  return t;
}

VectorJetField projection(int two_n) {
  return [two_n](std::span<const Jet2> x) {
    return JetVector(x.begin(), x.begin() + two_n);
  };
}

Scenario flat_projection(int m, int two_n) {
  Scenario s;
  s.name = "flat-projection-" + std::to_string(m) + "-" + std::to_string(two_n);
  s.description = "Euclidean R^" + std::to_string(m) + " onto flat C^" +
                  std::to_string(two_n / 2) + " by the first coordinates";
  s.sample_region = Box::cube(m, -1.0, 2.0);
  s.source = std::make_shared<const ChartedRiemannianManifold>(
      euclidean_space(m, s.sample_region));
  s.target = flat_complex_space(two_n);
  s.map = std::make_shared<const SmoothMap>(m, s.target, projection(two_n));
  s.flags = {true, true, true};
  s.companion = "warped-projection-" + std::to_string(m) + "-" + std::to_string(two_n);
  return s;
}

// Fibres scaled by exp(2 c x1): PHWC and PHH, fibres umbilic but not
// minimal, so the map is not harmonic.
Scenario warped_projection(int m, int two_n) {
  constexpr double kWarp = 0.3;
  Scenario s;
  s.name = "warped-projection-" + std::to_string(m) + "-" + std::to_string(two_n);
  s.description = "R^" + std::to_string(m) +
                  " with fibre metric exp(0.6 x1) onto flat C^" +
                  std::to_string(two_n / 2) + " by the first coordinates";
  s.sample_region = Box::cube(m, -1.0, 2.0);
  auto source = std::make_shared<ChartedRiemannianManifold>();
  source->name = "warped R" + std::to_string(m);
  source->dim = m;
  source->sample_region = s.sample_region;
  source->metric = diagonal_metric(m, [two_n](std::span<const Jet2> x, int i) {
    if (i < two_n) return Jet2::constant(1.0, jet_dim(x));
    return exp(Jet2(2.0 * kWarp) * x[0]);
  });
  s.source = source;
  s.target = flat_complex_space(two_n);
  s.map = std::make_shared<const SmoothMap>(m, s.target, projection(two_n));
  s.flags = {true, true, false};
  return s;
}

Scenario holomorphic_poly() {
  Scenario s;
  s.name = "holomorphic-poly";
  s.description = "flat C^2 onto flat C by z^2 + w^3";
  s.sample_region = Box::cube(4, -1.5, 1.5);
  s.source = std::make_shared<const ChartedRiemannianManifold>(
      euclidean_space(4, s.sample_region));
  s.target = flat_complex_space(2);
  s.map = std::make_shared<const SmoothMap>(4, s.target, [](std::span<const Jet2> x) {
    const Jet2 &a = x[0], &b = x[1], &c = x[2], &d = x[3];
    const Jet2 three(3.0);
    const Jet2 re = a * a - b * b + c * c * c - three * c * d * d;
    const Jet2 im = Jet2(2.0) * a * b + three * c * c * d - d * d * d;
    return JetVector{re, im};
  });
  s.flags = {true, std::nullopt, true};
  s.holomorphic = true;
  auto map = s.map;
  s.excluded = [map](const Vec& p) {
    return smallest_singular_value(map->evaluate(p).jacobian) < 0.1;
  };
  return s;
}

Scenario nonphwc_anisotropic() {
  Scenario s;
  s.name = "nonphwc-anisotropic";
  s.description = "Euclidean R^4 onto flat C by (x1, 2 x2)";
  s.sample_region = Box::cube(4, -1.0, 2.0);
  s.source = std::make_shared<const ChartedRiemannianManifold>(
      euclidean_space(4, s.sample_region));
  s.target = flat_complex_space(2);
  s.map = std::make_shared<const SmoothMap>(4, s.target, [](std::span<const Jet2> x) {
    return JetVector{x[0], Jet2(2.0) * x[1]};
  });
  s.flags = {false, std::nullopt, true};
  return s;
}

// S^3 through inverse stereographic coordinates u in R^3, onto S^2(1/2)
// in the stereographic chart zeta = z / w. A Riemannian submersion.
Scenario hopf() {
  Scenario s;
  s.name = "hopf";
  s.description = "Hopf fibration S^3 -> S^2(1/2) in stereographic charts";
  s.sample_region = Box::cube(3, -0.7, 0.7);

  // |w|^2 (1 + |u|^2)^2 / 4 = u3^2 + (|u|^2 - 1)^2 / 4
  auto fibre_denominator = [](const Vec& u) {
    const double r2 = u.squaredNorm();
    return 4.0 * u[2] * u[2] + (r2 - 1.0) * (r2 - 1.0);
  };

  auto source = std::make_shared<ChartedRiemannianManifold>();
  source->name = "S3 stereographic";
  source->dim = 3;
  source->sample_region = s.sample_region;
  source->metric = diagonal_metric(3, [](std::span<const Jet2> u, int) {
    const Jet2 r2 = u[0] * u[0] + u[1] * u[1] + u[2] * u[2];
    const Jet2 d = Jet2(1.0) + r2;
    return Jet2(4.0) / (d * d);
  });
  source->in_domain = [fibre_denominator](const Vec& u) {
    return fibre_denominator(u) > 1e-9;
  };
  s.source = source;

  auto target = std::make_shared<TargetSpace>();
  target->manifold.name = "S2(1/2) stereographic";
  target->manifold.dim = 2;
  target->manifold.sample_region = Box::cube(2, -1.0, 1.0);
  target->manifold.metric = diagonal_metric(2, [](std::span<const Jet2> v, int) {
    const Jet2 d = Jet2(1.0) + v[0] * v[0] + v[1] * v[1];
    return Jet2(1.0) / (d * d);
  });
  target->complex_structure = constant_matrix_field(standard_complex_structure(2));
  target->kahler = true;
  s.target = target;

  s.map = std::make_shared<const SmoothMap>(3, s.target, [](std::span<const Jet2> u) {
    const Jet2 r2 = u[0] * u[0] + u[1] * u[1] + u[2] * u[2];
    const Jet2 q = r2 - Jet2(1.0);
    const Jet2 two(2.0);
    const Jet2 den = Jet2(4.0) * u[2] * u[2] + q * q;
    // z = (2u1 + 2i u2) / D, w = (2u3 + i q) / D; zeta = z conj(w) / |w|^2
    const Jet2 re = (Jet2(4.0) * u[0] * u[2] + two * u[1] * q) / den;
    const Jet2 im = (Jet2(4.0) * u[1] * u[2] - two * u[0] * q) / den;
    return JetVector{re, im};
  });
  // Keeps |zeta|^2 below about 9 and away from the fibre over infinity.
  s.excluded = [fibre_denominator](const Vec& u) {
    const double d = 1.0 + u.squaredNorm();
    return fibre_denominator(u) / (d * d) < 0.1;
  };
  s.flags = {true, true, true};
  s.optional = true;
  return s;
}

// dphi restricted to H is an isometry onto (N, h).
bool hopf_is_riemannian_submersion(const Scenario& s, std::string& why) {
  const MapGeometry geo = s.geometry();
  for (const Vec& p : sample_points(s, 16, 7)) {
    const OrthoSplit split = geo.ortho_split(p);
    const SmoothMap::Jet j = s.map->evaluate(p);
    const Mat h = metric_at(s.target->manifold, j.value);
    for (const Vec& x : split.horizontal) {
      for (const Vec& y : split.horizontal) {
        const double expect = g_inner(geo.metric().value(p), x, y);
        const double got = Vec(j.jacobian * x).dot(h * (j.jacobian * y));
        if (std::abs(got - expect) > 1e-10) {
          std::ostringstream os;
          os << "hopf: dphi|_H is not an isometry (deviation "
             << std::abs(got - expect) << ")";
          why = os.str();
          return false;
        }
      }
    }
  }
  return true;
}

struct Registry {
  std::map<std::string, Scenario, std::less<>> scenarios;
  std::vector<std::string> warnings;

  Registry() {
    for (Scenario s : {flat_projection(4, 2), flat_projection(6, 4),
                       warped_projection(4, 2), warped_projection(6, 4),
                       holomorphic_poly(), nonphwc_anisotropic()}) {
      scenarios.emplace(s.name, std::move(s));
    }
    Scenario h = hopf();
    std::string why;
    bool ok = false;
    try {
      ok = hopf_is_riemannian_submersion(h, why);
    } catch (const std::exception& e) {
      why = std::string("hopf: ") + e.what();
    }
    if (ok) {
      scenarios.emplace(h.name, std::move(h));
    } else {
      warnings.push_back(why + "; optional scenario disabled");
    }
  }
};

const Registry& registry() {
  static const Registry r;
  return r;
}

}  // namespace

std::uint64_t SampleRng::next() {
  // splitmix64
  std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Mat standard_complex_structure(int dim) {
  if (dim % 2 != 0) throw std::invalid_argument("complex structure needs even dimension");
  Mat j = Mat::Zero(dim, dim);
  for (int k = 0; k < dim; k += 2) {
    j(k + 1, k) = 1.0;
    j(k, k + 1) = -1.0;
  }
  return j;
}

std::shared_ptr<const MetricField> Scenario::metric() const {
  return std::make_shared<const ChartMetricField>(source);
}

MapGeometry Scenario::geometry(GeometryOptions options) const {
  return MapGeometry(metric(), map, options);
}

std::vector<std::string> list_scenarios() {
  std::vector<std::string> names;
  for (const auto& [name, s] : registry().scenarios) names.push_back(name);
  return names;
}

const Scenario& get_scenario(std::string_view name) {
  const auto& r = registry().scenarios;
  auto it = r.find(name);
  if (it == r.end()) {
    std::string avail;
    for (const auto& [n, s] : r) avail += (avail.empty() ? "" : ", ") + n;
    throw ConfigError("unknown scenario '" + std::string(name) +
                      "'; available: " + avail);
  }
  return it->second;
}

const std::vector<std::string>& registry_warnings() { return registry().warnings; }

std::vector<Vec> sample_points(const Scenario& s, int count, std::uint64_t seed) {
  if (count < 1) throw std::invalid_argument("sample count must be at least 1");
  SampleRng rng(seed);
  std::vector<Vec> out;
  out.reserve(count);
  const long max_attempts = 1000L * count;
  for (long attempt = 0; attempt < max_attempts && static_cast<int>(out.size()) < count;
       ++attempt) {
    Vec p(s.m());
    for (int i = 0; i < s.m(); ++i) {
      p[i] = rng.uniform(s.sample_region.lower[i], s.sample_region.upper[i]);
    }
    if (!s.source->contains(p)) continue;
    if (s.excluded && s.excluded(p)) continue;
    out.push_back(std::move(p));
  }
  if (static_cast<int>(out.size()) < count) {
    throw GeometryError("sample region of " + s.name +
                        " exhausted after bounded rejection attempts");
  }
  return out;
}

}  // namespace biconf
