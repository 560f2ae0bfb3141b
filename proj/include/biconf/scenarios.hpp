#pragma once

// Bundled example geometries with known PHWC / PHH / harmonicity status.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "biconf/map_geometry.hpp"

namespace biconf {

struct ExpectedFlags {
  bool phwc = false;
  std::optional<bool> phh;  // nullopt: measured and reported, not asserted
  bool harmonic = false;
};

struct Scenario {
  std::string name;
  std::string description;
  std::shared_ptr<const ChartedRiemannianManifold> source;
  std::shared_ptr<const TargetSpace> target;
  std::shared_ptr<const SmoothMap> map;
  ExpectedFlags flags;
  Box sample_region;
  PointPredicate excluded;  // empty: nothing excluded
  // Map is holomorphic for the standard structure on the source chart.
  bool holomorphic = false;
  bool optional = false;
  // Non-harmonic PHWC variant on the same manifolds, if any.
  std::string companion;

  int m() const { return source->dim; }
  int two_n() const { return target->manifold.dim; }
  int n() const { return two_n() / 2; }

  std::shared_ptr<const MetricField> metric() const;
  MapGeometry geometry(GeometryOptions options = {}) const;
};

// Alphabetical.
std::vector<std::string> list_scenarios();
// Throws ConfigError naming the available scenarios.
const Scenario& get_scenario(std::string_view name);
// Messages from optional scenarios that failed their construction checks.
const std::vector<std::string>& registry_warnings();

// Deterministic for fixed (scenario, count, seed). Points lie in the sample
// region and chart domain and outside the excluded region. Throws
// std::invalid_argument for count < 1 and GeometryError when rejection
// sampling runs out of attempts.
std::vector<Vec> sample_points(const Scenario& s, int count, std::uint64_t seed);

// Standard complex structure on R^{2k}: d/dx_{2j-1} -> d/dx_{2j}.
Mat standard_complex_structure(int dim);

// Uniform doubles in [0, 1) from a 64-bit stream, identical on every
// platform.
class SampleRng {
 public:
  explicit SampleRng(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  double uniform() { return static_cast<double>(next() >> 11) * 0x1p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::uint64_t state_;
};

}  // namespace biconf
