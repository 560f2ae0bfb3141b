#include <doctest.h>

#include <cmath>
#include <string>

#include "../support.hpp"
#include "biconf/biconformal.hpp"
#include "biconf/errors.hpp"
#include "biconf/hermitian.hpp"

using namespace biconf;
using namespace biconf::testing;

namespace {

MapGeometry flat_projection(int m, int two_n, GeometryOptions o = {}) {
  return geometry(euclidean_space(m, Box::cube(m, -1, 1)), flat_target(two_n),
                  projection(two_n), o);
}

MapGeometry plane_map(VectorJetField f) {
  return geometry(euclidean_space(2, Box::cube(2, -1, 1)), flat_target(2), std::move(f));
}

GeometryOptions automatic() {
  GeometryOptions o;
  o.tensor_derivatives = TensorDerivatives::kAutomatic;
  return o;
}

}  // namespace

TEST_CASE("differentials") {
  const MapGeometry proj = flat_projection(4, 2);
  Mat expect = Mat::Zero(2, 4);
  expect(0, 0) = expect(1, 1) = 1.0;
  CHECK(proj.differential(Vec::Constant(4, 0.2)) == expect);

  const MapGeometry id = plane_map(projection(2));
  CHECK(id.differential(Vec{{0.3, 0.4}}) == Mat::Identity(2, 2));

  const MapGeometry sq = plane_map([](std::span<const Jet2> x) {
    return JetVector{x[0] * x[0] - x[1] * x[1], Jet2(2.0) * x[0] * x[1]};
  });
  const Vec p{{0.7, -0.3}};
  Mat cr(2, 2);
  cr << 2 * p[0], -2 * p[1], 2 * p[1], 2 * p[0];
  CHECK((sq.differential(p) - cr).norm() < 1e-15);
}

TEST_CASE("adjoint differential") {
  const MapGeometry proj = flat_projection(4, 2);
  const Vec p = Vec::Constant(4, 0.1);
  CHECK(proj.adjoint_differential(p) == proj.differential(p).transpose());

  const MapGeometry aniso = geometry(euclidean_space(4, Box::cube(4, -1, 1)), flat_target(2),
                                     [](std::span<const Jet2> x) {
                                       return JetVector{x[0], Jet2(2.0) * x[1]};
                                     });
  Mat a = Mat::Zero(2, 4);
  a(0, 0) = 1.0;
  a(1, 1) = 2.0;
  const Mat oracle = a * a.transpose();  // g = h = I
  const Mat dd = aniso.differential(p) * aniso.adjoint_differential(p);
  CHECK((dd - oracle).norm() < 1e-15);
  CHECK(dd(0, 0) == 1.0);
  CHECK(dd(1, 1) == 4.0);

  const MapGeometry scaled = geometry(
      chart(4, diagonal_metric(4, [](std::span<const Jet2> x, int i) {
              return Jet2::constant(i == 0 ? 4.0 : 1.0, jet_dim(x));
            })),
      flat_target(2), projection(2));
  const Mat g = Vec{{4.0, 1.0, 1.0, 1.0}}.asDiagonal();
  const Vec col = scaled.adjoint_differential(p).col(0);
  CHECK((col - g.inverse() * a.row(0).transpose()).norm() < 1e-15);
  CHECK((col - Vec{{0.25, 0.0, 0.0, 0.0}}).norm() < 1e-15);
}

TEST_CASE("adjoint identity g(dphi* w, X) = h(w, dphi X) on every scenario") {
  SampleRng rng(4);
  for (const std::string& name : list_scenarios()) {
    const Scenario& sc = get_scenario(name);
    const MapGeometry geo = sc.geometry();
    for (const Vec& p : sample_points(sc, 20, 9)) {
      const Mat g = geo.metric().value(p);
      const Mat h = sample_target(sc.map->target(), sc.map->evaluate(p).value).h;
      const Vec w = random_vector(rng, sc.two_n());
      const Vec x = random_vector(rng, sc.m());
      const double lhs = g_inner(g, geo.adjoint_differential(p) * w, x);
      const double rhs = g_inner(h, w, geo.differential(p) * x);
      CHECK(std::abs(lhs - rhs) < 1e-10 * std::max(1.0, std::abs(rhs)));
    }
  }
}

TEST_CASE("orthogonal splitting") {
  const MapGeometry proj = flat_projection(4, 2);
  const OrthoSplit s = proj.ortho_split(Vec::Constant(4, 0.5));
  REQUIRE(s.vertical.size() == 2);
  REQUIRE(s.horizontal.size() == 2);
  for (const Vec& v : s.vertical) CHECK(std::abs(v[0]) + std::abs(v[1]) == 0.0);
  for (const Vec& h : s.horizontal) CHECK(std::abs(h[2]) + std::abs(h[3]) == 0.0);

  const MapGeometry sq = plane_map([](std::span<const Jet2> x) {
    return JetVector{x[0] * x[0] - x[1] * x[1], Jet2(2.0) * x[0] * x[1]};
  });
  const OrthoSplit e = sq.ortho_split(Vec{{0.5, 0.2}});
  CHECK(e.vertical.empty());
  CHECK(e.horizontal.size() == 2);

  const Scenario& hp = get_scenario("holomorphic-poly");
  const MapGeometry geo = hp.geometry();
  try {
    geo.ortho_split(Vec::Zero(4));
    FAIL("expected a rank error");
  } catch (const GeometryError& err) {
    CHECK(std::string(err.what()).find("rank 0") != std::string::npos);
    CHECK(std::string(err.what()).find("smallest singular value 0") != std::string::npos);
  }
}

TEST_CASE("split invariants and determinism on every scenario") {
  for (const std::string& name : list_scenarios()) {
    const Scenario& sc = get_scenario(name);
    const MapGeometry geo = sc.geometry();
    for (const Vec& p : sample_points(sc, 20, 5)) {
      const OrthoSplit s = geo.ortho_split(p);
      const Mat g = geo.metric().value(p);
      const Mat a = geo.differential(p);
      std::vector<Vec> all = s.horizontal;
      all.insert(all.end(), s.vertical.begin(), s.vertical.end());
      for (std::size_t i = 0; i < all.size(); ++i) {
        for (std::size_t j = 0; j < all.size(); ++j) {
          CHECK(std::abs(g_inner(g, all[i], all[j]) - (i == j ? 1.0 : 0.0)) < 1e-10);
        }
      }
      for (const Vec& v : s.vertical) CHECK((a * v).norm() < 1e-8);
      const OrthoSplit again = geo.ortho_split(p);
      for (std::size_t i = 0; i < all.size(); ++i) {
        const Vec& u = i < s.horizontal.size() ? again.horizontal[i]
                                               : again.vertical[i - s.horizontal.size()];
        CHECK(u == all[i]);
      }
    }
  }
}

TEST_CASE("tension fields by the trace formula") {
  const MapGeometry proj = flat_projection(4, 2);
  CHECK(proj.tension_field(Vec::Constant(4, 0.3)).norm() == 0.0);

  const MapGeometry harm = plane_map([](std::span<const Jet2> x) {
    return JetVector{x[0] * x[0] - x[1] * x[1], Jet2(2.0) * x[0] * x[1]};
  });
  CHECK(harm.tension_field(Vec{{0.4, 0.9}}).norm() == 0.0);

  // Not a submersion everywhere, but the trace formula needs none.
  const MapGeometry sq = geometry(euclidean_space(2, Box::cube(2, -1, 1)), flat_target(2),
                                  [](std::span<const Jet2> x) {
                                    return JetVector{x[0] * x[0], Jet2::constant(0.0, jet_dim(x))};
                                  });
  const Vec t = sq.tension_field(Vec{{0.5, 0.5}});
  CHECK(t[0] == 2.0);
  CHECK(t[1] == 0.0);
}

TEST_CASE("tension through the f-structure") {
  const MapGeometry proj = flat_projection(4, 2);
  CHECK(tension_via_f_structure(proj, Vec::Constant(4, 0.3)).norm() < 1e-12);

  const Scenario& hp = get_scenario("holomorphic-poly");
  for (const GeometryOptions& o : {GeometryOptions{}, automatic()}) {
    const MapGeometry geo = hp.geometry(o);
    const Vec p{{1.0, 0.0, 0.0, 1.0}};
    const Vec direct = geo.tension_field(p);
    const Vec via = tension_via_f_structure(geo, p);
    CHECK((direct - via).norm() < 1e-8);
  }

  const MapGeometry aniso = geometry(euclidean_space(4, Box::cube(4, -1, 1)), flat_target(2),
                                     [](std::span<const Jet2> x) {
                                       return JetVector{x[0], Jet2(2.0) * x[1]};
                                     });
  CHECK_THROWS_AS(tension_via_f_structure(aniso, Vec::Constant(4, 0.1)), GeometryError);
}

TEST_CASE("mean curvature of the fibres") {
  const MapGeometry proj = flat_projection(4, 2);
  CHECK(proj.mean_curvature_vertical(Vec::Constant(4, 0.3)).norm() < 1e-12);
  CHECK_THROWS_AS(plane_map(projection(2)).mean_curvature_vertical(Vec{{0.1, 0.2}}),
                  GeometryError);

  // g_bar = diag(1, 1, e^{-2 x1}, e^{-2 x1}): oracle from Koszul Christoffels
  // of the metric values, with the unit vertical frame e^{x1} d_alpha
  // (constant along itself).
  BiconformalChange c;
  c.rho = Expr::parse("exp(x1)");
  const MapGeometry changed = apply_change(proj, c);
  const Vec p{{0.2, -0.1, 0.4, 0.3}};
  const auto gamma = fd_christoffel([&](const Vec& q) { return changed.metric().value(q); }, p);
  Vec oracle = Vec::Zero(4);
  for (int a = 2; a < 4; ++a) {
    for (int k = 0; k < 2; ++k) oracle[k] += std::exp(2 * p[0]) * gamma[k](a, a);
  }
  oracle /= 2.0;
  const Vec mu = changed.mean_curvature_vertical(p);
  CHECK((mu - oracle).norm() < 1e-6);
  CHECK((mu - Vec::Unit(4, 0)).norm() < 1e-6);
  CHECK(std::abs(mu[2]) + std::abs(mu[3]) < 1e-10);
}

TEST_CASE("normalized mean curvature of warped fibres") {
  // Fibre metric e^{0.6 x1} delta: umbilic fibres, mu = -grad ln(e^{0.3 x1}).
  for (const GeometryOptions& o : {GeometryOptions{}, automatic()}) {
    for (const char* name : {"warped-projection-4-2", "warped-projection-6-4"}) {
      const Scenario& sc = get_scenario(name);
      const MapGeometry geo = sc.geometry(o);
      for (const Vec& p : sample_points(sc, 5, 3)) {
        const Vec mu = geo.mean_curvature_vertical(p);
        CHECK((mu + 0.3 * Vec::Unit(sc.m(), 0)).norm() < 1e-8);
        const Vec tau = geo.tension_field(p);
        CHECK((tau - 0.6 * Vec::Unit(sc.two_n(), 0)).norm() < 1e-12);
      }
    }
  }
}

TEST_CASE("frame and projector routes for mean curvature agree") {
  for (const std::string& name : list_scenarios()) {
    const Scenario& sc = get_scenario(name);
    if (sc.m() == sc.two_n()) continue;
    const MapGeometry geo = sc.geometry(automatic());
    for (const Vec& p : sample_points(sc, 10, 2)) {
      const Vec a = geo.mean_curvature_vertical_frames(p);
      const Vec b = geo.mean_curvature_vertical_projector(p);
      CHECK((a - b).norm() < 1e-7 * std::max(1.0, b.norm()));
    }
  }
}

TEST_CASE("PHH maps: tau = -(m - 2n) dphi(mu)") {
  for (const std::string& name : list_scenarios()) {
    const Scenario& sc = get_scenario(name);
    if (sc.flags.phh != std::optional<bool>(true)) continue;
    const MapGeometry geo = sc.geometry();
    for (const Vec& p : sample_points(sc, 20, 6)) {
      const Vec lhs = geo.tension_field(p);
      const Vec rhs = -(sc.m() - sc.two_n()) * (geo.differential(p) * geo.mean_curvature_vertical(p));
      CHECK((lhs - rhs).norm() < 1e-6);
    }
  }
}

TEST_CASE("analytic and finite-difference tensor derivatives agree") {
  for (const std::string& name : list_scenarios()) {
    const Scenario& sc = get_scenario(name);
    const MapGeometry fd = sc.geometry();
    const MapGeometry ad = sc.geometry(automatic());
    CHECK(fd.tensor_strategy() == DerivativeStrategy::kFiniteDifference);
    CHECK(ad.tensor_strategy() == DerivativeStrategy::kAutomatic);
    SampleRng rng(12);
    for (const Vec& p : sample_points(sc, 10, 8)) {
      const Vec x = random_vector(rng, sc.m());
      CHECK((fd.directional_f(p, x) - ad.directional_f(p, x)).norm() < 1e-5);
      CHECK((fd.directional_proj_h(p, x) - ad.directional_proj_h(p, x)).norm() < 1e-5);
    }
  }
}
