#include <doctest.h>

#include <cmath>
#include <vector>

#include "../support.hpp"
#include "biconf/errors.hpp"
#include "biconf/jet.hpp"

using namespace biconf;
using biconf::testing::random_point;

namespace {

// Random straight-line program over {+,-,*,/,sin,cos,exp,log,sqrt,pow}
// whose intermediate values stay in the domain of every operation. The
// same program runs on doubles and on jets.
template <class T>
T random_program(const std::vector<T>& x, std::uint64_t seed) {
  using std::cos;
  using std::exp;
  using std::log;
  using std::sin;
  using std::sqrt;
  SampleRng rng(seed);
  std::vector<T> regs(x.begin(), x.end());
  auto pick = [&]() -> const T& {
    return regs[static_cast<std::size_t>(rng.uniform() * regs.size())];
  };
  for (int step = 0; step < 12; ++step) {
    const int op = static_cast<int>(rng.uniform() * 10);
    const T a = pick();
    const T b = pick();
    const double c = rng.uniform(0.2, 1.2);
    T r;
    switch (op) {
      case 0: r = a + b; break;
      case 1: r = a - c * b; break;
      case 2: r = a * b; break;
      case 3: r = a / (T(2.5) + sin(b)); break;
      case 4: r = sin(c * a); break;
      case 5: r = cos(a + b); break;
      case 6: r = exp(T(0.3) * sin(a)); break;
      case 7: r = log(T(1.5) + cos(a)); break;
      case 8: r = sqrt(T(1.2) + sin(a * b)); break;
      default: r = pow(T(1.3) + sin(a), T(c)); break;
    }
    regs.push_back(r);
  }
  T out = regs.back();
  for (std::size_t i = regs.size() - 4; i < regs.size() - 1; ++i) out = out + regs[i];
  return out;
}

double value_at(const Vec& p, std::uint64_t seed) {
  std::vector<double> x(p.data(), p.data() + p.size());
  return random_program(x, seed);
}

}  // namespace

TEST_CASE("seeding puts unit gradients on the coordinates") {
  const std::vector<double> c = {1.0, 2.0};
  const auto j = seed_coordinates(c);
  REQUIRE(j.size() == 2);
  CHECK(j[0].value == 1.0);
  CHECK(j[1].value == 2.0);
  CHECK(j[0].grad[0] == 1.0);
  CHECK(j[0].grad[1] == 0.0);
  CHECK(j[1].grad[0] == 0.0);
  CHECK(j[1].grad[1] == 1.0);
  for (double h : j[0].hess) CHECK(h == 0.0);

  const std::vector<double> one = {5.0};
  const auto k = seed_coordinates(one);
  CHECK(k[0].value == 5.0);
  CHECK(k[0].dim == 1);
  CHECK(k[0].grad[0] == 1.0);
  CHECK(k[0].h(0, 0) == 0.0);

  CHECK_THROWS_AS(seed_coordinates(std::span<const double>()), std::invalid_argument);
  const std::vector<double> nine(9, 0.0);
  CHECK_THROWS_AS(seed_coordinates(nine), std::invalid_argument);
}

TEST_CASE("product and quotient rules") {
  const std::vector<double> c = {1.0, 2.0};
  const auto x = seed_coordinates(c);
  const Jet2 f = x[0] * x[0] * x[1];
  CHECK(f.value == 2.0);
  CHECK(f.grad[0] == 4.0);
  CHECK(f.grad[1] == 1.0);
  CHECK(f.h(0, 0) == 4.0);
  CHECK(f.h(0, 1) == 2.0);
  CHECK(f.h(1, 0) == 2.0);
  CHECK(f.h(1, 1) == 0.0);

  const std::vector<double> three = {3.0};
  const Jet2 y = seed_coordinates(three)[0];
  const Jet2 q = y / y;
  CHECK(q.value == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::abs(q.grad[0]) < 1e-15);
  CHECK(std::abs(q.h(0, 0)) < 1e-15);

  CHECK_THROWS_AS(y / Jet2::constant(0.0, 1), DomainError);
}

TEST_CASE("unary chain rule") {
  const std::vector<double> zero = {0.0};
  const Jet2 e = exp(seed_coordinates(zero)[0]);
  CHECK(e.value == 1.0);
  CHECK(e.grad[0] == 1.0);
  CHECK(e.h(0, 0) == 1.0);

  const std::vector<double> p7 = {0.7};
  const Jet2 l = log(exp(seed_coordinates(p7)[0]));
  CHECK(l.value == doctest::Approx(0.7).epsilon(1e-15));
  CHECK(l.grad[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::abs(l.h(0, 0)) < 1e-15);

  CHECK_THROWS_AS(log(Jet2::constant(-1.0, 1)), DomainError);
  CHECK_THROWS_AS(sqrt(Jet2::constant(-1.0, 1)), DomainError);
  CHECK_THROWS_AS(log(Jet2::constant(0.0, 1)), DomainError);
}

TEST_CASE("pow: integer fast path and domain") {
  const std::vector<double> c = {-2.0};
  const Jet2 x = seed_coordinates(c)[0];
  const Jet2 cube = pow(x, 3.0);
  CHECK(cube.value == -8.0);
  CHECK(cube.grad[0] == 12.0);
  CHECK(cube.h(0, 0) == -12.0);
  const Jet2 inv = pow(x, -2.0);
  CHECK(inv.value == doctest::Approx(0.25));
  CHECK(inv.grad[0] == doctest::Approx(0.25));  // -2 x^-3 at -2
  CHECK_THROWS_AS(pow(x, 0.5), DomainError);
  CHECK_THROWS_AS(pow(x, Jet2(0.5)), DomainError);
  CHECK(pow(Jet2::constant(0.0, 1), 2.0).value == 0.0);
  CHECK_THROWS_AS(pow(Jet2::constant(0.0, 1), -1.0), DomainError);
}

TEST_CASE("constants broadcast; mismatched dimensions are rejected") {
  const std::vector<double> c = {1.0, 2.0, 3.0};
  const auto x = seed_coordinates(c);
  const Jet2 s = x[2] + 4.0;
  CHECK(s.dim == 3);
  CHECK(s.value == 7.0);
  CHECK(s.grad[2] == 1.0);
  const Jet2 other = Jet2::variable(1.0, 0, 2);
  CHECK_THROWS_AS(x[0] + other, std::invalid_argument);
}

TEST_CASE("all-zero gradient seeds leave derivative parts exactly zero") {
  std::vector<Jet2> x;
  for (double v : {0.3, -0.4, 0.9}) x.push_back(Jet2::constant(v, 3));
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Jet2 r = random_program(x, seed);
    for (double g : r.grad) CHECK(g == 0.0);
    for (double h : r.hess) CHECK(h == 0.0);
  }
}

TEST_CASE("non-finite results are reported, not propagated") {
  const Jet2 big = Jet2::variable(800.0, 0, 1);
  CHECK_THROWS_AS(exp(big), DomainError);
}

TEST_CASE("derivatives match central differences of the value; Hessian exactly symmetric") {
  SampleRng rng(2024);
  constexpr double h = 1e-4;
  int checked = 0;
  for (int dim : {2, 4, 6}) {
    const Box box = Box::cube(dim, -1.0, 1.0);
    for (int trial = 0; trial < 40; ++trial) {
      const std::uint64_t seed = 1000 + trial;
      const Vec p = random_point(rng, box);
      const Jet2 j = random_program(seed_coordinates(std::span<const double>(p.data(), dim)), seed);
      CHECK(j.value == doctest::Approx(value_at(p, seed)).epsilon(1e-14));
      const double scale = std::max(1.0, std::abs(j.value));
      for (int a = 0; a < dim; ++a) {
        Vec pa = p, ma = p;
        pa[a] += h;
        ma[a] -= h;
        const double fd = (value_at(pa, seed) - value_at(ma, seed)) / (2 * h);
        CHECK(std::abs(j.grad[a] - fd) < 1e-5 * std::max(scale, std::abs(fd)));
        for (int b = 0; b < dim; ++b) {
          CHECK(j.h(a, b) == j.h(b, a));
          Vec pp = p, pm = p, mp = p, mm = p;
          pp[a] += h; pp[b] += h;
          pm[a] += h; pm[b] -= h;
          mp[a] -= h; mp[b] += h;
          mm[a] -= h; mm[b] -= h;
          const double fd2 = (value_at(pp, seed) - value_at(pm, seed) - value_at(mp, seed) +
                              value_at(mm, seed)) / (4 * h * h);
          CHECK(std::abs(j.h(a, b) - fd2) < 1e-5 * std::max(scale, std::abs(fd2)));
        }
      }
      ++checked;
    }
  }
  CHECK(checked == 120);
}
