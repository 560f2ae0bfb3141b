#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "biconf/errors.hpp"
#include "biconf/expr.hpp"
#include "biconf/scenarios.hpp"

using namespace biconf;

namespace {

Jet2 jet_at(const Expr& e, std::vector<double> p) { return e.eval_jet(seed_coordinates(p)); }

// Random expression text over x1..x4 whose value stays inside every
// function's domain.
std::string random_text(SampleRng& rng, int depth) {
  auto lit = [&] {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", rng.uniform(0.1, 2.0));
    return std::string(buf);
  };
  if (depth == 0) {
    return rng.uniform() < 0.7 ? "x" + std::to_string(1 + static_cast<int>(rng.uniform() * 4))
                               : lit();
  }
  const std::string a = random_text(rng, depth - 1);
  const std::string b = random_text(rng, depth - 1);
  switch (static_cast<int>(rng.uniform() * 9)) {
    case 0: return a + " + " + b;
    case 1: return a + " - " + b;
    case 2: return a + " * " + b;
    case 3: return a + " / (2 + sin(" + b + "))";
    case 4: return "sin(" + a + ")";
    case 5: return "-cos(" + a + ")";
    case 6: return "exp(0.3 * sin(" + a + "))";
    case 7: return "log(1.5 + cos(" + a + "))";
    default: return "(1.5 + sin(" + a + "))^" + lit();
  }
}

}  // namespace

TEST_CASE("precedence and tree shape") {
  const Expr e = Expr::parse("x1 + 2*x2");
  const Expr expect = Expr::binary(BinaryOp::kAdd, Expr::var(0),
                                   Expr::binary(BinaryOp::kMul, Expr::literal(2), Expr::var(1)));
  CHECK(e == expect);
  CHECK(e.to_string() == "(x1 + (2 * x2))");

  // '^' binds tighter than unary minus and is right-associative.
  CHECK(Expr::parse("-x1^2") == Expr::negate(Expr::binary(BinaryOp::kPow, Expr::var(0),
                                                          Expr::literal(2))));
  CHECK(Expr::parse("2^3^2").eval(std::vector<double>{}) == 512.0);
  CHECK(Expr::parse("2^-1").eval(std::vector<double>{}) == 0.5);
  CHECK(Expr::parse("8 / 4 / 2").eval(std::vector<double>{}) == 1.0);
  CHECK(Expr::parse("1 - 2 - 3").eval(std::vector<double>{}) == -4.0);
}

TEST_CASE("evaluation") {
  CHECK(Expr::parse("exp(x3)^2").eval(std::vector<double>{5.0, 5.0, 0.0}) == 1.0);
  CHECK(Expr::parse("1.5e1 + .5").eval(std::vector<double>{}) == 15.5);
  CHECK(Expr::parse("sqrt(x1) * log(x2)").eval(std::vector<double>{4.0, std::exp(1.0)}) ==
        doctest::Approx(2.0));
}

TEST_CASE("syntax errors carry offsets") {
  auto offset_of = [](const char* text) -> long {
    try {
      Expr::parse(text);
    } catch (const ParseError& e) {
      return static_cast<long>(e.offset());
    }
    return -1;
  };
  CHECK(offset_of("x1 +") == 4);
  CHECK(offset_of("2x1") == 1);
  CHECK(offset_of("(x1") == 3);
  CHECK(offset_of("x1 $ 2") == 3);
  CHECK(offset_of("") == 0);

  try {
    Expr::parse("foo(x1)");
    FAIL("expected an error");
  } catch (const ParseError& e) {
    CHECK(e.kind() == ParseError::Kind::kUnknownIdentifier);
  }
  try {
    Expr::parse("x0 + 1");
    FAIL("expected an error");
  } catch (const ParseError& e) {
    CHECK(e.kind() == ParseError::Kind::kUnknownIdentifier);
  }
  for (const char* text : {"sin()", "sin(x1, x2)"}) {
    try {
      Expr::parse(text);
      FAIL("expected an error");
    } catch (const ParseError& e) {
      CHECK(e.kind() == ParseError::Kind::kArity);
    }
  }
}

TEST_CASE("jets of parsed expressions") {
  const Jet2 f = jet_at(Expr::parse("x1*x1*x2"), {1.0, 2.0});
  CHECK(f.value == 2.0);
  CHECK(f.grad[0] == 4.0);
  CHECK(f.grad[1] == 1.0);
  CHECK(f.h(0, 0) == 4.0);
  CHECK(f.h(0, 1) == 2.0);
  CHECK(f.h(1, 0) == 2.0);
  CHECK(f.h(1, 1) == 0.0);

  const Jet2 one = jet_at(Expr::parse("1"), {0.3, 0.4, 0.5});
  CHECK(one.value == 1.0);
  for (double g : one.grad) CHECK(g == 0.0);
  for (double h : one.hess) CHECK(h == 0.0);
}

TEST_CASE("domain errors name the failing node") {
  try {
    jet_at(Expr::parse("2 + log(x1)"), {-1.0});
    FAIL("expected an error");
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find("log(x1)") != std::string::npos);
  }
  CHECK_THROWS_AS(Expr::parse("x1 / (x2 - 1)").eval(std::vector<double>{1.0, 1.0}), DomainError);
  CHECK_THROWS_AS(jet_at(Expr::parse("x3"), {1.0, 2.0}), std::invalid_argument);
}

TEST_CASE("constant detection") {
  CHECK(Expr::parse("3 * sin(2)").is_constant());
  CHECK(Expr::parse("3 * sin(x2)").max_var_index() == 1);
}

TEST_CASE("canonical printing round-trips") {
  SampleRng rng(11);
  for (int i = 0; i < 200; ++i) {
    const std::string text = random_text(rng, 3);
    const Expr e = Expr::parse(text);
    const Expr again = Expr::parse(e.to_string());
    CHECK(again == e);
    CHECK(again.to_string() == e.to_string());
  }
  CHECK(Expr::parse("0.1").to_string() == "0.1");
  CHECK(Expr::parse("-(x1)").to_string() == "(-x1)");
}

TEST_CASE("jets of random expressions match central differences") {
  SampleRng rng(5);
  constexpr double h = 1e-4;
  for (int i = 0; i < 100; ++i) {
    const Expr e = Expr::parse(random_text(rng, 3));
    std::vector<double> p(4);
    for (double& v : p) v = rng.uniform(-1.0, 1.0);
    const Jet2 j = jet_at(e, p);
    CHECK(j.value == doctest::Approx(e.eval(p)).epsilon(1e-14));
    for (int a = 0; a < 4; ++a) {
      auto shifted = [&](double da, int b, double db) {
        std::vector<double> q = p;
        q[a] += da;
        q[b] += db;
        return e.eval(q);
      };
      const double fd = (shifted(h, a, 0) - shifted(-h, a, 0)) / (2 * h);
      CHECK(std::abs(j.grad[a] - fd) < 1e-5 * std::max({1.0, std::abs(fd), std::abs(j.value)}));
      for (int b = 0; b < 4; ++b) {
        const double fd2 = (shifted(h, b, h) - shifted(h, b, -h) - shifted(-h, b, h) +
                            shifted(-h, b, -h)) / (4 * h * h);
        CHECK(std::abs(j.h(a, b) - fd2) <
              1e-5 * std::max({1.0, std::abs(fd2), std::abs(j.value)}));
        CHECK(j.h(a, b) == j.h(b, a));
      }
    }
  }
}
