#include <cmath>
#include <random>

#include <doctest.h>

#include "poisson/errors.hpp"
#include "poisson/factor.hpp"
#include "support/random_spec.hpp"

using namespace poisson;

namespace {

const double kE = std::exp(1.0);

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an exception");
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("values and derivatives of the built-in kinds") {
  CHECK(FactorFunction::linear(2).value(3) == 6.0);
  CHECK(FactorFunction::constant(1).value(-17.5) == 1.0);
  CHECK(FactorFunction::exponential(1, 1).value(0) == 1.0);
  CHECK(FactorFunction::linear(2).derivative(5) == 2.0);
  CHECK(FactorFunction::constant(4).derivative(2) == 0.0);
  CHECK(FactorFunction::power(1, 2).derivative(3) == doctest::Approx(6.0));
  CHECK(FactorFunction::affine(2, -1).value(3) == 5.0);
  CHECK(FactorFunction::exponential(2, -0.5).derivative(2) == doctest::Approx(-std::exp(-1.0)));
}

TEST_CASE("invalid parameters and validity intervals are rejected") {
  CHECK(code_of([] { FactorFunction::constant(0); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { FactorFunction::linear(0); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { FactorFunction::affine(0, 0); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { FactorFunction(factor_kind::Power{1, 2}, Interval{-1, 1}); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { FactorFunction::power(1, 2).value(-1); }) == ErrorCode::OutOfValidity);
  CHECK(code_of([] { FactorFunction(factor_kind::Constant{1}, Interval{0, 1}).value(2); }) ==
        ErrorCode::OutOfValidity);
}

TEST_CASE("closed-form reciprocal antiderivatives") {
  CHECK(FactorFunction::linear(1).reciprocal_antiderivative(kE, 1) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(FactorFunction::constant(1).reciprocal_antiderivative(3.25, 0) == 3.25);
  CHECK(FactorFunction::exponential(1, 1).reciprocal_antiderivative(1, 0) ==
        doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-15));
  CHECK(FactorFunction::linear(1).invert_antiderivative(1, 1) == doctest::Approx(kE).epsilon(1e-15));
  CHECK(FactorFunction::constant(1).invert_antiderivative(7, 0) == 7.0);
}

TEST_CASE("antiderivatives agree with Simpson quadrature") {
  struct Case {
    FactorFunction f;
    double anchor;
    double y;
  };
  const Case cases[] = {
      {FactorFunction::constant(-2.5), 0.3, 1.7},     {FactorFunction::linear(-1), -1, -2.5},
      {FactorFunction::linear(3), 2, 0.4},            {FactorFunction::affine(2, 1), 0, 3},
      {FactorFunction::affine(-1, 4), 1, 3.5},        {FactorFunction::exponential(1, 1), 0, 1},
      {FactorFunction::exponential(-2, 0.3), -1, 2},  {FactorFunction::power(1, 2), 1, 3},
      {FactorFunction::power(0.5, 0.5), 2, 0.25},     {FactorFunction::power(2, 1), 1, 4},
      {FactorFunction::power(1, -1), 1, 2},
  };
  for (const Case& c : cases) {
    const double oracle = testing::simpson([&](double t) { return 1.0 / c.f.value(t); }, c.anchor, c.y, 20000);
    CHECK(c.f.reciprocal_antiderivative(c.y, c.anchor) == doctest::Approx(oracle).epsilon(1e-10));
  }
}

TEST_CASE("inversion round trips within 1e-10 on random arguments") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const FactorFunction fs[] = {
      FactorFunction::constant(1),       FactorFunction::linear(1),      FactorFunction::linear(-0.5),
      FactorFunction::affine(1, 2),      FactorFunction::exponential(1, 1), FactorFunction::exponential(-3, -0.4),
      FactorFunction::power(2, 3),       FactorFunction::power(1, 1),    FactorFunction::power(1, 0.5),
  };
  for (const FactorFunction& f : fs) {
    const double anchor = 1.0;
    for (int k = 0; k < 100; ++k) {
      const double y = 0.1 + 4.0 * u(rng);
      const double z = f.reciprocal_antiderivative(y, anchor);
      CHECK(std::abs(f.invert_antiderivative(z, anchor) - y) <= 1e-10 * std::max(1.0, y));
    }
  }
}

TEST_CASE("segments through a zero of the factor are refused") {
  CHECK(code_of([] { FactorFunction::linear(1).reciprocal_antiderivative(-1, 1); }) == ErrorCode::OutOfValidity);
  CHECK(code_of([] { FactorFunction::affine(1, -2).reciprocal_antiderivative(3, 1); }) == ErrorCode::OutOfValidity);
  // from anchor 1, F(y) = 1 - 1/y never reaches 1.5
  CHECK(code_of([] { FactorFunction::power(1, 2).invert_antiderivative(1.5, 1); }) == ErrorCode::OutOfRange);
}

TEST_CASE("antiderivative image of an interval") {
  const Interval img = FactorFunction::linear(1).antiderivative_image({0, std::exp(2.0)}, 1);
  CHECK(std::isinf(img.lower));
  CHECK(img.lower < 0);
  CHECK(img.upper == doctest::Approx(2.0));
  const Interval pw = FactorFunction::power(1, 2).antiderivative_image({0.5, INFINITY}, 1);
  CHECK(pw.lower == doctest::Approx(-1.0));
  CHECK(pw.upper == doctest::Approx(1.0));
}

TEST_CASE("nonvanishing check locates zeros") {
  CHECK(FactorFunction::linear(1).check_nonvanishing({0, 2}).ok);
  const auto bad = FactorFunction::linear(1).check_nonvanishing({-1, 2});
  CHECK_FALSE(bad.ok);
  REQUIRE(bad.witness.has_value());
  CHECK(*bad.witness == 0.0);
  CHECK_FALSE(FactorFunction::affine(1, -1).check_nonvanishing({0, 2}).ok);
  CHECK(FactorFunction::affine(1, -1).check_nonvanishing({1, 2}).ok);
  CHECK_FALSE(FactorFunction::power(1, 2).check_nonvanishing({-1, 2}).ok);
  CHECK(FactorFunction::exponential(1, 5).check_nonvanishing({-100, 100}).ok);
  REQUIRE(FactorFunction::affine(2, -1).zero().has_value());
  CHECK(*FactorFunction::affine(2, -1).zero() == 0.5);
  CHECK_FALSE(FactorFunction::constant(1).zero().has_value());
}

TEST_CASE("custom factors integrate and invert numerically") {
  factor_kind::Custom c;
  c.name = "cosh";
  c.value = [](double y) { return std::cosh(y); };
  c.derivative = [](double y) { return std::sinh(y); };
  const FactorFunction f = FactorFunction::custom(c, whole_line());
  CHECK(f.is_custom());
  CHECK_FALSE(f.has_closed_form_antiderivative());
  // int_0^y sech = 2 atan(tanh(y/2))
  for (double y : {-2.0, -0.3, 0.7, 3.0}) {
    const double exact = 2.0 * std::atan(std::tanh(0.5 * y));
    CHECK(f.reciprocal_antiderivative(y, 0) == doctest::Approx(exact).epsilon(1e-12));
    CHECK(f.invert_antiderivative(exact, 0) == doctest::Approx(y).epsilon(1e-10));
  }
  const auto check = f.check_nonvanishing({-3, 3});
  CHECK(check.ok);
  CHECK(check.heuristic);

  factor_kind::Custom sine;
  sine.name = "sin";
  sine.value = [](double y) { return std::sin(y); };
  sine.derivative = [](double y) { return std::cos(y); };
  CHECK_FALSE(FactorFunction::custom(sine, whole_line()).check_nonvanishing({1, 4}).ok);
}
