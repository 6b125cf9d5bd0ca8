#include <cmath>

#include "doctest.h"
#include "et/jet.hpp"

using namespace et;

TEST_CASE("jet arithmetic matches elementary Taylor expansions") {
  double t0 = 0.7;
  Jet t = Jet::variable(t0, 8);
  Jet f = sin(t) * cos(t);  // = sin(2t)/2
  for (int k = 0; k <= 8; ++k) {
    double expect = std::pow(2.0, k - 1) * std::sin(2 * t0 + k * M_PI / 2);
    CHECK(f.deriv(k) == doctest::Approx(expect).epsilon(1e-12));
  }
  Jet g = sinh(t) * sinh(t) - cosh(t) * cosh(t);
  for (int k = 0; k <= 8; ++k)
    CHECK(g.deriv(k) == doctest::Approx(k == 0 ? -1.0 : 0.0).epsilon(1e-12));
}

TEST_CASE("division, sqrt, cbrt and pow are consistent") {
  Jet t = Jet::variable(1.3, 7);
  Jet a = 2.0 + sin(t);
  CHECK(((a / a).deriv(3)) == doctest::Approx(0.0));
  Jet r = sqrt(a);
  Jet back = r * r - a;
  for (int k = 0; k <= 6; ++k)
    CHECK(back.deriv(k) == doctest::Approx(0.0).epsilon(1e-12));
  Jet c = cbrt(-1.0 * a);
  Jet back3 = c * c * c + a;
  for (int k = 0; k <= 6; ++k)
    CHECK(back3.deriv(k) == doctest::Approx(0.0).epsilon(1e-11));
  Jet p = pow(a, 2.5);
  Jet q = a * a * sqrt(a);
  for (int k = 0; k <= 6; ++k)
    CHECK(p.deriv(k) == doctest::Approx(q.deriv(k)).epsilon(1e-11));
  CHECK(exp(log(a)).deriv(4) == doctest::Approx(a.deriv(4)));
}

TEST_CASE("finite differences confirm jet derivatives") {
  auto f = [](double t) { return std::sin(3 * t) / (2 + std::cos(t)); };
  double t0 = 0.4, h = 1e-3;
  Jet t = Jet::variable(t0, 4);
  Jet j = sin(3.0 * t) / (2.0 + cos(t));
  double d1 = (f(t0 + h) - f(t0 - h)) / (2 * h);
  double d2 = (f(t0 + h) - 2 * f(t0) + f(t0 - h)) / (h * h);
  CHECK(j.deriv(1) == doctest::Approx(d1).epsilon(1e-5));
  CHECK(j.deriv(2) == doctest::Approx(d2).epsilon(1e-5));
}

TEST_CASE("zeta derivatives against a closed-form reparametrization") {
  // g(t) = (cos 2t, sin 2t, 0, 0, 0) with w(t) = 2 is g in the parameter
  // zeta = 2t: the k-th zeta derivative is the k-th derivative of
  // (cos u, sin u, ...) at u = 2 t0.
  double t0 = 0.3;
  Jet t = Jet::variable(t0, 8);
  Jet5 g{cos(2.0 * t), sin(2.0 * t), Jet(0, 8), Jet(0, 8), Jet(0, 8)};
  Jet w = Jet::constant(2.0, 8);
  auto z = zeta_derivatives(g, w, 3);
  double u = 2 * t0;
  CHECK(z[1][0].value() == doctest::Approx(-std::sin(u)));
  CHECK(z[1][1].value() == doctest::Approx(std::cos(u)));
  CHECK(z[2][0].value() == doctest::Approx(-std::cos(u)));
  CHECK(z[3][1].value() == doctest::Approx(-std::cos(u)));

  // Non-constant weight: w = 1 + t^2/2... use w(t) = cosh t so that
  // zeta = sinh t; g(t) = exp(sinh t) has all zeta-derivatives equal to g.
  Jet5 ge{exp(sinh(t)), Jet(0, 8), Jet(0, 8), Jet(0, 8), Jet(0, 8)};
  auto ze = zeta_derivatives(ge, cosh(t), 3);
  for (int k = 1; k <= 3; ++k)
    CHECK(ze[k][0].value() ==
          doctest::Approx(std::exp(std::sinh(t0))).epsilon(1e-12));

  CHECK_THROWS_AS(zeta_derivatives(ge, sin(Jet::variable(0.0, 8)), 2),
                  ZeroWeight);
}

TEST_CASE("reparametrize produces zeta-Taylor coefficients") {
  double t0 = 0.3;
  Jet t = Jet::variable(t0, 8);
  Jet5 ge{exp(sinh(t)), Jet(0, 8), Jet(0, 8), Jet(0, 8), Jet(0, 8)};
  Jet5 rep = reparametrize(ge, cosh(t));
  double v = std::exp(std::sinh(t0));
  for (int k = 0; k + 3 <= rep[0].order(); ++k)
    CHECK(rep[0].deriv(k) == doctest::Approx(v).epsilon(1e-10));
}

TEST_CASE("inner product of jet curves keeps full order") {
  Jet t = Jet::variable(0.2, 6);
  Jet5 a{t, sin(t), cos(t), t * t, exp(t)};
  Jet j = inner(a, a);
  CHECK(j.order() == 6);
  // <a,a> = -2 t e^t - sin^2 + cos^2 + t^4
  auto f = [](double s) {
    return -2 * s * std::exp(s) - std::sin(s) * std::sin(s) +
           std::cos(s) * std::cos(s) + s * s * s * s;
  };
  double h = 1e-3;
  double d2 = (f(0.2 + h) - 2 * f(0.2) + f(0.2 - h)) / (h * h);
  CHECK(j.deriv(2) == doctest::Approx(d2).epsilon(1e-5));
}
