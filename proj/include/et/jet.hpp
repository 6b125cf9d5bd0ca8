#pragma once
#include <array>
#include <cmath>
#include <vector>

#include "et/errors.hpp"
#include "et/linalg.hpp"

namespace et {

// Truncated Taylor series in one variable.  c[k] is the k-th Taylor
// coefficient, i.e. f^(k)(t0)/k!.  Binary operations truncate to the
// shorter operand.
class Jet {
 public:
  Jet() : c_(1, 0.0) {}
  explicit Jet(std::vector<double> c) : c_(std::move(c)) {
    if (c_.empty()) c_.assign(1, 0.0);
  }
  Jet(double value, int order) : c_(order + 1, 0.0) { c_[0] = value; }

  // The identity jet t -> t expanded at t0.
  static Jet variable(double t0, int order) {
    Jet j(t0, order);
    if (order >= 1) j.c_[1] = 1.0;
    return j;
  }
  static Jet constant(double v, int order) { return Jet(v, order); }

  int order() const { return static_cast<int>(c_.size()) - 1; }
  double value() const { return c_[0]; }
  double operator[](int k) const { return c_[k]; }
  double& operator[](int k) { return c_[k]; }
  // k-th derivative value (k! * c[k]); 0 beyond the truncation order.
  double deriv(int k) const;

  Jet truncated(int order) const;

 private:
  std::vector<double> c_;
};

Jet operator+(const Jet& a, const Jet& b);
Jet operator-(const Jet& a, const Jet& b);
Jet operator*(const Jet& a, const Jet& b);
Jet operator/(const Jet& a, const Jet& b);  // throws DomainError if b(0)=0
Jet operator-(const Jet& a);
Jet operator+(const Jet& a, double s);
Jet operator+(double s, const Jet& a);
Jet operator-(const Jet& a, double s);
Jet operator-(double s, const Jet& a);
Jet operator*(const Jet& a, double s);
Jet operator*(double s, const Jet& a);
Jet operator/(const Jet& a, double s);
Jet operator/(double s, const Jet& a);

// d/dt; drops the truncation order by one.
Jet differentiate(const Jet& a);

Jet sin(const Jet& a);
Jet cos(const Jet& a);
Jet sinh(const Jet& a);
Jet cosh(const Jet& a);
Jet exp(const Jet& a);
Jet log(const Jet& a);           // a(0) > 0
Jet sqrt(const Jet& a);          // a(0) > 0
Jet pow(const Jet& a, double p); // a(0) > 0
Jet cbrt(const Jet& a);          // a(0) != 0 (odd root, sign preserved)

// Curve jet: five coordinate jets in the lightcone basis.
using Jet5 = std::array<Jet, 5>;

Jet5 operator+(const Jet5& a, const Jet5& b);
Jet5 operator-(const Jet5& a, const Jet5& b);
Jet5 operator*(const Jet& s, const Jet5& a);
Jet5 operator*(double s, const Jet5& a);

Jet inner(const Jet5& a, const Jet5& b);
Jet5 differentiate(const Jet5& a);
Vec5 value(const Jet5& a);
Vec5 deriv(const Jet5& a, int k);
Jet5 constant5(const Vec5& v, int order);

// Derivatives with respect to the parameter zeta defined by d zeta = w dt:
// each step is (d/dt) / w.  Returns [g, g', g'', ...] (count+1 entries),
// each still a jet in t with decreasing order.  Throws ZeroWeight if
// w(0) = 0.
std::vector<Jet5> zeta_derivatives(const Jet5& g, const Jet& w, int count);

// The zeta-Taylor coefficients at the base point assembled into one jet:
// coefficient k is the k-th zeta-derivative value / k!.
Jet5 reparametrize(const Jet5& g, const Jet& w);

}  // namespace et
