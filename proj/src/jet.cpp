#include "et/jet.hpp"

#include <algorithm>

namespace et {

namespace {
int min_order(const Jet& a, const Jet& b) {
  return std::min(a.order(), b.order());
}
}  // namespace

double Jet::deriv(int k) const {
  if (k > order()) return 0.0;
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return c_[k] * f;
}

Jet Jet::truncated(int order) const {
  std::vector<double> c(c_.begin(), c_.begin() + std::min<int>(order + 1, c_.size()));
  c.resize(order + 1, 0.0);
  return Jet(std::move(c));
}

Jet operator+(const Jet& a, const Jet& b) {
  int n = min_order(a, b);
  Jet r(0.0, n);
  for (int k = 0; k <= n; ++k) r[k] = a[k] + b[k];
  return r;
}

Jet operator-(const Jet& a, const Jet& b) {
  int n = min_order(a, b);
  Jet r(0.0, n);
  for (int k = 0; k <= n; ++k) r[k] = a[k] - b[k];
  return r;
}

Jet operator*(const Jet& a, const Jet& b) {
  int n = min_order(a, b);
  Jet r(0.0, n);
  for (int k = 0; k <= n; ++k) {
    double s = 0;
    for (int j = 0; j <= k; ++j) s += a[j] * b[k - j];
    r[k] = s;
  }
  return r;
}

Jet operator/(const Jet& a, const Jet& b) {
  if (b.value() == 0.0) throw DomainError("jet division by zero value");
  int n = min_order(a, b);
  Jet r(0.0, n);
  for (int k = 0; k <= n; ++k) {
    double s = a[k];
    for (int j = 0; j < k; ++j) s -= r[j] * b[k - j];
    r[k] = s / b[0];
  }
  return r;
}

Jet operator-(const Jet& a) {
  Jet r(0.0, a.order());
  for (int k = 0; k <= a.order(); ++k) r[k] = -a[k];
  return r;
}

Jet operator+(const Jet& a, double s) {
  Jet r = a;
  r[0] += s;
  return r;
}
Jet operator+(double s, const Jet& a) { return a + s; }
Jet operator-(const Jet& a, double s) { return a + (-s); }
Jet operator-(double s, const Jet& a) { return (-a) + s; }
Jet operator*(const Jet& a, double s) {
  Jet r(0.0, a.order());
  for (int k = 0; k <= a.order(); ++k) r[k] = a[k] * s;
  return r;
}
Jet operator*(double s, const Jet& a) { return a * s; }
Jet operator/(const Jet& a, double s) {
  if (s == 0.0) throw DomainError("jet division by zero");
  return a * (1.0 / s);
}
Jet operator/(double s, const Jet& a) {
  return Jet::constant(s, a.order()) / a;
}

Jet differentiate(const Jet& a) {
  int n = std::max(a.order() - 1, 0);
  Jet r(0.0, n);
  for (int k = 0; k <= n; ++k) r[k] = a[k + 1] * (k + 1);
  if (a.order() == 0) r[0] = 0.0;
  return r;
}

// sin/cos computed jointly by the usual recurrence
//   k s_k = sum_{j=1..k} j u_j c_{k-j},  k c_k = -sum_{j=1..k} j u_j s_{k-j}.
static void sincos(const Jet& u, Jet& s, Jet& c, bool hyperbolic) {
  int n = u.order();
  s = Jet(0.0, n);
  c = Jet(0.0, n);
  if (hyperbolic) {
    s[0] = std::sinh(u.value());
    c[0] = std::cosh(u.value());
  } else {
    s[0] = std::sin(u.value());
    c[0] = std::cos(u.value());
  }
  double sign = hyperbolic ? 1.0 : -1.0;
  for (int k = 1; k <= n; ++k) {
    double as = 0, ac = 0;
    for (int j = 1; j <= k; ++j) {
      as += j * u[j] * c[k - j];
      ac += j * u[j] * s[k - j];
    }
    s[k] = as / k;
    c[k] = sign * ac / k;
  }
}

Jet sin(const Jet& a) {
  Jet s, c;
  sincos(a, s, c, false);
  return s;
}
Jet cos(const Jet& a) {
  Jet s, c;
  sincos(a, s, c, false);
  return c;
}
Jet sinh(const Jet& a) {
  Jet s, c;
  sincos(a, s, c, true);
  return s;
}
Jet cosh(const Jet& a) {
  Jet s, c;
  sincos(a, s, c, true);
  return c;
}

Jet exp(const Jet& a) {
  int n = a.order();
  Jet r(0.0, n);
  r[0] = std::exp(a.value());
  for (int k = 1; k <= n; ++k) {
    double s = 0;
    for (int j = 1; j <= k; ++j) s += j * a[j] * r[k - j];
    r[k] = s / k;
  }
  return r;
}

Jet log(const Jet& a) {
  if (a.value() <= 0.0) throw DomainError("jet log of non-positive value");
  int n = a.order();
  Jet r(0.0, n);
  r[0] = std::log(a.value());
  for (int k = 1; k <= n; ++k) {
    double s = k * a[k];
    for (int j = 1; j < k; ++j) s -= j * r[j] * a[k - j];
    r[k] = s / (k * a[0]);
  }
  return r;
}

Jet pow(const Jet& a, double p) {
  if (a.value() <= 0.0) throw DomainError("jet pow of non-positive value");
  int n = a.order();
  Jet r(0.0, n);
  r[0] = std::pow(a.value(), p);
  // k a_0 r_k = sum_{j=1..k} (p j - (k - j)) a_j r_{k-j}
  for (int k = 1; k <= n; ++k) {
    double s = 0;
    for (int j = 1; j <= k; ++j) s += (p * j - (k - j)) * a[j] * r[k - j];
    r[k] = s / (k * a[0]);
  }
  return r;
}

Jet sqrt(const Jet& a) { return pow(a, 0.5); }

Jet cbrt(const Jet& a) {
  double v = a.value();
  if (v == 0.0) throw DomainError("jet cbrt at zero value");
  if (v > 0) return pow(a, 1.0 / 3.0);
  return -pow(-a, 1.0 / 3.0);
}

Jet5 operator+(const Jet5& a, const Jet5& b) {
  Jet5 r;
  for (int i = 0; i < 5; ++i) r[i] = a[i] + b[i];
  return r;
}
Jet5 operator-(const Jet5& a, const Jet5& b) {
  Jet5 r;
  for (int i = 0; i < 5; ++i) r[i] = a[i] - b[i];
  return r;
}
Jet5 operator*(const Jet& s, const Jet5& a) {
  Jet5 r;
  for (int i = 0; i < 5; ++i) r[i] = s * a[i];
  return r;
}
Jet5 operator*(double s, const Jet5& a) {
  Jet5 r;
  for (int i = 0; i < 5; ++i) r[i] = a[i] * s;
  return r;
}

Jet inner(const Jet5& a, const Jet5& b) {
  Jet r = -(a[0] * b[4] + a[4] * b[0]) - a[1] * b[1];
  return r + a[2] * b[2] + a[3] * b[3];
}

Jet5 differentiate(const Jet5& a) {
  Jet5 r;
  for (int i = 0; i < 5; ++i) r[i] = differentiate(a[i]);
  return r;
}

Vec5 value(const Jet5& a) {
  Vec5 v;
  for (int i = 0; i < 5; ++i) v[i] = a[i].value();
  return v;
}

Vec5 deriv(const Jet5& a, int k) {
  Vec5 v;
  for (int i = 0; i < 5; ++i) v[i] = a[i].deriv(k);
  return v;
}

Jet5 constant5(const Vec5& v, int order) {
  Jet5 r;
  for (int i = 0; i < 5; ++i) r[i] = Jet::constant(v[i], order);
  return r;
}

std::vector<Jet5> zeta_derivatives(const Jet5& g, const Jet& w, int count) {
  if (w.value() == 0.0) throw ZeroWeight("weight vanishes at base point");
  std::vector<Jet5> out;
  out.reserve(count + 1);
  out.push_back(g);
  Jet5 cur = g;
  for (int k = 0; k < count; ++k) {
    Jet5 d = differentiate(cur);
    Jet wt = w.truncated(d[0].order());
    for (int i = 0; i < 5; ++i) d[i] = d[i] / wt;
    out.push_back(d);
    cur = d;
  }
  return out;
}

Jet5 reparametrize(const Jet5& g, const Jet& w) {
  int n = g[0].order();
  auto ds = zeta_derivatives(g, w, n);
  Jet5 r;
  for (int i = 0; i < 5; ++i) r[i] = Jet(0.0, n);
  double fact = 1.0;
  for (int k = 0; k <= n; ++k) {
    if (k >= 2) fact *= k;
    for (int i = 0; i < 5; ++i) r[i][k] = ds[k][i].value() / fact;
  }
  return r;
}

}  // namespace et
