#include "et/curve.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>

#include "json.hpp"

namespace et {

using nlohmann::json;

// ---------------------------------------------------------------- expressions

Jet Expr::eval(const Jet& t) const {
  switch (kind) {
    case Const: return Jet::constant(value, t.order());
    case Param: return t;
    case Add: return a->eval(t) + b->eval(t);
    case Sub: return a->eval(t) - b->eval(t);
    case Mul: return a->eval(t) * b->eval(t);
    case Div: return a->eval(t) / b->eval(t);
    case Neg: return -a->eval(t);
    case Sin: return et::sin(a->eval(t));
    case Cos: return et::cos(a->eval(t));
    case Sinh: return et::sinh(a->eval(t));
    case Cosh: return et::cosh(a->eval(t));
    case Sqrt: return et::sqrt(a->eval(t));
  }
  throw BadSpec("corrupt expression node");
}

double Expr::eval(double t) const { return eval(Jet::constant(t, 0)).value(); }

namespace {

struct Parser {
  const std::string& s;
  size_t i = 0;

  explicit Parser(const std::string& text) : s(text) {}

  void skip() {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  }
  bool eat(char c) {
    skip();
    if (i < s.size() && s[i] == c) {
      ++i;
      return true;
    }
    return false;
  }

  static ExprPtr node(Expr::Kind k, ExprPtr a = nullptr, ExprPtr b = nullptr,
                      double v = 0) {
    auto e = std::make_shared<Expr>();
    e->kind = k;
    e->a = std::move(a);
    e->b = std::move(b);
    e->value = v;
    return e;
  }

  ExprPtr parse() {
    ExprPtr e = sum();
    skip();
    if (i != s.size()) throw BadSpec("trailing input in expression: " + s);
    return e;
  }

  ExprPtr sum() {
    ExprPtr e = term();
    for (;;) {
      if (eat('+'))
        e = node(Expr::Add, e, term());
      else if (eat('-'))
        e = node(Expr::Sub, e, term());
      else
        return e;
    }
  }

  ExprPtr term() {
    ExprPtr e = factor();
    for (;;) {
      if (eat('*'))
        e = node(Expr::Mul, e, factor());
      else if (eat('/'))
        e = node(Expr::Div, e, factor());
      else
        return e;
    }
  }

  ExprPtr factor() {
    skip();
    if (eat('-')) return node(Expr::Neg, factor());
    if (eat('+')) return factor();
    return atom();
  }

  ExprPtr atom() {
    skip();
    if (i >= s.size()) throw BadSpec("unexpected end of expression: " + s);
    char c = s[i];
    if (c == '(') {
      ++i;
      ExprPtr e = sum();
      if (!eat(')')) throw BadSpec("missing ')' in expression: " + s);
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      size_t end;
      double v = std::stod(s.substr(i), &end);
      i += end;
      return node(Expr::Const, nullptr, nullptr, v);
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      size_t j = i;
      while (j < s.size() && std::isalpha(static_cast<unsigned char>(s[j]))) ++j;
      std::string word = s.substr(i, j - i);
      i = j;
      if (word == "s" || word == "t") return node(Expr::Param);
      if (word == "pi")
        return node(Expr::Const, nullptr, nullptr, 3.14159265358979323846);
      Expr::Kind k;
      if (word == "sin") k = Expr::Sin;
      else if (word == "cos") k = Expr::Cos;
      else if (word == "sinh") k = Expr::Sinh;
      else if (word == "cosh") k = Expr::Cosh;
      else if (word == "sqrt") k = Expr::Sqrt;
      else throw BadSpec("unknown symbol '" + word + "' in expression");
      if (!eat('(')) throw BadSpec("expected '(' after " + word);
      ExprPtr arg = sum();
      if (!eat(')')) throw BadSpec("missing ')' after " + word);
      return node(k, arg);
    }
    throw BadSpec("unexpected character in expression: " + s);
  }
};

const char* family_name(CurveFamily f) {
  switch (f) {
    case CurveFamily::biisotropic_circle: return "biisotropic_circle";
    case CurveFamily::biisotropic_hyperbola: return "biisotropic_hyperbola";
    case CurveFamily::biisotropic_parabola: return "biisotropic_parabola";
    case CurveFamily::torus_knot: return "torus_knot";
    case CurveFamily::viviani_generator: return "viviani_surface_generator";
    case CurveFamily::trig_poly: return "trig_poly";
    case CurveFamily::expression: return "custom_expression";
    case CurveFamily::affine_ode: return "affine_ode";
  }
  return "?";
}

CurveFamily family_from_name(const std::string& s) {
  for (auto f : {CurveFamily::biisotropic_circle, CurveFamily::biisotropic_hyperbola,
                 CurveFamily::biisotropic_parabola, CurveFamily::torus_knot,
                 CurveFamily::viviani_generator, CurveFamily::trig_poly,
                 CurveFamily::expression, CurveFamily::affine_ode})
    if (s == family_name(f)) return f;
  throw BadSpec("unknown curve family: " + s);
}

}  // namespace

ExprPtr parse_expression(const std::string& text) {
  Parser p(text);
  return p.parse();
}

// ------------------------------------------------------------------ CurveSpec

void CurveSpec::validate() const {
  if (!(dom_a < dom_b)) throw BadSpec("empty parameter domain");
  if (family == CurveFamily::torus_knot) {
    if (!(n > m && m > 0)) throw BadSpec("torus_knot needs n > m > 0");
    if (std::gcd(m, n) != 1) throw BadSpec("torus_knot needs gcd(m,n) = 1");
    if (!(r > 0 && r < 1)) throw BadSpec("torus_knot needs 0 < r < 1");
  }
  if (family == CurveFamily::expression)
    for (const auto& c : components)
      parse_expression(c.empty() ? "0" : c);
  if (family == CurveFamily::affine_ode && h_coeffs.empty())
    throw BadSpec("affine_ode needs polynomial coefficients");
  if (family == CurveFamily::affine_ode && (dom_a > 0 || dom_b < 0))
    throw BadSpec("affine_ode domain must contain the anchor point 0");
}

std::string CurveSpec::to_json_text() const {
  json j;
  j["name"] = name;
  j["family"] = family_name(family);
  j["domain"] = {dom_a, dom_b};
  j["periodic"] = periodic;
  if (family == CurveFamily::torus_knot) {
    j["m"] = m;
    j["n"] = n;
    j["r"] = r;
  }
  if (family == CurveFamily::trig_poly || family == CurveFamily::expression) {
    j["normalize"] = normalize;
    j["coordinates"] = coords == BasisKind::lightcone ? "lightcone"
                                                      : "pseudo_orthogonal";
  }
  if (family == CurveFamily::expression) j["components"] = components;
  if (family == CurveFamily::trig_poly) {
    json arr = json::array();
    for (const auto& c : trig)
      arr.push_back({{"a0", c.a0}, {"cos", c.cos_c}, {"sin", c.sin_c}});
    j["trig"] = arr;
  }
  if (family == CurveFamily::affine_ode) {
    j["h"] = h_coeffs;
    j["initial"] = initial;
  }
  return j.dump(2);
}

CurveSpec CurveSpec::from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    throw BadSpec(std::string("invalid JSON: ") + e.what());
  }
  CurveSpec s;
  try {
    s.name = j.value("name", "");
    s.family = family_from_name(j.at("family").get<std::string>());
    if (j.contains("domain")) {
      s.dom_a = j["domain"].at(0).get<double>();
      s.dom_b = j["domain"].at(1).get<double>();
    } else if (s.family == CurveFamily::biisotropic_hyperbola ||
               s.family == CurveFamily::biisotropic_parabola) {
      s.dom_a = -2;
      s.dom_b = 2;
      s.periodic = false;
    }
    s.periodic = j.value("periodic", s.periodic &&
                                          s.family != CurveFamily::affine_ode &&
                                          s.family != CurveFamily::biisotropic_hyperbola &&
                                          s.family != CurveFamily::biisotropic_parabola);
    if (s.family == CurveFamily::torus_knot) {
      s.m = j.at("m").get<int>();
      s.n = j.at("n").get<int>();
      s.r = j.at("r").get<double>();
    }
    s.normalize = j.value("normalize", s.family == CurveFamily::torus_knot);
    if (j.contains("coordinates"))
      s.coords = j["coordinates"] == "pseudo_orthogonal"
                     ? BasisKind::pseudo_orthogonal
                     : BasisKind::lightcone;
    if (s.family == CurveFamily::expression)
      for (int i = 0; i < 5; ++i)
        s.components[i] = j.at("components").at(i).get<std::string>();
    if (s.family == CurveFamily::trig_poly) {
      for (int i = 0; i < 5; ++i) {
        const auto& c = j.at("trig").at(i);
        s.trig[i].a0 = c.value("a0", 0.0);
        s.trig[i].cos_c = c.value("cos", std::vector<double>{});
        s.trig[i].sin_c = c.value("sin", std::vector<double>{});
      }
    }
    if (s.family == CurveFamily::affine_ode) {
      s.h_coeffs = j.at("h").get<std::vector<double>>();
      if (j.contains("initial"))
        for (int i = 0; i < 6; ++i) s.initial[i] = j["initial"].at(i).get<double>();
      s.periodic = false;
    }
  } catch (const BadSpec&) {
    throw;
  } catch (const std::exception& e) {
    throw BadSpec(std::string("malformed curve spec: ") + e.what());
  }
  s.validate();
  return s;
}

// ---------------------------------------------------------------------- Curve

namespace {

// Evaluates a polynomial (coefficients low-to-high) on a jet.
Jet poly_jet(const std::vector<double>& c, const Jet& t) {
  Jet r = Jet::constant(0.0, t.order());
  for (size_t k = c.size(); k-- > 0;) r = r * t + c[k];
  return r;
}

Jet5 p_to_e(const Jet5& p) {
  const Mat5& T = t_lp();
  Jet5 e;
  for (int i = 0; i < 5; ++i) {
    Jet acc = Jet::constant(0.0, p[0].order());
    for (int j = 0; j < 5; ++j)
      if (T(i, j) != 0.0) acc = acc + T(i, j) * p[j];
    e[i] = acc;
  }
  return e;
}

}  // namespace

Curve::Curve(CurveSpec spec) : spec_(std::move(spec)) {
  spec_.validate();
  if (spec_.family == CurveFamily::expression)
    for (int i = 0; i < 5; ++i)
      exprs_[i] = parse_expression(
          spec_.components[i].empty() ? "0" : spec_.components[i]);
  if (spec_.family == CurveFamily::affine_ode) {
    // Dense state table by high-order Taylor stepping; local expansions
    // later pick the nearest precomputed state.
    const double len = spec_.dom_b - spec_.dom_a;
    const int nsteps = std::max(1, static_cast<int>(std::ceil(len / 0.01)));
    ode_step_ = len / nsteps;
    ode_states_.resize(nsteps + 1);
    const int ord = 14;
    auto advance = [&](double s0, const std::array<double, 6>& st,
                       double dt) -> std::array<double, 6> {
      Jet x, y;
      ode_state_jets(s0, st, ord, x, y);
      auto eval_shift = [&](const Jet& f, int d) {
        double acc = 0;
        for (int i = d; i <= f.order(); ++i) {
          double fall = 1;
          for (int q = 0; q < d; ++q) fall *= (i - q);
          acc += f[i] * fall * std::pow(dt, i - d);
        }
        return acc;
      };
      return {eval_shift(x, 0), eval_shift(y, 0), eval_shift(x, 1),
              eval_shift(y, 1), eval_shift(x, 2), eval_shift(y, 2)};
    };
    // The initial state is given at s = 0; integrate outward to the grid.
    int i0 = static_cast<int>(
        std::clamp(std::round(-spec_.dom_a / ode_step_), 0.0,
                   static_cast<double>(nsteps)));
    double s_anchor = spec_.dom_a + i0 * ode_step_;
    ode_states_[i0] = advance(0.0, spec_.initial, s_anchor);
    for (int k = i0; k < nsteps; ++k)
      ode_states_[k + 1] =
          advance(spec_.dom_a + k * ode_step_, ode_states_[k], ode_step_);
    for (int k = i0; k > 0; --k)
      ode_states_[k - 1] =
          advance(spec_.dom_a + k * ode_step_, ode_states_[k], -ode_step_);
  }
}

// Taylor recursion for gamma''' = h(s) gamma' started from the given
// state (x,y,x',y',x'',y'') at t.
void Curve::ode_state_jets(double t, const std::array<double, 6>& st, int order,
                           Jet& x, Jet& y) const {
  Jet hs = poly_jet(spec_.h_coeffs, Jet::variable(t, order));
  x = Jet(0.0, order);
  y = Jet(0.0, order);
  x[0] = st[0];
  y[0] = st[1];
  if (order >= 1) {
    x[1] = st[2];
    y[1] = st[3];
  }
  if (order >= 2) {
    x[2] = st[4] / 2;
    y[2] = st[5] / 2;
  }
  for (int k = 0; k + 3 <= order; ++k) {
    double cx = 0, cy = 0;
    for (int i = 0; i <= k; ++i) {
      cx += hs[i] * (k - i + 1) * x[k - i + 1];
      cy += hs[i] * (k - i + 1) * y[k - i + 1];
    }
    double denom = double(k + 1) * (k + 2) * (k + 3);
    x[k + 3] = cx / denom;
    y[k + 3] = cy / denom;
  }
}

Jet5 Curve::raw_jet(double t, int order) const {
  Jet s = Jet::variable(t, order);
  Jet zero = Jet::constant(0.0, order);
  Jet one = Jet::constant(1.0, order);
  switch (spec_.family) {
    case CurveFamily::biisotropic_circle: {
      Jet c = cos(s), sn = sin(s);
      return Jet5{zero, c, -c, one, sn};
    }
    case CurveFamily::biisotropic_hyperbola: {
      Jet sh = sinh(s), ch = cosh(s);
      return Jet5{zero, sh, -sh, one, ch};
    }
    case CurveFamily::biisotropic_parabola: {
      return Jet5{zero, s, -s, one, s * s * 0.5};
    }
    case CurveFamily::torus_knot: {
      double m = spec_.m, n = spec_.n;
      Jet5 p{m * cos(n * s), m * sin(n * s), n * cos(m * s), n * sin(m * s),
             Jet::constant(n * spec_.r / std::sqrt(1 - spec_.r * spec_.r),
                           order)};
      return p_to_e(p);
    }
    case CurveFamily::viviani_generator: {
      Jet5 p{one, zero, 0.5 * (1 + cos(2 * s)), 0.5 * sin(2 * s), sin(s)};
      return p_to_e(p);
    }
    case CurveFamily::trig_poly: {
      Jet5 p;
      for (int i = 0; i < 5; ++i) {
        Jet acc = Jet::constant(spec_.trig[i].a0, order);
        const auto& tc = spec_.trig[i];
        for (size_t k = 0; k < tc.cos_c.size(); ++k)
          if (tc.cos_c[k] != 0) acc = acc + tc.cos_c[k] * cos(double(k + 1) * s);
        for (size_t k = 0; k < tc.sin_c.size(); ++k)
          if (tc.sin_c[k] != 0) acc = acc + tc.sin_c[k] * sin(double(k + 1) * s);
        p[i] = acc;
      }
      return spec_.coords == BasisKind::lightcone ? p : p_to_e(p);
    }
    case CurveFamily::expression: {
      Jet5 p;
      for (int i = 0; i < 5; ++i) p[i] = exprs_[i]->eval(s);
      return spec_.coords == BasisKind::lightcone ? p : p_to_e(p);
    }
    case CurveFamily::affine_ode: {
      if (t < spec_.dom_a - 1e-12 || t > spec_.dom_b + 1e-12)
        throw DomainError("parameter outside curve domain");
      // nearest cached state, then local Taylor re-expansion at t
      int k = static_cast<int>(std::lround((t - spec_.dom_a) / ode_step_));
      k = std::max(0, std::min<int>(k, static_cast<int>(ode_states_.size()) - 1));
      double tk = spec_.dom_a + k * ode_step_;
      double dt = t - tk;
      Jet xk, yk;
      ode_state_jets(tk, ode_states_[k], std::max(order + 8, 14), xk, yk);
      auto shift = [&](const Jet& f, int d) {
        double acc = 0;
        for (int i = d; i <= f.order(); ++i) {
          double fall = 1;
          for (int q = 0; q < d; ++q) fall *= (i - q);
          acc += f[i] * fall * std::pow(dt, i - d);
        }
        return acc;
      };
      std::array<double, 6> st{shift(xk, 0), shift(yk, 0), shift(xk, 1),
                               shift(yk, 1), shift(xk, 2), shift(yk, 2)};
      Jet x, y;
      ode_state_jets(t, st, order, x, y);
      // Gamma = E3 + x (E1 - E2) + y E4
      return Jet5{zero, x, -x, one, y};
    }
  }
  throw BadSpec("corrupt curve family");
}

Jet5 Curve::jet(double t, int order) const {
  Jet5 g = raw_jet(t, order);
  if (spec_.normalize) {
    Jet q = inner(g, g);
    if (q.value() <= 0)
      throw DomainError("normalization of non-spacelike curve point");
    Jet inv = 1.0 / sqrt(q);
    for (int i = 0; i < 5; ++i) g[i] = g[i] * inv;
  }
  return g;
}

// ---------------------------------------------------------------- factories

CurveSpec circle_spec() {
  CurveSpec s;
  s.name = "biisotropic_circle";
  s.family = CurveFamily::biisotropic_circle;
  return s;
}

CurveSpec hyperbola_spec() {
  CurveSpec s;
  s.name = "biisotropic_hyperbola";
  s.family = CurveFamily::biisotropic_hyperbola;
  s.dom_a = -2;
  s.dom_b = 2;
  s.periodic = false;
  return s;
}

CurveSpec parabola_spec() {
  CurveSpec s;
  s.name = "biisotropic_parabola";
  s.family = CurveFamily::biisotropic_parabola;
  s.dom_a = -2;
  s.dom_b = 2;
  s.periodic = false;
  return s;
}

CurveSpec torus_knot_spec(int m, int n, double r) {
  CurveSpec s;
  s.name = "torus_knot_" + std::to_string(m) + "_" + std::to_string(n);
  s.family = CurveFamily::torus_knot;
  s.m = m;
  s.n = n;
  s.r = r;
  s.normalize = true;
  return s;
}

CurveSpec viviani_generator_spec() {
  CurveSpec s;
  s.name = "viviani_generator";
  s.family = CurveFamily::viviani_generator;
  return s;
}

CurveSpec affine_ode_spec(std::vector<double> h_coeffs,
                          std::array<double, 6> initial, double a, double b) {
  CurveSpec s;
  s.name = "affine_ode";
  s.family = CurveFamily::affine_ode;
  s.h_coeffs = std::move(h_coeffs);
  s.initial = initial;
  s.dom_a = a;
  s.dom_b = b;
  s.periodic = false;
  return s;
}

}  // namespace et
