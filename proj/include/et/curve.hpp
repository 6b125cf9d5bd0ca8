#pragma once
#include <array>
#include <memory>
#include <string>
#include <vector>

#include "et/jet.hpp"
#include "et/linalg.hpp"

namespace et {

// Small expression AST for user-defined curve coordinates.
struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  enum Kind { Const, Param, Add, Sub, Mul, Div, Neg, Sin, Cos, Sinh, Cosh, Sqrt };
  Kind kind = Const;
  double value = 0;
  ExprPtr a, b;

  Jet eval(const Jet& t) const;
  double eval(double t) const;
};

// Parses +, -, *, /, unary -, parentheses, numbers, the parameter symbol
// (s or t), and sin/cos/sinh/cosh/sqrt.  Throws BadSpec on malformed input.
ExprPtr parse_expression(const std::string& text);

enum class CurveFamily {
  biisotropic_circle,
  biisotropic_hyperbola,
  biisotropic_parabola,
  torus_knot,
  viviani_generator,
  trig_poly,
  expression,
  affine_ode,
};

struct TrigPolyCoord {
  double a0 = 0;
  std::vector<double> cos_c, sin_c;  // cos_c[k-1]*cos(k s) + sin_c[k-1]*sin(k s)
};

struct CurveSpec {
  std::string name;
  CurveFamily family = CurveFamily::biisotropic_circle;
  // torus_knot
  int m = 0, n = 0;
  double r = 0;
  // trig_poly / expression
  std::array<TrigPolyCoord, 5> trig{};
  std::array<std::string, 5> components{};
  bool normalize = false;
  BasisKind coords = BasisKind::lightcone;
  // affine_ode: gamma''' = h(s) gamma' in the plane, embedded as
  // E3 + x(E1-E2) + y E4; h is a polynomial in s.
  std::vector<double> h_coeffs;
  std::array<double, 6> initial{0, 0, 1, 0, 0, 1};  // x,y,x',y',x'',y'' at s=0
  // domain
  double dom_a = 0, dom_b = 6.283185307179586476925286766559;
  bool periodic = true;

  // JSON round trip; validates on load (throws BadSpec).
  static CurveSpec from_json_text(const std::string& text);
  std::string to_json_text() const;
  void validate() const;
};

// Evaluates a curve spec as exact truncated Taylor jets in the lightcone
// basis.  Thread-safe after construction.
class Curve {
 public:
  explicit Curve(CurveSpec spec);

  const CurveSpec& spec() const { return spec_; }
  double dom_a() const { return spec_.dom_a; }
  double dom_b() const { return spec_.dom_b; }
  bool periodic() const { return spec_.periodic; }

  Jet5 jet(double t, int order) const;
  Vec5 point(double t) const { return value(jet(t, 0)); }

 private:
  Jet5 raw_jet(double t, int order) const;
  void ode_state_jets(double t, const std::array<double, 6>& state, int order,
                      Jet& x, Jet& y) const;

  CurveSpec spec_;
  std::array<ExprPtr, 5> exprs_{};
  // Dense state cache for the affine_ode family.
  double ode_step_ = 0;
  std::vector<std::array<double, 6>> ode_states_;
};

CurveSpec circle_spec();
CurveSpec hyperbola_spec();
CurveSpec parabola_spec();
CurveSpec torus_knot_spec(int m, int n, double r);
CurveSpec viviani_generator_spec();
CurveSpec affine_ode_spec(std::vector<double> h_coeffs,
                          std::array<double, 6> initial = {0, 0, 1, 0, 0, 1},
                          double a = -2, double b = 2);

}  // namespace et
