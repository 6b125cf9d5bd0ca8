#include "et/null_curves.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "et/errors.hpp"

namespace et {

namespace {

// Successive zeta-derivatives of a scalar t-jet, zeta = w dt.
std::vector<Jet> zeta_scalar(const Jet& f, const Jet& w, int count) {
  std::vector<Jet> out;
  out.reserve(count + 1);
  out.push_back(f);
  for (int k = 0; k < count; ++k) {
    Jet d = differentiate(out.back());
    out.push_back(d / w.truncated(d.order()));
  }
  return out;
}

Jet dot5(const Eigen::Matrix<double, 1, 5>& row, const Jet5& g) {
  Jet r = row(0) * g[0];
  for (int i = 1; i < 5; ++i) r = r + row(i) * g[i];
  return r;
}

double rel_null(const Vec5& v) {
  return std::abs(inner(v, v)) / std::max(1.0, v.squaredNorm());
}

}  // namespace

const char* to_string(NullCurveClass c) {
  switch (c) {
    case NullCurveClass::Biisotropic: return "Biisotropic";
    case NullCurveClass::GenericNegativeType: return "GenericNegativeType";
    case NullCurveClass::GenericPositiveType: return "GenericPositiveType";
    case NullCurveClass::NotNull: return "NotNull";
    case NullCurveClass::TypeChanging: return "TypeChanging";
  }
  return "?";
}

NullCurveClass classify_null_curve(const Curve& curve, int samples,
                                   double tol) {
  samples = std::max(samples, 8);
  const double a = curve.dom_a(), b = curve.dom_b();
  bool any_pos = false, any_neg = false, any_zero = false;
  for (int i = 0; i < samples; ++i) {
    double t = a + (b - a) * (i + 0.5) / samples;
    Jet5 g = curve.jet(t, 2);
    Vec5 gd, gdd;
    for (int k = 0; k < 5; ++k) {
      gd[k] = g[k].deriv(1);
      gdd[k] = g[k].deriv(2);
    }
    if (rel_null(gd) > tol) return NullCurveClass::NotNull;
    double q = inner(gdd, gdd) / std::max(1.0, gdd.squaredNorm());
    if (q < -tol)
      any_neg = true;  // negative type: <Gamma'',Gamma''> < 0 (eta = +1)
    else if (q > tol)
      any_pos = true;
    else
      any_zero = true;
  }
  if (any_zero && !any_pos && !any_neg) return NullCurveClass::Biisotropic;
  if (any_neg && !any_pos && !any_zero)
    return NullCurveClass::GenericNegativeType;
  if (any_pos && !any_neg && !any_zero)
    return NullCurveClass::GenericPositiveType;
  return NullCurveClass::TypeChanging;
}

// ---------------------------------------------------------------------------
// BiisotropicAnalysis

BiisotropicAnalysis::BiisotropicAnalysis(std::shared_ptr<const Curve> curve,
                                         double t0, double zeta_scale)
    : curve_(std::move(curve)), t0_(t0), scale_(zeta_scale) {
  if (scale_ <= 0) throw DomainError("zeta_scale must be positive");
  Jet5 g = curve_->jet(t0_, 2);
  for (int k = 0; k < 5; ++k) {
    v1_[k] = g[k].deriv(1);
    v2_[k] = g[k].deriv(2);
  }
  if (rel_null(v1_) > 1e-7) throw NotNull("curve is not null at base point");
  double s2 = std::max(1.0, v2_.squaredNorm());
  if (std::abs(inner(v2_, v2_)) / s2 > 1e-7 ||
      std::abs(inner(v1_, v2_)) / s2 > 1e-7)
    throw NotBiisotropic("osculating plane is not totally isotropic");
  Eigen::Matrix<double, 5, 2> m;
  m.col(0) = v1_;
  m.col(1) = v2_;
  Eigen::Matrix2d mtm = m.transpose() * m;
  if (std::abs(mtm.determinant()) < 1e-12 * s2)
    throw DegenerateInput("degenerate osculating plane");
  plane_coords_ = mtm.inverse() * m.transpose();
  build_frame();
}

Jet BiisotropicAnalysis::weight_jet(double t, int order) const {
  Jet5 g = curve_->jet(t, order + 2);
  Jet5 gd = differentiate(g);
  Jet5 gdd = differentiate(gd);
  Jet a1 = dot5(plane_coords_.row(0), gd);
  Jet a2 = dot5(plane_coords_.row(1), gd);
  Jet b1 = dot5(plane_coords_.row(0), gdd);
  Jet b2 = dot5(plane_coords_.row(1), gdd);
  Jet wcube = double(o_) * (a1 * b2 - a2 * b1);
  return scale_ * cbrt(wcube);
}

void BiisotropicAnalysis::build_frame() {
  const double eps = 1e-9;
  sdir_ = -1;  // forced by the affine normalization x'y'' - x''y' = 1
  for (int o : {1, -1}) {
    o_ = o;
    // zeta-derivatives of Gamma at t0 with this orientation.
    Jet5 g = curve_->jet(t0_, 5);
    Jet w = weight_jet(t0_, 4);
    std::vector<Jet5> z = zeta_derivatives(g, w, 2);
    Vec5 c3 = value(z[0]);
    Vec5 c4 = value(z[1]);
    Vec5 d = sdir_ * value(z[2]);

    Eigen::Matrix<double, 3, 5> a;
    a.row(0) = (metric_lightcone() * c3).transpose();
    a.row(1) = (metric_lightcone() * c4).transpose();
    a.row(2) = (metric_lightcone() * d).transpose();
    Eigen::Vector3d rhs(0, -1, 0);
    Vec5 a0 = a.completeOrthogonalDecomposition().solve(rhs);
    Vec5 c0 = a0 + 0.5 * inner(a0, a0) * c4;
    if (std::abs(inner(c0, c0)) > 1e-8 || std::abs(inner(c0, c4) + 1) > 1e-8)
      continue;

    Eigen::Matrix<double, 4, 5> a2;
    a2.row(0) = (metric_lightcone() * c0).transpose();
    a2.row(1) = (metric_lightcone() * c3).transpose();
    a2.row(2) = (metric_lightcone() * c4).transpose();
    a2.row(3) = (metric_lightcone() * d).transpose();
    Eigen::Vector4d rhs2(0, 0, 0, -2);
    Vec5 b0 = a2.completeOrthogonalDecomposition().solve(rhs2);
    Eigen::FullPivLU<Eigen::Matrix<double, 4, 5>> lu(a2);
    lu.setThreshold(1e-9);
    auto ker = lu.kernel();
    if (ker.cols() != 1) continue;
    Vec5 n = ker.col(0).normalized();

    double q0 = inner(b0, b0), q1 = inner(b0, n), q2 = inner(n, n);
    std::vector<double> taus;
    if (std::abs(q2) > eps) {
      double disc = q1 * q1 - q0 * q2;
      if (disc >= 0) {
        taus.push_back((-q1 + std::sqrt(disc)) / q2);
        taus.push_back((-q1 - std::sqrt(disc)) / q2);
      }
    } else if (std::abs(q1) > eps) {
      taus.push_back(-q0 / (2 * q1));
    }
    for (double tau : taus) {
      Vec5 s = b0 + tau * n;
      Frame23 f;
      f.kind = BasisKind::lightcone;
      f.cols.col(0) = c0;
      f.cols.col(1) = (s + d) / 2;
      f.cols.col(2) = (s - d) / 2;
      f.cols.col(3) = c3;
      f.cols.col(4) = c4;
      FrameValidation fv = validate_frame(f);
      if (!fv.pass) continue;
      frame_ = f;
      c0_ = c0;
      c1_ = f.cols.col(1);
      c2_ = f.cols.col(2);
      c3_ = c3;
      c4_ = c4;
      d_ = d;
      Eigen::Matrix<double, 5, 2> m;
      m.col(0) = d;
      m.col(1) = c4;
      red_coords_ = (m.transpose() * m).inverse() * m.transpose();
      return;
    }
  }
  throw CalibrationFailure("no calibrated lightcone frame found");
}

BiisotropicAnalysis::Sample BiisotropicAnalysis::sample(double t,
                                                        int order) const {
  Sample out;
  out.t = t;
  Jet5 g = curve_->jet(t, order + 3);
  out.w = weight_jet(t, order + 2);
  out.zeta = zeta_derivatives(g, out.w, 3);

  // Drift of the osculating plane from its value at t0.
  Jet5 gd = differentiate(g), gdd = differentiate(gd);
  Vec5 gdv = value(gd), gddv = value(gdd);
  Eigen::Matrix<double, 5, 2> m;
  m.col(0) = v1_;
  m.col(1) = v2_;
  double pr = (gdv - m * (plane_coords_ * gdv)).norm() /
              std::max(1.0, gdv.norm());
  pr = std::max(pr, (gddv - m * (plane_coords_ * gddv)).norm() /
                        std::max(1.0, gddv.norm()));

  // Affine curvature h = dA(Gamma''', Gamma''), with dA(Gamma',Gamma'') = 1.
  const double s3 = scale_ * scale_ * scale_;
  Jet a1 = dot5(plane_coords_.row(0), out.zeta[3]);
  Jet a2 = dot5(plane_coords_.row(1), out.zeta[3]);
  Jet b1 = dot5(plane_coords_.row(0), out.zeta[2]);
  Jet b2 = dot5(plane_coords_.row(1), out.zeta[2]);
  out.h_jet = double(o_) * s3 * (a1 * b2 - a2 * b1);
  out.h = out.h_jet.value();

  // Affine reduction Gamma = C3 + x D + y C4.
  Jet5 rel = g;
  for (int k = 0; k < 5; ++k) rel[k] = g[k] - Jet(c3_[k], g[k].order());
  out.x_jet = dot5(red_coords_.row(0), rel);
  out.y_jet = dot5(red_coords_.row(1), rel);
  Vec5 relv = value(rel);
  pr = std::max(pr, (relv - out.x_jet.value() * d_ - out.y_jet.value() * c4_)
                            .norm() /
                        std::max(1.0, relv.norm()));
  out.plane_residual = pr;

  std::vector<Jet> xz = zeta_scalar(out.x_jet, out.w, 2);
  std::vector<Jet> yz = zeta_scalar(out.y_jet, out.w, 2);
  Jet xp = xz[1], yp = yz[1];
  out.x = out.x_jet.value();
  out.y = out.y_jet.value();
  out.xp = xp.value();
  out.yp = yp.value();
  Jet ups2 = xp * xp + yp * yp;
  Jet mu = out.x_jet * yp - xp * out.y_jet;
  out.upsilon = std::sqrt(ups2.value());
  out.mu = mu.value();
  Jet diag = out.x_jet * xp - out.y_jet * yp;
  out.Q_jet = (mu * mu + diag * diag) / (ups2 * ups2);
  out.Q = out.Q_jet.value();

  // Isotropic normal
  // R = -x' C0 + y'/2 (C1+C2) + (mu^2/(2 ups^2)) y' (C1-C2) + mu C3
  //     - (mu^2/(2 ups^2)) x' C4.
  Jet q = (mu * mu) / (2.0 * ups2);
  int n = std::min({xp.order(), q.order()});
  for (int k = 0; k < 5; ++k) {
    Jet r = (-1.0 * xp) * c0_[k] + (0.5 * yp) * (c1_[k] + c2_[k]) +
            q * yp * (c1_[k] - c2_[k]) + mu * c3_[k] +
            (-1.0 * q) * xp * c4_[k];
    out.R_jet[k] = r.truncated(n);
  }
  out.R = value(out.R_jet);
  Jet5 rd = differentiate(out.R_jet);
  for (int k = 0; k < 5; ++k) out.Rp[k] = rd[k].value() / out.w.value();
  out.rp2 = inner(out.Rp, out.Rp);
  return out;
}

namespace {
// Adaptive Simpson quadrature.
double simpson(const std::function<double(double)>& f, double a, double fa,
               double b, double fb, double fm, double tol, int depth) {
  double m = (a + b) / 2;
  double lm = (a + m) / 2, rm = (m + b) / 2;
  double flm = f(lm), frm = f(rm);
  double whole = (b - a) / 6 * (fa + 4 * fm + fb);
  double left = (m - a) / 6 * (fa + 4 * flm + fm);
  double right = (b - m) / 6 * (fm + 4 * frm + fb);
  double delta = left + right - whole;
  if (depth <= 0) throw QuadratureFailure("adaptive quadrature stalled");
  if (std::abs(delta) <= 15 * tol) return left + right + delta / 15;
  return simpson(f, a, fa, m, fm, flm, tol / 2, depth - 1) +
         simpson(f, m, fm, b, fb, frm, tol / 2, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol) {
  if (a == b) return 0;
  double fa = f(a), fb = f(b), fm = f((a + b) / 2);
  return simpson(f, a, fa, b, fb, fm, tol, 48);
}
}  // namespace

double BiisotropicAnalysis::affine_length(double a, double b) const {
  auto f = [&](double t) { return std::abs(weight_jet(t, 0).value()); };
  return integrate(f, a, b, 1e-12);
}

double BiisotropicAnalysis::arclength_from(double t_ref, double t) const {
  auto f = [&](double u) { return weight_jet(u, 0).value(); };
  return integrate(f, t_ref, t, 1e-12);
}

double BiisotropicAnalysis::parameter_at_arclength(double t_ref,
                                                   double s) const {
  double w0 = weight_jet(t_ref, 0).value();
  double t = t_ref + s / w0;
  for (int it = 0; it < 60; ++it) {
    double r = arclength_from(t_ref, t) - s;
    double w = weight_jet(t, 0).value();
    double step = r / w;
    t -= step;
    if (std::abs(step) < 1e-14 * (1 + std::abs(t))) break;
  }
  return t;
}

// ---------------------------------------------------------------------------
// GenericAnalysis

Mat5 fls_matrix(int eta, double kl, double kr) {
  Mat5 k = Mat5::Zero();
  double e = eta;
  k(0, 1) = -e / 2 + kr;
  k(0, 2) = e / 2 + kr;
  k(1, 0) = 0.5 - kl;
  k(1, 3) = 1;
  k(1, 4) = e / 2 - kr;
  k(2, 0) = 0.5 + kl;
  k(2, 3) = -1;
  k(2, 4) = e / 2 + kr;
  k(3, 1) = 1;
  k(3, 2) = 1;
  k(4, 1) = -0.5 + kl;
  k(4, 2) = 0.5 + kl;
  return k;
}

GenericAnalysis::GenericAnalysis(std::shared_ptr<const Curve> curve)
    : curve_(std::move(curve)) {
  double tm = 0.5 * (curve_->dom_a() + curve_->dom_b());
  Jet5 g = curve_->jet(tm, 2);
  Vec5 gd, gdd;
  for (int k = 0; k < 5; ++k) {
    gd[k] = g[k].deriv(1);
    gdd[k] = g[k].deriv(2);
  }
  if (rel_null(gd) > 1e-7) throw NotNull("curve is not null");
  double q = inner(gdd, gdd);
  if (std::abs(q) < 1e-9 * std::max(1.0, gdd.squaredNorm()))
    throw NotGeneric("curve is biisotropic at probe point");
  eta_ = q > 0 ? -1 : 1;

  // Canonical sign of the line element: C_rho ^ Gamma' must be future.
  for (int sg : {1, -1}) {
    sigma_ = sg;
    Sample s;
    frame_core(tm, s, false);
    if (is_future_null_bivector(s.c_rho, value(s.zeta[1]))) return;
  }
  throw NotGeneric("no canonical orientation of the line element");
}

double GenericAnalysis::weight(double t) const {
  Jet5 g = curve_->jet(t, 2);
  Vec5 gdd;
  for (int k = 0; k < 5; ++k) gdd[k] = g[k].deriv(2);
  return sigma_ * std::pow(std::abs(inner(gdd, gdd)) / 2, 0.25);
}

void GenericAnalysis::frame_core(double t, Sample& out, bool need_jets) const {
  out.t = t;
  int order = need_jets ? 7 : 4;
  Jet5 g = curve_->jet(t, order);
  Jet5 gdd = differentiate(differentiate(g));
  Jet q2 = inner(gdd, gdd);
  if (-eta_ * q2.value() <= 0)
    throw NotGeneric("type sign changed along the curve");
  out.w = double(sigma_) * pow(-double(eta_) * 0.5 * q2, 0.25);
  out.zeta = zeta_derivatives(g, out.w, 3);
  Vec5 z0 = value(out.zeta[0]), z1 = value(out.zeta[1]),
       z2 = value(out.zeta[2]), z3 = value(out.zeta[3]);

  Eigen::MatrixXd comp = orthogonal_complement({z0, z1, z3});
  if (comp.cols() != 2)
    throw DegenerateComplement("complement of the osculating space");
  Vec5 u = comp.col(0).normalized(), v = comp.col(1).normalized();
  double g11 = inner(u, u), g12 = inner(u, v), g22 = inner(v, v);
  Vec5 n1, n2;
  const double eps = 1e-10;
  if (std::abs(g11) >= std::abs(g22) && std::abs(g11) > eps) {
    double disc = g12 * g12 - g11 * g22;
    if (disc <= 0) throw DegenerateComplement("complement is not of type (1,1)");
    double rt = std::sqrt(disc);
    n1 = ((-g12 + rt) / g11) * u + v;
    n2 = ((-g12 - rt) / g11) * u + v;
  } else if (std::abs(g22) > eps) {
    double disc = g12 * g12 - g11 * g22;
    if (disc <= 0) throw DegenerateComplement("complement is not of type (1,1)");
    double rt = std::sqrt(disc);
    n1 = u + ((-g12 + rt) / g22) * v;
    n2 = u + ((-g12 - rt) / g22) * v;
  } else {
    n1 = u;
    n2 = v;
  }
  n1.normalize();
  n2.normalize();
  double p = inner(n1, n2);
  if (std::abs(p) < eps)
    throw DegenerateComplement("null directions are not transverse");

  // Right-handed member of the pair.
  Vec5 dual1 = -n2 / p;
  Vec5 vlam, vrho;
  if (-double(eta_) * det5(n1, z0, z1, z3, dual1) > 0) {
    vlam = n1;
    vrho = n2;
  } else {
    vlam = n2;
    vrho = n1;
  }
  double d = inner(vlam, z2);
  if (std::abs(d) < eps) throw SingularFrame("left null normal degenerates");
  out.c_lambda = vlam / d;
  double e = inner(out.c_lambda, vrho);
  out.c_rho = -vrho / e;
  out.residual = std::abs(inner(out.c_rho, z2) - eta_);

  double c = inner(z3, z3) / 4;
  Vec5 s = -double(eta_) * z3 + c * z1;
  out.B.kind = BasisKind::lightcone;
  out.B.cols.col(0) = out.c_lambda;
  out.B.cols.col(1) = (s + z1) / 2;
  out.B.cols.col(2) = (s - z1) / 2;
  out.B.cols.col(3) = z0;
  out.B.cols.col(4) = out.c_rho;
}

Mat5 GenericAnalysis::frame_at(double t) const {
  Sample s;
  frame_core(t, s, false);
  return s.B.cols;
}

GenericAnalysis::Sample GenericAnalysis::sample(double t) const {
  Sample out;
  frame_core(t, out, true);
  const double delta = 1e-3;
  Mat5 binv = out.B.cols.inverse();
  auto phi = [&](double h) -> Mat5 {
    return binv * (frame_at(t + h) - frame_at(t - h)) / (2 * h);
  };
  Mat5 k = (4.0 * phi(delta / 2) - phi(delta)) / 3.0;
  k /= out.w.value();
  out.K = k;
  out.kappa_lambda = (k(2, 0) - k(1, 0)) / 2;
  out.kappa_rho = (k(2, 4) - k(1, 4)) / 2;
  out.residual = std::max(
      out.residual,
      (k - fls_matrix(eta_, out.kappa_lambda, out.kappa_rho))
          .cwiseAbs()
          .maxCoeff());
  return out;
}

// ---------------------------------------------------------------------------

ConstancyReport curvature_constancy(const std::shared_ptr<const Curve>& curve,
                                    int samples, double tol) {
  samples = std::max(samples, 64);
  ConstancyReport rep;
  rep.curve_class = classify_null_curve(*curve, samples);
  const double a = curve->dom_a(), b = curve->dom_b();
  if (rep.curve_class == NullCurveClass::Biisotropic) {
    BiisotropicAnalysis an(curve, 0.5 * (a + b));
    for (int i = 0; i < samples; ++i) {
      double t = a + (b - a) * (i + 0.5) / samples;
      rep.values.push_back(an.sample(t, 3).h);
    }
  } else if (rep.curve_class == NullCurveClass::GenericNegativeType ||
             rep.curve_class == NullCurveClass::GenericPositiveType) {
    GenericAnalysis an(curve);
    for (int i = 0; i < samples; ++i) {
      double t = a + (b - a) * (i + 0.5) / samples;
      auto s = an.sample(t);
      rep.values.push_back(s.kappa_lambda);
      rep.values.push_back(s.kappa_rho);
    }
  } else {
    return rep;
  }
  auto [lo, hi] = std::minmax_element(rep.values.begin(), rep.values.end());
  rep.spread = *hi - *lo;
  if (rep.curve_class == NullCurveClass::GenericNegativeType ||
      rep.curve_class == NullCurveClass::GenericPositiveType) {
    // kappa_lambda and kappa_rho vary independently; measure each spread.
    double lmin = 1e300, lmax = -1e300, rmin = 1e300, rmax = -1e300;
    for (size_t i = 0; i < rep.values.size(); i += 2) {
      lmin = std::min(lmin, rep.values[i]);
      lmax = std::max(lmax, rep.values[i]);
      rmin = std::min(rmin, rep.values[i + 1]);
      rmax = std::max(rmax, rep.values[i + 1]);
    }
    rep.spread = std::max(lmax - lmin, rmax - rmin);
  }
  rep.constant = rep.spread < tol;
  return rep;
}

}  // namespace et
