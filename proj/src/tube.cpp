#include "et/tube.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "et/errors.hpp"

namespace et {

namespace {

double sq(double x) { return x * x; }

// Richardson-extrapolated central difference of a vector-valued function.
template <typename F>
Vec5 central_diff(F&& fn, double delta) {
  Vec5 c1 = (fn(delta / 2) - fn(-delta / 2)) / delta;
  Vec5 c2 = (fn(delta) - fn(-delta)) / (2 * delta);
  return (4.0 * c1 - c2) / 3.0;
}

}  // namespace

const char* to_string(TubeKind k) {
  switch (k) {
    case TubeKind::Exceptional: return "exceptional";
    case TubeKind::Left: return "left";
    case TubeKind::Right: return "right";
  }
  return "?";
}

const char* to_string(SurfaceLabel l) {
  switch (l) {
    case SurfaceLabel::Umbilic: return "Umbilic";
    case SurfaceLabel::QuasiUmbilic: return "QuasiUmbilic";
    case SurfaceLabel::Elliptic2: return "Elliptic2";
    case SurfaceLabel::Hyperbolic2: return "Hyperbolic2";
  }
  return "?";
}

const char* to_string(SurfaceType t) {
  return t == SurfaceType::Exceptional ? "Exceptional" : "General";
}

Mat2 Immersion::induced_metric(double a, double b) const {
  Jets2 j = jets2(a, b);
  Mat2 g;
  g(0, 0) = inner(j.da, j.da);
  g(0, 1) = g(1, 0) = inner(j.da, j.db);
  g(1, 1) = inner(j.db, j.db);
  return g;
}

// ---------------------------------------------------------------------------
// TubeSurface

TubeSurface::TubeSurface(std::shared_ptr<const Curve> directrix, TubeKind kind,
                         double zeta_scale)
    : curve_(std::move(directrix)), kind_(kind) {
  try {
    if (kind_ == TubeKind::Exceptional) {
      double t0 = 0.5 * (curve_->dom_a() + curve_->dom_b());
      bi_.emplace(curve_, t0, zeta_scale);
    } else {
      gen_.emplace(curve_);
    }
  } catch (const NotBiisotropic& e) {
    throw KindMismatch(std::string("exceptional tube needs a biisotropic "
                                   "directrix: ") +
                       e.what());
  } catch (const NotGeneric& e) {
    throw KindMismatch(
        std::string("left/right tube needs a generic directrix: ") + e.what());
  }
}

const BiisotropicAnalysis& TubeSurface::biisotropic() const {
  if (!bi_) throw KindMismatch("not an exceptional tube");
  return *bi_;
}

const GenericAnalysis& TubeSurface::generic() const {
  if (!gen_) throw KindMismatch("not a left/right tube");
  return *gen_;
}

const BiisotropicAnalysis::Sample& TubeSurface::bi_sample(double t) const {
  {
    std::lock_guard<std::mutex> lk(mu_);
    auto it = bi_cache_.find(t);
    if (it != bi_cache_.end()) return it->second;
  }
  BiisotropicAnalysis::Sample s = biisotropic().sample(t, 6);
  std::lock_guard<std::mutex> lk(mu_);
  return bi_cache_.emplace(t, std::move(s)).first->second;
}

const TubeSurface::GenData& TubeSurface::gen_data(double t) const {
  {
    std::lock_guard<std::mutex> lk(mu_);
    auto it = gen_cache_.find(t);
    if (it != gen_cache_.end()) return it->second;
  }
  const GenericAnalysis& an = generic();
  GenericAnalysis::Sample s = an.sample(t);
  GenData d;
  d.w = s.w;
  d.B = s.B.cols;
  d.kl = s.kappa_lambda;
  d.kr = s.kappa_rho;
  // Curvature derivatives by Richardson-extrapolated central differences.
  const double delta = 1e-3;
  auto kpair = [&](double h) {
    GenericAnalysis::Sample sh = an.sample(t + h);
    return std::array<double, 2>{sh.kappa_lambda, sh.kappa_rho};
  };
  auto kp1 = kpair(delta / 2), km1 = kpair(-delta / 2);
  auto kp2 = kpair(delta), km2 = kpair(-delta);
  d.klp = (4 * (kp1[0] - km1[0]) / delta - (kp2[0] - km2[0]) / (2 * delta)) / 3;
  d.krp = (4 * (kp1[1] - km1[1]) / delta - (kp2[1] - km2[1]) / (2 * delta)) / 3;

  int eta = an.eta();
  Mat5 K = fls_matrix(eta, d.kl, d.kr);
  Mat5 Kdot = Mat5::Zero();
  // d/dkappa_lambda and d/dkappa_rho of the (fls) pattern.
  Kdot(1, 0) -= d.klp;
  Kdot(2, 0) += d.klp;
  Kdot(4, 1) += d.klp;
  Kdot(4, 2) += d.klp;
  Kdot(0, 1) += d.krp;
  Kdot(0, 2) += d.krp;
  Kdot(1, 4) -= d.krp;
  Kdot(2, 4) += d.krp;
  double w0 = d.w.value(), w1 = d.w.deriv(1);
  d.Bp = w0 * d.B * K;
  d.Bpp = w1 * d.B * K + w0 * w0 * d.B * K * K + w0 * d.B * Kdot;
  std::lock_guard<std::mutex> lk(mu_);
  return gen_cache_.emplace(t, std::move(d)).first->second;
}

Jets2 TubeSurface::jets2(double t, double theta) const {
  Jets2 out;
  double c = std::cos(theta), s = std::sin(theta);
  if (kind_ == TubeKind::Exceptional) {
    const auto& sm = bi_sample(t);
    Vec5 R0 = value(sm.R_jet), R1 = deriv(sm.R_jet, 1), R2 = deriv(sm.R_jet, 2);
    Vec5 G0 = value(sm.zeta[1]), G1 = deriv(sm.zeta[1], 1),
         G2 = deriv(sm.zeta[1], 2);
    out.p = c * R0 + 0.5 * s * G0;
    out.da = c * R1 + 0.5 * s * G1;
    out.db = -s * R0 + 0.5 * c * G0;
    out.daa = c * R2 + 0.5 * s * G2;
    out.dab = -s * R1 + 0.5 * c * G1;
    out.dbb = -out.p;
    return out;
  }
  const GenData& d = gen_data(t);
  Vec5 v = Vec5::Zero(), vth = Vec5::Zero();
  int base = kind_ == TubeKind::Left ? 0 : 4;
  v[base] = c;
  v[1] = s;
  v[2] = -s;
  vth[base] = -s;
  vth[1] = c;
  vth[2] = -c;
  out.p = d.B * v;
  out.da = d.Bp * v;
  out.db = d.B * vth;
  out.daa = d.Bpp * v;
  out.dab = d.Bp * vth;
  out.dbb = -out.p;
  return out;
}

int TubeSurface::component_sign(double theta) const {
  double c = std::cos(theta);
  return c > 0 ? 1 : (c < 0 ? -1 : 0);
}

Mat2 TubeSurface::metric_closed_form(double t, double theta) const {
  Mat2 g = Mat2::Zero();
  double c2 = sq(std::cos(theta)), s2 = sq(std::sin(theta));
  if (kind_ == TubeKind::Exceptional) {
    const auto& sm = bi_sample(t);
    double w = sm.w.value();
    g(0, 0) = w * w * c2 * sm.rp2;
    g(0, 1) = g(1, 0) = -w / 2;
    return g;
  }
  const GenData& d = gen_data(t);
  double w = d.w.value();
  int eta = generic().eta();
  if (kind_ == TubeKind::Left) {
    g(0, 0) = -2 * w * w * (eta * s2 - d.kl * c2);
    g(0, 1) = g(1, 0) = -w;
  } else {
    g(0, 0) = -2 * eta * w * w * (s2 - d.kr * c2);
    g(0, 1) = g(1, 0) = -double(eta) * w;
  }
  return g;
}

Frame23 TubeSurface::adapted_frame(double t, double theta, int comp) const {
  double c = std::cos(theta);
  if (std::abs(c) < 1e-6)
    throw UmbilicLocus("adapted frame undefined at the umbilic locus");
  int sg = component_sign(theta);
  if (comp == 0) comp = sg;
  if (comp != sg)
    throw DomainError("component sign does not match the chart point");
  double u = std::tan(theta);
  Frame23 F;
  F.kind = BasisKind::lightcone;
  if (kind_ == TubeKind::Exceptional) {
    const auto& sm = bi_sample(t);
    Vec5 R0 = value(sm.R_jet);
    Vec5 G1 = value(sm.zeta[1]), G2 = value(sm.zeta[2]), G0 = value(sm.zeta[0]);
    Vec5 d1F0 = comp * (sm.Rp + 0.5 * u * G2);
    Vec5 d2F0 = comp * 0.5 * G1;
    double q = inner(d1F0, d1F0);
    F.cols.col(0) = comp * (R0 + 0.5 * u * G1);
    F.cols.col(1) = -d1F0 - (q + 1) * d2F0;
    F.cols.col(2) = -d1F0 - (q - 1) * d2F0;
    F.cols.col(3) = G0;
    F.cols.col(4) = -comp * G2;
    return F;
  }
  const GenData& d = gen_data(t);
  int eta = generic().eta();
  Vec5 b0 = d.B.col(0), b1 = d.B.col(1), b2 = d.B.col(2), b3 = d.B.col(3),
       b4 = d.B.col(4);
  if (kind_ == TubeKind::Right) {
    // For eta = +1 the right tube is the left tube of the column-swapped
    // canonical frame (C_rho, B1, B2, Gamma, C_lambda) with the curvatures
    // exchanged; no frame formulas are available for eta = -1.
    if (eta != 1)
      throw KindMismatch("right-tube adapted frame requires eta = +1");
    std::swap(b0, b4);
  }
  double e3 = double(eta) / 3.0;
  Vec5 gp = b1 - b2;
  F.cols.col(0) = comp * (b0 + u * gp);
  F.cols.col(1) = comp * (u * (e3 * b0 - b4) + b1 + e3 * u * u * gp);
  F.cols.col(2) = comp * (u * (e3 * b0 - b4) + b2 + e3 * u * u * gp);
  F.cols.col(3) = b3;
  F.cols.col(4) = comp * (b4 - e3 * u * gp);
  return F;
}

Vec5 TubeSurface::conformal_gauss(double t) const {
  if (kind_ == TubeKind::Exceptional) return value(bi_sample(t).zeta[0]);
  return gen_data(t).B.col(3);
}

Vec5 TubeSurface::dual_point(double t, double theta, int comp) const {
  int sg = component_sign(theta);
  if (comp == 0) comp = sg;
  if (comp != sg)
    throw DomainError("component sign does not match the chart point");
  if (kind_ == TubeKind::Exceptional)
    return -double(comp) * value(bi_sample(t).zeta[2]);
  if (std::abs(std::cos(theta)) < 1e-6)
    throw UmbilicLocus("dual point undefined at the umbilic locus");
  const GenData& d = gen_data(t);
  int eta = generic().eta();
  double u = std::tan(theta);
  Vec5 gp = d.B.col(1) - d.B.col(2);
  Vec5 base = kind_ == TubeKind::Left ? d.B.col(4) : d.B.col(0);
  if (kind_ == TubeKind::Right && eta != 1)
    throw KindMismatch("right-tube dual requires eta = +1");
  return double(comp) * (base - (double(eta) / 3.0) * u * gp);
}

double TubeSurface::dual_theta(double theta) const {
  if (kind_ == TubeKind::Exceptional) return theta;
  int eta = generic().eta();
  double tp = std::atan(-(double(eta) / 3.0) * std::tan(theta));
  if (component_sign(theta) < 0) tp += EIGEN_PI;
  if (tp < 0) tp += 2 * EIGEN_PI;
  return tp;
}

// ---------------------------------------------------------------------------
// VivianiSurface

VivianiSurface::VivianiSurface() : tlp_(t_lp()) {}

Jets2 VivianiSurface::jets2(double s, double t) const {
  // gamma(s) = P0 + 1/2((1+cos 2s)P2 + sin(2s) P3 + 2 sin(s) P4) and its
  // s-derivatives, in pseudo-orthogonal coordinates.
  auto gamma = [](double u, int k) {
    Vec5 g = Vec5::Zero();
    auto trig = [&](double freq, double phase) {
      // k-th derivative of cos(freq*u + phase)
      return std::pow(freq, k) * std::cos(freq * u + phase + k * EIGEN_PI / 2);
    };
    if (k == 0) g[0] = 1;
    g[2] = 0.5 * (k == 0 ? 1 : 0) + 0.5 * trig(2, 0);
    g[3] = 0.5 * trig(2, -EIGEN_PI / 2);
    g[4] = trig(1, -EIGEN_PI / 2);
    return g;
  };
  // Q(t): rotation by 2t in the (0,1) plane and by t in the (3,4) plane.
  auto qmat = [](double u, int k) {
    Mat5 q = Mat5::Zero();
    auto c = [&](double freq) {
      return std::pow(freq, k) * std::cos(freq * u + k * EIGEN_PI / 2);
    };
    auto sn = [&](double freq) {
      return std::pow(freq, k) * std::sin(freq * u + k * EIGEN_PI / 2);
    };
    q(0, 0) = q(1, 1) = c(2);
    q(0, 1) = sn(2);
    q(1, 0) = -sn(2);
    q(2, 2) = (k == 0) ? 1 : 0;
    q(3, 3) = q(4, 4) = c(1);
    q(4, 3) = sn(1);
    q(3, 4) = -sn(1);
    return q;
  };
  Mat5 Q0 = qmat(t, 0), Q1 = qmat(t, 1), Q2 = qmat(t, 2);
  Vec5 g0 = gamma(s, 0), g1 = gamma(s, 1), g2 = gamma(s, 2);
  Jets2 out;
  out.p = tlp_ * (Q0 * g0);
  out.da = tlp_ * (Q0 * g1);
  out.db = tlp_ * (Q1 * g0);
  out.daa = tlp_ * (Q0 * g2);
  out.dab = tlp_ * (Q1 * g1);
  out.dbb = tlp_ * (Q2 * g0);
  return out;
}

// ---------------------------------------------------------------------------
// Pointwise conformal Gauss map and classification

Vec5 surface_normal(const Immersion& f, double a, double b,
                    const Vec5* align) {
  Jets2 j = f.jets2(a, b);
  if (std::abs(inner(j.p, j.p)) > 1e-8 * std::max(1.0, j.p.squaredNorm()))
    throw NotNull("surface lift is not a null lift");
  Mat2 g;
  g(0, 0) = inner(j.da, j.da);
  g(0, 1) = g(1, 0) = inner(j.da, j.db);
  g(1, 1) = inner(j.db, j.db);
  if (g.determinant() >= 0)
    throw NotTimelike("induced metric is not Lorentzian");
  Mat2 gi = g.inverse();
  Eigen::MatrixXd comp = orthogonal_complement({j.p, j.da, j.db});
  if (comp.cols() != 2)
    throw FrameReductionFailure("normal space is not 2-dimensional");
  Vec5 u = comp.col(0), v = comp.col(1);
  auto trace_of = [&](const Vec5& n) {
    return gi(0, 0) * inner(j.daa, n) + 2 * gi(0, 1) * inner(j.dab, n) +
           gi(1, 1) * inner(j.dbb, n);
  };
  Vec5 dir = trace_of(v) * u - trace_of(u) * v;
  double n2 = inner(dir, dir);
  if (n2 <= 1e-18 * dir.squaredNorm())
    throw FrameReductionFailure(
        "trace-free normal direction is not spacelike");
  Vec5 N = dir / std::sqrt(n2);
  if (align != nullptr) {
    double sgn = inner(N, *align);
    if (std::abs(sgn) < 1e-12) sgn = N.dot(*align);
    if (sgn < 0) N = -N;
  } else {
    int imax = 0;
    for (int k = 1; k < 5; ++k)
      if (std::abs(N[k]) > std::abs(N[imax])) imax = k;
    if (N[imax] < 0) N = -N;
  }
  return N;
}

ClassificationResult classify_point(const Immersion& f, double a, double b,
                                    double tol, const Vec5* align,
                                    bool with_conformal_residual) {
  Jets2 j = f.jets2(a, b);
  Mat2 g;
  g(0, 0) = inner(j.da, j.da);
  g(0, 1) = g(1, 0) = inner(j.da, j.db);
  g(1, 1) = inner(j.db, j.db);
  if (g.determinant() >= 0)
    throw NotTimelike("induced metric is not Lorentzian");

  ClassificationResult out;
  Vec5 N = surface_normal(f, a, b, align);
  out.normal = N;

  // g-orthonormal tangent frame (e1 timelike, e2 spacelike).
  Eigen::SelfAdjointEigenSolver<Mat2> es(g);
  double l0 = es.eigenvalues()[0], l1 = es.eigenvalues()[1];
  if (!(l0 < 0 && l1 > 0))
    throw NotTimelike("induced metric is not of signature (1,1)");
  Vec2 e1 = es.eigenvectors().col(0) / std::sqrt(-l0);
  Vec2 e2 = es.eigenvectors().col(1) / std::sqrt(l1);

  Mat2 II;
  II(0, 0) = inner(j.daa, N);
  II(0, 1) = II(1, 0) = inner(j.dab, N);
  II(1, 1) = inner(j.dbb, N);
  out.h11 = e1.dot(II * e1);
  out.h12 = e1.dot(II * e2);
  out.trace_residual = std::abs(e2.dot(II * e2) - out.h11);
  out.rho = out.h11 * out.h11 - out.h12 * out.h12;

  if (with_conformal_residual) {
    const double delta = 1e-3;
    auto nof = [&](double da_, double db_) {
      Vec5 n = surface_normal(f, a + da_, b + db_, nullptr);
      if (n.dot(N) < 0) n = -n;
      return n;
    };
    Vec5 dNa = central_diff([&](double h) { return nof(h, 0); }, delta);
    Vec5 dNb = central_diff([&](double h) { return nof(0, h); }, delta);
    Mat2 M;
    M(0, 0) = inner(dNa, dNa);
    M(0, 1) = M(1, 0) = inner(dNa, dNb);
    M(1, 1) = inner(dNb, dNb);
    out.conformal_residual = (M - out.rho * g).cwiseAbs().maxCoeff();
  }

  if (out.rho < -tol) {
    out.label = SurfaceLabel::Elliptic2;
  } else if (out.rho > tol) {
    out.label = SurfaceLabel::Hyperbolic2;
  } else if (std::abs(out.h11) < tol && std::abs(out.h12) < tol) {
    out.label = SurfaceLabel::Umbilic;
  } else {
    out.label = SurfaceLabel::QuasiUmbilic;
    out.helicity = out.h11 > 0 ? 1 : -1;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Exceptional/general decision, directrix recovery, intertwining, contact

SurfaceType exceptional_or_general(const TubeSurface& tube, int samples,
                                   double tol) {
  const Curve& c = tube.curve();
  NullCurveClass cls = classify_null_curve(c, 64);
  bool directrix_exceptional = cls == NullCurveClass::Biisotropic;

  double a = c.dom_a(), b = c.dom_b();
  double span = b - a;
  const double delta = 1e-3;
  const std::vector<double> thetas = {0.3, 1.0, 2.4, 4.0, 5.4};
  double worst = 0;
  for (int i = 0; i < samples; ++i) {
    double t = a + span * (i + 0.5) / samples;
    double theta = thetas[i % thetas.size()];
    int comp = tube.component_sign(theta);
    Vec5 N0 = tube.conformal_gauss(t);
    auto nof = [&](double h) {
      Vec5 n = surface_normal(tube, t + h, theta, nullptr);
      if (n.dot(N0) < 0) n = -n;
      return n;
    };
    Vec5 dNt = central_diff(nof, delta);
    auto dof_t = [&](double h) { return tube.dual_point(t + h, theta, comp); };
    auto dof_th = [&](double h) {
      return tube.dual_point(t, theta + h, comp);
    };
    Vec5 dDt = central_diff(dof_t, delta);
    Vec5 dDth = central_diff(dof_th, delta);
    // N is fiber-constant, so dN has only a t-component.
    double scale = dNt.norm() * std::max(dDt.norm(), dDth.norm());
    if (scale < 1e-14) continue;
    double q = std::max(std::abs(inner(dNt, dDt)), std::abs(inner(dNt, dDth)));
    worst = std::max(worst, q / scale);
  }
  bool numeric_exceptional = worst < tol;
  if (numeric_exceptional != directrix_exceptional)
    throw MixedSignal("dual-pairing and directrix classifications disagree");
  return numeric_exceptional ? SurfaceType::Exceptional : SurfaceType::General;
}

DirectrixSamples directrix(const Immersion& f, double a0, double a1, int n_tau,
                           const std::vector<double>& thetas, double tol) {
  if (n_tau < 2 || thetas.size() < 2)
    throw DomainError("directrix sampling needs >= 2 points per direction");
  DirectrixSamples out;
  Vec5 prev = Vec5::Zero();
  for (int i = 0; i < n_tau; ++i) {
    double tau = a0 + (a1 - a0) * i / (n_tau - 1);
    Vec5 base = surface_normal(f, tau, thetas[0], nullptr);
    if (i > 0 && base.dot(prev) < 0) base = -base;
    double spread = 0;
    for (std::size_t k = 1; k < thetas.size(); ++k) {
      Vec5 n = surface_normal(f, tau, thetas[k], nullptr);
      if (n.dot(base) < 0) n = -n;
      spread = std::max(spread, (n - base).cwiseAbs().maxCoeff());
    }
    out.fiber_spread = std::max(out.fiber_spread, spread);
    if (out.fiber_spread > tol)
      throw NotFibered("conformal Gauss map is not constant along fibers");
    out.tau.push_back(tau);
    out.gamma.push_back(base);
    prev = base;
  }
  return out;
}

ChartPoint intertwine(ChartPoint p) { return p; }

ContactReport central_torus_contact(const Immersion& f, double a, double b) {
  Vec5 N = surface_normal(f, a, b, nullptr);
  Jets2 j = f.jets2(a, b);
  double scale = std::max({1.0, j.p.norm(), j.da.norm(), j.db.norm(),
                           j.daa.norm(), j.dab.norm(), j.dbb.norm()});
  ContactReport rep;
  rep.value = std::abs(inner(j.p, N)) / scale;
  rep.first =
      std::max(std::abs(inner(j.da, N)), std::abs(inner(j.db, N))) / scale;

  // Kernel of dN in the chart: minimize |k1 dN_a + k2 dN_b| (euclidean).
  const double delta = 1e-3;
  auto nof = [&](double da_, double db_) {
    Vec5 n = surface_normal(f, a + da_, b + db_, nullptr);
    if (n.dot(N) < 0) n = -n;
    return n;
  };
  Vec5 dNa = central_diff([&](double h) { return nof(h, 0); }, delta);
  Vec5 dNb = central_diff([&](double h) { return nof(0, h); }, delta);
  Mat2 Gram;
  Gram(0, 0) = dNa.dot(dNa);
  Gram(0, 1) = Gram(1, 0) = dNa.dot(dNb);
  Gram(1, 1) = dNb.dot(dNb);
  Eigen::SelfAdjointEigenSolver<Mat2> es(Gram);
  Vec2 k = es.eigenvectors().col(0);  // smallest eigenvalue: kernel direction
  Vec2 m(-k[1], k[0]);                // transversal direction

  Mat2 H;
  H(0, 0) = inner(j.daa, N);
  H(0, 1) = H(1, 0) = inner(j.dab, N);
  H(1, 1) = inner(j.dbb, N);
  rep.hess_kernel =
      std::max(std::abs(k.dot(H * k)), std::abs(k.dot(H * m))) / scale;
  rep.hess_trans = std::abs(m.dot(H * m)) / scale;
  return rep;
}

}  // namespace et
