#pragma once
#include <memory>
#include <vector>

#include "et/curve.hpp"
#include "et/jet.hpp"
#include "et/linalg.hpp"

namespace et {

enum class NullCurveClass {
  Biisotropic,
  GenericNegativeType,
  GenericPositiveType,
  NotNull,
  TypeChanging,
};

const char* to_string(NullCurveClass c);

NullCurveClass classify_null_curve(const Curve& curve, int samples,
                                   double tol = 1e-7);

// Analysis of a biisotropic curve: affine line element zeta = w dt fixed by
// dA(Gamma', Gamma'') = 1, affine curvature h, calibrated lightcone frame,
// affine reduction (x, y), and the isotropic normal R.
//
// dA is declared positive on (dGamma/dt, d2Gamma/dt2) at t0 when possible;
// the frame-completion search may settle on the opposite orientation (see
// orientation()).  zeta_scale rescales the affine line element by a constant
// positive factor (used when normalizing total affine length).
class BiisotropicAnalysis {
 public:
  BiisotropicAnalysis(std::shared_ptr<const Curve> curve, double t0,
                      double zeta_scale = 1.0);

  struct Sample {
    double t = 0;
    Jet w;                   // weight jet in t (zeta = w dt)
    std::vector<Jet5> zeta;  // Gamma, Gamma', Gamma'', Gamma''' (t-jets)
    double h = 0;            // affine curvature
    Jet h_jet;
    Jet x_jet, y_jet;        // affine reduction as t-jets
    double x = 0, y = 0, xp = 0, yp = 0;  // primes are zeta-derivatives
    double upsilon = 0, mu = 0;
    Jet Q_jet;  // (mu^2 + (x x' - y y')^2) / upsilon^4
    double Q = 0;
    Jet5 R_jet;  // isotropic normal as a t-jet
    Vec5 R = Vec5::Zero(), Rp = Vec5::Zero();
    double rp2 = 0;  // <R',R'>
    double plane_residual = 0;  // drift of span{dGamma,d2Gamma} from V
  };

  Sample sample(double t, int order = 6) const;

  const Frame23& frame() const { return frame_; }
  int orientation() const { return o_; }
  // C1 - C2 = d_sign * Gamma''(t0); the time-orientation of the calibrated
  // frame forces d_sign = -1 for the standard conics.
  int d_sign() const { return sdir_; }
  double t0() const { return t0_; }
  double zeta_scale() const { return scale_; }
  const Curve& curve() const { return *curve_; }
  std::shared_ptr<const Curve> curve_ptr() const { return curve_; }

  // Total affine length over [a,b] (integral of |w| dt).
  double affine_length(double a, double b) const;
  // Primitive s(t) of zeta with s(t_mid) = 0, and its inverse by Newton.
  double arclength_from(double t_ref, double t) const;
  double parameter_at_arclength(double t_ref, double s) const;

 private:
  std::shared_ptr<const Curve> curve_;
  double t0_, scale_;
  int o_ = 1, sdir_ = -1;
  Vec5 v1_, v2_;              // dGamma/dt, d2Gamma/dt2 at t0 (span of V)
  Eigen::Matrix<double, 2, 5> plane_coords_;  // euclidean pinv of [v1 v2]
  Eigen::Matrix<double, 2, 5> red_coords_;    // pinv of [D C4]
  Frame23 frame_;
  Vec5 c0_, c1_, c2_, c3_, c4_, d_;

  Jet weight_jet(double t, int order) const;
  void build_frame();
};

// Analysis of a generic null curve: eta, canonical line element, left/right
// null normals, canonical frame B = (C_lambda, B1, B2, Gamma, C_rho), and
// curvatures kappa extracted from B^{-1}B'.
class GenericAnalysis {
 public:
  explicit GenericAnalysis(std::shared_ptr<const Curve> curve);

  struct Sample {
    double t = 0;
    Jet w;                   // signed weight jet (zeta = w dt, sign included)
    std::vector<Jet5> zeta;  // Gamma .. Gamma'''
    Vec5 c_lambda = Vec5::Zero(), c_rho = Vec5::Zero();
    Frame23 B;
    double kappa_lambda = 0, kappa_rho = 0;
    Mat5 K = Mat5::Zero();  // measured B^{-1} dB/dzeta
    double residual = 0;    // max deviation from the (fls) pattern
  };

  Sample sample(double t) const;
  // Frame columns only (cheap; used for finite differences).
  Mat5 frame_at(double t) const;

  int eta() const { return eta_; }
  int sigma() const { return sigma_; }  // sign of the canonical line element
  double weight(double t) const;        // signed w(t)
  const Curve& curve() const { return *curve_; }
  std::shared_ptr<const Curve> curve_ptr() const { return curve_; }

 private:
  std::shared_ptr<const Curve> curve_;
  int eta_ = 1, sigma_ = 1;

  void frame_core(double t, Sample& out, bool need_jets) const;
};

struct ConstancyReport {
  bool constant = false;
  double spread = 0;
  NullCurveClass curve_class = NullCurveClass::TypeChanging;
  std::vector<double> values;  // h, or interleaved kappa_lambda/kappa_rho
};

ConstancyReport curvature_constancy(const std::shared_ptr<const Curve>& curve,
                                    int samples, double tol = 1e-7);

// The (fls) coefficient matrix K(eta, kappa_lambda, kappa_rho) with
// B' = B K.
Mat5 fls_matrix(int eta, double kappa_lambda, double kappa_rho);

}  // namespace et
