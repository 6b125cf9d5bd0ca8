#pragma once
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "et/curve.hpp"
#include "et/jet.hpp"
#include "et/linalg.hpp"
#include "et/null_curves.hpp"

namespace et {

enum class TubeKind { Exceptional, Left, Right };
enum class SurfaceLabel { Umbilic, QuasiUmbilic, Elliptic2, Hyperbolic2 };
enum class SurfaceType { Exceptional, General };

const char* to_string(TubeKind k);
const char* to_string(SurfaceLabel l);
const char* to_string(SurfaceType t);

// Two-variable 2-jet of a lift into R^{2,3}.
struct Jets2 {
  Vec5 p = Vec5::Zero();
  Vec5 da = Vec5::Zero(), db = Vec5::Zero();
  Vec5 daa = Vec5::Zero(), dab = Vec5::Zero(), dbb = Vec5::Zero();
};

// A parametrized surface in the Einstein universe, given by a null lift into
// R^{2,3} with analytic second-order jets in the chart variables.
class Immersion {
 public:
  virtual ~Immersion() = default;
  virtual Jets2 jets2(double a, double b) const = 0;
  Vec5 point(double a, double b) const { return jets2(a, b).p; }
  // Gram matrix of the first derivatives of the lift.
  Mat2 induced_metric(double a, double b) const;
};

struct ClassificationResult {
  SurfaceLabel label = SurfaceLabel::Umbilic;
  double rho = 0;       // rho_f = h11^2 - h12^2
  int helicity = 0;     // sign(h11) at quasi-umbilical points, else 0
  double h11 = 0, h12 = 0;
  double trace_residual = 0;       // |h22 - h11| (trace-free check)
  double conformal_residual = 0;   // max |<dN,dN> - rho g| (weak conformality)
  Vec5 normal = Vec5::Zero();      // conformal Gauss map representative
};

// The unit spacelike mean-curvature normal (central-sphere congruence
// direction): the unique-up-to-sign unit vector orthogonal to the lift and
// its first derivatives whose second fundamental form is trace free.  When
// align is nonnull the sign is chosen so that <N, align> > 0.
Vec5 surface_normal(const Immersion& f, double a, double b,
                    const Vec5* align = nullptr);

ClassificationResult classify_point(const Immersion& f, double a, double b,
                                    double tol = 1e-8,
                                    const Vec5* align = nullptr,
                                    bool with_conformal_residual = true);

// Normal tube over an analyzed null curve: the exceptional tube of a
// biisotropic curve (lift cos(theta) R + 1/2 sin(theta) Gamma') or the
// left/right isotropic normal tubes of a generic curve
// (lift cos(theta) C_{lambda|rho} + sin(theta) Gamma').
class TubeSurface : public Immersion {
 public:
  TubeSurface(std::shared_ptr<const Curve> directrix, TubeKind kind,
              double zeta_scale = 1.0);

  Jets2 jets2(double t, double theta) const override;
  Vec5 lift(double t, double theta) const { return jets2(t, theta).p; }
  TubeKind kind() const { return kind_; }
  int component_sign(double theta) const;  // sign(cos theta)

  // Closed-form induced metric in the (t, theta) chart.
  Mat2 metric_closed_form(double t, double theta) const;
  // Adapted frame on the parabolic component containing theta (comp = 0
  // derives the component sign from theta; a nonzero comp must agree).
  // For the right tube (negative type only) the frame is built from the
  // column-swapped canonical frame (C_rho, B1, B2, Gamma, C_lambda) with the
  // curvatures exchanged; it satisfies every adaptedness identity but has
  // determinant -1 (it lies in the orientation-reversing part of the
  // isometry group -- the chirality distinguishing left from right).
  Frame23 adapted_frame(double t, double theta, int comp = 0) const;
  Vec5 conformal_gauss(double t) const;
  // Representative of the dual point of the component at (t, theta).
  Vec5 dual_point(double t, double theta, int comp = 0) const;
  // theta-parameter at which the dual ray of a point at theta meets the
  // opposite tube (identity fiber for the exceptional case).
  double dual_theta(double theta) const;

  const BiisotropicAnalysis& biisotropic() const;
  const GenericAnalysis& generic() const;
  const Curve& curve() const { return *curve_; }
  std::shared_ptr<const Curve> curve_ptr() const { return curve_; }

  struct GenData {
    Jet w;
    Mat5 B = Mat5::Zero(), Bp = Mat5::Zero(), Bpp = Mat5::Zero();
    double kl = 0, kr = 0, klp = 0, krp = 0;
  };
  const GenData& gen_data(double t) const;

 private:
  std::shared_ptr<const Curve> curve_;
  TubeKind kind_;
  std::optional<BiisotropicAnalysis> bi_;
  std::optional<GenericAnalysis> gen_;
  mutable std::mutex mu_;
  mutable std::map<double, BiisotropicAnalysis::Sample> bi_cache_;
  mutable std::map<double, GenData> gen_cache_;

  const BiisotropicAnalysis::Sample& bi_sample(double t) const;
};

// The example surface f(s,t) = Q(t) gamma(s): the orbit of a Viviani-type
// null generator under a toral one-parameter group, in lightcone
// coordinates.  Chart is (s, t) on [0,2pi)^2 (torus double cover).
class VivianiSurface : public Immersion {
 public:
  VivianiSurface();
  Jets2 jets2(double s, double t) const override;

 private:
  Mat5 tlp_;
};

// Decides whether a quasi-umbilical tube is exceptional or general by the
// vanishing of <dN, d f^sharp>, cross-checked against the classification of
// the directrix curve.  Throws MixedSignal if the two criteria disagree.
SurfaceType exceptional_or_general(const TubeSurface& tube, int samples = 16,
                                   double tol = 1e-6);

struct DirectrixSamples {
  std::vector<double> tau;
  std::vector<Vec5> gamma;   // unit spacelike samples of the directrix
  double fiber_spread = 0;   // max variation of N along the fibers
};

// Recovers the directrix curve of a quasi-umbilical immersion by sampling
// the conformal Gauss map along fibers.  Throws NotFibered if N is not
// constant along the theta-fibers.
DirectrixSamples directrix(const Immersion& f, double a0, double a1,
                           int n_tau, const std::vector<double>& thetas,
                           double tol = 1e-6);

struct ChartPoint {
  double tau = 0, theta = 0;
};

// The intertwining map between left and right normal tubes (chart identity;
// only the tube kind is relabeled).
ChartPoint intertwine(ChartPoint p);

// Second-order analytic contact of the surface with the central torus at
// (a, b).  For c(y) = <lift(y), N(a,b)>: the value and both first chart
// derivatives vanish, and the Hessian vanishes in the Ker dN directions;
// the transversal Hessian entry is nonzero exactly away from umbilic points
// (contact order > 2 iff umbilic).  All entries are normalized by the lift
// jet scale.
struct ContactReport {
  double value = 0;        // |c|
  double first = 0;        // max first derivative
  double hess_kernel = 0;  // Hessian entries touching Ker dN
  double hess_trans = 0;   // transversal Hessian entry
};
ContactReport central_torus_contact(const Immersion& f, double a, double b);

}  // namespace et
