#pragma once
#include <functional>
#include <string>
#include <vector>

#include "et/linalg.hpp"
#include "et/tube.hpp"

namespace et {

struct ChartWindow {
  double a0 = 0, a1 = 1, b0 = 0, b1 = 1;
};

// Residual record of one numerical check.  An analytic check passes when the
// maximum residual is below tol; a finite-difference convergence check
// passes when every estimated order (log2 of the residual ratio under step
// halving) lies in [1.7, 2.5].
struct ResidualReport {
  std::string name;
  std::vector<double> steps;      // grid spacing or difference step per level
  std::vector<double> residuals;  // max residual per level
  double max_residual = 0;
  double mean_residual = 0;
  std::vector<double> orders;  // log2(residuals[k] / residuals[k+1])
  double tol = 0;
  bool finite_difference = false;
  bool pass = false;
};

ResidualReport make_report(std::string name, std::vector<double> steps,
                           std::vector<double> residuals, double tol,
                           bool finite_difference);

// Chart reparametrization (a, b) -> (a + k sin b, b) of an immersion.  In
// the native tube chart the discrete tension field vanishes identically
// (g_bb = 0 and the Gauss map is fiber-constant), so convergence-order
// measurements are made in a sheared chart where the discrete operator is
// genuinely approximate.
class ShearedImmersion : public Immersion {
 public:
  ShearedImmersion(const Immersion& base, double k) : base_(base), k_(k) {}
  Jets2 jets2(double a, double b) const override;

 private:
  const Immersion& base_;
  double k_;
};

// Tension field tau(N) = Lap_g N - <Lap_g N, N> N of the conformal Gauss map
// on three grid refinements (33^2, 65^2, 129^2) of the chart window, with
// the Laplace-Beltrami operator of the induced Lorentzian metric in
// divergence form and all derivatives by central differences.  A nonzero
// perturbation replaces N by the pseudo-normalized N + perturbation * (unit
// tangent), the negative control.
ResidualReport harmonicity_check(const Immersion& f, const ChartWindow& w,
                                 double perturbation = 0.0);

// Closed-form value of the Maurer-Cartan form of the adapted frame field of
// a tube, evaluated on d/dt (dir 0) or d/dtheta (dir 1).
Mat5 structure_form_closed(const TubeSurface& tube, double t, double theta,
                           int dir);

// Finite-difference Maurer-Cartan components of the adapted frame field
// against the closed-form expressions, at the given chart points (a default
// 8x8 grid over both parabolic components when empty), over difference
// steps {1e-2, 5e-3, 2.5e-3}.
ResidualReport structure_form_check(const TubeSurface& tube,
                                    const std::vector<ChartPoint>& pts = {});

struct DeformationData {
  std::vector<ChartPoint> points;
  std::vector<Mat5> delta_samples;  // delta(d/dt) at the sample points
  std::vector<Mat5> Delta;          // frozen deformation isometries
  ResidualReport closedness;        // d delta = 0 (finite differences)
  ResidualReport shape;             // Ad_{F^-1} delta shape condition
  ResidualReport contact2;          // ray-level 2-jet contact
  ResidualReport contact3;          // 3rd-order probe (fails when nontrivial)
};

// Isothermic infinitesimal deformation generated by a function ell on the
// directrix parameter: eta = (ell o pi) zeta~ (M14 - M24), delta = F eta
// F^-1.  Verifies closedness of delta and the shape of Ad_{F^-1} delta.
DeformationData infinitesimal_deformation(
    const TubeSurface& tube, const std::function<double(double)>& ell);

// Second-order deformation between the exceptional tubes of two biisotropic
// curves of finite affine length (Prop-level construction: affine lengths
// rescaled to 2, arclength charts on (-1,1), chart shears Phi by quadrature
// of (mu^2 + (xx'-yy')^2)/upsilon^4, Delta = G~ G^-1 frozen per point,
// ray-level jet contact in the quotient convention).
DeformationData exceptional_deformation_pair(
    std::shared_ptr<const Curve> c1, std::shared_ptr<const Curve> c2,
    int comp = 1);

// Second-order deformation (fixed parameters) between a general-type tube
// and the tube of the curve synthesized by frame integration of the
// canonical frame equations with kappa_rho replaced by kappa_rho + shift
// (left tubes share kappa_lambda; contact holds).  With shift_matching the
// shift is applied to the curvature that must coincide for the deformation
// to exist, the negative control: contact fails.
DeformationData general_deformation_pair(std::shared_ptr<const Curve> c,
                                         TubeKind kind, double shift,
                                         int comp = 1,
                                         bool shift_matching = false);

}  // namespace et
