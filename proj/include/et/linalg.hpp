#pragma once
#include <Eigen/Dense>
#include <array>
#include <functional>
#include <vector>

#include "et/errors.hpp"

namespace et {

using Vec5 = Eigen::Matrix<double, 5, 1>;
using Mat5 = Eigen::Matrix<double, 5, 5>;
using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat2 = Eigen::Matrix2d;

// Ambient space: R^{2,3} with scalar product
//   <X,Y> = -(X0 Y4 + X4 Y0) - X1 Y1 + X2 Y2 + X3 Y3,
// written in the lightcone basis (E0..E4).  The matrix below is the Gram
// matrix h of that basis; a "lightcone basis" is any frame with Gram h.
const Mat5& metric_lightcone();

// Gram matrix of a pseudo-orthogonal basis: diag(-1,-1,1,1,1).
const Mat5& metric_pseudo_orthogonal();

// Change of basis (Pi) = (Ei) * T with P0 = (E0+E4)/sqrt2, P4 = (E4-E0)/sqrt2,
// Pi = Ei otherwise.  Columns of t_lp() are the Pi in E-coordinates.
const Mat5& t_lp();
const Mat5& t_lp_inv();

double inner(const Vec5& x, const Vec5& y);

// Pairing of simple bivectors induced by <,>:
//   <X^Y, V^W> = <X,V><Y,W> - <Y,V><X,W>.
double bivector_pair(const Vec5& x, const Vec5& y, const Vec5& v, const Vec5& w);

// True iff v^w spans a totally null 2-plane lying in the future component
// of the null-bivector cone (the component of P0^P1).  Throws NotNullPlane
// if the plane is not totally null or v^w == 0.
bool is_future_null_bivector(const Vec5& v, const Vec5& w, double tol = 1e-9);

enum class BasisKind { lightcone, pseudo_orthogonal };

struct Frame23 {
  Mat5 cols = Mat5::Identity();  // basis vectors as columns, E-coordinates
  BasisKind kind = BasisKind::lightcone;

  Vec5 col(int i) const { return cols.col(i); }
};

struct FrameValidation {
  double gram_residual = 0;   // ||Gram - expected||_max
  double det_residual = 0;    // |det - 1|
  bool future = false;        // time orientation (future null bivector test)
  bool pass = false;
};

// Checks Gram matrix, unit determinant, and time orientation.  The
// orientation bivector is B0^(B1+B2) for a lightcone frame and
// (B0-B4)^(B1+B2) for a pseudo-orthogonal one.
FrameValidation validate_frame(const Frame23& f, double tol = 1e-8);

Frame23 to_pseudo_orthogonal(const Frame23& f);
Frame23 to_lightcone(const Frame23& f);

// o(2,3) as matrices a with a^T h + h a = 0 (lightcone-basis coordinates).
double o23_residual(const Mat5& a);
bool is_o23(const Mat5& a, double tol = 1e-8);

// The ten-element basis M^i_j used throughout; order:
//   M00, M10, M20, M30, M21, M31, M32, M14, M24, M34
const std::array<Mat5, 10>& o23_basis();

// Expand an o(2,3) matrix in the basis above (exact linear solve).
std::array<double, 10> o23_coords(const Mat5& a);
Mat5 o23_from_coords(const std::array<double, 10>& c);

// Maurer-Cartan samples of frame fields, phi = F^{-1} dF, by central
// differences.  A one-parameter field yields phi(d/dt); a two-parameter
// field yields phi(d/da) or phi(d/db) according to dir (0 or 1).
using FrameField1 = std::function<Mat5(double)>;
using FrameField2 = std::function<Mat5(double, double)>;

Mat5 maurer_cartan(const FrameField1& F, double at, double step = 1e-5);
Mat5 maurer_cartan(const FrameField2& F, double a, double b, int dir,
                   double step = 1e-5);

// Residual of the structure equation d phi + phi ^ phi = 0 evaluated on
// (d/da, d/db), all derivatives by central differences.
double mc_equation_residual(const FrameField2& F, double a, double b,
                            double step = 1e-4);

struct Signature {
  int positive = 0;
  int negative = 0;
  int zero = 0;
};

// Signature of the restriction of <,> to span(vs).  Throws DependentInput
// if the vectors are linearly dependent.
Signature subspace_signature(const std::vector<Vec5>& vs, double tol = 1e-8);

// Orthogonal complement of span(vs) w.r.t. <,> (basis as columns).
Eigen::MatrixXd orthogonal_complement(const std::vector<Vec5>& vs,
                                      double tol = 1e-10);

// 5x5 determinant of column vectors.
double det5(const Vec5& a, const Vec5& b, const Vec5& c, const Vec5& d,
            const Vec5& e);

}  // namespace et
