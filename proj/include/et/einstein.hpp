#pragma once
#include "et/linalg.hpp"

namespace et {

// Oriented null ray of R^{2,3}.  Normalized so that the projection onto
// span{P0,P1} has squared norm -1; V and -V are different points.
struct EinsteinPoint {
  Vec5 rep = Vec5::Zero();  // normalized representative
};

struct S22Point {
  Vec5 v = Vec5::Zero();  // <v,v> = 1
};

struct ToroidalCoords {
  double r = 0, phi = 0, theta = 0;
  int eps = 1;
  Vec3 euclid = Vec3::Zero();
};

// Scales a nonzero null vector by the unique positive factor putting it on
// the normalized slice.  Throws NotNull / ZeroVector.
EinsteinPoint normalize_ray(const Vec5& v, double tol = 1e-8);

bool same_point(const EinsteinPoint& a, const EinsteinPoint& b,
                double tol = 1e-9);
double point_distance(const EinsteinPoint& a, const EinsteinPoint& b);

// Sign of <V,S> on the normalized representative; 0 within threshold means
// the wall.
int chamber_sign(const EinsteinPoint& p, const S22Point& s,
                 double zero_tol = 1e-9);

// Solid-torus coordinates of a null ray relative to a pseudo-orthogonal
// wall basis with B4 = S.  The ray is [cos(phi) B0 + sin(phi) B1
// + r cos(theta) B2 + r sin(theta) B3 + eps sqrt(1-r^2) B4].
ToroidalCoords toroidal_project(const EinsteinPoint& p, const Frame23& wall_basis);

// Inverse of the parametrization above (for round-trip checks).
EinsteinPoint toroidal_unproject(const ToroidalCoords& c,
                                 const Frame23& wall_basis);

// V_minus in span{P0,P1} (negative definite), V_plus unit in span{P2,P3,P4};
// returns V_minus + sqrt(1 - <V_minus,V_minus>) V_plus.
S22Point s22_chart(const Vec5& v_minus, const Vec5& v_plus, double tol = 1e-8);

}  // namespace et
