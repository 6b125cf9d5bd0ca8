#include "et/einstein.hpp"

#include <cmath>

namespace et {

EinsteinPoint normalize_ray(const Vec5& v, double tol) {
  double scale = v.squaredNorm();
  if (scale < 1e-24) throw ZeroVector("normalize_ray of zero vector");
  if (std::abs(inner(v, v)) > tol * scale)
    throw NotNull("normalize_ray of non-null vector");
  // P-coordinates: the span{P0,P1} part has squared norm -(p0^2 + p1^2).
  Vec5 p = t_lp_inv() * v;
  double m = p[0] * p[0] + p[1] * p[1];
  if (m < 1e-24) throw ZeroVector("null vector with vanishing negative part");
  return EinsteinPoint{v / std::sqrt(m)};
}

double point_distance(const EinsteinPoint& a, const EinsteinPoint& b) {
  return (a.rep - b.rep).cwiseAbs().maxCoeff();
}

bool same_point(const EinsteinPoint& a, const EinsteinPoint& b, double tol) {
  return point_distance(a, b) < tol;
}

int chamber_sign(const EinsteinPoint& p, const S22Point& s, double zero_tol) {
  double v = inner(p.rep, s.v);
  if (std::abs(v) < zero_tol) return 0;
  return v > 0 ? 1 : -1;
}

ToroidalCoords toroidal_project(const EinsteinPoint& p,
                                const Frame23& wall_basis) {
  Vec5 c = wall_basis.cols.fullPivLu().solve(p.rep);
  double m = c[0] * c[0] + c[1] * c[1];
  if (m < 1e-20) throw DegenerateInput("ray lies on the coordinate axis locus");
  c /= std::sqrt(m);
  ToroidalCoords out;
  out.r = std::sqrt(c[2] * c[2] + c[3] * c[3]);
  out.r = std::min(out.r, 1.0);
  out.phi = std::atan2(c[1], c[0]);
  if (out.phi < 0) out.phi += 2 * M_PI;
  out.theta = (out.r < 1e-12) ? 0.0 : std::atan2(c[3], c[2]);
  if (out.theta < 0) out.theta += 2 * M_PI;
  out.eps = (out.r > 1 - 1e-12) ? 1 : (c[4] >= 0 ? 1 : -1);
  double rc = out.r * std::cos(out.theta) + 2;
  out.euclid = Vec3(rc * std::cos(out.phi), rc * std::sin(out.phi),
                    out.r * std::sin(out.theta));
  return out;
}

EinsteinPoint toroidal_unproject(const ToroidalCoords& c,
                                 const Frame23& wall_basis) {
  double w = std::sqrt(std::max(0.0, 1 - c.r * c.r));
  Vec5 v = std::cos(c.phi) * wall_basis.col(0) +
           std::sin(c.phi) * wall_basis.col(1) +
           c.r * std::cos(c.theta) * wall_basis.col(2) +
           c.r * std::sin(c.theta) * wall_basis.col(3) +
           c.eps * w * wall_basis.col(4);
  return normalize_ray(v);
}

S22Point s22_chart(const Vec5& v_minus, const Vec5& v_plus, double tol) {
  Vec5 pm = t_lp_inv() * v_minus;
  Vec5 pp = t_lp_inv() * v_plus;
  if (std::abs(pm[2]) + std::abs(pm[3]) + std::abs(pm[4]) > tol)
    throw BadFactor("V_minus not in span{P0,P1}");
  if (std::abs(pp[0]) + std::abs(pp[1]) > tol)
    throw BadFactor("V_plus not in span{P2,P3,P4}");
  if (std::abs(inner(v_plus, v_plus) - 1) > tol)
    throw BadFactor("V_plus not unit");
  double q = inner(v_minus, v_minus);
  return S22Point{v_minus + std::sqrt(1 - q) * v_plus};
}

}  // namespace et
