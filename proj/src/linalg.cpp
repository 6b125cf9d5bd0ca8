#include "et/linalg.hpp"

#include <cmath>

namespace et {

const Mat5& metric_lightcone() {
  static const Mat5 h = [] {
    Mat5 m = Mat5::Zero();
    m(0, 4) = m(4, 0) = -1;
    m(1, 1) = -1;
    m(2, 2) = 1;
    m(3, 3) = 1;
    return m;
  }();
  return h;
}

const Mat5& metric_pseudo_orthogonal() {
  static const Mat5 g = [] {
    Mat5 m = Mat5::Identity();
    m(0, 0) = m(1, 1) = -1;
    return m;
  }();
  return g;
}

const Mat5& t_lp() {
  static const Mat5 t = [] {
    const double r = 1.0 / std::sqrt(2.0);
    Mat5 m = Mat5::Identity();
    m(0, 0) = r;
    m(4, 0) = r;
    m(0, 4) = -r;
    m(4, 4) = r;
    return m;
  }();
  return t;
}

const Mat5& t_lp_inv() {
  static const Mat5 t = t_lp().inverse();
  return t;
}

double inner(const Vec5& x, const Vec5& y) {
  return -(x[0] * y[4] + x[4] * y[0]) - x[1] * y[1] + x[2] * y[2] +
         x[3] * y[3];
}

double bivector_pair(const Vec5& x, const Vec5& y, const Vec5& v,
                     const Vec5& w) {
  return inner(x, v) * inner(y, w) - inner(y, v) * inner(x, w);
}

bool is_future_null_bivector(const Vec5& v, const Vec5& w, double tol) {
  const double scale =
      std::max({v.norm() * v.norm(), w.norm() * w.norm(), v.norm() * w.norm()});
  if (scale < tol) throw NotNullPlane("zero bivector");
  // Totally null plane: all three products vanish.
  if (std::abs(inner(v, v)) > tol * scale ||
      std::abs(inner(w, w)) > tol * scale ||
      std::abs(inner(v, w)) > tol * scale)
    throw NotNullPlane("plane is not totally null");
  // Simple-bivector norm (euclidean) to reject v ^ w = 0.
  double biv2 = v.squaredNorm() * w.squaredNorm() - std::pow(v.dot(w), 2);
  if (biv2 < tol * tol * scale * scale)
    throw NotNullPlane("vectors are linearly dependent");
  // Reference pair: P0 = (E0+E4)/sqrt2, P1 = E1; pairing with the reference
  // never vanishes on the null-bivector cone minus the zero section, so its
  // sign separates the two components.  P0^P1 pairs positively with itself.
  const Vec5 p0 = t_lp().col(0);
  const Vec5 p1 = t_lp().col(1);
  return bivector_pair(v, w, p0, p1) > 0;
}

FrameValidation validate_frame(const Frame23& f, double tol) {
  const Mat5& expected = (f.kind == BasisKind::lightcone)
                             ? metric_lightcone()
                             : metric_pseudo_orthogonal();
  FrameValidation r;
  Mat5 gram = f.cols.transpose() * metric_lightcone() * f.cols;
  r.gram_residual = (gram - expected).cwiseAbs().maxCoeff();
  r.det_residual = std::abs(f.cols.determinant() - 1.0);
  Vec5 a, b;
  if (f.kind == BasisKind::lightcone) {
    a = f.col(0);
    b = f.col(1) + f.col(2);
  } else {
    a = f.col(0) - f.col(4);
    b = f.col(1) + f.col(2);
  }
  try {
    r.future = is_future_null_bivector(a, b);
  } catch (const NotNullPlane&) {
    r.future = false;
  }
  r.pass = r.gram_residual < tol && r.det_residual < tol && r.future;
  return r;
}

Frame23 to_pseudo_orthogonal(const Frame23& f) {
  if (f.kind == BasisKind::pseudo_orthogonal) return f;
  return Frame23{f.cols * t_lp(), BasisKind::pseudo_orthogonal};
}

Frame23 to_lightcone(const Frame23& f) {
  if (f.kind == BasisKind::lightcone) return f;
  return Frame23{f.cols * t_lp_inv(), BasisKind::lightcone};
}

double o23_residual(const Mat5& a) {
  const Mat5& h = metric_lightcone();
  return (a.transpose() * h + h * a).cwiseAbs().maxCoeff();
}

bool is_o23(const Mat5& a, double tol) { return o23_residual(a) < tol; }

namespace {
Mat5 eij(int i, int j) {  // E^i_j : takes Ej to Ei
  Mat5 m = Mat5::Zero();
  m(i, j) = 1;
  return m;
}
}  // namespace

const std::array<Mat5, 10>& o23_basis() {
  static const std::array<Mat5, 10> basis = {
      eij(0, 0) - eij(4, 4),  // M00
      eij(1, 0) - eij(4, 1),  // M10
      eij(2, 0) + eij(4, 2),  // M20
      eij(3, 0) + eij(4, 3),  // M30
      eij(2, 1) + eij(1, 2),  // M21
      eij(3, 1) + eij(1, 3),  // M31
      eij(3, 2) - eij(2, 3),  // M32
      eij(1, 4) - eij(0, 1),  // M14
      eij(2, 4) + eij(0, 2),  // M24
      eij(3, 4) + eij(0, 3),  // M34
  };
  return basis;
}

std::array<double, 10> o23_coords(const Mat5& a) {
  // Each basis element owns the matrix slot of its leading entry.
  static const int slots[10][2] = {{0, 0}, {1, 0}, {2, 0}, {3, 0}, {2, 1},
                                   {3, 1}, {3, 2}, {1, 4}, {2, 4}, {3, 4}};
  std::array<double, 10> c;
  for (int k = 0; k < 10; ++k) c[k] = a(slots[k][0], slots[k][1]);
  return c;
}

Mat5 o23_from_coords(const std::array<double, 10>& c) {
  Mat5 m = Mat5::Zero();
  for (int k = 0; k < 10; ++k) m += c[k] * o23_basis()[k];
  return m;
}

Mat5 maurer_cartan(const FrameField1& F, double at, double step) {
  Mat5 d = (F(at + step) - F(at - step)) / (2 * step);
  return F(at).inverse() * d;
}

Mat5 maurer_cartan(const FrameField2& F, double a, double b, int dir,
                   double step) {
  Mat5 d;
  if (dir == 0)
    d = (F(a + step, b) - F(a - step, b)) / (2 * step);
  else
    d = (F(a, b + step) - F(a, b - step)) / (2 * step);
  return F(a, b).inverse() * d;
}

double mc_equation_residual(const FrameField2& F, double a, double b,
                            double step) {
  auto phi = [&](double x, double y, int dir) {
    return maurer_cartan(F, x, y, dir, step);
  };
  Mat5 d1_phi2 = (phi(a + step, b, 1) - phi(a - step, b, 1)) / (2 * step);
  Mat5 d2_phi1 = (phi(a, b + step, 0) - phi(a, b - step, 0)) / (2 * step);
  Mat5 p1 = phi(a, b, 0), p2 = phi(a, b, 1);
  Mat5 res = d1_phi2 - d2_phi1 + p1 * p2 - p2 * p1;
  return res.cwiseAbs().maxCoeff();
}

Signature subspace_signature(const std::vector<Vec5>& vs, double tol) {
  const int n = static_cast<int>(vs.size());
  if (n == 0 || n > 5) throw DependentInput("need 1..5 vectors");
  Eigen::MatrixXd m(5, n);
  for (int i = 0; i < n; ++i) m.col(i) = vs[i];
  Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
  lu.setThreshold(tol);
  if (lu.rank() < n) throw DependentInput("vectors are linearly dependent");
  Eigen::MatrixXd gram = m.transpose() * metric_lightcone() * m;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
  Signature s;
  double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  for (int i = 0; i < n; ++i) {
    double ev = es.eigenvalues()[i];
    if (ev > tol * scale)
      ++s.positive;
    else if (ev < -tol * scale)
      ++s.negative;
    else
      ++s.zero;
  }
  return s;
}

Eigen::MatrixXd orthogonal_complement(const std::vector<Vec5>& vs,
                                      double tol) {
  const int n = static_cast<int>(vs.size());
  Eigen::MatrixXd m(n, 5);
  for (int i = 0; i < n; ++i) m.row(i) = (metric_lightcone() * vs[i]).transpose();
  Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
  lu.setThreshold(tol);
  if (lu.rank() < n) throw DependentInput("vectors are linearly dependent");
  return lu.kernel();
}

double det5(const Vec5& a, const Vec5& b, const Vec5& c, const Vec5& d,
            const Vec5& e) {
  Mat5 m;
  m << a, b, c, d, e;
  return m.determinant();
}

}  // namespace et
