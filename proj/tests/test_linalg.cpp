#include <random>
#include <unsupported/Eigen/MatrixFunctions>

#include "doctest.h"
#include "et/linalg.hpp"

using namespace et;

namespace {
Vec5 e(int i) {
  Vec5 v = Vec5::Zero();
  v[i] = 1;
  return v;
}

std::mt19937_64 rng(12345);
double urand() {
  return std::uniform_real_distribution<double>(-1, 1)(rng);
}
Vec5 vrand() {
  Vec5 v;
  for (int i = 0; i < 5; ++i) v[i] = urand();
  return v;
}
}  // namespace

TEST_CASE("metric has signature (2,3) and the expected products") {
  Eigen::SelfAdjointEigenSolver<Mat5> es(metric_lightcone());
  int neg = 0, pos = 0;
  for (int i = 0; i < 5; ++i) (es.eigenvalues()[i] < 0 ? neg : pos)++;
  CHECK(neg == 2);
  CHECK(pos == 3);
  CHECK(inner(e(0), e(4)) == doctest::Approx(-1));
  CHECK(inner(e(0), e(0)) == doctest::Approx(0));
  CHECK(inner(e(4), e(4)) == doctest::Approx(0));
  CHECK(inner(e(1), e(1)) == doctest::Approx(-1));
  CHECK(inner(e(2), e(2)) == doctest::Approx(1));
  CHECK(inner(e(3), e(3)) == doctest::Approx(1));
}

TEST_CASE("t_lp converts the Gram matrix to diag(-1,-1,1,1,1)") {
  Mat5 g = t_lp().transpose() * metric_lightcone() * t_lp();
  CHECK((g - metric_pseudo_orthogonal()).cwiseAbs().maxCoeff() < 1e-14);
  CHECK((t_lp() * t_lp_inv() - Mat5::Identity()).cwiseAbs().maxCoeff() <
        1e-14);
}

TEST_CASE("bivector pairing matches its defining formula on random input") {
  for (int k = 0; k < 20; ++k) {
    Vec5 x = vrand(), y = vrand(), v = vrand(), w = vrand();
    double expect = inner(x, v) * inner(y, w) - inner(y, v) * inner(x, w);
    CHECK(bivector_pair(x, y, v, w) == doctest::Approx(expect));
  }
}

TEST_CASE("future null bivectors") {
  CHECK(is_future_null_bivector(e(0), e(1) + e(2)));
  CHECK_FALSE(is_future_null_bivector(e(1) + e(2), e(0)));
  CHECK(is_future_null_bivector(e(4), e(1) - e(2)));
  CHECK_FALSE(is_future_null_bivector(e(0), -(e(1) + e(2))));
  // Rescaling a generator preserves the component.
  CHECK(is_future_null_bivector(3.0 * e(0), 0.5 * (e(1) + e(2))));
  CHECK_THROWS_AS((void)is_future_null_bivector(e(0), e(2)), NotNullPlane);
  CHECK_THROWS_AS((void)is_future_null_bivector(e(0), 2.0 * e(0)),
                  NotNullPlane);
}

TEST_CASE("frame validation accepts the standard bases only with the right "
          "orientation") {
  Frame23 lc;  // identity, lightcone
  CHECK(validate_frame(lc).pass);
  Frame23 swapped = lc;
  swapped.cols.col(2).swap(swapped.cols.col(3));
  CHECK_FALSE(validate_frame(swapped).pass);

  Frame23 po;
  po.cols = t_lp();
  po.kind = BasisKind::pseudo_orthogonal;
  CHECK(validate_frame(po).pass);
  // flipping one timelike and one spacelike direction keeps det = 1 but
  // reverses the time orientation
  Frame23 past = po;
  past.cols.col(1) *= -1;
  past.cols.col(2) *= -1;
  CHECK_FALSE(validate_frame(past).pass);

  CHECK(validate_frame(to_lightcone(po)).pass);
  CHECK(validate_frame(to_pseudo_orthogonal(lc)).pass);
}

TEST_CASE("o(2,3) basis spans the Lie algebra") {
  const auto& basis = o23_basis();
  Mat5 h = metric_lightcone();
  for (const auto& m : basis)
    CHECK((m.transpose() * h + h * m).cwiseAbs().maxCoeff() < 1e-14);
  std::array<double, 10> c;
  for (auto& x : c) x = urand();
  Mat5 a = o23_from_coords(c);
  CHECK(is_o23(a));
  auto back = o23_coords(a);
  for (int i = 0; i < 10; ++i) CHECK(back[i] == doctest::Approx(c[i]));
}

TEST_CASE("maurer_cartan recovers the generator of a one-parameter group") {
  std::array<double, 10> c;
  for (auto& x : c) x = urand();
  Mat5 a = o23_from_coords(c);
  FrameField1 field = [&](double t) -> Mat5 { return (t * a).exp(); };
  Mat5 phi = maurer_cartan(field, 0.37);
  CHECK((phi - a).cwiseAbs().maxCoeff() < 1e-8);
  CHECK(is_o23(phi, 1e-7));
}

TEST_CASE("structure equation residual vanishes for smooth frame fields") {
  std::array<double, 10> c1, c2;
  for (auto& x : c1) x = urand();
  for (auto& x : c2) x = urand();
  Mat5 a = o23_from_coords(c1), b = o23_from_coords(c2);
  FrameField2 field = [&](double s, double t) -> Mat5 {
    return (s * a).exp() * (t * b).exp();
  };
  CHECK(mc_equation_residual(field, 0.2, -0.3) < 1e-6);
}

TEST_CASE("subspace signatures") {
  auto s = subspace_signature({e(0), e(4)});
  CHECK(s.positive == 1);
  CHECK(s.negative == 1);
  s = subspace_signature({e(0)});
  CHECK(s.zero == 1);
  s = subspace_signature({e(2), e(3), e(0) - e(4)});
  CHECK(s.positive == 3);
  CHECK_THROWS_AS((void)subspace_signature({e(0), 2.0 * e(0)}),
                  DependentInput);
}

TEST_CASE("orthogonal complement") {
  auto comp = orthogonal_complement({e(0), e(2)});
  REQUIRE(comp.cols() == 3);
  for (int j = 0; j < 3; ++j) {
    CHECK(std::abs(inner(e(0), comp.col(j))) < 1e-12);
    CHECK(std::abs(inner(e(2), comp.col(j))) < 1e-12);
  }
}

TEST_CASE("det5 equals the Eigen determinant") {
  Vec5 a = vrand(), b = vrand(), c = vrand(), d = vrand(), f = vrand();
  Mat5 m;
  m << a, b, c, d, f;
  CHECK(det5(a, b, c, d, f) == doctest::Approx(m.determinant()));
}
