// Verification module: structure-form convergence, harmonicity of the
// conformal Gauss map, infinitesimal isothermic deformations, and
// second-order deformation pairs.
#include <cmath>
#include <memory>

#include "doctest.h"
#include "et/curve.hpp"
#include "et/errors.hpp"
#include "et/tube.hpp"
#include "et/verify.hpp"

using namespace et;
using doctest::Approx;

namespace {

std::shared_ptr<Curve> make(const CurveSpec& s) {
  return std::make_shared<Curve>(s);
}

bool orders_quadratic(const ResidualReport& r) {
  if (r.orders.size() != 2) return false;
  for (double o : r.orders)
    if (o < 1.7 || o > 2.5) return false;
  return true;
}

}  // namespace

TEST_CASE("structure forms match finite differences at quadratic order") {
  for (auto spec : {circle_spec(), hyperbola_spec(), parabola_spec()}) {
    TubeSurface tube(make(spec), TubeKind::Exceptional);
    auto rep = structure_form_check(tube);
    CAPTURE(spec.name);
    CHECK(rep.pass);
    CHECK(orders_quadratic(rep));
    CHECK(rep.residuals.front() < 1e-1);
  }
}

TEST_CASE("structure forms of general-type tubes converge quadratically") {
  auto knot = make(torus_knot_spec(2, 3, 0.5));
  for (auto kind : {TubeKind::Left, TubeKind::Right}) {
    TubeSurface tube(knot, kind);
    auto rep = structure_form_check(tube);
    CAPTURE(to_string(kind));
    CHECK(rep.pass);
    CHECK(orders_quadratic(rep));
  }
}

TEST_CASE("parabola tube has vanishing alpha component") {
  // alpha = h zeta and the parabola conic has h = 0, so the antisymmetric
  // part of the (M14, M24) block of the closed form must vanish.
  TubeSurface tube(make(parabola_spec()), TubeKind::Exceptional);
  for (double t : {0.2, 1.1, 2.7}) {
    for (double th : {0.3, -0.4}) {
      auto c = o23_coords(structure_form_closed(tube, t, th, 0));
      CHECK(std::abs(c[7] - (-c[8])) < 1e-14);
      CHECK(std::abs(c[7]) < 1e-14);
    }
  }
  // the circle conic has h = -1: alpha = -w on d/dt
  TubeSurface ct(make(circle_spec()), TubeKind::Exceptional);
  auto sm = ct.biisotropic().sample(0.4, 2);
  auto cc = o23_coords(structure_form_closed(ct, 0.4, 0.3, 0));
  CHECK(cc[7] == Approx(-sm.w.value()).epsilon(1e-12));
}

TEST_CASE("structure forms are undefined at the umbilic locus") {
  TubeSurface tube(make(circle_spec()), TubeKind::Exceptional);
  CHECK_THROWS_AS(structure_form_closed(tube, 0.3, EIGEN_PI / 2, 0),
                  UmbilicLocus);
  std::vector<ChartPoint> bad = {{0.3, EIGEN_PI / 2 + 1e-4}};
  CHECK_THROWS_AS(structure_form_check(tube, bad), UmbilicLocus);
}

TEST_CASE("conformal Gauss map is harmonic: native chart residual is zero") {
  // In the native tube chart g_theta,theta = 0 and the Gauss map is
  // fiber-constant, so the discrete tension field vanishes to roundoff.
  ChartWindow w{0.3, 1.5, -1.1, 1.1};
  TubeSurface ct(make(circle_spec()), TubeKind::Exceptional);
  auto rep = harmonicity_check(ct, w);
  CHECK(rep.max_residual < 1e-9);
  // refinement only stirs roundoff: no residual exceeds the discretization
  // level a genuine second-order operator would show at 33^2 (~1e-3)
  for (double r : rep.residuals) CHECK(r < 1e-9);
}

TEST_CASE("conformal Gauss map is harmonic: sheared-chart convergence") {
  ChartWindow w{0.3, 1.5, -1.1, 1.1};
  TubeSurface ct(make(circle_spec()), TubeKind::Exceptional);
  TubeSurface lt(make(torus_knot_spec(2, 3, 0.5)), TubeKind::Left);
  ShearedImmersion sc(ct, 0.2), sl(lt, 0.2);
  auto rc = harmonicity_check(sc, w);
  CHECK(rc.pass);
  CHECK(orders_quadratic(rc));
  auto rl = harmonicity_check(sl, w);
  CHECK(rl.pass);
  CHECK(orders_quadratic(rl));
}

TEST_CASE("perturbed Gauss map fails the harmonicity check") {
  ChartWindow w{0.3, 1.5, -1.1, 1.1};
  TubeSurface ct(make(circle_spec()), TubeKind::Exceptional);
  ShearedImmersion sc(ct, 0.2);
  auto rep = harmonicity_check(sc, w, 0.01);
  CHECK(!rep.pass);
  CHECK(rep.max_residual > 1e-3);
}

TEST_CASE("infinitesimal deformations: closedness and shape") {
  TubeSurface tube(make(circle_spec()), TubeKind::Exceptional);

  auto zero = infinitesimal_deformation(tube, [](double) { return 0.0; });
  CHECK(zero.closedness.pass);
  CHECK(zero.shape.pass);
  for (const auto& d : zero.delta_samples)
    CHECK(d.cwiseAbs().maxCoeff() < 1e-14);

  auto one = infinitesimal_deformation(tube, [](double) { return 1.0; });
  CHECK(one.closedness.pass);
  CHECK(one.shape.pass);

  auto wave =
      infinitesimal_deformation(tube, [](double t) { return std::sin(t); });
  CHECK(wave.closedness.pass);
  CHECK(wave.shape.pass);

  // the two nontrivial generators really differ
  double diff = 0;
  for (size_t i = 0; i < one.delta_samples.size(); ++i)
    diff = std::max(diff, (one.delta_samples[i] - wave.delta_samples[i])
                              .cwiseAbs()
                              .maxCoeff());
  CHECK(diff > 1e-2);
}

TEST_CASE("infinitesimal deformations on general-type tubes") {
  TubeSurface tube(make(torus_knot_spec(2, 3, 0.5)), TubeKind::Left);
  auto d = infinitesimal_deformation(tube, [](double t) { return std::cos(t); });
  CHECK(d.closedness.pass);
  CHECK(d.shape.pass);
}

TEST_CASE("identical conics deform onto each other to third order") {
  auto circle = make(circle_spec());
  auto d = exceptional_deformation_pair(circle, circle);
  CHECK(d.contact2.pass);
  CHECK(d.contact2.max_residual < 1e-7);
  CHECK(d.contact3.pass);
  for (const auto& Delta : d.Delta)
    CHECK((Delta - Mat5::Identity()).cwiseAbs().maxCoeff() < 1e-7);
}

TEST_CASE("distinct directrices give second- but not third-order contact") {
  auto circle = make(circle_spec());
  auto parab = make(parabola_spec());
  auto synth = make(affine_ode_spec({-1.0, 0.1}));

  auto dp = exceptional_deformation_pair(circle, parab);
  CHECK(dp.contact2.pass);
  CHECK(dp.contact2.max_residual < 1e-6);
  CHECK(!dp.contact3.pass);
  CHECK(dp.contact3.max_residual > 1.0);

  auto ds = exceptional_deformation_pair(circle, synth);
  CHECK(ds.contact2.pass);
  CHECK(ds.contact2.max_residual < 1e-6);
  CHECK(!ds.contact3.pass);
  CHECK(ds.contact3.max_residual > 1.0);

  // negative-component tubes deform the same way
  auto dn = exceptional_deformation_pair(circle, synth, -1);
  CHECK(dn.contact2.pass);
  CHECK(!dn.contact3.pass);
}

TEST_CASE("swapping the pair inverts the deformation isometries") {
  auto circle = make(circle_spec());
  auto synth = make(affine_ode_spec({-1.0, 0.1}));
  auto ab = exceptional_deformation_pair(circle, synth);
  auto ba = exceptional_deformation_pair(synth, circle);
  REQUIRE(ab.Delta.size() == ba.Delta.size());
  for (size_t i = 0; i < ab.Delta.size(); ++i)
    CHECK((ab.Delta[i] * ba.Delta[i] - Mat5::Identity())
              .cwiseAbs()
              .maxCoeff() < 1e-8);
}

TEST_CASE("general-type tubes deform iff the shared curvature coincides") {
  auto knot = make(torus_knot_spec(2, 3, 0.5));

  // left tubes share kappa_lambda; shifting kappa_rho preserves contact
  auto dl = general_deformation_pair(knot, TubeKind::Left, 0.2);
  CHECK(dl.contact2.pass);
  CHECK(dl.contact2.max_residual < 1e-6);
  CHECK(!dl.contact3.pass);

  // shifting kappa_lambda breaks it
  auto dln = general_deformation_pair(knot, TubeKind::Left, 0.2, 1, true);
  CHECK(!dln.contact2.pass);
  CHECK(dln.contact2.max_residual > 1e-2);

  // right tubes share kappa_rho
  auto dr = general_deformation_pair(knot, TubeKind::Right, 0.2);
  CHECK(dr.contact2.pass);
  CHECK(!dr.contact3.pass);
  auto drn = general_deformation_pair(knot, TubeKind::Right, 0.2, 1, true);
  CHECK(!drn.contact2.pass);
}

TEST_CASE("general deformation pair rejects exceptional tubes") {
  auto circle = make(circle_spec());
  CHECK_THROWS_AS(general_deformation_pair(circle, TubeKind::Exceptional, 0.1),
                  KindMismatch);
}
