// Mesh export: wall bases, solid-torus sampling, OBJ/PLY serialization.
#include <cmath>
#include <memory>
#include <set>

#include "doctest.h"
#include "et/curve.hpp"
#include "et/errors.hpp"
#include "et/mesh.hpp"

using namespace et;
using doctest::Approx;

namespace {

Vec5 e(int i) {
  Vec5 v = Vec5::Zero();
  v[i] = 1;
  return v;
}

}  // namespace

TEST_CASE("wall_frame completes a unit spacelike vector to a valid basis") {
  for (Vec5 s : {Vec5(e(3)), Vec5(t_lp().col(3)),
                 Vec5((0.6 * e(3) + 0.8 * t_lp().col(4)).eval())}) {
    REQUIRE(inner(s, s) == Approx(1.0));
    Frame23 w = wall_frame(S22Point{s});
    CHECK(validate_frame(w).pass);
    CHECK((w.col(4) - s).norm() == Approx(0.0).epsilon(1e-12));
  }
  Vec5 timelike = t_lp().col(0);
  CHECK_THROWS_AS(wall_frame(S22Point{timelike}), DegenerateInput);
}

TEST_CASE("circle tube mesh: positive component sits in the positive chamber") {
  auto circle = std::make_shared<Curve>(circle_spec());
  TubeSurface tube(circle, TubeKind::Exceptional);
  Frame23 wall = wall_frame(S22Point{e(3)});
  MeshDomain dom{0, 2 * EIGEN_PI, -EIGEN_PI / 2, EIGEN_PI / 2, true, false};
  SurfaceMesh m = surface_mesh(tube, dom, 24, 17, wall);
  REQUIRE((int)m.vertices.size() == 24 * 17);
  REQUIRE((int)m.faces.size() == 24 * 16);

  int umbilic = 0;
  for (const auto& v : m.vertices) {
    bool boundary = std::abs(std::cos(v.b)) < 1e-9;
    if (boundary) {
      CHECK(v.label == SurfaceLabel::Umbilic);
      // the umbilic boundary circles lie on the AdS wall
      CHECK(v.chamber == 0);
      CHECK(v.toro.r == Approx(1.0).epsilon(1e-9));
      ++umbilic;
    } else {
      CHECK(v.label == SurfaceLabel::QuasiUmbilic);
      CHECK(std::abs(v.rho) < 1e-8);
      CHECK(v.chamber == 1);
    }
  }
  CHECK(umbilic == 2 * 24);  // the two theta = +-pi/2 rows
  CHECK(m.torus_violation < 1e-9);
}

TEST_CASE("mesh vertices reconstruct their null rays") {
  auto knot = std::make_shared<Curve>(torus_knot_spec(2, 3, 0.5));
  TubeSurface tube(knot, TubeKind::Left);
  Frame23 wall = wall_frame(S22Point{e(3)});
  MeshDomain dom{0, 2 * EIGEN_PI, 0, 2 * EIGEN_PI, true, true};
  SurfaceMesh m = surface_mesh(tube, dom, 16, 16, wall, 1e-6);
  CHECK((int)m.faces.size() == 16 * 16);
  CHECK(m.torus_violation < 1e-9);
  for (int k = 0; k < (int)m.vertices.size(); k += 7) {
    const auto& v = m.vertices[k];
    EinsteinPoint back = toroidal_unproject(v.toro, wall);
    EinsteinPoint orig = normalize_ray(tube.lift(v.a, v.b));
    CHECK(point_distance(back, orig) < 1e-9);
  }
  // face indices are valid and every vertex is referenced
  std::set<int> used;
  for (const auto& q : m.faces)
    for (int idx : q) {
      CHECK(idx >= 0);
      CHECK(idx < (int)m.vertices.size());
      used.insert(idx);
    }
  CHECK((int)used.size() == (int)m.vertices.size());
}

TEST_CASE("Viviani mesh carries both curvature regions and no umbilics") {
  VivianiSurface viv;
  Frame23 wall = wall_frame(S22Point{t_lp().col(3)});
  MeshDomain dom{0, 2 * EIGEN_PI, 0, 2 * EIGEN_PI, true, true};
  SurfaceMesh m = surface_mesh(viv, dom, 40, 40, wall, 1e-8);
  int e2 = 0, h2 = 0, umb = 0, qu = 0;
  for (const auto& v : m.vertices) {
    switch (v.label) {
      case SurfaceLabel::Elliptic2: ++e2; break;
      case SurfaceLabel::Hyperbolic2: ++h2; break;
      case SurfaceLabel::Umbilic: ++umb; break;
      case SurfaceLabel::QuasiUmbilic: ++qu; break;
    }
  }
  CHECK(e2 > 0);
  CHECK(h2 > 0);
  CHECK(umb == 0);
  CHECK(m.torus_violation < 1e-9);
}

TEST_CASE("mesh serialization is deterministic and well-formed") {
  auto circle = std::make_shared<Curve>(circle_spec());
  TubeSurface tube(circle, TubeKind::Exceptional);
  Frame23 wall = wall_frame(S22Point{e(3)});
  MeshDomain dom{0, 2 * EIGEN_PI, -1.2, 1.2, true, false};
  SurfaceMesh m1 = surface_mesh(tube, dom, 12, 9, wall);
  SurfaceMesh m2 = surface_mesh(tube, dom, 12, 9, wall);

  std::string obj = obj_text(m1);
  CHECK(obj == obj_text(m2));
  std::string ply = ply_text(m1);
  CHECK(ply == ply_text(m2));

  // counts in the serialized output match the mesh
  size_t v_lines = 0, f_lines = 0, pos = 0;
  while ((pos = obj.find('\n', pos)) != std::string::npos) {
    ++pos;
    if (obj.compare(pos, 2, "v ") == 0) ++v_lines;
    if (obj.compare(pos, 2, "f ") == 0) ++f_lines;
  }
  v_lines += obj.compare(0, 2, "v ") == 0 ? 1 : 0;
  CHECK(v_lines == m1.vertices.size());
  CHECK(f_lines == m1.faces.size());
  CHECK(ply.find("element vertex 108") != std::string::npos);
  CHECK(ply.find("end_header") != std::string::npos);
  // 17-significant-digit reals survive the round trip
  CHECK(obj.find('.') != std::string::npos);
}

TEST_CASE("degenerate mesh requests are rejected") {
  auto circle = std::make_shared<Curve>(circle_spec());
  TubeSurface tube(circle, TubeKind::Exceptional);
  Frame23 wall = wall_frame(S22Point{e(3)});
  MeshDomain dom{0, 2 * EIGEN_PI, -1.2, 1.2, true, false};
  CHECK_THROWS_AS(surface_mesh(tube, dom, 1, 9, wall), BadSpec);
  MeshDomain empty{1, 1, 0, 1, false, false};
  CHECK_THROWS_AS(surface_mesh(tube, empty, 8, 8, wall), BadSpec);
}
