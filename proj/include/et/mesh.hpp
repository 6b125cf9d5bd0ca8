#pragma once
#include <array>
#include <string>
#include <vector>

#include "et/einstein.hpp"
#include "et/tube.hpp"

namespace et {

// One sampled surface point with its solid-torus embedding and the
// classification scalars exported per vertex.
struct MeshVertex {
  double a = 0, b = 0;       // chart coordinates
  ToroidalCoords toro;       // projection relative to the wall basis
  double rho = 0;            // rho_f = h11^2 - h12^2
  SurfaceLabel label = SurfaceLabel::Umbilic;
  int chamber = 0;           // sign of the pairing with the wall point
  double cos_b = 0;          // |cos b| (umbilic proximity on tube charts)
};

struct SurfaceMesh {
  int na = 0, nb = 0;  // vertex grid sizes; index = j * na + i
  bool wrap_a = false, wrap_b = false;
  std::vector<MeshVertex> vertices;
  std::vector<std::array<int, 4>> faces;  // quads, counter-clockwise in chart
  // max over vertices of (sqrt(x^2+y^2) - 2)^2 + z^2 - 1: containment slack
  double torus_violation = 0;
};

struct MeshDomain {
  double a0 = 0, a1 = 1, b0 = 0, b1 = 1;
  // A wrapped direction is periodic: the right/top vertex row is identified
  // with the left/bottom one and the endpoint column is not duplicated.
  bool wrap_a = false, wrap_b = false;
};

// Completes a unit spacelike vector S to a pseudo-orthogonal wall basis
// (B0, B1 negative, B2, B3, B4 = S positive) passing validate_frame.
Frame23 wall_frame(const S22Point& s);

// Samples the immersion on an na x nb chart grid, classifies every vertex,
// projects to the solid torus, and builds the quad faces.  tol is the
// classification tolerance.
SurfaceMesh surface_mesh(const Immersion& f, const MeshDomain& dom, int na,
                         int nb, const Frame23& wall, double tol = 1e-8);

// Wavefront OBJ text of the geometry (vertices and quad faces).
std::string obj_text(const SurfaceMesh& m);
// ASCII PLY text with the per-vertex scalars rho, label, chamber, cos_b.
std::string ply_text(const SurfaceMesh& m);

}  // namespace et
