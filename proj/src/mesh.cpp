#include "et/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <mutex>
#include <thread>

#include "et/errors.hpp"

namespace et {

namespace {

int env_threads() {
  const char* s = std::getenv("ET_THREADS");
  if (!s) return (int)std::thread::hardware_concurrency();
  int n = std::atoi(s);
  return n > 0 ? n : 1;
}

// Runs body(j) for j in [0, n) on up to env_threads() workers.  Each call
// writes only its own output slots, so the result is thread-count
// independent.
template <class F>
void parallel_rows(int n, F body) {
  int workers = std::min(std::max(env_threads(), 1), n);
  if (workers <= 1) {
    for (int j = 0; j < n; ++j) body(j);
    return;
  }
  std::vector<std::thread> pool;
  std::exception_ptr err;
  std::mutex err_mu;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (int j = w; j < n; j += workers) body(j);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mu);
        if (!err) err = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
}

void append_real(std::string& out, double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  out += buf;
}

int label_code(SurfaceLabel l) { return static_cast<int>(l); }

}  // namespace

Frame23 wall_frame(const S22Point& s) {
  if (std::abs(inner(s.v, s.v) - 1) > 1e-8)
    throw DegenerateInput("wall point is not unit spacelike");
  // Indefinite Gram-Schmidt of the P-basis columns against S, keeping two
  // negative and two positive unit vectors.
  std::vector<Vec5> neg, pos;
  std::vector<std::pair<Vec5, double>> accepted = {{s.v, 1.0}};
  Mat5 P = t_lp();
  for (int i = 0; i < 5 && (neg.size() < 2 || pos.size() < 2); ++i) {
    Vec5 v = P.col(i);
    for (const auto& [b, sign] : accepted) v -= sign * inner(v, b) * b;
    double q = inner(v, v);
    if (std::abs(q) < 1e-6) continue;
    v /= std::sqrt(std::abs(q));
    double sign = q > 0 ? 1.0 : -1.0;
    accepted.push_back({v, sign});
    (sign > 0 ? pos : neg).push_back(v);
  }
  if (neg.size() < 2 || pos.size() < 2)
    throw DegenerateInput("could not complete the wall basis");
  // Resolve orientation: validate_frame wants unit determinant and a
  // future-pointing orientation bivector.
  for (int flip : {0, 1}) {
    for (int swap : {0, 1}) {
      Frame23 f;
      f.kind = BasisKind::pseudo_orthogonal;
      f.cols.col(0) = neg[0];
      f.cols.col(1) = flip ? Vec5(-neg[1]) : neg[1];
      f.cols.col(2) = swap ? pos[1] : pos[0];
      f.cols.col(3) = swap ? pos[0] : pos[1];
      f.cols.col(4) = s.v;
      if (validate_frame(f).pass) return f;
    }
  }
  throw DegenerateInput("wall basis admits no valid orientation");
}

SurfaceMesh surface_mesh(const Immersion& f, const MeshDomain& dom, int na,
                         int nb, const Frame23& wall, double tol) {
  if (na < 2 || nb < 2) throw BadSpec("mesh grid needs at least 2x2 vertices");
  if (!(dom.a1 > dom.a0) || !(dom.b1 > dom.b0))
    throw BadSpec("empty mesh chart window");
  SurfaceMesh m;
  m.na = na;
  m.nb = nb;
  m.wrap_a = dom.wrap_a;
  m.wrap_b = dom.wrap_b;
  double ha = (dom.a1 - dom.a0) / (dom.wrap_a ? na : na - 1);
  double hb = (dom.b1 - dom.b0) / (dom.wrap_b ? nb : nb - 1);
  m.vertices.resize((size_t)na * nb);
  S22Point s{wall.col(4)};
  std::vector<double> slack((size_t)na * nb, 0.0);
  parallel_rows(nb, [&](int j) {
    for (int i = 0; i < na; ++i) {
      MeshVertex& v = m.vertices[(size_t)j * na + i];
      v.a = dom.a0 + i * ha;
      v.b = dom.b0 + j * hb;
      auto cl = classify_point(f, v.a, v.b, tol, nullptr,
                               /*with_conformal_residual=*/false);
      v.rho = cl.rho;
      v.label = cl.label;
      v.cos_b = std::abs(std::cos(v.b));
      EinsteinPoint p = normalize_ray(f.point(v.a, v.b));
      v.chamber = chamber_sign(p, s);
      v.toro = toroidal_project(p, wall);
      const Vec3& e = v.toro.euclid;
      double ring = std::hypot(e.x(), e.y()) - 2;
      slack[(size_t)j * na + i] = ring * ring + e.z() * e.z() - 1;
    }
  });
  m.torus_violation = *std::max_element(slack.begin(), slack.end());
  int qa = dom.wrap_a ? na : na - 1, qb = dom.wrap_b ? nb : nb - 1;
  m.faces.reserve((size_t)qa * qb);
  for (int j = 0; j < qb; ++j) {
    int jn = (j + 1) % nb;
    for (int i = 0; i < qa; ++i) {
      int in = (i + 1) % na;
      m.faces.push_back(
          {j * na + i, j * na + in, jn * na + in, jn * na + i});
    }
  }
  return m;
}

std::string obj_text(const SurfaceMesh& m) {
  std::string out;
  out.reserve(m.vertices.size() * 64 + m.faces.size() * 32);
  for (const auto& v : m.vertices) {
    out += "v ";
    append_real(out, v.toro.euclid.x());
    out += ' ';
    append_real(out, v.toro.euclid.y());
    out += ' ';
    append_real(out, v.toro.euclid.z());
    out += '\n';
  }
  char buf[64];
  for (const auto& q : m.faces) {
    std::snprintf(buf, sizeof buf, "f %d %d %d %d\n", q[0] + 1, q[1] + 1,
                  q[2] + 1, q[3] + 1);
    out += buf;
  }
  return out;
}

std::string ply_text(const SurfaceMesh& m) {
  std::string out = "ply\nformat ascii 1.0\n";
  char buf[96];
  std::snprintf(buf, sizeof buf, "element vertex %zu\n", m.vertices.size());
  out += buf;
  out +=
      "property double x\nproperty double y\nproperty double z\n"
      "property double rho\nproperty int label\nproperty int chamber\n"
      "property double cosb\n";
  std::snprintf(buf, sizeof buf, "element face %zu\n", m.faces.size());
  out += buf;
  out += "property list uchar int vertex_indices\nend_header\n";
  for (const auto& v : m.vertices) {
    append_real(out, v.toro.euclid.x());
    out += ' ';
    append_real(out, v.toro.euclid.y());
    out += ' ';
    append_real(out, v.toro.euclid.z());
    out += ' ';
    append_real(out, v.rho);
    std::snprintf(buf, sizeof buf, " %d %d ", label_code(v.label), v.chamber);
    out += buf;
    append_real(out, v.cos_b);
    out += '\n';
  }
  for (const auto& q : m.faces) {
    std::snprintf(buf, sizeof buf, "4 %d %d %d %d\n", q[0], q[1], q[2], q[3]);
    out += buf;
  }
  return out;
}

}  // namespace et
