#include "et/commands.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>

#include "et/curve.hpp"
#include "et/errors.hpp"
#include "et/mesh.hpp"
#include "et/null_curves.hpp"
#include "et/suite.hpp"
#include "et/tube.hpp"

namespace et {

namespace {

namespace fs = std::filesystem;

std::string jnum(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string jstr(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

void write_file(const fs::path& path, const std::string& content) {
  fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw DomainError("cannot write " + path.string());
  f << content;
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw BadSpec("cannot read spec file " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

struct MeanSpread {
  double mean = 0, spread = 0;
};

MeanSpread stats(const std::vector<double>& v, size_t start, size_t stride) {
  MeanSpread m;
  double lo = 0, hi = 0;
  size_t count = 0;
  for (size_t i = start; i < v.size(); i += stride) {
    if (count == 0) lo = hi = v[i];
    lo = std::min(lo, v[i]);
    hi = std::max(hi, v[i]);
    m.mean += v[i];
    ++count;
  }
  if (count) m.mean /= count;
  m.spread = hi - lo;
  return m;
}

struct Analysis {
  CurveSpec spec;
  std::shared_ptr<Curve> curve;
  NullCurveClass cls = NullCurveClass::NotNull;
  ConstancyReport constancy;
  double unit_residual = 0, null_residual = 0;
  double frame_residual = 0;  // plane drift (biisotropic) or fls residual
  int eta = 0;
};

Analysis analyze_curve(const std::string& text) {
  Analysis a;
  a.spec = CurveSpec::from_json_text(text);
  a.curve = std::make_shared<Curve>(a.spec);
  const int n = 64;
  for (int i = 0; i < n; ++i) {
    double t = a.spec.dom_a + (a.spec.dom_b - a.spec.dom_a) * (i + 0.5) / n;
    Jet5 j = a.curve->jet(t, 1);
    Vec5 g = value(j), gp = deriv(j, 1);
    a.unit_residual = std::max(a.unit_residual, std::abs(inner(g, g) - 1));
    a.null_residual = std::max(a.null_residual, std::abs(inner(gp, gp)));
  }
  a.cls = classify_null_curve(*a.curve, n);
  if (a.cls == NullCurveClass::NotNull || a.cls == NullCurveClass::TypeChanging)
    return a;
  a.constancy = curvature_constancy(a.curve, n);
  if (a.cls == NullCurveClass::Biisotropic) {
    BiisotropicAnalysis an(a.curve, 0.5 * (a.spec.dom_a + a.spec.dom_b));
    for (int i = 0; i < 16; ++i) {
      double t = a.spec.dom_a + (a.spec.dom_b - a.spec.dom_a) * (i + 0.5) / 16;
      a.frame_residual =
          std::max(a.frame_residual, an.sample(t, 4).plane_residual);
    }
  } else {
    GenericAnalysis an(a.curve);
    a.eta = an.eta();
    for (int i = 0; i < 16; ++i) {
      double t = a.spec.dom_a + (a.spec.dom_b - a.spec.dom_a) * (i + 0.5) / 16;
      a.frame_residual = std::max(a.frame_residual, an.sample(t).residual);
    }
  }
  return a;
}

std::string analysis_json(const Analysis& a) {
  std::ostringstream j;
  j << "{\n";
  j << "  \"curve\": " << jstr(a.spec.name) << ",\n";
  j << "  \"class\": " << jstr(to_string(a.cls)) << ",\n";
  if (a.cls == NullCurveClass::Biisotropic) {
    MeanSpread h = stats(a.constancy.values, 0, 1);
    j << "  \"h\": " << jnum(h.mean) << ",\n";
    j << "  \"h_spread\": " << jnum(h.spread) << ",\n";
    j << "  \"h_constant\": " << (a.constancy.constant ? "true" : "false")
      << ",\n";
  } else if (a.cls == NullCurveClass::GenericNegativeType ||
             a.cls == NullCurveClass::GenericPositiveType) {
    MeanSpread kl = stats(a.constancy.values, 0, 2);
    MeanSpread kr = stats(a.constancy.values, 1, 2);
    j << "  \"eta\": " << a.eta << ",\n";
    j << "  \"kappa_lambda\": " << jnum(kl.mean) << ",\n";
    j << "  \"kappa_lambda_spread\": " << jnum(kl.spread) << ",\n";
    j << "  \"kappa_rho\": " << jnum(kr.mean) << ",\n";
    j << "  \"kappa_rho_spread\": " << jnum(kr.spread) << ",\n";
    j << "  \"curvatures_constant\": "
      << (a.constancy.constant ? "true" : "false") << ",\n";
  }
  j << "  \"invariant_residuals\": {\n";
  j << "    \"unit\": " << jnum(a.unit_residual) << ",\n";
  j << "    \"null\": " << jnum(a.null_residual) << ",\n";
  j << "    \"frame\": " << jnum(a.frame_residual) << "\n";
  j << "  },\n";
  j << "  \"samples\": 64\n";
  j << "}\n";
  return j.str();
}

TubeKind parse_kind(const std::string& s, NullCurveClass cls) {
  if (s.empty())
    return cls == NullCurveClass::Biisotropic ? TubeKind::Exceptional
                                              : TubeKind::Left;
  if (s == "exceptional") return TubeKind::Exceptional;
  if (s == "left") return TubeKind::Left;
  if (s == "right") return TubeKind::Right;
  throw BadSpec("unknown tube kind: " + s);
}

std::vector<std::string> parse_components(const std::string& s) {
  if (s == "pos" || s == "neg") return {s};
  if (s == "both" || s.empty()) return {"both"};
  throw BadSpec("unknown component selector: " + s);
}

std::pair<int, int> parse_grid(const std::vector<int>& grid) {
  if (grid.empty()) return {64, 33};
  if (grid.size() != 2) throw BadSpec("--grid needs exactly two sizes");
  if (grid[0] < 9 || grid[1] < 9) throw BadSpec("grid sizes must be >= 9");
  return {grid[0], grid[1]};
}

std::string grid_json(const SurfaceMesh& m, const std::string& curve,
                      const std::string& kind, const std::string& comp,
                      const MeshDomain& dom) {
  int wall = 0;
  for (const auto& v : m.vertices)
    if (v.chamber == 0) ++wall;
  std::ostringstream j;
  j << "{\n";
  j << "  \"curve\": " << jstr(curve) << ",\n";
  j << "  \"kind\": " << jstr(kind) << ",\n";
  j << "  \"component\": " << jstr(comp) << ",\n";
  j << "  \"grid\": [" << m.na << ", " << m.nb << "],\n";
  j << "  \"chart\": {\"t\": [" << jnum(dom.a0) << ", " << jnum(dom.a1)
    << "], \"theta\": [" << jnum(dom.b0) << ", " << jnum(dom.b1)
    << "], \"wrap_t\": " << (dom.wrap_a ? "true" : "false")
    << ", \"wrap_theta\": " << (dom.wrap_b ? "true" : "false") << "},\n";
  j << "  \"torus_violation\": " << jnum(m.torus_violation) << ",\n";
  j << "  \"wall_vertices\": " << wall << ",\n";
  j << "  \"vertices\": [\n";
  for (size_t k = 0; k < m.vertices.size(); ++k) {
    const auto& v = m.vertices[k];
    j << "    {\"t\": " << jnum(v.a) << ", \"theta\": " << jnum(v.b)
      << ", \"rho\": " << jnum(v.rho) << ", \"label\": "
      << jstr(to_string(v.label)) << ", \"chamber\": " << v.chamber << "}"
      << (k + 1 < m.vertices.size() ? "," : "") << "\n";
  }
  j << "  ]\n";
  j << "}\n";
  return j.str();
}

// Writes mesh + grid report for one component of a tube.
void export_tube(const TubeSurface& tube, const std::string& curve_name,
                 const std::string& kind_name, const std::string& comp,
                 int nt, int nth, const fs::path& dir,
                 const std::string& base, double tol) {
  const Curve& c = tube.curve();
  MeshDomain dom;
  dom.a0 = c.dom_a();
  dom.a1 = c.dom_b();
  dom.wrap_a = c.periodic();
  if (comp == "pos") {
    dom.b0 = -EIGEN_PI / 2;
    dom.b1 = EIGEN_PI / 2;
  } else if (comp == "neg") {
    dom.b0 = EIGEN_PI / 2;
    dom.b1 = 3 * EIGEN_PI / 2;
  } else {
    dom.b0 = 0;
    dom.b1 = 2 * EIGEN_PI;
    dom.wrap_b = true;
  }
  Vec5 e3 = Vec5::Zero();
  e3[3] = 1;
  Frame23 wall = wall_frame(S22Point{e3});
  SurfaceMesh m = surface_mesh(tube, dom, nt, nth, wall, tol);
  std::string stem = base + "_" + comp;
  write_file(dir / (stem + ".obj"), obj_text(m));
  write_file(dir / (stem + ".ply"), ply_text(m));
  write_file(dir / (stem + "_grid.json"),
             grid_json(m, curve_name, kind_name, comp, dom));
}

std::string verify_json(const std::string& suite, unsigned seed,
                        const std::vector<CheckResult>& checks) {
  bool all = true;
  for (const auto& c : checks) all = all && c.pass;
  std::ostringstream j;
  j << "{\n";
  j << "  \"suite\": " << jstr(suite) << ",\n";
  j << "  \"seed\": " << seed << ",\n";
  j << "  \"pass\": " << (all ? "true" : "false") << ",\n";
  j << "  \"checks\": [\n";
  for (size_t k = 0; k < checks.size(); ++k) {
    const auto& c = checks[k];
    j << "    {\"criterion\": " << c.criterion << ", \"name\": "
      << jstr(c.name) << ", \"pass\": " << (c.pass ? "true" : "false")
      << ", \"max_residual\": " << jnum(c.max_residual)
      << ", \"tol\": " << jnum(c.tol) << ", \"detail\": " << jstr(c.detail)
      << "}" << (k + 1 < checks.size() ? "," : "") << "\n";
  }
  j << "  ]\n";
  j << "}\n";
  return j.str();
}

std::string residuals_csv(const std::string& suite,
                          const std::vector<CheckResult>& checks) {
  std::string out = "suite,criterion,check,name,value\n";
  for (const auto& c : checks)
    for (const auto& [name, value] : c.residuals)
      out += suite + "," + std::to_string(c.criterion) + "," + c.name + "," +
             name + "," + jnum(value) + "\n";
  return out;
}

fs::path require_out(const RunConfig& cfg) {
  if (cfg.out_dir.empty()) throw BadSpec("--out directory is required");
  return fs::path(cfg.out_dir);
}

double class_tol(const RunConfig& cfg) {
  auto it = cfg.tol.find("classification");
  if (it == cfg.tol.end()) return 1e-8;
  if (!(it->second > 0)) throw BadSpec("tolerance classification must be > 0");
  return it->second;
}

int cmd_analyze(const RunConfig& cfg) {
  fs::path out = require_out(cfg);
  if (cfg.spec_path.empty()) throw BadSpec("--spec file is required");
  Analysis a;
  try {
    a = analyze_curve(read_file(cfg.spec_path));
  } catch (const BadSpec&) {
    throw;
  } catch (const Error& e) {
    std::fprintf(stderr, "classification failure: %s\n", e.what());
    return 3;
  }
  write_file(out / "analysis.json", analysis_json(a));
  std::printf("%s: %s\n", a.spec.name.c_str(), to_string(a.cls));
  if (a.cls == NullCurveClass::NotNull ||
      a.cls == NullCurveClass::TypeChanging) {
    std::fprintf(stderr, "classification failure: %s\n", to_string(a.cls));
    return 3;
  }
  return 0;
}

int cmd_tube(const RunConfig& cfg) {
  fs::path out = require_out(cfg);
  if (cfg.spec_path.empty()) throw BadSpec("--spec file is required");
  auto [nt, nth] = parse_grid(cfg.grid);
  auto comps = parse_components(cfg.component);
  double tol = class_tol(cfg);
  Analysis a = analyze_curve(read_file(cfg.spec_path));
  TubeKind kind = parse_kind(cfg.kind, a.cls);
  try {
    TubeSurface tube(a.curve, kind);
    for (const auto& comp : comps)
      export_tube(tube, a.spec.name, to_string(kind), comp, nt, nth, out,
                  "tube", tol);
  } catch (const Error& e) {
    std::fprintf(stderr, "synthesis failure: %s\n", e.what());
    return 4;
  }
  std::printf("%s: wrote %s tube mesh (%dx%d)\n", a.spec.name.c_str(),
              to_string(kind), nt, nth);
  return 0;
}

int cmd_verify(const RunConfig& cfg) {
  fs::path out = require_out(cfg);
  SuiteOptions opt;
  opt.seed = cfg.seed;
  opt.tol = cfg.tol;
  auto checks = run_suite(cfg.suite, opt);
  bool all = true;
  for (const auto& c : checks) {
    std::printf("criterion %2d [%s] %s -- %s\n", c.criterion,
                c.pass ? "PASS" : "FAIL", c.name.c_str(), c.detail.c_str());
    all = all && c.pass;
  }
  write_file(out / "verify.json", verify_json(cfg.suite, cfg.seed, checks));
  write_file(out / "residuals.csv", residuals_csv(cfg.suite, checks));
  return all ? 0 : 1;
}

int cmd_gallery(const RunConfig& cfg) {
  fs::path out = require_out(cfg);
  auto [nt, nth] = parse_grid(cfg.grid);
  double tol = class_tol(cfg);
  struct Item {
    std::string dir;
    CurveSpec spec;
    TubeKind kind;
  };
  std::vector<Item> items = {
      {"circle", circle_spec(), TubeKind::Exceptional},
      {"hyperbola", hyperbola_spec(), TubeKind::Exceptional},
      {"parabola", parabola_spec(), TubeKind::Exceptional},
      {"knot35_left", torus_knot_spec(3, 5, 0.5), TubeKind::Left},
      {"knot35_right", torus_knot_spec(3, 5, 0.5), TubeKind::Right},
      {"knot23_left", torus_knot_spec(2, 3, 0.5), TubeKind::Left},
      {"knot23_right", torus_knot_spec(2, 3, 0.5), TubeKind::Right},
  };
  try {
    std::string index = "{\n  \"items\": [\n";
    for (size_t k = 0; k < items.size(); ++k) {
      const auto& it = items[k];
      fs::path dir = out / it.dir;
      std::string spec_text = it.spec.to_json_text();
      write_file(dir / "spec.json", spec_text);
      Analysis a = analyze_curve(spec_text);
      write_file(dir / "analysis.json", analysis_json(a));
      TubeSurface tube(a.curve, it.kind);
      export_tube(tube, it.spec.name, to_string(it.kind), "both", nt, nth,
                  dir, "tube", tol);
      index += "    " + jstr(it.dir) +
               (k + 1 < items.size() ? "," : ",") + "\n";
    }
    // the Viviani example surface (not a tube; meshed directly)
    {
      fs::path dir = out / "viviani";
      VivianiSurface viv;
      MeshDomain dom{0, 2 * EIGEN_PI, 0, 2 * EIGEN_PI, true, true};
      Frame23 wall = wall_frame(S22Point{t_lp().col(3)});
      SurfaceMesh m = surface_mesh(viv, dom, nt, nt, wall, tol);
      write_file(dir / "surface.obj", obj_text(m));
      write_file(dir / "surface.ply", ply_text(m));
      int e2 = 0, h2 = 0, umb = 0, qu = 0;
      for (const auto& v : m.vertices) {
        switch (v.label) {
          case SurfaceLabel::Elliptic2: ++e2; break;
          case SurfaceLabel::Hyperbolic2: ++h2; break;
          case SurfaceLabel::Umbilic: ++umb; break;
          case SurfaceLabel::QuasiUmbilic: ++qu; break;
        }
      }
      std::ostringstream j;
      j << "{\n  \"surface\": \"viviani\",\n  \"grid\": [" << nt << ", " << nt
        << "],\n  \"labels\": {\"Elliptic2\": " << e2
        << ", \"Hyperbolic2\": " << h2 << ", \"Umbilic\": " << umb
        << ", \"QuasiUmbilic\": " << qu << "},\n  \"torus_violation\": "
        << jnum(m.torus_violation) << "\n}\n";
      write_file(dir / "report.json", j.str());
      index += "    \"viviani\"\n  ]\n}\n";
    }
    write_file(out / "index.json", index);
  } catch (const Error& e) {
    std::fprintf(stderr, "synthesis failure: %s\n", e.what());
    return 4;
  }
  std::printf("gallery written to %s\n", out.string().c_str());
  return 0;
}

}  // namespace

int run_command(const RunConfig& cfg) {
  try {
    if (cfg.command == "analyze") return cmd_analyze(cfg);
    if (cfg.command == "tube") return cmd_tube(cfg);
    if (cfg.command == "verify") return cmd_verify(cfg);
    if (cfg.command == "gallery") return cmd_gallery(cfg);
    throw BadSpec("unknown command: " + cfg.command);
  } catch (const BadSpec& e) {
    std::fprintf(stderr, "spec error: %s\n", e.what());
    return 2;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return cfg.command == "tube" || cfg.command == "gallery" ? 4 : 2;
  }
}

}  // namespace et
