#include "et/suite.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <numeric>
#include <random>
#include <sstream>

#include "et/curve.hpp"
#include "et/einstein.hpp"
#include "et/errors.hpp"
#include "et/null_curves.hpp"
#include "et/tube.hpp"
#include "et/verify.hpp"

namespace et {

namespace {

double opt_tol(const SuiteOptions& o, const std::string& name, double dflt) {
  auto it = o.tol.find(name);
  if (it == o.tol.end()) return dflt;
  if (!(it->second > 0)) throw BadSpec("tolerance " + name + " must be > 0");
  return it->second;
}

std::shared_ptr<Curve> make(const CurveSpec& s) {
  return std::make_shared<Curve>(s);
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

// order window of the "2.0 +- 0.3" convergence criteria
bool orders_ok(const ResidualReport& r) {
  if (r.orders.empty()) return false;
  for (double o : r.orders)
    if (o < 1.7 || o > 2.3) return false;
  return true;
}

double ray_gap(const Vec5& a, const Vec5& b) {
  Vec5 x = a.normalized(), y = b.normalized();
  return std::min((x - y).norm(), (x + y).norm());
}

struct TubeCase {
  std::string name;
  std::shared_ptr<TubeSurface> tube;
};

std::vector<TubeCase> standard_tubes() {
  return {
      {"circle", std::make_shared<TubeSurface>(make(circle_spec()),
                                               TubeKind::Exceptional)},
      {"hyperbola", std::make_shared<TubeSurface>(make(hyperbola_spec()),
                                                  TubeKind::Exceptional)},
      {"parabola", std::make_shared<TubeSurface>(make(parabola_spec()),
                                                 TubeKind::Exceptional)},
      {"knot23_left", std::make_shared<TubeSurface>(
                          make(torus_knot_spec(2, 3, 0.5)), TubeKind::Left)},
      {"knot23_right", std::make_shared<TubeSurface>(
                           make(torus_knot_spec(2, 3, 0.5)), TubeKind::Right)},
  };
}

CheckResult check_conics(const SuiteOptions& opt) {
  CheckResult r{1, "conic affine curvatures", false, 0,
                opt_tol(opt, "conic_h", 1e-9)};
  struct Conic {
    CurveSpec spec;
    double target;
  };
  for (const auto& [spec, target] : {Conic{circle_spec(), -1.0},
                                     Conic{hyperbola_spec(), 1.0},
                                     Conic{parabola_spec(), 0.0}}) {
    auto c = make(spec);
    BiisotropicAnalysis an(c, 0.5 * (c->dom_a() + c->dom_b()));
    double worst = 0;
    for (int i = 0; i < 64; ++i) {
      double t = c->dom_a() + (c->dom_b() - c->dom_a()) * (i + 0.5) / 64;
      worst = std::max(worst, std::abs(an.sample(t, 4).h - target));
    }
    r.residuals.push_back({spec.name, worst});
    r.max_residual = std::max(r.max_residual, worst);
  }
  r.pass = r.max_residual < r.tol;
  r.detail = "max |h - target| = " + fmt(r.max_residual) + " over 64 samples";
  return r;
}

CheckResult check_relations(const SuiteOptions& opt) {
  CheckResult r{2, "isotropic normal relations", false, 0,
                opt_tol(opt, "relations", 1e-10)};
  auto relations = [](const BiisotropicAnalysis::Sample& s, const Vec5& R,
                      const Vec5& Rp) {
    Vec5 g0 = value(s.zeta[0]), g1 = value(s.zeta[1]), g2 = value(s.zeta[2]);
    double m = std::abs(inner(R, R));
    m = std::max(m, std::abs(inner(R, g0)));
    m = std::max(m, std::abs(inner(R, g1)));
    m = std::max(m, std::abs(inner(R, g2) - 1));
    m = std::max(m, std::abs(inner(Rp, g0)));
    return m;
  };
  for (const auto& spec :
       {circle_spec(), hyperbola_spec(), parabola_spec()}) {
    auto c = make(spec);
    BiisotropicAnalysis an(c, 0.5 * (c->dom_a() + c->dom_b()));
    double worst = 0;
    for (int i = 0; i < 64; ++i) {
      double t = c->dom_a() + (c->dom_b() - c->dom_a()) * (i + 0.5) / 64;
      auto s = an.sample(t, 4);
      worst = std::max(worst, relations(s, s.R, s.Rp));
    }
    r.residuals.push_back({spec.name, worst});
    r.max_residual = std::max(r.max_residual, worst);
  }
  // the closed-form isotropic normal of the biisotropic circle
  {
    auto c = make(circle_spec());
    BiisotropicAnalysis an(c, EIGEN_PI);
    auto e = [](int i) {
      Vec5 v = Vec5::Zero();
      v[i] = 1;
      return v;
    };
    double worst = 0;
    for (int i = 0; i < 64; ++i) {
      double t = 2 * EIGEN_PI * (i + 0.5) / 64;
      auto s = an.sample(t, 4);
      Vec5 R = std::sin(t) * e(0) + std::cos(t) * e(1) + e(3) +
               0.5 * std::sin(t) * e(4);
      Vec5 Rp = std::cos(t) * e(0) - std::sin(t) * e(1) +
                0.5 * std::cos(t) * e(4);
      worst = std::max(worst, relations(s, R, Rp));
    }
    r.residuals.push_back({"circle_closed_form", worst});
    r.max_residual = std::max(r.max_residual, worst);
  }
  r.pass = r.max_residual < r.tol;
  r.detail = "max relation residual = " + fmt(r.max_residual);
  return r;
}

CheckResult check_metrics(const SuiteOptions& opt) {
  CheckResult r{3, "tube metric closed forms", false, 0,
                opt_tol(opt, "metric", 1e-8)};
  double det_max = -1;
  int idx = 0;
  for (const auto& tc : standard_tubes()) {
    std::mt19937 rng(opt.seed + idx++);
    const Curve& c = tc.tube->curve();
    std::uniform_real_distribution<double> ut(c.dom_a(), c.dom_b());
    std::uniform_real_distribution<double> uth(0.0, 2 * EIGEN_PI);
    double worst = 0;
    for (int k = 0; k < 1024; ++k) {
      double t = ut(rng), th = uth(rng);
      Mat2 g = tc.tube->induced_metric(t, th);
      Mat2 cf = tc.tube->metric_closed_form(t, th);
      worst = std::max(worst, (g - cf).cwiseAbs().maxCoeff());
      det_max = std::max(det_max, g.determinant());
    }
    r.residuals.push_back({tc.name, worst});
    r.max_residual = std::max(r.max_residual, worst);
  }
  r.pass = r.max_residual < r.tol && det_max < 0;
  r.detail = "max entry gap = " + fmt(r.max_residual) +
             ", max det = " + fmt(det_max) + " at 1024 random points per tube";
  return r;
}

CheckResult check_classification(const SuiteOptions& opt) {
  CheckResult r{4, "pointwise classification and helicity", false, 0,
                opt_tol(opt, "classification", 1e-8)};
  bool labels_ok = true;
  for (const auto& tc : standard_tubes()) {
    const Curve& c = tc.tube->curve();
    double worst = 0;
    for (int i = 0; i < 12; ++i) {
      double t = c.dom_a() + (c.dom_b() - c.dom_a()) * (i + 0.5) / 12;
      Vec5 gauss = tc.tube->conformal_gauss(t);
      for (int j = 0; j < 12; ++j) {
        double th = 2 * EIGEN_PI * (j + 0.5) / 12;
        if (std::abs(std::cos(th)) < 0.1) continue;
        auto cl = classify_point(*tc.tube, t, th, r.tol, &gauss);
        worst = std::max(worst, std::abs(cl.rho));
        if (cl.label != SurfaceLabel::QuasiUmbilic) labels_ok = false;
        if (cl.helicity != tc.tube->component_sign(th)) labels_ok = false;
      }
      for (double th : {EIGEN_PI / 2, 3 * EIGEN_PI / 2}) {
        auto cl = classify_point(*tc.tube, t, th, r.tol, &gauss);
        if (cl.label != SurfaceLabel::Umbilic) labels_ok = false;
      }
    }
    r.residuals.push_back({tc.name, worst});
    r.max_residual = std::max(r.max_residual, worst);
  }
  r.pass = labels_ok && r.max_residual < r.tol;
  r.detail = std::string("labels ") + (labels_ok ? "correct" : "WRONG") +
             ", max |rho_f| = " + fmt(r.max_residual);
  return r;
}

CheckResult check_duality(const SuiteOptions& opt) {
  CheckResult r{5, "dual maps", false, 0, opt_tol(opt, "duality", 1e-8)};
  // exceptional tubes: dual ray is [-comp Gamma''], fiber independent
  for (const auto& spec :
       {circle_spec(), hyperbola_spec(), parabola_spec()}) {
    TubeSurface tube(make(spec), TubeKind::Exceptional);
    const Curve& c = tube.curve();
    double worst = 0;
    for (int i = 0; i < 64; ++i) {
      double t = c.dom_a() + (c.dom_b() - c.dom_a()) * (i + 0.5) / 64;
      Vec5 gpp = value(tube.biisotropic().sample(t, 3).zeta[2]);
      for (int j = 0; j < 64; ++j) {
        double th = 2 * EIGEN_PI * (j + 0.5) / 64;
        if (std::abs(std::cos(th)) < 1e-3) continue;
        int comp = tube.component_sign(th);
        Vec5 d = tube.dual_point(t, th, comp);
        worst = std::max(
            worst, (d.normalized() - (-comp * gpp).normalized()).norm());
      }
    }
    r.residuals.push_back({spec.name, worst});
    r.max_residual = std::max(r.max_residual, worst);
  }
  // general tubes: the dual of each tube lies on the other at dual_theta
  {
    auto c = make(torus_knot_spec(2, 3, 0.5));
    TubeSurface left(c, TubeKind::Left), right(c, TubeKind::Right);
    double worst = 0;
    for (int i = 0; i < 64; ++i) {
      double t = c->dom_a() + (c->dom_b() - c->dom_a()) * (i + 0.5) / 64;
      for (int j = 0; j < 64; ++j) {
        double th = 2 * EIGEN_PI * (j + 0.5) / 64;
        if (std::abs(std::cos(th)) < 1e-3) continue;
        int comp = left.component_sign(th);
        double thd = left.dual_theta(th);
        worst = std::max(worst, ray_gap(left.dual_point(t, th, comp),
                                        right.lift(t, thd)));
        worst = std::max(worst, ray_gap(right.dual_point(t, th, comp),
                                        left.lift(t, thd)));
      }
    }
    r.residuals.push_back({"knot23_left_right", worst});
    r.max_residual = std::max(r.max_residual, worst);
  }
  r.pass = r.max_residual < r.tol;
  r.detail = "max dual-ray gap = " + fmt(r.max_residual) + " on 64x64 grids";
  return r;
}

CheckResult check_chamber(const SuiteOptions& opt) {
  CheckResult r{6, "circle tube chamber and dual geodesic", false, 0,
                opt_tol(opt, "chamber", 1e-9)};
  TubeSurface tube(make(circle_spec()), TubeKind::Exceptional);
  Vec5 e3 = Vec5::Zero();
  e3[3] = 1;
  S22Point wall{e3};
  int mismatches = 0;
  for (int i = 0; i < 64; ++i) {
    double t = 2 * EIGEN_PI * (i + 0.5) / 64;
    for (int j = 0; j < 64; ++j) {
      double th = 2 * EIGEN_PI * (j + 0.5) / 64;
      double c = std::cos(th);
      if (std::abs(c) < 1e-6) continue;
      EinsteinPoint p = normalize_ray(tube.lift(t, th));
      if (chamber_sign(p, wall) != (c > 0 ? 1 : -1)) ++mismatches;
    }
  }
  // dual rays lie on the null geodesic cut out by the totally null plane
  // span{E1 - E2, E4}: the components along E0, E3 and E1 + E2 vanish
  double worst = 0;
  for (int i = 0; i < 64; ++i) {
    double t = 2 * EIGEN_PI * (i + 0.5) / 64;
    for (int comp : {1, -1}) {
      Vec5 d = tube.dual_point(t, comp > 0 ? 0.4 : 0.4 + EIGEN_PI, comp)
                   .normalized();
      worst = std::max({worst, std::abs(d[0]), std::abs(d[3]),
                        0.5 * std::abs(d[1] + d[2])});
    }
  }
  r.residuals.push_back({"chamber_mismatches", (double)mismatches});
  r.residuals.push_back({"dual_plane_residual", worst});
  r.max_residual = worst;
  r.pass = mismatches == 0 && worst < r.tol;
  r.detail = "chamber mismatches = " + std::to_string(mismatches) +
             ", dual geodesic residual = " + fmt(worst);
  return r;
}

CheckResult check_knots(const SuiteOptions& opt) {
  CheckResult r{7, "torus knot umbilic arcs", false, 0,
                opt_tol(opt, "knots", 1e-8)};
  double spread_max = 0;
  for (auto [m, n] : {std::pair<int, int>{3, 5}, {2, 3}}) {
    auto c = make(torus_knot_spec(m, n, 0.5));
    auto cc = curvature_constancy(c, 64);
    spread_max = std::max(spread_max, cc.spread);
    TubeSurface tube(c, TubeKind::Left);
    double worst = 0;
    for (int i = 0; i < 64; ++i) {
      double s = 2 * EIGEN_PI * (i + 0.5) / 64;
      Vec5 arc;  // P-coordinates of the umbilic arc
      arc << -std::sin(n * s), std::cos(n * s), -std::sin(m * s),
          std::cos(m * s), 0;
      worst = std::max(
          worst, ray_gap(tube.lift(s, EIGEN_PI / 2), Vec5(t_lp() * arc)));
    }
    std::string tag = "knot" + std::to_string(m) + std::to_string(n);
    r.residuals.push_back({tag + "_arc", worst});
    r.residuals.push_back({tag + "_kappa_spread", cc.spread});
    r.max_residual = std::max(r.max_residual, worst);
  }
  r.pass = r.max_residual < r.tol && spread_max < r.tol;
  r.detail = "max arc gap = " + fmt(r.max_residual) +
             ", max kappa spread = " + fmt(spread_max);
  return r;
}

CheckResult check_structure(const SuiteOptions&) {
  CheckResult r{8, "structure form convergence", false, 0, 0};
  bool ok = true;
  for (const auto& tc : standard_tubes()) {
    auto rep = structure_form_check(*tc.tube);
    r.residuals.push_back({tc.name + "_order",
                           rep.orders.empty() ? 0.0 : rep.orders.back()});
    r.max_residual = std::max(r.max_residual, rep.residuals.back());
    if (!rep.pass || !orders_ok(rep)) ok = false;
  }
  r.pass = ok;
  r.detail = std::string("orders within 2.0 +- 0.3: ") + (ok ? "yes" : "NO") +
             ", finest residual = " + fmt(r.max_residual);
  return r;
}

CheckResult check_harmonicity(const SuiteOptions&) {
  CheckResult r{9, "harmonicity of the conformal Gauss map", false, 0, 0};
  ChartWindow w{0.3, 1.5, -1.1, 1.1};
  TubeSurface ct(make(circle_spec()), TubeKind::Exceptional);
  TubeSurface lt(make(torus_knot_spec(2, 3, 0.5)), TubeKind::Left);
  ShearedImmersion sc(ct, 0.2), sl(lt, 0.2);
  auto rc = harmonicity_check(sc, w);
  auto rl = harmonicity_check(sl, w);
  auto neg = harmonicity_check(sc, w, 0.01);
  r.residuals.push_back(
      {"exceptional_order", rc.orders.empty() ? 0.0 : rc.orders.back()});
  r.residuals.push_back(
      {"general_order", rl.orders.empty() ? 0.0 : rl.orders.back()});
  r.residuals.push_back({"negative_control_residual", neg.max_residual});
  r.max_residual = std::max(rc.residuals.back(), rl.residuals.back());
  r.pass = rc.pass && orders_ok(rc) && rl.pass && orders_ok(rl) && !neg.pass;
  r.detail = "orders " + fmt(rc.orders.back()) + " / " +
             fmt(rl.orders.back()) + ", negative control " +
             (neg.pass ? "PASSED (wrong)" : "fails as expected");
  return r;
}

CheckResult check_deformations(const SuiteOptions& opt) {
  CheckResult r{10, "isothermic deformations", false, 0,
                opt_tol(opt, "deformation_contact", 1e-6)};
  TubeSurface tube(make(circle_spec()), TubeKind::Exceptional);
  auto one = infinitesimal_deformation(tube, [](double) { return 1.0; });
  auto wave =
      infinitesimal_deformation(tube, [](double t) { return std::sin(t); });
  bool delta_ok = one.closedness.pass && one.shape.pass &&
                  wave.closedness.pass && wave.shape.pass;
  r.residuals.push_back({"ell1_closedness", one.closedness.max_residual});
  r.residuals.push_back({"ellsin_closedness", wave.closedness.max_residual});

  auto pair = exceptional_deformation_pair(
      make(circle_spec()), make(affine_ode_spec({-1.0, 0.1})));
  r.residuals.push_back({"pair_contact2", pair.contact2.max_residual});
  r.residuals.push_back({"pair_contact3", pair.contact3.max_residual});
  r.max_residual = pair.contact2.max_residual;
  bool pair_ok =
      pair.contact2.max_residual < r.tol && !pair.contact3.pass &&
      pair.contact3.max_residual > 1e-3;
  r.pass = delta_ok && pair_ok;
  r.detail = std::string("d delta ") + (delta_ok ? "closed" : "NOT closed") +
             ", 2-jet contact = " + fmt(pair.contact2.max_residual) +
             ", 3-jet residual = " + fmt(pair.contact3.max_residual);
  return r;
}

// Union-find for the Viviani region/curve counting.
struct UF {
  std::vector<int> p;
  explicit UF(int n) : p(n) { std::iota(p.begin(), p.end(), 0); }
  int find(int x) { return p[x] == x ? x : p[x] = find(p[x]); }
  void unite(int a, int b) { p[find(a)] = find(b); }
};

CheckResult check_viviani(const SuiteOptions& opt) {
  CheckResult r{11, "Viviani surface classification", false, 0,
                opt_tol(opt, "classification", 1e-8)};
  // rho_f is pi-periodic in s and the s = 0 and s = pi core circles have
  // the same image, so the counting lives on the fundamental domain
  // s in [0, pi) x t in [0, 2 pi) with both directions wrapped.
  const int na = 256, nb = 256;
  VivianiSurface viv;
  std::vector<double> rho((size_t)na * nb);
  std::vector<signed char> sgn((size_t)na * nb);
  int umbilic = 0, e2 = 0, h2 = 0;
  for (int j = 0; j < nb; ++j) {
    double t = 2 * EIGEN_PI * j / nb;
    for (int i = 0; i < na; ++i) {
      double s = EIGEN_PI * i / na;
      auto cl = classify_point(viv, s, t, r.tol, nullptr, false);
      size_t k = (size_t)j * na + i;
      rho[k] = cl.rho;
      sgn[k] = cl.rho >= 0 ? 1 : -1;
      switch (cl.label) {
        case SurfaceLabel::Umbilic: ++umbilic; break;
        case SurfaceLabel::Elliptic2: ++e2; break;
        case SurfaceLabel::Hyperbolic2: ++h2; break;
        default: break;
      }
    }
  }
  auto vid = [&](int i, int j) { return (j % nb) * na + (i % na); };
  // sign regions: components of equal-sign vertices
  UF regions(na * nb);
  for (int j = 0; j < nb; ++j)
    for (int i = 0; i < na; ++i) {
      if (sgn[vid(i, j)] == sgn[vid(i + 1, j)])
        regions.unite(vid(i, j), vid(i + 1, j));
      if (sgn[vid(i, j)] == sgn[vid(i, j + 1)])
        regions.unite(vid(i, j), vid(i, j + 1));
    }
  std::vector<int> pos_roots, neg_roots;
  for (int k = 0; k < na * nb; ++k) {
    int root = regions.find(k);
    auto& roots = sgn[k] > 0 ? pos_roots : neg_roots;
    if (std::find(roots.begin(), roots.end(), root) == roots.end())
      roots.push_back(root);
  }
  // zero-level curves: components of sign-crossing grid edges connected
  // through shared cells (marching-squares adjacency)
  auto eid = [&](int i, int j, int horiz) {
    return 2 * vid(i, j) + horiz;
  };
  auto crossing = [&](int i, int j, int horiz) {
    return sgn[vid(i, j)] !=
           sgn[horiz ? vid(i + 1, j) : vid(i, j + 1)];
  };
  UF curves(2 * na * nb);
  std::vector<char> is_crossing(2 * (size_t)na * nb, 0);
  for (int j = 0; j < nb; ++j)
    for (int i = 0; i < na; ++i) {
      int cell[4] = {eid(i, j, 1), eid(i, j + 1, 1), eid(i, j, 0),
                     eid(i + 1, j, 0)};
      bool cross[4] = {crossing(i, j, 1), crossing(i, j + 1, 1),
                       crossing(i, j, 0), crossing(i + 1, j, 0)};
      int first = -1;
      for (int k = 0; k < 4; ++k) {
        if (!cross[k]) continue;
        is_crossing[cell[k]] = 1;
        if (first < 0)
          first = cell[k];
        else
          curves.unite(first, cell[k]);
      }
    }
  std::vector<int> curve_roots;
  for (int k = 0; k < 2 * na * nb; ++k) {
    if (!is_crossing[k]) continue;
    int root = curves.find(k);
    if (std::find(curve_roots.begin(), curve_roots.end(), root) ==
        curve_roots.end())
      curve_roots.push_back(root);
  }
  r.residuals.push_back({"zero_curves", (double)curve_roots.size()});
  r.residuals.push_back({"elliptic2_regions", (double)pos_roots.size()});
  r.residuals.push_back({"hyperbolic2_regions", (double)neg_roots.size()});
  r.residuals.push_back({"umbilic_points", (double)umbilic});
  bool signs_match = e2 > 0 && h2 > 0;
  r.pass = curve_roots.size() == 2 && pos_roots.size() == 1 &&
           neg_roots.size() == 1 && umbilic == 0 && signs_match;
  std::ostringstream d;
  d << curve_roots.size() << " zero curves, " << pos_roots.size()
    << " elliptic + " << neg_roots.size() << " hyperbolic region, "
    << umbilic << " umbilic points on a 256x256 grid";
  r.detail = d.str();
  return r;
}

CheckResult check_directrix(const SuiteOptions& opt) {
  CheckResult r{12, "directrix recovery", false, 0,
                opt_tol(opt, "directrix", 1e-8)};
  std::vector<double> fibers = {0.2, 0.5, 1.0};
  for (const auto& tc : standard_tubes()) {
    auto d = directrix(*tc.tube, tc.tube->curve().dom_a(),
                       tc.tube->curve().dom_b(), 33, fibers);
    double worst = d.fiber_spread;
    for (size_t i = 0; i < d.tau.size(); ++i)
      worst = std::max(
          worst, ray_gap(d.gamma[i], tc.tube->conformal_gauss(d.tau[i])));
    r.residuals.push_back({tc.name, worst});
    r.max_residual = std::max(r.max_residual, worst);
  }
  r.pass = r.max_residual < r.tol;
  r.detail = "max round-trip gap = " + fmt(r.max_residual);
  return r;
}

using Checker = CheckResult (*)(const SuiteOptions&);

const std::vector<std::pair<std::string, Checker>>& registry() {
  static const std::vector<std::pair<std::string, Checker>> reg = {
      {"conics", check_conics},           {"relations", check_relations},
      {"metrics", check_metrics},         {"classification", check_classification},
      {"duality", check_duality},         {"chamber", check_chamber},
      {"knots", check_knots},             {"structure", check_structure},
      {"harmonicity", check_harmonicity}, {"deformations", check_deformations},
      {"viviani", check_viviani},         {"directrix", check_directrix},
  };
  return reg;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& [name, fn] : registry()) n.push_back(name);
    n.push_back("all");
    return n;
  }();
  return names;
}

std::vector<CheckResult> run_suite(const std::string& name,
                                   const SuiteOptions& opt) {
  std::vector<CheckResult> out;
  for (const auto& [n, fn] : registry())
    if (name == "all" || name == n) out.push_back(fn(opt));
  if (out.empty()) throw BadSpec("unknown suite: " + name);
  return out;
}

}  // namespace et
