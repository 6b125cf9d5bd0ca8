// Command layer: exit codes, report files, determinism.
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "et/commands.hpp"
#include "et/curve.hpp"
#include "json.hpp"

using namespace et;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& tag) {
  fs::path p = fs::temp_directory_path() / ("et_cmd_" + tag);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  REQUIRE(f.good());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

fs::path write_spec(const fs::path& dir, const CurveSpec& s) {
  fs::path p = dir / (s.name + ".json");
  std::ofstream f(p);
  f << s.to_json_text();
  return p;
}

}  // namespace

TEST_CASE("analyze writes a classification report and exits 0") {
  fs::path dir = fresh_dir("analyze");
  RunConfig cfg;
  cfg.command = "analyze";
  cfg.spec_path = write_spec(dir, circle_spec()).string();
  cfg.out_dir = (dir / "out").string();
  CHECK(run_command(cfg) == 0);

  auto j = nlohmann::json::parse(slurp(dir / "out" / "analysis.json"));
  CHECK(j.at("class") == "Biisotropic");
  CHECK(j.at("h").get<double>() == doctest::Approx(-1.0));
  CHECK(j.at("h_spread").get<double>() < 1e-9);
  CHECK(j.at("invariant_residuals").at("null").get<double>() < 1e-10);

  // byte-identical reruns
  std::string first = slurp(dir / "out" / "analysis.json");
  CHECK(run_command(cfg) == 0);
  CHECK(slurp(dir / "out" / "analysis.json") == first);
}

TEST_CASE("analyze reports generic curvature constants") {
  fs::path dir = fresh_dir("analyze_knot");
  RunConfig cfg;
  cfg.command = "analyze";
  cfg.spec_path = write_spec(dir, torus_knot_spec(3, 5, 0.5)).string();
  cfg.out_dir = (dir / "out").string();
  CHECK(run_command(cfg) == 0);
  auto j = nlohmann::json::parse(slurp(dir / "out" / "analysis.json"));
  CHECK(j.at("class") == "GenericNegativeType");
  CHECK(j.at("kappa_lambda").get<double>() ==
        doctest::Approx(-1.49859825785547).epsilon(1e-10));
  CHECK(j.at("kappa_rho").get<double>() ==
        doctest::Approx(-0.477977531696599).epsilon(1e-10));
  CHECK(j.at("curvatures_constant") == true);
}

TEST_CASE("analyze exit codes: spec error 2, classification failure 3") {
  fs::path dir = fresh_dir("analyze_err");
  RunConfig cfg;
  cfg.command = "analyze";
  cfg.out_dir = (dir / "out").string();

  cfg.spec_path = (dir / "missing.json").string();
  CHECK(run_command(cfg) == 2);

  std::ofstream(dir / "garbage.json") << "{ not json";
  cfg.spec_path = (dir / "garbage.json").string();
  CHECK(run_command(cfg) == 2);

  std::ofstream(dir / "notnull.json")
      << "{\"name\":\"notnull\",\"family\":\"custom_expression\","
         "\"components\":[\"cos(t)\",\"sin(t)\",\"1\",\"0\",\"0\"],"
         "\"domain\":[0,6.283185307179586]}";
  cfg.spec_path = (dir / "notnull.json").string();
  CHECK(run_command(cfg) == 3);
}

TEST_CASE("tube writes OBJ, PLY and a grid report") {
  fs::path dir = fresh_dir("tube");
  RunConfig cfg;
  cfg.command = "tube";
  cfg.spec_path = write_spec(dir, circle_spec()).string();
  cfg.out_dir = (dir / "out").string();
  cfg.grid = {24, 13};
  cfg.component = "pos";
  CHECK(run_command(cfg) == 0);
  CHECK(fs::exists(dir / "out" / "tube_pos.obj"));
  CHECK(fs::exists(dir / "out" / "tube_pos.ply"));
  auto j = nlohmann::json::parse(slurp(dir / "out" / "tube_pos_grid.json"));
  CHECK(j.at("grid")[0] == 24);
  CHECK(j.at("grid")[1] == 13);
  CHECK(j.at("torus_violation").get<double>() < 1e-9);
  CHECK(j.at("vertices").size() == 24 * 13);
  // positive component: umbilic boundary rows flagged on the wall
  CHECK(j.at("wall_vertices").get<int>() == 2 * 24);

  // determinism of the mesh bytes
  std::string obj = slurp(dir / "out" / "tube_pos.obj");
  CHECK(run_command(cfg) == 0);
  CHECK(slurp(dir / "out" / "tube_pos.obj") == obj);
}

TEST_CASE("tube exit codes: bad grid 2, wrong kind 4") {
  fs::path dir = fresh_dir("tube_err");
  RunConfig cfg;
  cfg.command = "tube";
  cfg.spec_path = write_spec(dir, circle_spec()).string();
  cfg.out_dir = (dir / "out").string();

  cfg.grid = {4, 4};
  CHECK(run_command(cfg) == 2);
  cfg.grid = {16};
  CHECK(run_command(cfg) == 2);

  cfg.grid = {16, 16};
  cfg.component = "sideways";
  CHECK(run_command(cfg) == 2);

  cfg.component = "both";
  cfg.kind = "left";  // a biisotropic curve has no left tube
  CHECK(run_command(cfg) == 4);
  cfg.kind = "diagonal";
  CHECK(run_command(cfg) == 2);
}

TEST_CASE("verify writes reports and honors the exit contract") {
  fs::path dir = fresh_dir("verify");
  RunConfig cfg;
  cfg.command = "verify";
  cfg.suite = "conics";
  cfg.out_dir = (dir / "out").string();
  CHECK(run_command(cfg) == 0);
  auto j = nlohmann::json::parse(slurp(dir / "out" / "verify.json"));
  CHECK(j.at("pass") == true);
  CHECK(j.at("checks").size() == 1);
  CHECK(j.at("checks")[0].at("criterion") == 1);
  std::string csv = slurp(dir / "out" / "residuals.csv");
  CHECK(csv.rfind("suite,criterion,check,name,value\n", 0) == 0);

  cfg.suite = "nosuch";
  CHECK(run_command(cfg) == 2);

  cfg.suite = "conics";
  cfg.tol = {{"conic_h", -1.0}};
  CHECK(run_command(cfg) == 2);

  // an impossible tolerance makes the suite fail: exit 1
  cfg.tol = {{"conic_h", 1e-300}};
  CHECK(run_command(cfg) == 1);
}

TEST_CASE("unknown command and missing out directory are spec errors") {
  RunConfig cfg;
  cfg.command = "fly";
  cfg.out_dir = "/tmp";
  CHECK(run_command(cfg) == 2);
  cfg.command = "verify";
  cfg.out_dir = "";
  CHECK(run_command(cfg) == 2);
}

TEST_CASE("gallery emits every example with analysis overlays") {
  fs::path dir = fresh_dir("gallery");
  RunConfig cfg;
  cfg.command = "gallery";
  cfg.out_dir = (dir / "out").string();
  cfg.grid = {20, 11};
  CHECK(run_command(cfg) == 0);
  for (const char* item :
       {"circle", "hyperbola", "parabola", "knot35_left", "knot35_right",
        "knot23_left", "knot23_right"}) {
    CAPTURE(item);
    fs::path d = dir / "out" / item;
    CHECK(fs::exists(d / "spec.json"));
    CHECK(fs::exists(d / "analysis.json"));
    CHECK(fs::exists(d / "tube_both.obj"));
    CHECK(fs::exists(d / "tube_both.ply"));
    CHECK(fs::exists(d / "tube_both_grid.json"));
  }
  auto v = nlohmann::json::parse(
      slurp(dir / "out" / "viviani" / "report.json"));
  CHECK(v.at("labels").at("Elliptic2").get<int>() > 0);
  CHECK(v.at("labels").at("Hyperbolic2").get<int>() > 0);
  CHECK(v.at("labels").at("Umbilic").get<int>() == 0);
  CHECK(nlohmann::json::parse(slurp(dir / "out" / "index.json"))
            .at("items")
            .size() == 8);
}
