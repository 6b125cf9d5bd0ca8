// einstein-tubes: null-curve analysis, quasi-umbilical tube synthesis, and
// verification in the (1+2)-Einstein universe.
#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "einstein_tubes.h"

namespace {

struct SessionDeleter {
  void operator()(et_session* s) const { et_session_destroy(s); }
};

int fail_config(et_session* s) {
  std::fprintf(stderr, "configuration error: %s\n", et_last_error(s));
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quasi-umbilical timelike surfaces from null curves"};
  app.require_subcommand(0, 1);

  std::string spec, out, component = "both", kind, suite = "all";
  std::vector<int> grid;
  long long seed = -1;
  std::vector<std::string> tol;

  bool want_version = false;
  app.add_flag("--version", want_version, "print the library version");

  std::vector<CLI::App*> subs;
  for (const char* name : {"analyze", "tube", "verify", "gallery"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--spec", spec, "curve spec JSON file");
    sub->add_option("--out", out, "output directory");
    sub->add_option("--grid", grid, "grid sizes N,M")->delimiter(',');
    sub->add_option("--component", component, "pos | neg | both");
    sub->add_option("--kind", kind, "exceptional | left | right");
    sub->add_option("--suite", suite, "verification suite name");
    sub->add_option("--seed", seed, "random seed");
    sub->add_option("--tol", tol, "tolerance override NAME=VAL")
        ->take_all();
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (want_version) {
    char* v = et_version();
    std::printf("einstein-tubes %s\n", v ? v : "?");
    et_string_free(v);
    return 0;
  }

  if (app.get_subcommands().empty()) {
    std::fprintf(stderr, "a command is required; run with --help\n");
    return 2;
  }

  et_session* raw = nullptr;
  if (et_session_create(&raw) != ET_OK || !raw) {
    std::fprintf(stderr, "could not create session\n");
    return 2;
  }
  std::unique_ptr<et_session, SessionDeleter> session(raw);

  std::string command;
  for (size_t i = 0; i < subs.size(); ++i)
    if (subs[i]->parsed())
      command = std::vector<std::string>{"analyze", "tube", "verify",
                                         "gallery"}[i];

  if (et_config_set_string(raw, "command", command.c_str()) != ET_OK)
    return fail_config(raw);
  if (!spec.empty() && et_config_set_string(raw, "spec", spec.c_str()) != ET_OK)
    return fail_config(raw);
  if (!out.empty() && et_config_set_string(raw, "out", out.c_str()) != ET_OK)
    return fail_config(raw);
  if (et_config_set_string(raw, "component", component.c_str()) != ET_OK)
    return fail_config(raw);
  if (!kind.empty() && et_config_set_string(raw, "kind", kind.c_str()) != ET_OK)
    return fail_config(raw);
  if (et_config_set_string(raw, "suite", suite.c_str()) != ET_OK)
    return fail_config(raw);
  if (seed >= 0 && et_config_set_int(raw, "seed", seed) != ET_OK)
    return fail_config(raw);
  if (grid.size() == 1 || grid.size() > 2) {
    std::fprintf(stderr, "configuration error: --grid needs two sizes N,M\n");
    return 2;
  }
  if (grid.size() == 2) {
    if (et_config_set_int(raw, "grid_t", grid[0]) != ET_OK ||
        et_config_set_int(raw, "grid_theta", grid[1]) != ET_OK)
      return fail_config(raw);
  }
  for (const auto& t : tol) {
    auto eq = t.find('=');
    if (eq == std::string::npos) {
      std::fprintf(stderr, "configuration error: --tol expects NAME=VAL\n");
      return 2;
    }
    double val = 0;
    try {
      val = std::stod(t.substr(eq + 1));
    } catch (const std::exception&) {
      std::fprintf(stderr, "configuration error: bad tolerance value in %s\n",
                   t.c_str());
      return 2;
    }
    if (et_config_set_tolerance(raw, t.substr(0, eq).c_str(), val) != ET_OK)
      return fail_config(raw);
  }

  int exit_code = 0;
  if (et_run(raw, &exit_code) != ET_OK) {
    std::fprintf(stderr, "runtime error: %s\n", et_last_error(raw));
    return 2;
  }
  return exit_code;
}
