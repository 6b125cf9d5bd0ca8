#pragma once
#include <map>
#include <string>
#include <vector>

namespace et {

// Configuration of one CLI run.  Exit-code contract of run_command:
//   0  success
//   1  verification check failure
//   2  spec / configuration error
//   3  curve classification failure
//   4  tube synthesis failure
struct RunConfig {
  std::string command;           // analyze | tube | verify | gallery
  std::string spec_path;         // curve spec JSON file
  std::string out_dir;
  std::vector<int> grid;         // tau and theta vertex counts (>= 9)
  std::string component = "both";  // pos | neg | both
  std::string kind;              // exceptional | left | right; empty = auto
  std::string suite = "all";
  unsigned seed = 20260826;
  std::map<std::string, double> tol;  // named tolerance overrides
};

int run_command(const RunConfig& cfg);

}  // namespace et
