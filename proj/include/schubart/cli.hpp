#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace schubart::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitNumerical = 1;
inline constexpr int kExitUsage = 2;

struct RunConfig {
  std::string command;
  double m = 1.0 / 3.0;
  double h = -1.0;
  double r0 = 0;
  bool has_r0 = false;
  double u0 = 0;
  double nu0 = 0;
  double gamma0 = 0;
  bool gamma_from_energy = false;
  std::string until = "sigma=10";
  double tol = 1e-12;
  int grid = 0;  // 0 selects the command's default
  int scan = 0;
  std::string scan_r0;  // a:b:n
  std::string scan_m;   // a:b:n
  double claim_u0 = 0.05;
  std::string out;
  std::string report;
  std::string profile;
  std::string region = "I";
};

// Compact JSON of the configuration; this is the "# ..." header of every output.
std::string config_json(const RunConfig& cfg);

// Parses argv (argv[0] is the program name), runs the command and returns the exit status.
// Diagnostics go to `err`; anything written to "-" or an empty path goes to `out`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// Same, with the arguments after the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace schubart::cli
