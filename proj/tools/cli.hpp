#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "gaussriesz/hermite_coeffs.hpp"

namespace gaussriesz::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitAssertion = 1;
inline constexpr int kExitCalibration = 2;
inline constexpr int kExitUsage = 64;

struct ConfigEntry {
  std::string value;
  int line = 0;
};

// key=value lines; '#' starts a comment. Throws std::invalid_argument naming file:line.
std::map<std::string, ConfigEntry> read_config(std::istream& in, const std::string& name);

// Sum of terms [coeff*]h<multi-index>, e.g. "h1", "h1:0 + 0.5*h0:2".
HermiteCoeffs parse_input(const std::string& text, int dim);

// Largest truncation degree and grid nodes per axis accepted for n = 1, 2, 3.
struct Budget {
  int max_degree;
  int max_nodes;
};
Budget budget(int n);

// Full command line; argv[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gaussriesz::cli
