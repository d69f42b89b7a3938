#pragma once
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace so12::cli {

inline constexpr const char* kSchema = "so12-phase/1";

struct RunConfig {
  double k = 0.5;
  int cutoff = 64;
  double tol = 1.0;  // caps every check tolerance in verify
  std::string format = "csv";
  std::uint64_t seed = 1;
  void validate() const;  // ConfigError
};

// a numeric table; NaN marks an undefined entry (empty in CSV, null in JSON)
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

// "start:stop:step" (stop included), "a,b,c" or "" for no points
std::vector<double> parse_sweep(const std::string& spec);

Table family_table(const std::string& family, double k, const std::vector<double>& moduli, double phase);

// exit codes: 0 success, 1 check failure or numerical failure, 2 configuration error
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace so12::cli
