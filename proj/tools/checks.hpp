#pragma once
#include <string>
#include <vector>

namespace so12::cli {

// abs: |computed - expected| <= tol; rel: |computed - expected| / |expected| <= tol;
// below: computed < expected (tolerance unused)
enum class Compare { abs, rel, below };

struct Check {
  std::string name;
  double computed = 0, expected = 0, tol = 0;
  Compare mode = Compare::abs;
  std::string note;

  double delta() const;
  bool pass(double tol_cap = 1.0) const;  // effective tolerance min(tol, tol_cap)
};

struct Criterion {
  int id;
  std::string title;
  std::vector<Check> checks;
  bool pass(double tol_cap = 1.0) const;
};

// the fifteen acceptance criteria, each with its checks and tolerances
std::vector<Criterion> acceptance_suite();

}  // namespace so12::cli
