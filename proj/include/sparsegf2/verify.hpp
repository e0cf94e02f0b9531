#pragma once

#include <string>
#include <vector>

namespace sparsegf2 {

struct Check {
  std::string name;
  std::string expected;
  std::string got;
  double abs_err = 0;  // numeric checks only
  double tol = 0;
  bool pass = false;
};

struct VerifyReport {
  std::string suite;
  std::vector<Check> checks;
  double seconds = 0;
  bool passed() const;
  std::size_t failures() const;
};

// Suites: table1, fig1, fig2, fig8, oracles, ehrenfest, asymptotics, all.
std::vector<std::string> verify_suites();
VerifyReport run_verify(const std::string& suite);

}  // namespace sparsegf2
