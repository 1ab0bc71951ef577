#pragma once

#include "ppir/error.hpp"
#include "ppir/matrix.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace ppir::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kParse = 2,
  kValidation = 3,
  kRecovery = 4,
};

int exit_code_for(Errc code) noexcept;

struct FixtureResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

// The 5 x 8 systematic generator over GF(11) the golden vectors were made with.
Matrix reference_generator();

// Golden checks against the embedded fixtures; `generator` stands in for the
// reference matrix so a corrupted copy can be shown to fail.
std::vector<FixtureResult> run_selftest(const Matrix& generator);

// Full command line: run | audit | rates | selftest.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace ppir::cli
