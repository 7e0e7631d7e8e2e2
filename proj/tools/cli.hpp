#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace genesynth::cli {

enum ExitCode : int {
  kOk = 0,
  kInputError = 1,
  kGraphError = 2,
  kEmptyRegion = 3,
  kVerifyFailed = 4,
};

/// Runs one command; `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace genesynth::cli
