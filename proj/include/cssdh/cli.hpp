#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cssdh::cli {

enum ExitStatus : int { kSuccess = 0, kDomainFailure = 1, kUsageError = 2 };

/// Runs one command line (without the program name). Results go to `out`,
/// diagnostics and usage text to `err`.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cssdh::cli
