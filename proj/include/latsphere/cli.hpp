#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace latsphere::cli {

enum ExitCode : int { Success = 0, ValidationFailure = 1, VerificationMismatch = 2 };

constexpr unsigned long long default_seed = 20240601;

/* Subcommands: spheres, bounds {packing|covering|singleton}, verify, simulate,
 * export-lattice. Reports go to `out`, diagnostics to `err`. */
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv);

} // namespace latsphere::cli
