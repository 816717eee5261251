#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mcqhe {

// Runs one CLI invocation (args exclude the program name) and returns the
// process exit status: 0 on success, 1 on usage or I/O errors, 2 when a
// command that needs a working engine is outside the operating region.
// CSV goes to `out` when --out is "-" (the default), otherwise to the file.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mcqhe
