#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace dioph::cli {

// Parses and runs one command line (args exclude the program name) and
// returns the process exit code. Results go to `out` unless --output names a
// file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// "7", "1..20" or "1,2,5".
std::vector<unsigned> parse_index_list(const std::string& text);

}  // namespace dioph::cli
