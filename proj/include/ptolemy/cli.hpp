#pragma once

// Batch command-line front end.
//
//   ptolemy_lab [--format text|json] <verb> [options] [input]
//
// Inputs are file paths, with "-" (the default) meaning standard input.
// Exit status: 0 on success, 1 on a domain error, 2 on malformed input or
// usage errors. Errors are reported as one JSON line on the error stream:
//   {"error":{"kind":"invalid-vertex","message":"..."}}

#include <iosfwd>
#include <string>
#include <vector>

namespace ptolemy {

/// args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace ptolemy
