#pragma once

#include <ostream>

namespace levydec::cli {

/// Entry point of the `levydec` tool.  Returns 0 on success and 2 on a usage
/// or library error, after printing `error: code=<Code> message=<text>` to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace levydec::cli
