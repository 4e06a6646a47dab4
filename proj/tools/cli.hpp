#pragma once

#include <iosfwd>

namespace openthermo::cli {

enum ExitCode : int { ok = 0, audit_failed = 1, usage_error = 2, runtime_error = 3 };

/// Entry point of the `openthermo` tool with injectable streams.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace openthermo::cli
