#pragma once

namespace blotto::cli {

// Dispatches a subcommand; returns the process exit code.
int run(int argc, char** argv);

}  // namespace blotto::cli
