#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace gapchain::cli {

/// Dispatches one subcommand. Returns 0 on success, 1 on domain errors
/// (message on `err`), 2 on usage errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gapchain::cli
