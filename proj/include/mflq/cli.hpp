#pragma once

#include <string>
#include <vector>

namespace mflq::cli {

/// Batch front-end. Exit codes: 0 success, 2 config/usage error, 3 assumption
/// failure, 4 numerical singularity, 5 verification failure, 1 anything else.
/// Partial outputs of a failed run are removed.
int run(const std::vector<std::string>& args);

}  // namespace mflq::cli
