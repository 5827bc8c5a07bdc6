#pragma once

#include <ostream>

namespace etdr::cli {

/// Runs the quick self-checks, printing one PASS/FAIL line each. Returns
/// true when all pass.
bool run_selftest(std::ostream& out);

}  // namespace etdr::cli
