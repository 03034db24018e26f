#pragma once

#include <cstdint>
#include <ostream>

namespace brpf::experiments {

/// Fast invariant checks (a few seconds). Prints one PASS/FAIL line per
/// check and returns the number of failures.
int run_selftest(std::ostream& out, std::uint64_t seed = 20240601);

}  // namespace brpf::experiments
