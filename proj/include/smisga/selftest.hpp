#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace smisga {

struct SelftestOptions {
    std::uint64_t seed = 20240917;
    /// Solve with the acceptance inequality flipped; the acceptance group must then fail.
    bool inject_fault = false;
};

struct SelftestGroup {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Invariant checks of every module plus trace checks of smISGA and ISGA on
/// a small random batch. Deterministic in opts.seed.
std::vector<SelftestGroup> run_selftest(const SelftestOptions& opts);

}  // namespace smisga
