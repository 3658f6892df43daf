#pragma once

#include <iosfwd>

namespace ciarisk::cli {

inline constexpr int kExitOk = 0;        // success / under gate threshold
inline constexpr int kExitUsage = 1;     // usage or input error
inline constexpr int kExitGate = 2;      // gate breached (R > threshold)
inline constexpr int kExitInternal = 3;  // internal failure

// Dispatches registry / assess / watch / ahp / simulate / report.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ciarisk::cli
