#pragma once

#include <iosfwd>

#include "cvlt/error.hpp"

namespace cvlt::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitCrypto = 2;
inline constexpr int kExitIo = 3;
inline constexpr int kExitNetwork = 4;

int exit_code_for(Errc code) noexcept;

// Runs one command line. Listings go to `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cvlt::cli
