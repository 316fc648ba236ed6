#pragma once

#include <iosfwd>

namespace toda_crystal {

/// Entry point of the `toda_crystal` command. Returns the exit status:
/// 0 success, 1 a check failed, 2 usage or configuration error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace toda_crystal
