#pragma once

#include <iosfwd>

namespace relmark::cli {

enum ExitCode : int {
    success = 0,
    tamper_detected = 1,
    recovery_incomplete = 2,
    usage_or_io_error = 3,
};

/// Environment variable naming a key file, consulted when neither --key nor --key-file is given.
inline constexpr const char* key_file_env = "RELMARK_KEY_FILE";

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace relmark::cli
