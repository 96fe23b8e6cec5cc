#pragma once

namespace tml::cli {

// Dispatches argv to one of the subcommands
// {hecke, primes, moments, rmf-verify, mollifier-check, transfer-check}.
// Returns 0 on success, 2 on a usage or validation error, 3 when a math
// audit ran but did not meet its tolerance.
int run(int argc, const char* const* argv);

}  // namespace tml::cli
