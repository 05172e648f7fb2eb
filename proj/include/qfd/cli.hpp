// cli.hpp — command-line entry point.
//
// Subcommands: pdet, simulate, sweep, spectrum, density, bases, census,
// verify. Options may come from flags or a config file (--config, INI/TOML
// key = value with sections); flags override file values. Exit codes:
// 0 success, 2 validation error, 3 numerical-consistency failure,
// 4 resource guard.

#pragma once

#include <iosfwd>

namespace qfd {

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err);

}  // namespace qfd
