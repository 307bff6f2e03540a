#pragma once

#include <ostream>
#include <string>

#include "coldplate/grid.hpp"

namespace coldplate::cli {

/// Process exit codes shared by all subcommands.
enum ExitCode : int {
    kOk = 0,
    kInternal = 1,
    kConfig = 2,
    kSolver = 3,
    kIo = 4,
    kDivergence = 5,
};

/// Entry point of the `coldplate` tool. Results go to `out`, progress and
/// diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Builds a mask from "ones", "zeros", "<family>:count=..,width=..,margin=.."
/// (family = straight | serpentine | border) or a path to a CSV of 0/1 values
/// laid out like exported fields. A CSV must match `spec`.
ChannelMask parse_mask_argument(const std::string& text, const GridSpec& spec);

}  // namespace coldplate::cli
