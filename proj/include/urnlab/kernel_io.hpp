#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "urnlab/kernel.hpp"

namespace urnlab {

// Kernel text format.
//
//   kernel explicit <num_colors>
//   <u> <v> <prob>          one line per nonzero entry; unlisted entries are 0
//
//   kernel generator <name> key=value ...
//
// Blank lines and lines starting with '#' are ignored. Probabilities written as
// decimals or ratios are kept exactly.
Kernel parse_kernel(std::string_view text);
Kernel load_kernel(const std::filesystem::path& path);

}  // namespace urnlab
