#pragma once

#include <string>
#include <vector>

namespace featacq {

/// Command-line entry point: complete, simulate, bench-poss, bound, lemma3.
/// Returns 0 on success and nonzero after printing a diagnostic on error.
int cli_main(int argc, char** argv);

/// Same, with argv[0] supplied internally.
int cli_main(const std::vector<std::string>& args);

}  // namespace featacq
