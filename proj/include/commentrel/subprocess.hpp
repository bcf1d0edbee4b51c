#ifndef COMMENTREL_SUBPROCESS_HPP
#define COMMENTREL_SUBPROCESS_HPP

#include <optional>
#include <string>
#include <vector>

namespace commentrel {

/// Runs argv[0] (PATH lookup) with the given arguments, inheriting stdio.
/// Returns the exit status; throws Error(Io) when the process cannot start.
int run_process(const std::vector<std::string>& argv);

/// Locates the transformer fine-tuning executable: $COMMENTREL_FINETUNE if
/// set, otherwise `commentrel-finetune` on PATH.
std::optional<std::string> find_finetune_component();

}  // namespace commentrel

#endif  // COMMENTREL_SUBPROCESS_HPP
