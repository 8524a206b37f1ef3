#pragma once

#include <filesystem>
#include <iosfwd>

namespace periodfn::cli {

/// Writes the worked-example artifacts for g_s at s = 0.647 into `dir` and
/// prints the PASS/FAIL summary to `out`. Returns true when every line passes.
bool reproduce_paper(const std::filesystem::path& dir, std::ostream& out);

}  // namespace periodfn::cli
