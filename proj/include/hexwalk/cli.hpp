#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hexwalk/lattice.hpp"

namespace hexwalk {

enum ExitCode : int { kExitPass = 0, kExitFail = 1, kExitResource = 2, kExitUsage = 3 };

/// "a..b" or "a"; throws ContractError otherwise.
std::pair<int, int> parse_range(const std::string& text);

/// One walk per line (a JSON array of [xq, yq] pairs), or a single JSON
/// document holding one walk or an array of walks. Blank lines and '#'
/// comments are skipped. Errors are ParseError with the offending line.
std::vector<Walk> read_walk_file(const std::string& path);

struct RenderOptions {
    double scale = 40.0;
    /// Draw the outline of Tria_{2k+1}.
    std::optional<int> triangle;
};

/// Deterministic SVG of a walk on the honeycomb around it.
std::string render_svg(const Walk& walk, const RenderOptions& opts = {});

/// Entry point of the hexwalk tool; returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace hexwalk
