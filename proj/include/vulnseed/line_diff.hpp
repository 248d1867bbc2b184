#pragma once

#include <string_view>
#include <vector>

namespace vulnseed {

/// Splits on '\n'; a trailing newline does not open an extra line.
std::vector<std::string_view> split_lines(std::string_view text);

/// Which lines of each side belong to a longest common subsequence of lines.
struct LineDiff {
    std::vector<bool> left_kept;
    std::vector<bool> right_kept;
};

/// Minimal line diff (Myers). Inputs differing by more than `max_edits` line edits inside the
/// changed window are reported as entirely changed within that window.
LineDiff diff_lines(const std::vector<std::string_view>& left, const std::vector<std::string_view>& right,
                    std::size_t max_edits = 4096);

}  // namespace vulnseed
