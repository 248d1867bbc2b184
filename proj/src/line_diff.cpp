#include "vulnseed/line_diff.hpp"

#include <algorithm>

namespace vulnseed {

std::vector<std::string_view> split_lines(std::string_view text)
{
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t nl = text.find('\n', start);
        if (nl == std::string_view::npos) {
            lines.push_back(text.substr(start));
            break;
        }
        lines.push_back(text.substr(start, nl - start));
        start = nl + 1;
    }
    return lines;
}

LineDiff diff_lines(const std::vector<std::string_view>& left, const std::vector<std::string_view>& right,
                    std::size_t max_edits)
{
    LineDiff diff{std::vector<bool>(left.size(), false), std::vector<bool>(right.size(), false)};

    std::size_t prefix = 0;
    while (prefix < left.size() && prefix < right.size() && left[prefix] == right[prefix]) {
        diff.left_kept[prefix] = diff.right_kept[prefix] = true;
        ++prefix;
    }
    std::size_t suffix = 0;
    while (suffix < left.size() - prefix && suffix < right.size() - prefix &&
           left[left.size() - 1 - suffix] == right[right.size() - 1 - suffix]) {
        diff.left_kept[left.size() - 1 - suffix] = diff.right_kept[right.size() - 1 - suffix] = true;
        ++suffix;
    }

    const auto n = static_cast<long>(left.size() - prefix - suffix);
    const auto m = static_cast<long>(right.size() - prefix - suffix);
    if (n == 0 || m == 0) return diff;

    auto a = [&](long i) { return left[prefix + static_cast<std::size_t>(i)]; };
    auto b = [&](long j) { return right[prefix + static_cast<std::size_t>(j)]; };

    const long max_d = std::min<long>(n + m, static_cast<long>(max_edits));
    const long offset = max_d + 1;
    std::vector<long> v(static_cast<std::size_t>(2 * max_d + 3), 0);
    std::vector<std::vector<long>> trace;
    long found = -1;
    for (long d = 0; d <= max_d && found < 0; ++d) {
        trace.push_back(v);
        for (long k = -d; k <= d; k += 2) {
            long x = (k == -d || (k != d && v[offset + k - 1] < v[offset + k + 1])) ? v[offset + k + 1]
                                                                                      : v[offset + k - 1] + 1;
            long y = x - k;
            while (x < n && y < m && a(x) == b(y)) {
                ++x;
                ++y;
            }
            v[offset + k] = x;
            if (x >= n && y >= m) {
                found = d;
                break;
            }
        }
    }
    if (found < 0) return diff;

    long x = n;
    long y = m;
    for (long d = found; d >= 0; --d) {
        const std::vector<long>& vd = trace[static_cast<std::size_t>(d)];
        long k = x - y;
        long prev_k = (k == -d || (k != d && vd[offset + k - 1] < vd[offset + k + 1])) ? k + 1 : k - 1;
        long prev_x = vd[offset + prev_k];
        long prev_y = prev_x - prev_k;
        while (x > prev_x && y > prev_y) {
            --x;
            --y;
            diff.left_kept[prefix + static_cast<std::size_t>(x)] = true;
            diff.right_kept[prefix + static_cast<std::size_t>(y)] = true;
        }
        if (d > 0) {
            x = prev_x;
            y = prev_y;
        }
    }
    return diff;
}

}  // namespace vulnseed
