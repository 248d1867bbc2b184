#include "vulnseed/rewrite.hpp"

#include <algorithm>

namespace vulnseed {

std::vector<Edit> normalized_edits(const EditSet& set, std::size_t text_size)
{
    std::vector<Edit> edits = set.edits;
    std::stable_sort(edits.begin(), edits.end(), [](const Edit& a, const Edit& b) {
        return a.span.start != b.span.start ? a.span.start < b.span.start : a.span.end < b.span.end;
    });
    for (std::size_t i = 0; i < edits.size(); ++i) {
        const Span& s = edits[i].span;
        if (s.start > s.end || s.end > text_size) throw std::out_of_range("edit span outside file");
        if (i > 0 && edits[i - 1].span.end > s.start)
            throw OverlappingEdits("overlapping edits at offsets " + std::to_string(edits[i - 1].span.start) + " and " +
                                   std::to_string(s.start) + (set.site_id.empty() ? "" : " in " + set.site_id));
    }
    return edits;
}

std::string apply(const SourceFile& file, const EditSet& set)
{
    std::string_view text = file.text();
    std::vector<Edit> edits = normalized_edits(set, text.size());
    std::string out;
    out.reserve(text.size());
    std::size_t cursor = 0;
    for (const Edit& e : edits) {
        out.append(text.substr(cursor, e.span.start - cursor));
        out.append(e.replacement);
        cursor = e.span.end;
    }
    out.append(text.substr(cursor));
    return out;
}

Span project(const EditSet& set, Span region, std::size_t text_size)
{
    std::vector<Edit> edits = normalized_edits(set, text_size);
    std::ptrdiff_t before = 0;
    std::ptrdiff_t inside = 0;
    for (const Edit& e : edits) {
        auto delta = static_cast<std::ptrdiff_t>(e.replacement.size()) - static_cast<std::ptrdiff_t>(e.span.size());
        if (region.contains(e.span)) {
            inside += delta;
        } else if (e.span.end <= region.start) {
            before += delta;
        } else if (e.span.start < region.end) {
            throw std::invalid_argument("edit straddles projected region");
        }
    }
    auto start = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(region.start) + before);
    auto end = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(start + region.size()) + inside);
    return {start, end};
}

std::string fresh_name(const std::string& base, const std::set<std::string>& taken)
{
    if (!taken.contains(base)) return base;
    for (std::size_t k = 1;; ++k) {
        std::string candidate = base + std::to_string(k);
        if (!taken.contains(candidate)) return candidate;
    }
}

}  // namespace vulnseed
