#pragma once

#include "vulnseed/source.hpp"

#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace vulnseed {

/// Replace `span` of the original text with `replacement`. A zero-width span is an insertion.
struct Edit {
    Span span;
    std::string replacement;
};

struct EditSet {
    std::vector<Edit> edits;
    std::string site_id;
};

/// Raised when two edits of one set overlap; indicates an operator bug.
class OverlappingEdits : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Edits sorted by (start, end), validated against `text_size`.
/// Throws OverlappingEdits or std::out_of_range.
std::vector<Edit> normalized_edits(const EditSet& set, std::size_t text_size);

std::string apply(const SourceFile& file, const EditSet& set);

/// Location of `region` of the original text inside the rewritten text. Edits lying within
/// `region` (touching its ends included) count towards it; edits may not straddle its boundary.
Span project(const EditSet& set, Span region, std::size_t text_size);

/// `base` if free, otherwise `base` followed by the smallest positive integer not in `taken`.
std::string fresh_name(const std::string& base, const std::set<std::string>& taken);

}  // namespace vulnseed
