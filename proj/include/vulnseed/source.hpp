#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace vulnseed {

/// Half-open byte interval [start, end) into a source text.
struct Span {
    std::size_t start = 0;
    std::size_t end = 0;

    std::size_t size() const { return end - start; }
    bool empty() const { return start == end; }
    bool contains(const Span& other) const { return start <= other.start && other.end <= end; }
    bool overlaps(const Span& other) const { return start < other.end && other.start < end; }

    friend bool operator==(const Span&, const Span&) = default;
};

/// An immutable source file with a precomputed line index.
///
/// Line numbers are 1-based; `line_starts()[k]` is the byte offset of line k + 1.
class SourceFile {
public:
    SourceFile() : SourceFile({}, std::string{}) {}
    SourceFile(std::filesystem::path path, std::string text);

    /// Reads a file from disk; throws std::runtime_error when it cannot be read.
    static SourceFile load(const std::filesystem::path& path);

    const std::filesystem::path& path() const { return path_; }
    std::string_view text() const { return text_; }
    std::size_t size() const { return text_.size(); }
    std::span<const std::size_t> line_starts() const { return line_starts_; }

    std::size_t line_of(std::size_t offset) const;
    std::size_t line_start(std::size_t line) const { return line_starts_.at(line - 1); }
    std::string_view slice(Span span) const;

    /// Leading whitespace of the line containing `offset`.
    std::string_view indent_at(std::size_t offset) const;

private:
    std::filesystem::path path_;
    std::string text_;
    std::vector<std::size_t> line_starts_;
};

}  // namespace vulnseed
