#include "vulnseed/source.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace vulnseed {

SourceFile::SourceFile(std::filesystem::path path, std::string text)
    : path_(std::move(path)), text_(std::move(text))
{
    line_starts_.push_back(0);
    for (std::size_t i = 0; i < text_.size(); ++i) {
        if (text_[i] == '\n') line_starts_.push_back(i + 1);
    }
}

SourceFile SourceFile::load(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) throw std::runtime_error("read error on " + path.string());
    return SourceFile(path, std::move(buffer).str());
}

std::size_t SourceFile::line_of(std::size_t offset) const
{
    if (offset > text_.size()) throw std::out_of_range("offset past end of file");
    auto it = std::upper_bound(line_starts_.begin(), line_starts_.end(), offset);
    return static_cast<std::size_t>(it - line_starts_.begin());
}

std::string_view SourceFile::slice(Span span) const
{
    if (span.start > span.end || span.end > text_.size()) throw std::out_of_range("span outside file");
    return std::string_view(text_).substr(span.start, span.size());
}

std::string_view SourceFile::indent_at(std::size_t offset) const
{
    std::size_t begin = line_starts_[line_of(offset) - 1];
    std::size_t end = begin;
    while (end < text_.size() && (text_[end] == ' ' || text_[end] == '\t')) ++end;
    return std::string_view(text_).substr(begin, end - begin);
}

}  // namespace vulnseed
