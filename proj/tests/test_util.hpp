#pragma once

#include "vulnseed/syntax.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

namespace vulnseed::test {

inline std::filesystem::path fixtures() { return VULNSEED_FIXTURES; }

inline std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

inline void write_file(const std::filesystem::path& path, const std::string& text)
{
    std::filesystem::create_directories(path.parent_path());
    std::ofstream(path, std::ios::binary) << text;
}

/// Fresh empty directory under the system temp dir, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag)
    {
        std::random_device rd;
        path_ = std::filesystem::temp_directory_path() / ("vulnseed-" + tag + "-" + std::to_string(rd()));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir()
    {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& rel) const { return path_ / rel; }

private:
    std::filesystem::path path_;
};

/// Parses or fails the current test.
inline SyntaxTree parsed(const std::string& text)
{
    ParseOutcome out = parse_text(text);
    if (!out.ok()) {
        ADD_FAILURE() << "parse failed: " << out.diagnostics.front().message << "\n" << text;
        throw std::runtime_error("parse failed");
    }
    return std::move(*out.tree);
}

/// Wraps statements into a function of a contract.
inline std::string in_function(const std::string& body, const std::string& members = "")
{
    return "contract C {\n" + members + "    function f(address payable a, address b, uint x) public {\n" + body +
           "\n    }\n}\n";
}

}  // namespace vulnseed::test
