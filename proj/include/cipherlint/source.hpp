#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

namespace cipherlint {

/// Half-open byte range within one file, plus the 1-based line and
/// 0-based column of its first byte.
struct Span {
    uint32_t begin = 0;
    uint32_t end = 0;
    uint32_t line = 1;
    uint32_t column = 0;

    bool contains(const Span& other) const {
        return begin <= other.begin && other.end <= end;
    }
    friend bool operator==(const Span&, const Span&) = default;
};

enum class FileOrigin { Application, Dependency };

inline const char* to_string(FileOrigin o) {
    return o == FileOrigin::Application ? "application" : "dependency";
}

/// One source file queued for analysis. `path` is unique within a scan;
/// dependency files always carry the distribution name they came from.
struct SourceFile {
    std::filesystem::path path;
    FileOrigin origin = FileOrigin::Application;
    std::optional<std::string> package_name;
    std::string content_hash;
    std::string project;      // owning project in the corpus layout
    std::string display_path; // project-relative path used in reports
};

/// FNV-1a over the raw bytes. Not collision-resistant against adversaries;
/// used only to fingerprint identical vendored copies of a file.
inline std::string content_fingerprint(std::string_view bytes) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    static const char* hex = "0123456789abcdef";
    for (int i = 15; i >= 0; --i) {
        buf[i] = hex[h & 0xf];
        h >>= 4;
    }
    buf[16] = '\0';
    return std::string(buf, 16);
}

} // namespace cipherlint
