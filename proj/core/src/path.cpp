// Copyright 2026 The metacat Authors
// SPDX-License-Identifier: Apache-2.0
#include "metacat/path.hpp"

#include <fmt/format.h>

#include "metacat/error.hpp"

namespace metacat {

namespace {

bool valid_segment_char(char c) {
    return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') ||
           (c >= '0' && c <= '9') || c == '_' || c == '.' || c == '-';
}

} // namespace

bool Path::valid_segment(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s) {
        if (!valid_segment_char(c)) return false;
    }
    return true;
}

Path Path::parse(std::string_view text) {
    if (text == "/") return Path();
    if (text.empty() || text.front() != '/') {
        throw Error(ErrorCode::BadName, fmt::format("bad path: '{}'", text));
    }
    std::string canonical = "/";
    size_t pos = 1;
    for (;;) {
        size_t next = text.find('/', pos);
        std::string_view seg = (next == std::string_view::npos)
                                   ? text.substr(pos)
                                   : text.substr(pos, next - pos);
        if (!valid_segment(seg)) {
            throw Error(ErrorCode::BadName, fmt::format("bad path: '{}'", text));
        }
        if (canonical.size() > 1) canonical += '/';
        canonical.append(seg);
        if (next == std::string_view::npos) break;
        pos = next + 1;
    }
    return Path(std::move(canonical));
}

size_t Path::depth() const {
    if (is_root()) return 0;
    // every segment is preceded by exactly one '/'
    size_t n = 0;
    for (char c : text_) {
        if (c == '/') ++n;
    }
    return n;
}

Path Path::parent() const {
    if (is_root()) {
        throw Error(ErrorCode::BadName, "root has no parent");
    }
    size_t slash = text_.rfind('/');
    if (slash == 0) return Path();
    return Path(text_.substr(0, slash));
}

std::string_view Path::leaf() const {
    if (is_root()) return {};
    size_t slash = text_.rfind('/');
    return std::string_view(text_).substr(slash + 1);
}

Path Path::child(std::string_view segment) const {
    if (!valid_segment(segment)) {
        throw Error(ErrorCode::BadName, fmt::format("bad name: '{}'", segment));
    }
    if (is_root()) return Path("/" + std::string(segment));
    return Path(fmt::format("{}/{}", text_, segment));
}

std::vector<std::string> Path::segments() const {
    std::vector<std::string> out;
    if (is_root()) return out;
    size_t pos = 1;
    while (pos < text_.size()) {
        size_t next = text_.find('/', pos);
        if (next == std::string::npos) {
            out.push_back(text_.substr(pos));
            break;
        }
        out.push_back(text_.substr(pos, next - pos));
        pos = next + 1;
    }
    return out;
}

bool Path::is_prefix_of(const Path& other) const {
    if (is_root()) return true;
    if (other.text_.size() < text_.size()) return false;
    if (other.text_.compare(0, text_.size(), text_) != 0) return false;
    return other.text_.size() == text_.size() || other.text_[text_.size()] == '/';
}

} // namespace metacat
