// Copyright 2026 The metacat Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <compare>
#include <string>
#include <string_view>
#include <vector>

namespace metacat {

/// Canonical hierarchical path: "/" is the root, every other path is
/// "/" + segments joined by "/". Segments are drawn from [A-Za-z0-9_.-]+.
/// Two equal canonical strings denote the same node, and parsing is the
/// only way to construct a Path, so normalization is total.
class Path {
public:
    Path() : text_("/") {}

    static Path root() { return Path(); }

    /// Parse and canonicalize a path string. Throws Error(BadName) on
    /// anything that is not "/" or a "/"-joined sequence of valid segments.
    static Path parse(std::string_view text);

    /// True iff s is a valid path segment (also the lexical rule for
    /// attribute and entry names).
    static bool valid_segment(std::string_view s);

    const std::string& str() const { return text_; }
    bool is_root() const { return text_.size() == 1; }

    /// Number of segments; 0 for the root.
    size_t depth() const;

    /// Parent path. Throws Error(BadName) when called on the root.
    Path parent() const;

    /// Last segment. Empty for the root.
    std::string_view leaf() const;

    /// Child path with one extra segment (segment must be valid).
    Path child(std::string_view segment) const;

    std::vector<std::string> segments() const;

    /// Ancestor-or-equal test in the tree, not a plain string prefix:
    /// "/a" covers "/a" and "/a/b" but not "/ab".
    bool is_prefix_of(const Path& other) const;

    friend bool operator==(const Path& a, const Path& b) { return a.text_ == b.text_; }
    friend std::strong_ordering operator<=>(const Path& a, const Path& b) {
        return a.text_ <=> b.text_;
    }

private:
    explicit Path(std::string canonical) : text_(std::move(canonical)) {}

    std::string text_;
};

} // namespace metacat
