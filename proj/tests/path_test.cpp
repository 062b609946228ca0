// Copyright 2026 The metacat Authors
// SPDX-License-Identifier: Apache-2.0
#include "metacat/path.hpp"

#include <gtest/gtest.h>

#include <random>

#include "metacat/error.hpp"

using metacat::Error;
using metacat::ErrorCode;
using metacat::Path;

TEST(PathTest, RootParsesAndIsCanonical) {
    Path root = Path::parse("/");
    EXPECT_TRUE(root.is_root());
    EXPECT_EQ(root.str(), "/");
    EXPECT_EQ(root.depth(), 0u);
    EXPECT_EQ(root, Path::root());
}

TEST(PathTest, SimplePaths) {
    Path p = Path::parse("/a/b/c");
    EXPECT_EQ(p.str(), "/a/b/c");
    EXPECT_EQ(p.depth(), 3u);
    EXPECT_EQ(p.leaf(), "c");
    EXPECT_EQ(p.parent().str(), "/a/b");
    EXPECT_EQ(p.parent().parent().str(), "/a");
    EXPECT_EQ(p.parent().parent().parent(), Path::root());
    EXPECT_EQ(Path::root().child("x").str(), "/x");
    EXPECT_EQ(p.segments(), (std::vector<std::string>{"a", "b", "c"}));
}

TEST(PathTest, RejectsMalformed) {
    for (const char* bad : {"", "a", "a/b", "//", "/a/", "/a//b", "/a b", "/a\"b",
                            "/a/b/", "/ ", "/\t", "/a\n"}) {
        EXPECT_THROW(Path::parse(bad), Error) << bad;
    }
    EXPECT_THROW(Path::root().parent(), Error);
}

TEST(PathTest, SegmentLexicalRule) {
    EXPECT_TRUE(Path::valid_segment("file.txt"));
    EXPECT_TRUE(Path::valid_segment("run_01-A"));
    EXPECT_FALSE(Path::valid_segment(""));
    EXPECT_FALSE(Path::valid_segment("a b"));
    EXPECT_FALSE(Path::valid_segment("a/b"));
    EXPECT_FALSE(Path::valid_segment("ü"));
}

TEST(PathTest, PrefixIsTreeAncestry) {
    Path a = Path::parse("/a");
    EXPECT_TRUE(Path::root().is_prefix_of(a));
    EXPECT_TRUE(a.is_prefix_of(a));
    EXPECT_TRUE(a.is_prefix_of(Path::parse("/a/b")));
    EXPECT_TRUE(a.is_prefix_of(Path::parse("/a/b/c")));
    EXPECT_FALSE(a.is_prefix_of(Path::parse("/ab")));
    EXPECT_FALSE(a.is_prefix_of(Path::root()));
    EXPECT_FALSE(Path::parse("/a/b").is_prefix_of(a));
}

// Normalization is total: parsing a canonical form is the identity, and the
// prefix test agrees with a brute-force check over segment vectors.
TEST(PathTest, FuzzCanonicalAndPrefix) {
    std::mt19937_64 rng(41);
    auto random_path = [&] {
        std::uniform_int_distribution<int> depth_dist(0, 4);
        std::uniform_int_distribution<int> seg_dist(0, 2);
        static const char* segs[] = {"a", "bb", "c-3"};
        Path p = Path::root();
        int depth = depth_dist(rng);
        for (int i = 0; i < depth; ++i) p = p.child(segs[seg_dist(rng)]);
        return p;
    };
    for (int iter = 0; iter < 2000; ++iter) {
        Path p = random_path();
        Path q = random_path();
        EXPECT_EQ(Path::parse(p.str()), p);

        auto ps = p.segments();
        auto qs = q.segments();
        bool expect = ps.size() <= qs.size() &&
                      std::equal(ps.begin(), ps.end(), qs.begin());
        EXPECT_EQ(p.is_prefix_of(q), expect) << p.str() << " vs " << q.str();
    }
}
