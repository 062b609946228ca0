// Copyright 2026 The metacat Authors
// SPDX-License-Identifier: Apache-2.0
#include "metacat/condition.hpp"

#include <gtest/gtest.h>

#include <random>

#include "metacat/error.hpp"
#include "support/cond_oracle.hpp"

using namespace metacat;
using testing_oracle = metacat::testing::TestCond;
using metacat::testing::OracleRow;
using metacat::testing::random_cond;

namespace {

const std::vector<AttributeDef> kSchema = {
    {"run", AttrType::Int},
    {"energy", AttrType::Float},
    {"name", AttrType::String},
    {"taken", AttrType::Timestamp},
};

bool eval_on(const Condition& c, const std::vector<OptValue>& values) {
    return c.eval(kSchema, values);
}

} // namespace

TEST(ConditionTest, EmptyIsTrue) {
    Condition c = Condition::parse("");
    EXPECT_TRUE(c.is_true());
    EXPECT_TRUE(eval_on(c, {std::nullopt, std::nullopt, std::nullopt, std::nullopt}));
    EXPECT_EQ(c.str(), "");
}

TEST(ConditionTest, SimpleTerms) {
    EXPECT_TRUE(eval_on(Condition::parse("run > 3"), {"5", "1.0", "x", "0"}));
    EXPECT_FALSE(eval_on(Condition::parse("run > 3"), {"3", "1.0", "x", "0"}));
    EXPECT_TRUE(eval_on(Condition::parse("name = 'f1'"), {"0", "0", "f1", "0"}));
    EXPECT_TRUE(eval_on(Condition::parse("name like 'f%'"), {"0", "0", "f123", "0"}));
    EXPECT_FALSE(eval_on(Condition::parse("name like 'f%'"), {"0", "0", "g1", "0"}));
    EXPECT_TRUE(eval_on(Condition::parse("energy <= 2.5"), {"0", "2.5", "x", "0"}));
    EXPECT_TRUE(eval_on(Condition::parse("taken >= 100"), {"0", "0", "x", "100"}));
}

TEST(ConditionTest, BooleanStructure) {
    Condition c = Condition::parse("run > 3 AND (name = 'a' OR NOT run = 10)");
    EXPECT_TRUE(eval_on(c, {"5", "0", "b", "0"}));
    EXPECT_FALSE(eval_on(c, {"10", "0", "b", "0"}));
    EXPECT_TRUE(eval_on(c, {"10", "0", "a", "0"}));
    // keywords are case-insensitive
    EXPECT_EQ(Condition::parse("run > 3 and name = 'a'").str(),
              Condition::parse("run > 3 AND name = 'a'").str());
}

TEST(ConditionTest, NullFailsEveryComparison) {
    for (const char* text : {"run = 0", "run != 0", "run < 1", "run >= -1"}) {
        EXPECT_FALSE(eval_on(Condition::parse(text), {std::nullopt, "0", "x", "0"}))
            << text;
    }
    // NOT over a NULL term is true (three-valued logic collapsed at the term)
    EXPECT_TRUE(eval_on(Condition::parse("NOT run = 0"), {std::nullopt, "0", "x", "0"}));
}

TEST(ConditionTest, ParseErrors) {
    for (const char* bad : {"run >", "run ! 3", "(run = 1", "run = 'x", "= 3",
                            "run = 3 AND", "run like 3x", "run = 3 3"}) {
        EXPECT_THROW(Condition::parse(bad), Error) << bad;
    }
}

TEST(ConditionTest, StrictValidation) {
    auto expect_bad = [](const char* text) {
        try {
            Condition::parse(text).validate(kSchema);
            FAIL() << text;
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), ErrorCode::BadCondition) << text;
        }
    };
    expect_bad("missing = 1");
    expect_bad("run = 'abc'");
    expect_bad("name = 3");
    expect_bad("run like 'x%'");
    expect_bad("name like 3");
    Condition::parse("run = 1 AND name like 'f%'").validate(kSchema); // fine
}

TEST(ConditionTest, LikeEdgeCases) {
    EXPECT_TRUE(Condition::like_match("abc", "abc"));
    EXPECT_FALSE(Condition::like_match("abc", "ab"));
    EXPECT_TRUE(Condition::like_match("abc", "%"));
    EXPECT_TRUE(Condition::like_match("", "%"));
    EXPECT_FALSE(Condition::like_match("", "a%"));
    EXPECT_TRUE(Condition::like_match("a", "a%"));
    EXPECT_TRUE(Condition::like_match("axxb", "a%b"));
    EXPECT_FALSE(Condition::like_match("a", "a%a")); // prefix and suffix overlap
    EXPECT_TRUE(Condition::like_match("aba", "a%a"));
    EXPECT_TRUE(Condition::like_match("a1b2c", "a%b%c"));
    EXPECT_FALSE(Condition::like_match("a1c2b", "a%b%c"));
}

// Canonical text form reparses to an equivalent condition.
TEST(ConditionTest, StrRoundTrip) {
    std::mt19937_64 rng(99);
    std::vector<AttrType> types = {AttrType::Int, AttrType::Float, AttrType::String};
    for (int iter = 0; iter < 500; ++iter) {
        auto oracle = random_cond(rng, types);
        Condition c = Condition::parse(oracle.render());
        Condition back = Condition::parse(c.str());
        EXPECT_EQ(back.str(), c.str());
    }
}

// Typed evaluation matches the independent oracle across fuzzed rows.
TEST(ConditionTest, FuzzEvalAgainstOracle) {
    std::mt19937_64 rng(1234);
    std::vector<AttrType> types = {AttrType::Int, AttrType::Float, AttrType::String,
                                   AttrType::Timestamp};
    std::vector<AttributeDef> schema;
    for (size_t i = 0; i < types.size(); ++i) {
        schema.push_back({"a" + std::to_string(i), types[i]});
    }
    std::uniform_int_distribution<int> int_dist(-10, 10);
    std::uniform_int_distribution<int> null_dist(0, 5);
    static const char* strings[] = {"", "x", "f1", "f22", "a%b", "plain"};

    for (int iter = 0; iter < 3000; ++iter) {
        auto oracle = random_cond(rng, types);
        Condition c = Condition::parse(oracle.render());

        OracleRow row;
        std::vector<OptValue> values;
        for (size_t i = 0; i < types.size(); ++i) {
            OptValue v;
            if (null_dist(rng) != 0) {
                switch (types[i]) {
                case AttrType::Int:
                case AttrType::Timestamp:
                    v = std::to_string(int_dist(rng));
                    break;
                case AttrType::Float:
                    v = canonicalize_value(AttrType::Float,
                                           std::to_string(int_dist(rng) * 0.5));
                    break;
                case AttrType::String:
                    v = strings[std::uniform_int_distribution<int>(0, 5)(rng)];
                    break;
                }
            }
            row.cells["a" + std::to_string(i)] = {types[i], v};
            values.push_back(v);
        }
        ASSERT_EQ(c.eval(schema, values), oracle.eval(row))
            << oracle.render() << " on row " << iter;

        // dynamic (image) evaluation agrees with the oracle's dynamic view
        std::map<std::string, std::string> image;
        for (size_t i = 0; i < values.size(); ++i) {
            if (values[i]) image[schema[i].name] = *values[i];
        }
        ASSERT_EQ(c.eval_image(image), oracle.eval_image(image))
            << oracle.render() << " image row " << iter;
    }
}
