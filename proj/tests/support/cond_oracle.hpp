// Copyright 2026 The metacat Authors
// SPDX-License-Identifier: Apache-2.0
//
// Test-side condition oracle: the test generates its own expression tree,
// renders it to the condition grammar for the implementation under test,
// and evaluates it here with independently written semantics (regex-based
// like, explicit NULL-collapses-to-false handling).
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <regex>
#include <string>
#include <vector>

#include "metacat/value.hpp"

namespace metacat::testing {

struct OracleRow {
    // attribute name -> (type, value); nullopt value = NULL
    std::map<std::string, std::pair<AttrType, std::optional<std::string>>> cells;
};

struct TestCond {
    enum class Kind { Term, And, Or, Not };
    Kind kind = Kind::Term;

    // term fields
    std::string attr;
    std::string op; // "=", "!=", "<", "<=", ">", ">=", "like"
    bool lit_is_str = false;
    bool lit_is_int = true;
    int64_t lit_int = 0;
    double lit_float = 0;
    std::string lit_str;

    std::vector<TestCond> kids;

    std::string render() const {
        switch (kind) {
        case Kind::Term: {
            std::string lit;
            if (lit_is_str) {
                lit = "'";
                for (char c : lit_str) {
                    if (c == '\'') lit += '\'';
                    lit += c;
                }
                lit += "'";
            } else if (lit_is_int) {
                lit = std::to_string(lit_int);
            } else {
                char buf[64];
                snprintf(buf, sizeof buf, "%.17g", lit_float);
                lit = buf;
            }
            return attr + " " + op + " " + lit;
        }
        case Kind::And:
            return "(" + kids[0].render() + " AND " + kids[1].render() + ")";
        case Kind::Or:
            return "(" + kids[0].render() + " OR " + kids[1].render() + ")";
        case Kind::Not:
            return "(NOT " + kids[0].render() + ")";
        }
        return "";
    }

    static bool like(const std::string& text, const std::string& pattern) {
        std::string rx;
        for (char c : pattern) {
            if (c == '%') {
                rx += ".*";
            } else if (std::string("\\^$.|?*+()[]{}").find(c) != std::string::npos) {
                rx += '\\';
                rx += c;
            } else {
                rx += c;
            }
        }
        return std::regex_match(text, std::regex(rx));
    }

    template <typename T>
    static bool cmp(const std::string& op, const T& a, const T& b) {
        if (op == "=") return a == b;
        if (op == "!=") return a != b;
        if (op == "<") return a < b;
        if (op == "<=") return a <= b;
        if (op == ">") return a > b;
        return a >= b;
    }

    // Typed evaluation (the find_entries semantics).
    bool eval(const OracleRow& row) const {
        switch (kind) {
        case Kind::And:
            return kids[0].eval(row) && kids[1].eval(row);
        case Kind::Or:
            return kids[0].eval(row) || kids[1].eval(row);
        case Kind::Not:
            return !kids[0].eval(row);
        case Kind::Term:
            break;
        }
        auto it = row.cells.find(attr);
        if (it == row.cells.end()) return false;
        const auto& [type, value] = it->second;
        if (!value) return false; // NULL fails every comparison term
        if (op == "like") {
            return type == AttrType::String && lit_is_str && like(*value, lit_str);
        }
        if (lit_is_str) {
            return type == AttrType::String && cmp(op, *value, lit_str);
        }
        if (type == AttrType::String) return false;
        double lhs = std::stod(*value);
        double rhs = lit_is_int ? static_cast<double>(lit_int) : lit_float;
        return cmp(op, lhs, rhs);
    }

    // Dynamic evaluation against an untyped image (the filter semantics).
    bool eval_image(const std::map<std::string, std::string>& image) const {
        switch (kind) {
        case Kind::And:
            return kids[0].eval_image(image) && kids[1].eval_image(image);
        case Kind::Or:
            return kids[0].eval_image(image) || kids[1].eval_image(image);
        case Kind::Not:
            return !kids[0].eval_image(image);
        case Kind::Term:
            break;
        }
        auto it = image.find(attr);
        if (it == image.end()) return false;
        const std::string& value = it->second;
        if (op == "like") return lit_is_str && like(value, lit_str);
        if (lit_is_str) return cmp(op, value, lit_str);
        double lhs = 0;
        try {
            size_t used = 0;
            lhs = std::stod(value, &used);
            if (used != value.size()) return false;
        } catch (...) {
            return false;
        }
        double rhs = lit_is_int ? static_cast<double>(lit_int) : lit_float;
        return cmp(op, lhs, rhs);
    }
};

/// Random condition over attributes named a0..a{n-1} with the given types.
inline TestCond random_cond(std::mt19937_64& rng,
                            const std::vector<AttrType>& types, int depth = 0) {
    std::uniform_int_distribution<int> pick(0, depth >= 3 ? 0 : 5);
    int choice = pick(rng);
    TestCond node;
    if (choice >= 3) { // composite
        node.kind = choice == 3   ? TestCond::Kind::And
                    : choice == 4 ? TestCond::Kind::Or
                                  : TestCond::Kind::Not;
        node.kids.push_back(random_cond(rng, types, depth + 1));
        if (node.kind != TestCond::Kind::Not) {
            node.kids.push_back(random_cond(rng, types, depth + 1));
        }
        return node;
    }
    node.kind = TestCond::Kind::Term;
    std::uniform_int_distribution<size_t> attr_dist(0, types.size() - 1);
    size_t ai = attr_dist(rng);
    node.attr = "a" + std::to_string(ai);
    AttrType type = types[ai];
    if (type == AttrType::String) {
        static const char* ops[] = {"=", "!=", "<", "<=", ">", ">=", "like"};
        node.op = ops[std::uniform_int_distribution<int>(0, 6)(rng)];
        node.lit_is_str = true;
        static const char* lits[] = {"x", "f%", "%3", "f1", "", "a%b", "%"};
        node.lit_str = lits[std::uniform_int_distribution<int>(0, 6)(rng)];
        if (node.op != "like" && node.lit_str.find('%') != std::string::npos) {
            node.lit_str = "plain";
        }
    } else {
        static const char* ops[] = {"=", "!=", "<", "<=", ">", ">="};
        node.op = ops[std::uniform_int_distribution<int>(0, 5)(rng)];
        node.lit_is_str = false;
        if (type == AttrType::Float &&
            std::uniform_int_distribution<int>(0, 1)(rng) == 0) {
            node.lit_is_int = false;
            node.lit_float =
                std::uniform_int_distribution<int>(-8, 8)(rng) * 0.5;
        } else {
            node.lit_is_int = true;
            node.lit_int = std::uniform_int_distribution<int>(-10, 10)(rng);
        }
    }
    return node;
}

} // namespace metacat::testing
