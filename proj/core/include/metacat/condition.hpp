// Copyright 2026 The metacat Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "metacat/value.hpp"

namespace metacat {

enum class CmpOp { Eq, Ne, Lt, Le, Gt, Ge, Like };

std::string_view cmp_op_text(CmpOp op);

/// A query/filter expression over attribute terms:
///   term     := attr (= | != | < | <= | > | >= | like) literal
///   literal  := integer | float | 'string' ('' escapes a quote)
/// combined with AND / OR / NOT and parentheses. Keywords are
/// case-insensitive; `like` uses `%` as the wildcard. The empty string
/// parses to the always-true condition.
///
/// NULL semantics: a comparison term over a NULL or missing attribute is
/// false; NOT then negates plainly (three-valued logic collapsed to false
/// at the term).
class Condition {
public:
    struct Literal {
        enum class Kind { Int, Float, Str };
        // no default member initializers: gcc 11 chokes on them when the
        // enclosing variant is instantiated inside this class
        Kind kind;
        int64_t i;
        double f;
        std::string s;

        Literal() : kind(Kind::Int), i(0), f(0) {}
    };

    struct Term {
        std::string attr;
        CmpOp op = CmpOp::Eq;
        Literal literal;
    };

    /// Parse a condition string; empty or blank yields TRUE.
    /// Throws Error(BadCondition) on syntax errors.
    static Condition parse(std::string_view text);

    static Condition always_true() { return Condition(); }

    bool is_true() const { return node_ == nullptr; }

    /// Canonical text form; parse(str()) reproduces the condition.
    std::string str() const;

    /// Strict schema check for queries: every referenced attribute must
    /// exist and every comparison must be type-consistent
    /// (`like` only on STRING, string literals only against STRING,
    /// numeric literals only against INT/FLOAT/TIMESTAMP).
    /// Throws Error(BadCondition).
    void validate(const std::vector<AttributeDef>& schema) const;

    /// Evaluate against an entry's positional values under `schema`.
    /// Call validate() first; unknown attributes evaluate to false here.
    bool eval(const std::vector<AttributeDef>& schema,
              const std::vector<OptValue>& values) const;

    /// Evaluate dynamically against a name -> value image (as carried by a
    /// replication log record). Missing attributes and type clashes make
    /// the term false instead of erroring; there is no schema to check
    /// against once a filter spans a whole subtree.
    bool eval_image(const std::map<std::string, std::string>& image) const;

    friend bool operator==(const Condition& a, const Condition& b) {
        return a.str() == b.str();
    }

    /// `%`-wildcard match (the `like` operator).
    static bool like_match(std::string_view text, std::string_view pattern);

private:
    struct Node;
    using NodePtr = std::shared_ptr<const Node>;

    struct And {
        NodePtr lhs, rhs;
    };
    struct Or {
        NodePtr lhs, rhs;
    };
    struct Not {
        NodePtr child;
    };

    struct Node {
        std::variant<Term, And, Or, Not> v;
    };

    explicit Condition(NodePtr node) : node_(std::move(node)) {}
    Condition() = default;

    NodePtr node_; // nullptr = TRUE

    class Parser;
};

} // namespace metacat
