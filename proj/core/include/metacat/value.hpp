// Copyright 2026 The metacat Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace metacat {

enum class AttrType { Int, Float, String, Timestamp };

/// Parse "INT" | "FLOAT" | "STRING" | "TIMESTAMP"; throws Error(BadArgument).
AttrType parse_attr_type(std::string_view text);
std::string_view attr_type_name(AttrType type);

struct AttributeDef {
    std::string name;
    AttrType type;

    friend bool operator==(const AttributeDef&, const AttributeDef&) = default;
};

/// An attribute value as stored: canonical text, or nullopt for NULL.
/// INT and TIMESTAMP canonicalize to plain decimal, FLOAT to the shortest
/// round-tripping form, STRING is kept verbatim.
using OptValue = std::optional<std::string>;

/// Validate `raw` against `type` and return its canonical text.
/// Throws Error(TypeMismatch) when the text does not parse under the type.
std::string canonicalize_value(AttrType type, std::string_view raw);

/// Wire/file encoding of an OptValue within a single token:
/// NULL encodes as "\N", and every backslash in a non-null value is doubled,
/// so no non-null value ever encodes to "\N".
std::string encode_value(const OptValue& value);

/// Inverse of encode_value. Throws Error(MalformedLine) on a stray escape.
OptValue decode_value(std::string_view token);

/// Typed comparison helpers used by the condition evaluator.
int64_t parse_int(std::string_view text);    // throws TypeMismatch
double parse_float(std::string_view text);   // throws TypeMismatch

} // namespace metacat
