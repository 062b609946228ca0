// Copyright 2026 The metacat Authors
// SPDX-License-Identifier: Apache-2.0
#include "metacat/value.hpp"

#include <charconv>
#include <cmath>

#include <fmt/format.h>

#include "metacat/error.hpp"

namespace metacat {

AttrType parse_attr_type(std::string_view text) {
    if (text == "INT") return AttrType::Int;
    if (text == "FLOAT") return AttrType::Float;
    if (text == "STRING") return AttrType::String;
    if (text == "TIMESTAMP") return AttrType::Timestamp;
    throw Error(ErrorCode::BadArgument, fmt::format("unknown attribute type '{}'", text));
}

std::string_view attr_type_name(AttrType type) {
    switch (type) {
    case AttrType::Int: return "INT";
    case AttrType::Float: return "FLOAT";
    case AttrType::String: return "STRING";
    case AttrType::Timestamp: return "TIMESTAMP";
    }
    return "?";
}

int64_t parse_int(std::string_view text) {
    int64_t v = 0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) {
        throw Error(ErrorCode::TypeMismatch, fmt::format("not an integer: '{}'", text));
    }
    return v;
}

double parse_float(std::string_view text) {
    double v = 0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || !std::isfinite(v)) {
        throw Error(ErrorCode::TypeMismatch, fmt::format("not a number: '{}'", text));
    }
    return v;
}

std::string canonicalize_value(AttrType type, std::string_view raw) {
    switch (type) {
    case AttrType::Int:
    case AttrType::Timestamp:
        return fmt::format("{}", parse_int(raw));
    case AttrType::Float: {
        double v = parse_float(raw);
        // shortest round-trip form
        char buf[64];
        auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
        (void)ec;
        return std::string(buf, ptr);
    }
    case AttrType::String:
        return std::string(raw);
    }
    throw Error(ErrorCode::TypeMismatch);
}

std::string encode_value(const OptValue& value) {
    if (!value) return "\\N";
    std::string out;
    out.reserve(value->size());
    for (char c : *value) {
        if (c == '\\') out += '\\';
        out += c;
    }
    return out;
}

OptValue decode_value(std::string_view token) {
    if (token == "\\N") return std::nullopt;
    std::string out;
    out.reserve(token.size());
    for (size_t i = 0; i < token.size(); ++i) {
        if (token[i] == '\\') {
            if (i + 1 >= token.size() || token[i + 1] != '\\') {
                throw Error(ErrorCode::MalformedLine,
                            fmt::format("bad value escape in '{}'", token));
            }
            ++i;
        }
        out += token[i];
    }
    return out;
}

} // namespace metacat
