// Copyright 2026 The metacat Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "metacat/error.hpp"

namespace metacat::wire {

/// One protocol request: an uppercase verb plus tokenized arguments.
struct Request {
    std::string verb;
    std::vector<std::string> args;

    friend bool operator==(const Request&, const Request&) = default;
};

/// One protocol response. Success responses carry zero or more data rows;
/// error responses carry a stable numeric code and a message.
struct Response {
    bool ok = true;
    int code = 0;
    std::string message;
    std::vector<std::string> rows;

    static Response success() { return Response{}; }
    static Response success(std::vector<std::string> rows) {
        Response r;
        r.rows = std::move(rows);
        return r;
    }
    static Response failure(const Error& e) {
        Response r;
        r.ok = false;
        r.code = e.wire_code();
        r.message = e.what();
        return r;
    }
    static Response failure(ErrorCode code, std::string message) {
        Response r;
        r.ok = false;
        r.code = static_cast<int>(code);
        r.message = std::move(message);
        return r;
    }

    friend bool operator==(const Response&, const Response&) = default;
};

bool known_verb(std::string_view verb);
bool mutating_verb(std::string_view verb);
bool replication_verb(std::string_view verb);

/// Quote a token iff needed (empty, or contains space/tab/quote/backslash).
/// Escapes are \" and \\ inside quotes.
std::string encode_token(std::string_view token);

/// Split a line into tokens, applying quote and escape rules.
/// Throws Error(MalformedLine) on unterminated quotes or bad escapes.
std::vector<std::string> tokenize(std::string_view line);

/// Build the canonical line for a request, without the trailing LF.
/// Throws Error(UnknownVerb) for verbs outside the table and
/// Error(MalformedLine) for tokens containing newlines.
std::string encode_command(const Request& request);

/// encode_command plus the LF terminator.
std::string encode_request(const Request& request);

/// Parse one request line (trailing LF/CRLF tolerated).
/// Throws Error(MalformedLine) or Error(UnknownVerb).
Request parse_request(std::string_view line);

/// Serialize a response: "OK" or "ERR <code> <message>", one "|"-prefixed
/// line per row, then the "." terminator line.
std::string encode_response(const Response& response);

/// Incremental response reader for clients: feed one line at a time
/// (without the LF); returns true once the terminator arrived.
class ResponseParser {
public:
    bool feed(std::string_view line);
    Response take();
    void reset() { *this = ResponseParser(); }

private:
    Response response_;
    bool got_status_ = false;
    bool done_ = false;
};

} // namespace metacat::wire
