// Copyright 2026 The metacat Authors
// SPDX-License-Identifier: Apache-2.0
#include "metacat/wire.hpp"

#include <algorithm>
#include <array>

#include <fmt/format.h>

namespace metacat::wire {

namespace {

constexpr std::array kVerbs = {
    // client verbs
    std::string_view("CREATEDIR"), std::string_view("REMOVEDIR"),
    std::string_view("ADDATTR"), std::string_view("REMOVEATTR"),
    std::string_view("ADDENTRY"), std::string_view("SETATTR"),
    std::string_view("DELENTRY"), std::string_view("GETATTR"),
    std::string_view("FIND"), std::string_view("DUMP"),
    std::string_view("PING"), std::string_view("QUIT"),
    // replication verbs
    std::string_view("SUBSCRIBE"), std::string_view("UNSUBSCRIBE"),
    std::string_view("SNAPSHOT_BEGIN"), std::string_view("SNAPSHOT_END"),
    std::string_view("LOG"), std::string_view("ACK"),
    std::string_view("RESUME"),
    // federation forwarding marker
    std::string_view("VIA"),
};

constexpr std::array kMutating = {
    std::string_view("CREATEDIR"), std::string_view("REMOVEDIR"),
    std::string_view("ADDATTR"), std::string_view("REMOVEATTR"),
    std::string_view("ADDENTRY"), std::string_view("SETATTR"),
    std::string_view("DELENTRY"),
};

constexpr std::array kReplication = {
    std::string_view("SUBSCRIBE"), std::string_view("UNSUBSCRIBE"),
    std::string_view("SNAPSHOT_BEGIN"), std::string_view("SNAPSHOT_END"),
    std::string_view("LOG"), std::string_view("ACK"),
    std::string_view("RESUME"),
};

bool needs_quoting(std::string_view token) {
    if (token.empty()) return true;
    return token.find_first_of(" \t\"\\") != std::string_view::npos;
}

} // namespace

bool known_verb(std::string_view verb) {
    return std::find(kVerbs.begin(), kVerbs.end(), verb) != kVerbs.end();
}

bool mutating_verb(std::string_view verb) {
    return std::find(kMutating.begin(), kMutating.end(), verb) != kMutating.end();
}

bool replication_verb(std::string_view verb) {
    return std::find(kReplication.begin(), kReplication.end(), verb) !=
           kReplication.end();
}

std::string encode_token(std::string_view token) {
    if (token.find('\n') != std::string_view::npos ||
        token.find('\r') != std::string_view::npos) {
        throw Error(ErrorCode::MalformedLine, "token contains a line break");
    }
    if (!needs_quoting(token)) return std::string(token);
    std::string out = "\"";
    for (char c : token) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    out += '"';
    return out;
}

std::vector<std::string> tokenize(std::string_view line) {
    std::vector<std::string> tokens;
    size_t i = 0;
    const size_t n = line.size();
    while (i < n) {
        if (line[i] == ' ' || line[i] == '\t') {
            ++i;
            continue;
        }
        std::string token;
        if (line[i] == '"') {
            ++i;
            bool terminated = false;
            while (i < n) {
                char c = line[i];
                if (c == '\\') {
                    if (i + 1 >= n || (line[i + 1] != '"' && line[i + 1] != '\\')) {
                        throw Error(ErrorCode::MalformedLine,
                                    "bad escape in quoted token");
                    }
                    token += line[i + 1];
                    i += 2;
                } else if (c == '"') {
                    ++i;
                    terminated = true;
                    break;
                } else {
                    token += c;
                    ++i;
                }
            }
            if (!terminated) {
                throw Error(ErrorCode::MalformedLine, "unterminated quote");
            }
            if (i < n && line[i] != ' ' && line[i] != '\t') {
                throw Error(ErrorCode::MalformedLine,
                            "garbage after closing quote");
            }
        } else {
            while (i < n && line[i] != ' ' && line[i] != '\t') {
                if (line[i] == '"') {
                    throw Error(ErrorCode::MalformedLine,
                                "quote inside bare token");
                }
                token += line[i];
                ++i;
            }
        }
        tokens.push_back(std::move(token));
    }
    return tokens;
}

std::string encode_command(const Request& request) {
    if (!known_verb(request.verb)) {
        throw Error(ErrorCode::UnknownVerb,
                    fmt::format("unknown verb '{}'", request.verb));
    }
    std::string line(request.verb);
    for (const auto& arg : request.args) {
        line += ' ';
        line += encode_token(arg);
    }
    return line;
}

std::string encode_request(const Request& request) {
    return encode_command(request) + "\n";
}

Request parse_request(std::string_view line) {
    while (!line.empty() && (line.back() == '\n' || line.back() == '\r')) {
        line.remove_suffix(1);
    }
    auto tokens = tokenize(line);
    if (tokens.empty()) {
        throw Error(ErrorCode::MalformedLine, "empty request");
    }
    Request req;
    req.verb = std::move(tokens.front());
    if (!known_verb(req.verb)) {
        throw Error(ErrorCode::UnknownVerb,
                    fmt::format("unknown verb '{}'", req.verb));
    }
    req.args.assign(std::make_move_iterator(tokens.begin() + 1),
                    std::make_move_iterator(tokens.end()));
    return req;
}

std::string encode_response(const Response& response) {
    std::string out;
    if (response.ok) {
        out = "OK\n";
    } else {
        out = fmt::format("ERR {} {}\n", response.code, response.message);
    }
    for (const auto& row : response.rows) {
        out += '|';
        out += row;
        out += '\n';
    }
    out += ".\n";
    return out;
}

bool ResponseParser::feed(std::string_view line) {
    while (!line.empty() && (line.back() == '\n' || line.back() == '\r')) {
        line.remove_suffix(1);
    }
    if (done_) {
        throw Error(ErrorCode::MalformedLine, "response already complete");
    }
    if (!got_status_) {
        if (line == "OK") {
            response_.ok = true;
        } else if (line.rfind("ERR ", 0) == 0) {
            std::string_view rest = line.substr(4);
            size_t sp = rest.find(' ');
            std::string_view code_text =
                (sp == std::string_view::npos) ? rest : rest.substr(0, sp);
            int code = 0;
            for (char c : code_text) {
                if (c < '0' || c > '9') {
                    throw Error(ErrorCode::MalformedLine, "bad error code");
                }
                code = code * 10 + (c - '0');
            }
            response_.ok = false;
            response_.code = code;
            response_.message =
                (sp == std::string_view::npos) ? "" : std::string(rest.substr(sp + 1));
        } else {
            throw Error(ErrorCode::MalformedLine,
                        fmt::format("bad status line: '{}'", line));
        }
        got_status_ = true;
        return false;
    }
    if (line == ".") {
        done_ = true;
        return true;
    }
    if (!line.empty() && line.front() == '|') {
        response_.rows.emplace_back(line.substr(1));
        return false;
    }
    throw Error(ErrorCode::MalformedLine,
                fmt::format("bad response row: '{}'", line));
}

Response ResponseParser::take() {
    Response out = std::move(response_);
    reset();
    return out;
}

} // namespace metacat::wire
