// Copyright 2026 The metacat Authors
// SPDX-License-Identifier: Apache-2.0
#include "metacat/condition.hpp"

#include <charconv>
#include <functional>

#include <fmt/format.h>

#include "metacat/error.hpp"
#include "metacat/path.hpp"

namespace metacat {

std::string_view cmp_op_text(CmpOp op) {
    switch (op) {
    case CmpOp::Eq: return "=";
    case CmpOp::Ne: return "!=";
    case CmpOp::Lt: return "<";
    case CmpOp::Le: return "<=";
    case CmpOp::Gt: return ">";
    case CmpOp::Ge: return ">=";
    case CmpOp::Like: return "like";
    }
    return "?";
}

namespace {

std::string lower(std::string_view s) {
    std::string out(s);
    for (char& c : out) {
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    }
    return out;
}

struct Tok {
    enum class Kind { Ident, Number, Str, Punct, End };
    Kind kind = Kind::End;
    std::string text;
};

class Lexer {
public:
    explicit Lexer(std::string_view text) : text_(text) {}

    Tok next() {
        skip_ws();
        if (pos_ >= text_.size()) return {Tok::Kind::End, ""};
        char c = text_[pos_];
        if (c == '(' || c == ')') {
            ++pos_;
            return {Tok::Kind::Punct, std::string(1, c)};
        }
        if (c == '=' ) {
            ++pos_;
            return {Tok::Kind::Punct, "="};
        }
        if (c == '!' ) {
            if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '=') {
                pos_ += 2;
                return {Tok::Kind::Punct, "!="};
            }
            throw Error(ErrorCode::BadCondition, "stray '!'");
        }
        if (c == '<' || c == '>') {
            ++pos_;
            if (pos_ < text_.size() && text_[pos_] == '=') {
                ++pos_;
                return {Tok::Kind::Punct, std::string(1, c) + "="};
            }
            return {Tok::Kind::Punct, std::string(1, c)};
        }
        if (c == '\'') {
            ++pos_;
            std::string s;
            for (;;) {
                if (pos_ >= text_.size()) {
                    throw Error(ErrorCode::BadCondition, "unterminated string literal");
                }
                if (text_[pos_] == '\'') {
                    if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '\'') {
                        s += '\'';
                        pos_ += 2;
                        continue;
                    }
                    ++pos_;
                    break;
                }
                s += text_[pos_++];
            }
            return {Tok::Kind::Str, std::move(s)};
        }
        if (c == '-' || (c >= '0' && c <= '9')) {
            size_t start = pos_;
            ++pos_;
            bool is_number = true;
            while (pos_ < text_.size() && is_number) {
                char d = text_[pos_];
                if ((d >= '0' && d <= '9') || d == '.' || d == 'e' || d == 'E' ||
                    d == '+' || d == '-') {
                    // '+'/'-' only valid right after an exponent marker
                    if ((d == '+' || d == '-') && pos_ > start) {
                        char prev = text_[pos_ - 1];
                        if (prev != 'e' && prev != 'E') break;
                    }
                    ++pos_;
                } else {
                    break;
                }
            }
            return {Tok::Kind::Number, std::string(text_.substr(start, pos_ - start))};
        }
        if (Path::valid_segment(std::string_view(&c, 1))) {
            size_t start = pos_;
            while (pos_ < text_.size() &&
                   Path::valid_segment(text_.substr(pos_, 1))) {
                ++pos_;
            }
            return {Tok::Kind::Ident, std::string(text_.substr(start, pos_ - start))};
        }
        throw Error(ErrorCode::BadCondition,
                    fmt::format("unexpected character '{}'", c));
    }

private:
    void skip_ws() {
        while (pos_ < text_.size() &&
               (text_[pos_] == ' ' || text_[pos_] == '\t')) {
            ++pos_;
        }
    }

    std::string_view text_;
    size_t pos_ = 0;
};

} // namespace

class Condition::Parser {
public:
    explicit Parser(std::string_view text) : lexer_(text) { advance(); }

    NodePtr parse_full() {
        if (cur_.kind == Tok::Kind::End) return nullptr; // TRUE
        NodePtr node = parse_or();
        if (cur_.kind != Tok::Kind::End) {
            throw Error(ErrorCode::BadCondition,
                        fmt::format("trailing input at '{}'", cur_.text));
        }
        return node;
    }

private:
    void advance() { cur_ = lexer_.next(); }

    bool keyword(std::string_view kw) {
        return cur_.kind == Tok::Kind::Ident && lower(cur_.text) == kw;
    }

    NodePtr parse_or() {
        NodePtr lhs = parse_and();
        while (keyword("or")) {
            advance();
            NodePtr rhs = parse_and();
            lhs = std::make_shared<Node>(Node{Or{std::move(lhs), std::move(rhs)}});
        }
        return lhs;
    }

    NodePtr parse_and() {
        NodePtr lhs = parse_unary();
        while (keyword("and")) {
            advance();
            NodePtr rhs = parse_unary();
            lhs = std::make_shared<Node>(Node{And{std::move(lhs), std::move(rhs)}});
        }
        return lhs;
    }

    NodePtr parse_unary() {
        if (keyword("not")) {
            advance();
            return std::make_shared<Node>(Node{Not{parse_unary()}});
        }
        return parse_primary();
    }

    NodePtr parse_primary() {
        if (cur_.kind == Tok::Kind::Punct && cur_.text == "(") {
            advance();
            NodePtr inner = parse_or();
            if (!(cur_.kind == Tok::Kind::Punct && cur_.text == ")")) {
                throw Error(ErrorCode::BadCondition, "expected ')'");
            }
            advance();
            return inner;
        }
        return parse_term();
    }

    NodePtr parse_term() {
        if (cur_.kind != Tok::Kind::Ident) {
            throw Error(ErrorCode::BadCondition,
                        fmt::format("expected attribute name, got '{}'", cur_.text));
        }
        Term term;
        term.attr = cur_.text;
        advance();

        if (cur_.kind == Tok::Kind::Punct) {
            if (cur_.text == "=") term.op = CmpOp::Eq;
            else if (cur_.text == "!=") term.op = CmpOp::Ne;
            else if (cur_.text == "<") term.op = CmpOp::Lt;
            else if (cur_.text == "<=") term.op = CmpOp::Le;
            else if (cur_.text == ">") term.op = CmpOp::Gt;
            else if (cur_.text == ">=") term.op = CmpOp::Ge;
            else {
                throw Error(ErrorCode::BadCondition,
                            fmt::format("expected operator, got '{}'", cur_.text));
            }
        } else if (keyword("like")) {
            term.op = CmpOp::Like;
        } else {
            throw Error(ErrorCode::BadCondition,
                        fmt::format("expected operator after '{}'", term.attr));
        }
        advance();

        switch (cur_.kind) {
        case Tok::Kind::Str:
            term.literal.kind = Literal::Kind::Str;
            term.literal.s = cur_.text;
            break;
        case Tok::Kind::Number: {
            const std::string& t = cur_.text;
            try {
                if (t.find_first_of(".eE") == std::string::npos) {
                    term.literal.kind = Literal::Kind::Int;
                    term.literal.i = parse_int(t);
                } else {
                    term.literal.kind = Literal::Kind::Float;
                    term.literal.f = parse_float(t);
                }
            } catch (const Error&) {
                throw Error(ErrorCode::BadCondition,
                            fmt::format("bad numeric literal '{}'", t));
            }
            break;
        }
        default:
            throw Error(ErrorCode::BadCondition,
                        fmt::format("expected literal, got '{}'", cur_.text));
        }
        advance();
        return std::make_shared<Node>(Node{std::move(term)});
    }

    Lexer lexer_;
    Tok cur_;
};

Condition Condition::parse(std::string_view text) {
    Parser parser(text);
    return Condition(parser.parse_full());
}

namespace {

std::string literal_str(const Condition::Literal& lit) {
    using Kind = Condition::Literal::Kind;
    switch (lit.kind) {
    case Kind::Int:
        return fmt::format("{}", lit.i);
    case Kind::Float: {
        char buf[64];
        auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, lit.f);
        (void)ec;
        return std::string(buf, ptr);
    }
    case Kind::Str: {
        std::string out = "'";
        for (char c : lit.s) {
            if (c == '\'') out += '\'';
            out += c;
        }
        out += '\'';
        return out;
    }
    }
    return "?";
}

// Numeric view of a stored value for dynamic comparisons.
bool try_number(std::string_view text, double& out) {
    const char* first = text.data();
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

bool cmp_result(CmpOp op, int c) {
    switch (op) {
    case CmpOp::Eq: return c == 0;
    case CmpOp::Ne: return c != 0;
    case CmpOp::Lt: return c < 0;
    case CmpOp::Le: return c <= 0;
    case CmpOp::Gt: return c > 0;
    case CmpOp::Ge: return c >= 0;
    case CmpOp::Like: return false;
    }
    return false;
}

template <typename T>
int three_way(const T& a, const T& b) {
    if (a < b) return -1;
    if (b < a) return 1;
    return 0;
}

} // namespace

bool Condition::like_match(std::string_view text, std::string_view pattern) {
    // split the pattern on '%'
    std::vector<std::string_view> parts;
    size_t pos = 0;
    for (;;) {
        size_t pct = pattern.find('%', pos);
        if (pct == std::string_view::npos) {
            parts.push_back(pattern.substr(pos));
            break;
        }
        parts.push_back(pattern.substr(pos, pct - pos));
        pos = pct + 1;
    }
    if (parts.size() == 1) return text == parts[0];

    // anchored prefix
    if (!parts.front().empty()) {
        if (text.size() < parts.front().size() ||
            text.substr(0, parts.front().size()) != parts.front()) {
            return false;
        }
    }
    size_t at = parts.front().size();
    // middles in order
    for (size_t k = 1; k + 1 < parts.size(); ++k) {
        if (parts[k].empty()) continue;
        size_t found = text.find(parts[k], at);
        if (found == std::string_view::npos) return false;
        at = found + parts[k].size();
    }
    // anchored suffix
    const auto& last = parts.back();
    if (last.empty()) return true;
    if (text.size() < at + last.size()) return false;
    return text.substr(text.size() - last.size()) == last;
}

namespace {

using Term = Condition::Term;
using Literal = Condition::Literal;

// Evaluate one term against a typed value; NULL has already been filtered.
bool eval_term_typed(const Term& term, AttrType type, const std::string& value) {
    switch (type) {
    case AttrType::Int:
    case AttrType::Timestamp: {
        int64_t v = parse_int(value);
        if (term.literal.kind == Literal::Kind::Int) {
            return cmp_result(term.op, three_way<int64_t>(v, term.literal.i));
        }
        if (term.literal.kind == Literal::Kind::Float) {
            return cmp_result(term.op,
                              three_way<double>(static_cast<double>(v), term.literal.f));
        }
        return false;
    }
    case AttrType::Float: {
        if (term.literal.kind == Literal::Kind::Str) return false;
        double v = parse_float(value);
        double lit = term.literal.kind == Literal::Kind::Int
                         ? static_cast<double>(term.literal.i)
                         : term.literal.f;
        return cmp_result(term.op, three_way<double>(v, lit));
    }
    case AttrType::String: {
        if (term.literal.kind != Literal::Kind::Str) return false;
        if (term.op == CmpOp::Like) return Condition::like_match(value, term.literal.s);
        return cmp_result(term.op, three_way<std::string_view>(value, term.literal.s));
    }
    }
    return false;
}

// Dynamic term evaluation against untyped image text.
bool eval_term_dynamic(const Term& term, const std::string& value) {
    if (term.literal.kind == Literal::Kind::Str) {
        if (term.op == CmpOp::Like) return Condition::like_match(value, term.literal.s);
        return cmp_result(term.op, three_way<std::string_view>(value, term.literal.s));
    }
    if (term.op == CmpOp::Like) return false;
    double v = 0;
    if (!try_number(value, v)) return false;
    double lit = term.literal.kind == Literal::Kind::Int
                     ? static_cast<double>(term.literal.i)
                     : term.literal.f;
    return cmp_result(term.op, three_way<double>(v, lit));
}

} // namespace

std::string Condition::str() const {
    if (!node_) return "";
    std::function<std::string(const NodePtr&)> render =
        [&](const NodePtr& n) -> std::string {
        if (const auto* term = std::get_if<Term>(&n->v)) {
            return fmt::format("{} {} {}", term->attr, cmp_op_text(term->op),
                               literal_str(term->literal));
        }
        if (const auto* a = std::get_if<And>(&n->v)) {
            return fmt::format("({} AND {})", render(a->lhs), render(a->rhs));
        }
        if (const auto* o = std::get_if<Or>(&n->v)) {
            return fmt::format("({} OR {})", render(o->lhs), render(o->rhs));
        }
        const auto& nt = std::get<Not>(n->v);
        return fmt::format("(NOT {})", render(nt.child));
    };
    return render(node_);
}

void Condition::validate(const std::vector<AttributeDef>& schema) const {
    if (!node_) return;
    std::function<void(const NodePtr&)> walk = [&](const NodePtr& n) {
        if (const auto* term = std::get_if<Term>(&n->v)) {
            const AttributeDef* def = nullptr;
            for (const auto& d : schema) {
                if (d.name == term->attr) {
                    def = &d;
                    break;
                }
            }
            if (!def) {
                throw Error(ErrorCode::BadCondition,
                            fmt::format("unknown attribute '{}'", term->attr));
            }
            bool str_lit = term->literal.kind == Literal::Kind::Str;
            if (term->op == CmpOp::Like) {
                if (def->type != AttrType::String || !str_lit) {
                    throw Error(ErrorCode::BadCondition,
                                "like requires a STRING attribute and a string pattern");
                }
                return;
            }
            if (def->type == AttrType::String && !str_lit) {
                throw Error(ErrorCode::BadCondition,
                            fmt::format("attribute '{}' is STRING, numeric literal given",
                                        term->attr));
            }
            if (def->type != AttrType::String && str_lit) {
                throw Error(ErrorCode::BadCondition,
                            fmt::format("attribute '{}' is numeric, string literal given",
                                        term->attr));
            }
            return;
        }
        if (const auto* a = std::get_if<And>(&n->v)) {
            walk(a->lhs);
            walk(a->rhs);
            return;
        }
        if (const auto* o = std::get_if<Or>(&n->v)) {
            walk(o->lhs);
            walk(o->rhs);
            return;
        }
        walk(std::get<Not>(n->v).child);
    };
    walk(node_);
}

bool Condition::eval(const std::vector<AttributeDef>& schema,
                     const std::vector<OptValue>& values) const {
    if (!node_) return true;
    std::function<bool(const NodePtr&)> run = [&](const NodePtr& n) -> bool {
        if (const auto* term = std::get_if<Term>(&n->v)) {
            for (size_t i = 0; i < schema.size() && i < values.size(); ++i) {
                if (schema[i].name != term->attr) continue;
                if (!values[i]) return false; // NULL fails every comparison
                return eval_term_typed(*term, schema[i].type, *values[i]);
            }
            return false; // unknown attribute: collapses to false
        }
        if (const auto* a = std::get_if<And>(&n->v)) {
            return run(a->lhs) && run(a->rhs);
        }
        if (const auto* o = std::get_if<Or>(&n->v)) {
            return run(o->lhs) || run(o->rhs);
        }
        return !run(std::get<Not>(n->v).child);
    };
    return run(node_);
}

bool Condition::eval_image(const std::map<std::string, std::string>& image) const {
    if (!node_) return true;
    std::function<bool(const NodePtr&)> run = [&](const NodePtr& n) -> bool {
        if (const auto* term = std::get_if<Term>(&n->v)) {
            auto it = image.find(term->attr);
            if (it == image.end()) return false; // missing or NULL
            return eval_term_dynamic(*term, it->second);
        }
        if (const auto* a = std::get_if<And>(&n->v)) {
            return run(a->lhs) && run(a->rhs);
        }
        if (const auto* o = std::get_if<Or>(&n->v)) {
            return run(o->lhs) || run(o->rhs);
        }
        return !run(std::get<Not>(n->v).child);
    };
    return run(node_);
}

} // namespace metacat
