// Copyright 2026 The metacat Authors
// SPDX-License-Identifier: Apache-2.0
#include "metacat/catalog.hpp"

#include <algorithm>
#include <functional>

#include <fmt/format.h>

namespace metacat::catalog {

namespace {

constexpr std::string_view kMeta = "meta";

std::string dir_key(const Path& p) { return "D" + p.str(); }

std::string entry_prefix(const Path& dir) {
    // '\n' cannot occur in a path or name, so this cleanly separates the
    // entries of a directory from those of its descendants
    return "E" + dir.str() + "\n";
}

std::string entry_key(const Path& dir, std::string_view name) {
    return entry_prefix(dir) + std::string(name);
}

std::string subtree_dir_prefix(const Path& dir) {
    return dir.is_root() ? "D/" : "D" + dir.str() + "/";
}

std::string encode_attrs(const std::vector<AttributeDef>& attrs) {
    std::string out;
    for (const auto& a : attrs) {
        if (!out.empty()) out += ' ';
        out += a.name;
        out += ' ';
        out += attr_type_name(a.type);
    }
    return out;
}

std::vector<AttributeDef> decode_attrs(std::string_view text) {
    std::vector<AttributeDef> attrs;
    size_t pos = 0;
    while (pos < text.size()) {
        size_t sp1 = text.find(' ', pos);
        size_t sp2 = text.find(' ', sp1 + 1);
        std::string name(text.substr(pos, sp1 - pos));
        std::string_view type = (sp2 == std::string_view::npos)
                                    ? text.substr(sp1 + 1)
                                    : text.substr(sp1 + 1, sp2 - sp1 - 1);
        attrs.push_back({std::move(name), parse_attr_type(type)});
        if (sp2 == std::string_view::npos) break;
        pos = sp2 + 1;
    }
    return attrs;
}

std::string encode_values(const std::vector<OptValue>& values) {
    std::string out;
    for (const auto& v : values) {
        if (!out.empty()) out += ' ';
        out += wire::encode_token(encode_value(v));
    }
    return out;
}

std::vector<OptValue> decode_values(std::string_view text) {
    std::vector<OptValue> out;
    for (const auto& token : wire::tokenize(text)) {
        out.push_back(decode_value(token));
    }
    return out;
}

std::vector<AttributeDef> require_dir(const StoreRead& view, const Path& dir) {
    auto raw = view.get(kMeta, dir_key(dir));
    if (!raw) {
        throw Error(ErrorCode::NotFound,
                    fmt::format("directory '{}' not found", dir.str()));
    }
    return decode_attrs(*raw);
}

bool entry_exists(const StoreRead& view, const Path& dir, std::string_view name) {
    return view.get(kMeta, entry_key(dir, name)).has_value();
}

void check_name(std::string_view name) {
    if (!Path::valid_segment(name)) {
        throw Error(ErrorCode::BadName, fmt::format("bad name: '{}'", name));
    }
}

// Rewrite every entry of `dir` through fn (schema changes realign values).
void rewrite_entries(StoreTxn& txn, const Path& dir,
                     const std::function<void(std::vector<OptValue>&)>& fn) {
    for (auto& [key, value] : txn.scan_prefix(kMeta, entry_prefix(dir))) {
        auto values = decode_values(value);
        fn(values);
        txn.put(kMeta, key, encode_values(values));
    }
}

std::map<std::string, std::string> image_of(const std::vector<AttributeDef>& attrs,
                                            const std::vector<OptValue>& values) {
    std::map<std::string, std::string> image;
    for (size_t i = 0; i < attrs.size() && i < values.size(); ++i) {
        if (values[i]) image[attrs[i].name] = *values[i];
    }
    return image;
}

} // namespace

void ensure_root(StoreTxn& txn) {
    if (!txn.get(kMeta, "D/")) {
        txn.put(kMeta, "D/", "");
    }
}

bool dir_exists(const StoreRead& view, const Path& dir) {
    return view.get(kMeta, dir_key(dir)).has_value();
}

std::vector<AttributeDef> dir_attrs(const StoreRead& view, const Path& dir) {
    return require_dir(view, dir);
}

std::vector<std::string> list_dirs(const StoreRead& view, const Path& dir) {
    require_dir(view, dir);
    std::vector<std::string> out;
    const std::string prefix = subtree_dir_prefix(dir);
    for (const auto& [key, value] : view.scan_prefix(kMeta, prefix)) {
        std::string_view rest = std::string_view(key).substr(prefix.size());
        if (rest.empty() || rest.find('/') != std::string_view::npos) continue;
        out.emplace_back(rest);
    }
    return out;
}

std::vector<std::string> list_entries(const StoreRead& view, const Path& dir) {
    require_dir(view, dir);
    std::vector<std::string> out;
    const std::string prefix = entry_prefix(dir);
    for (const auto& [key, value] : view.scan_prefix(kMeta, prefix)) {
        out.emplace_back(std::string_view(key).substr(prefix.size()));
    }
    return out;
}

void create_directory(StoreTxn& txn, const Path& path,
                      const std::vector<AttributeDef>& attrs) {
    if (path.is_root()) {
        throw Error(ErrorCode::AlreadyExists, "root directory is implicit");
    }
    for (size_t i = 0; i < attrs.size(); ++i) {
        check_name(attrs[i].name);
        for (size_t j = 0; j < i; ++j) {
            if (attrs[j].name == attrs[i].name) {
                throw Error(ErrorCode::DuplicateAttribute,
                            fmt::format("duplicate attribute '{}'", attrs[i].name));
            }
        }
    }
    Path parent = path.parent();
    if (!dir_exists(txn, parent)) {
        throw Error(ErrorCode::ParentNotFound,
                    fmt::format("parent '{}' not found", parent.str()));
    }
    if (dir_exists(txn, path) || entry_exists(txn, parent, path.leaf())) {
        throw Error(ErrorCode::AlreadyExists,
                    fmt::format("'{}' already exists", path.str()));
    }
    txn.put(kMeta, dir_key(path), encode_attrs(attrs));
}

void remove_directory(StoreTxn& txn, const Path& path) {
    if (path.is_root()) {
        throw Error(ErrorCode::CannotRemoveRoot);
    }
    require_dir(txn, path);
    if (!txn.scan_prefix(kMeta, entry_prefix(path)).empty() ||
        !txn.scan_prefix(kMeta, subtree_dir_prefix(path)).empty()) {
        throw Error(ErrorCode::NotEmpty,
                    fmt::format("directory '{}' is not empty", path.str()));
    }
    txn.erase(kMeta, dir_key(path));
}

void define_attribute(StoreTxn& txn, const Path& dir, const AttributeDef& def) {
    check_name(def.name);
    auto attrs = require_dir(txn, dir);
    for (const auto& a : attrs) {
        if (a.name == def.name) {
            throw Error(ErrorCode::DuplicateAttribute,
                        fmt::format("duplicate attribute '{}'", def.name));
        }
    }
    attrs.push_back(def);
    txn.put(kMeta, dir_key(dir), encode_attrs(attrs));
    // existing entries gain a NULL at the new position
    rewrite_entries(txn, dir, [](std::vector<OptValue>& values) {
        values.emplace_back(std::nullopt);
    });
}

void undefine_attribute(StoreTxn& txn, const Path& dir, std::string_view name) {
    auto attrs = require_dir(txn, dir);
    size_t idx = attrs.size();
    for (size_t i = 0; i < attrs.size(); ++i) {
        if (attrs[i].name == name) {
            idx = i;
            break;
        }
    }
    if (idx == attrs.size()) {
        throw Error(ErrorCode::NoSuchAttribute,
                    fmt::format("no attribute '{}' in '{}'", name, dir.str()));
    }
    attrs.erase(attrs.begin() + static_cast<ptrdiff_t>(idx));
    txn.put(kMeta, dir_key(dir), encode_attrs(attrs));
    rewrite_entries(txn, dir, [idx](std::vector<OptValue>& values) {
        if (idx < values.size()) {
            values.erase(values.begin() + static_cast<ptrdiff_t>(idx));
        }
    });
}

void insert_entry(StoreTxn& txn, const Path& dir, std::string_view name,
                  const std::vector<OptValue>& values) {
    check_name(name);
    auto attrs = require_dir(txn, dir);
    if (entry_exists(txn, dir, name) || dir_exists(txn, dir.child(name))) {
        throw Error(ErrorCode::AlreadyExists,
                    fmt::format("'{}' already exists in '{}'", name, dir.str()));
    }
    if (values.size() != attrs.size()) {
        throw Error(ErrorCode::ArityMismatch,
                    fmt::format("{} values for {} attributes", values.size(),
                                attrs.size()));
    }
    std::vector<OptValue> canonical(values.size());
    for (size_t i = 0; i < values.size(); ++i) {
        if (values[i]) {
            canonical[i] = canonicalize_value(attrs[i].type, *values[i]);
        }
    }
    txn.put(kMeta, entry_key(dir, name), encode_values(canonical));
}

void update_entry(StoreTxn& txn, const Path& dir, std::string_view name,
                  const std::vector<std::pair<std::string, OptValue>>& assignments) {
    auto attrs = require_dir(txn, dir);
    auto raw = txn.get(kMeta, entry_key(dir, name));
    if (!raw) {
        throw Error(ErrorCode::NotFound,
                    fmt::format("entry '{}' not found in '{}'", name, dir.str()));
    }
    auto values = decode_values(*raw);
    for (const auto& [attr, value] : assignments) {
        size_t idx = attrs.size();
        for (size_t i = 0; i < attrs.size(); ++i) {
            if (attrs[i].name == attr) {
                idx = i;
                break;
            }
        }
        if (idx == attrs.size()) {
            throw Error(ErrorCode::NoSuchAttribute,
                        fmt::format("no attribute '{}' in '{}'", attr, dir.str()));
        }
        values[idx] = value ? OptValue(canonicalize_value(attrs[idx].type, *value))
                            : std::nullopt;
    }
    txn.put(kMeta, entry_key(dir, name), encode_values(values));
}

void delete_entry(StoreTxn& txn, const Path& dir, std::string_view name) {
    require_dir(txn, dir);
    const std::string key = entry_key(dir, name);
    if (!txn.get(kMeta, key)) {
        throw Error(ErrorCode::NotFound,
                    fmt::format("entry '{}' not found in '{}'", name, dir.str()));
    }
    txn.erase(kMeta, key);
}

std::vector<std::pair<std::string, OptValue>> read_entry(const StoreRead& view,
                                                         const Path& dir,
                                                         std::string_view name) {
    auto attrs = require_dir(view, dir);
    auto raw = view.get(kMeta, entry_key(dir, name));
    if (!raw) {
        throw Error(ErrorCode::NotFound,
                    fmt::format("entry '{}' not found in '{}'", name, dir.str()));
    }
    auto values = decode_values(*raw);
    if (values.size() != attrs.size()) {
        throw Error(ErrorCode::StorageFailure, "entry out of line with schema");
    }
    std::vector<std::pair<std::string, OptValue>> out;
    out.reserve(attrs.size());
    for (size_t i = 0; i < attrs.size(); ++i) {
        out.emplace_back(attrs[i].name, values[i]);
    }
    return out;
}

std::vector<std::string> find_entries(const StoreRead& view, const Path& dir,
                                      const Condition& cond) {
    auto attrs = require_dir(view, dir);
    cond.validate(attrs);
    std::vector<std::string> out;
    const std::string prefix = entry_prefix(dir);
    for (const auto& [key, value] : view.scan_prefix(kMeta, prefix)) {
        auto values = decode_values(value);
        if (cond.eval(attrs, values)) {
            out.emplace_back(std::string_view(key).substr(prefix.size()));
        }
    }
    return out;
}

namespace {

std::vector<std::string> attrs_as_args(const std::vector<AttributeDef>& attrs) {
    std::vector<std::string> args;
    for (const auto& a : attrs) {
        args.emplace_back(a.name);
        args.emplace_back(attr_type_name(a.type));
    }
    return args;
}

void dump_entries_of(const StoreRead& view, const Path& dir,
                     const std::vector<AttributeDef>& attrs, const Condition* cond,
                     std::vector<std::string>& out) {
    const std::string prefix = entry_prefix(dir);
    for (const auto& [key, value] : view.scan_prefix(kMeta, prefix)) {
        auto values = decode_values(value);
        if (cond && !cond->eval_image(image_of(attrs, values))) continue;
        wire::Request req;
        req.verb = "ADDENTRY";
        req.args = {dir.str(), std::string(std::string_view(key).substr(prefix.size()))};
        for (size_t i = 0; i < attrs.size() && i < values.size(); ++i) {
            if (!values[i]) continue;
            req.args.push_back(attrs[i].name);
            req.args.push_back(encode_value(values[i]));
        }
        out.push_back(wire::encode_command(req));
    }
}

} // namespace

std::vector<std::string> dump_subtree(const StoreRead& view, const Path& root,
                                      const Condition* cond) {
    require_dir(view, root);
    if (cond && cond->is_true()) cond = nullptr;
    std::vector<std::string> out;

    // key order is parent-before-child, so one prefix scan is a valid
    // emission order
    std::vector<std::pair<Path, std::vector<AttributeDef>>> dirs;
    dirs.emplace_back(root, dir_attrs(view, root));
    for (const auto& [key, value] : view.scan_prefix(kMeta, subtree_dir_prefix(root))) {
        Path p = Path::parse(std::string_view(key).substr(1));
        if (root.is_root() && p.is_root()) continue; // "D/" is the root itself
        dirs.emplace_back(std::move(p), decode_attrs(value));
    }

    for (const auto& [dir, attrs] : dirs) {
        if (dir.is_root()) {
            // the root is implicit; its schema dumps as ADDATTR commands
            for (const auto& a : attrs) {
                wire::Request req;
                req.verb = "ADDATTR";
                req.args = {"/", a.name, std::string(attr_type_name(a.type))};
                out.push_back(wire::encode_command(req));
            }
        } else {
            wire::Request req;
            req.verb = "CREATEDIR";
            req.args = {dir.str()};
            for (auto& arg : attrs_as_args(attrs)) req.args.push_back(std::move(arg));
            out.push_back(wire::encode_command(req));
        }
        dump_entries_of(view, dir, attrs, cond, out);
    }
    return out;
}

namespace {

std::vector<std::pair<std::string, OptValue>> pairs_from_args(
    const std::vector<std::string>& args, size_t start) {
    if ((args.size() - start) % 2 != 0) {
        throw Error(ErrorCode::BadArgument, "attribute/value arguments must pair up");
    }
    std::vector<std::pair<std::string, OptValue>> pairs;
    for (size_t i = start; i < args.size(); i += 2) {
        for (const auto& seen : pairs) {
            if (seen.first == args[i]) {
                throw Error(ErrorCode::BadArgument,
                            fmt::format("attribute '{}' given twice", args[i]));
            }
        }
        pairs.emplace_back(args[i], decode_value(args[i + 1]));
    }
    return pairs;
}

void need_args(const wire::Request& req, size_t n) {
    if (req.args.size() < n) {
        throw Error(ErrorCode::BadArgument,
                    fmt::format("{} needs at least {} arguments", req.verb, n));
    }
}

} // namespace

Path affected_dir(const wire::Request& request) {
    need_args(request, 1);
    return Path::parse(request.args[0]);
}

void apply_command(StoreTxn& txn, const wire::Request& request) {
    const std::string& verb = request.verb;
    if (verb == "CREATEDIR") {
        need_args(request, 1);
        Path path = Path::parse(request.args[0]);
        std::vector<AttributeDef> attrs;
        if ((request.args.size() - 1) % 2 != 0) {
            throw Error(ErrorCode::BadArgument, "schema arguments must pair up");
        }
        for (size_t i = 1; i < request.args.size(); i += 2) {
            attrs.push_back({request.args[i], parse_attr_type(request.args[i + 1])});
        }
        create_directory(txn, path, attrs);
    } else if (verb == "REMOVEDIR") {
        need_args(request, 1);
        remove_directory(txn, Path::parse(request.args[0]));
    } else if (verb == "ADDATTR") {
        need_args(request, 3);
        define_attribute(txn, Path::parse(request.args[0]),
                         {request.args[1], parse_attr_type(request.args[2])});
    } else if (verb == "REMOVEATTR") {
        need_args(request, 2);
        undefine_attribute(txn, Path::parse(request.args[0]), request.args[1]);
    } else if (verb == "ADDENTRY") {
        need_args(request, 2);
        Path dir = Path::parse(request.args[0]);
        auto pairs = pairs_from_args(request.args, 2);
        auto attrs = dir_attrs(txn, dir);
        std::vector<OptValue> values(attrs.size());
        for (auto& [attr, value] : pairs) {
            size_t idx = attrs.size();
            for (size_t i = 0; i < attrs.size(); ++i) {
                if (attrs[i].name == attr) {
                    idx = i;
                    break;
                }
            }
            if (idx == attrs.size()) {
                throw Error(ErrorCode::NoSuchAttribute,
                            fmt::format("no attribute '{}' in '{}'", attr, dir.str()));
            }
            values[idx] = std::move(value);
        }
        insert_entry(txn, dir, request.args[1], values);
    } else if (verb == "SETATTR") {
        need_args(request, 4);
        update_entry(txn, Path::parse(request.args[0]), request.args[1],
                     pairs_from_args(request.args, 2));
    } else if (verb == "DELENTRY") {
        need_args(request, 2);
        delete_entry(txn, Path::parse(request.args[0]), request.args[1]);
    } else {
        throw Error(ErrorCode::BadArgument,
                    fmt::format("'{}' is not a catalog command", verb));
    }
}

std::string normalize_for_log(const StoreRead& post_state,
                              const wire::Request& request) {
    wire::Request out = request;
    out.args[0] = Path::parse(request.args[0]).str();
    if (request.verb == "SETATTR") {
        // full-row rewrite: the logged record carries the whole post-image
        Path dir = Path::parse(request.args[0]);
        auto row = read_entry(post_state, dir, request.args[1]);
        out.args.resize(2);
        for (const auto& [attr, value] : row) {
            out.args.push_back(attr);
            out.args.push_back(encode_value(value));
        }
    }
    return wire::encode_command(out);
}

std::map<std::string, std::string> entry_image(const wire::Request& request) {
    std::map<std::string, std::string> image;
    if (request.verb != "ADDENTRY" && request.verb != "SETATTR") return image;
    if (request.args.size() < 2) return image;
    for (size_t i = 2; i + 1 < request.args.size(); i += 2) {
        auto value = decode_value(request.args[i + 1]);
        if (value) image[request.args[i]] = *value;
    }
    return image;
}

void ensure_ancestors(StoreTxn& txn, const Path& path) {
    ensure_root(txn);
    auto segments = path.segments();
    Path walk = Path::root();
    // stop before the path itself
    for (size_t i = 0; i + 1 < segments.size(); ++i) {
        Path next = walk.child(segments[i]);
        if (!dir_exists(txn, next)) {
            if (entry_exists(txn, walk, segments[i])) {
                throw Error(ErrorCode::AlreadyExists,
                            fmt::format("'{}' exists as an entry", next.str()));
            }
            txn.put(kMeta, dir_key(next), "");
        }
        walk = next;
    }
}

void delete_subtree(StoreTxn& txn, const Path& root) {
    for (const auto& [key, value] : txn.scan_prefix(kMeta, entry_prefix(root))) {
        txn.erase(kMeta, key);
    }
    const std::string dir_prefix = subtree_dir_prefix(root);
    for (const auto& [key, value] : txn.scan_prefix(kMeta, dir_prefix)) {
        // descendant entries
        Path p = Path::parse(std::string_view(key).substr(1));
        for (const auto& [ekey, evalue] : txn.scan_prefix(kMeta, entry_prefix(p))) {
            txn.erase(kMeta, ekey);
        }
        txn.erase(kMeta, key);
    }
    if (root.is_root()) {
        txn.put(kMeta, "D/", ""); // the root stays, schema reset
    } else {
        txn.erase(kMeta, dir_key(root));
    }
}

} // namespace metacat::catalog
