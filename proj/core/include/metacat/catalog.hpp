// Copyright 2026 The metacat Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "metacat/condition.hpp"
#include "metacat/path.hpp"
#include "metacat/store.hpp"
#include "metacat/value.hpp"
#include "metacat/wire.hpp"

namespace metacat::catalog {

// The catalog is a set of pure functions over store state ("meta" table):
// directories act as schemas, entries hold positionally aligned values.
// Mutations run inside the caller's transaction so that replication log
// records can share it.

/// Create the root directory if missing (idempotent; every node calls this
/// once at startup).
void ensure_root(StoreTxn& txn);

bool dir_exists(const StoreRead& view, const Path& dir);

/// Schema of a directory. Throws Error(NotFound).
std::vector<AttributeDef> dir_attrs(const StoreRead& view, const Path& dir);

/// Child directory names, lexicographically sorted.
std::vector<std::string> list_dirs(const StoreRead& view, const Path& dir);

/// Entry names, lexicographically sorted.
std::vector<std::string> list_entries(const StoreRead& view, const Path& dir);

void create_directory(StoreTxn& txn, const Path& path,
                      const std::vector<AttributeDef>& attrs);
void remove_directory(StoreTxn& txn, const Path& path);
void define_attribute(StoreTxn& txn, const Path& dir, const AttributeDef& def);
void undefine_attribute(StoreTxn& txn, const Path& dir, std::string_view name);

void insert_entry(StoreTxn& txn, const Path& dir, std::string_view name,
                  const std::vector<OptValue>& values);
void update_entry(StoreTxn& txn, const Path& dir, std::string_view name,
                  const std::vector<std::pair<std::string, OptValue>>& assignments);
void delete_entry(StoreTxn& txn, const Path& dir, std::string_view name);

/// Full attribute vector of one entry, in schema order.
std::vector<std::pair<std::string, OptValue>> read_entry(const StoreRead& view,
                                                         const Path& dir,
                                                         std::string_view name);

/// Names of entries in `dir` satisfying `cond`, lexicographically sorted.
/// The condition is validated against the directory schema first.
std::vector<std::string> find_entries(const StoreRead& view, const Path& dir,
                                      const Condition& cond);

/// Serialize a subtree as an ordered sequence of replayable command lines:
/// parents before children, each directory before its entries. When `cond`
/// is given, entries not matching it are omitted (directories always dump).
/// Dumping the root "/" emits ADDATTR lines for the root schema instead of
/// a CREATEDIR (the root is implicit).
std::vector<std::string> dump_subtree(const StoreRead& view, const Path& root,
                                      const Condition* cond = nullptr);

/// Execute one mutating command line against the transaction; used both by
/// the server executor and by replay (snapshot apply, log apply).
/// Throws Error(BadArgument) for arity problems and the operation's own
/// errors otherwise.
void apply_command(StoreTxn& txn, const wire::Request& request);

/// The directory a command updates or reads (arg 0 for every catalog verb).
Path affected_dir(const wire::Request& request);

/// Rewrites a just-applied command into its logged form: SETATTR becomes a
/// full-row assignment (every attribute listed with its post-state value)
/// so the record carries the whole entry image; other verbs are already
/// self-contained and only get re-encoded canonically.
std::string normalize_for_log(const StoreRead& post_state,
                              const wire::Request& request);

/// Non-NULL attribute image carried by an ADDENTRY/SETATTR command,
/// used for filter-condition evaluation at ship time.
std::map<std::string, std::string> entry_image(const wire::Request& request);

/// Create every missing ancestor of `path` with an empty schema
/// (bootstrap scaffolding on replicas).
void ensure_ancestors(StoreTxn& txn, const Path& path);

/// Remove a whole subtree including `root` itself (the root directory "/"
/// is reset to an empty schema instead of removed). Replica re-bootstrap
/// support; not exposed as a client verb.
void delete_subtree(StoreTxn& txn, const Path& root);

} // namespace metacat::catalog
