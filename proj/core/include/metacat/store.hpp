// Copyright 2026 The metacat Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <vector>

#include "metacat/error.hpp"

namespace metacat {

/// One replication log record: a sequence-numbered, self-contained,
/// replayable metadata command bound to the directory it updates.
struct LogRecord {
    uint64_t seq = 0;
    std::string dir;
    std::string command; // full wire-protocol command line (no LF)
    int64_t ts_ms = 0;

    friend bool operator==(const LogRecord&, const LogRecord&) = default;
};

/// Read surface over the named tables ("meta", "subs", ...) and the log.
/// Implementations are either the latest committed state, a frozen
/// snapshot view, or the inside of a transaction.
class StoreRead {
public:
    virtual ~StoreRead() = default;

    virtual std::optional<std::string> get(std::string_view table,
                                           std::string_view key) const = 0;

    /// All (key, value) pairs whose key starts with `prefix`, in key order.
    virtual std::vector<std::pair<std::string, std::string>> scan_prefix(
        std::string_view table, std::string_view prefix) const = 0;

    /// Committed log records with seq >= from_seq, ascending, at most
    /// `limit`. Never returns a gap followed by later records.
    virtual std::vector<LogRecord> scan_logs(uint64_t from_seq,
                                             size_t limit) const = 0;

    /// Highest committed log sequence number ever assigned (GC does not
    /// lower it); 0 on a store that has never logged.
    virtual uint64_t log_watermark() const = 0;
};

/// Mutation surface inside a transaction. All writes become visible
/// atomically at commit or not at all. Reads see the transaction's own
/// writes overlaid on the state at begin.
class StoreTxn : public StoreRead {
public:
    virtual void put(std::string_view table, std::string_view key,
                     std::string_view value) = 0;
    virtual void erase(std::string_view table, std::string_view key) = 0;

    /// Append a log record; the sequence number is dense in commit order
    /// (aborted transactions do not burn visible sequence numbers).
    virtual uint64_t append_log(std::string_view dir, std::string_view command,
                                int64_t ts_ms) = 0;
    virtual void erase_log(uint64_t seq) = 0;
};

/// Transactional store: serialized writers, concurrent snapshot-consistent
/// readers. The Store itself reads the latest committed state.
class Store : public StoreRead {
public:
    /// Run `work` inside a transaction; commit on success, roll back when
    /// `work` throws (the exception is rethrown).
    template <typename F>
    auto with_transaction(F&& work) -> std::invoke_result_t<F&, StoreTxn&> {
        auto txn = begin_txn();
        using R = std::invoke_result_t<F&, StoreTxn&>;
        if constexpr (std::is_void_v<R>) {
            try {
                work(*txn);
            } catch (...) {
                rollback_txn(std::move(txn));
                throw;
            }
            commit_txn(std::move(txn));
        } else {
            R result = [&] {
                try {
                    return work(*txn);
                } catch (...) {
                    rollback_txn(std::move(txn));
                    throw;
                }
            }();
            commit_txn(std::move(txn));
            return result;
        }
    }

    /// Frozen, consistent view of the state at call time; its
    /// log_watermark() tells the subscriber where log shipping starts.
    virtual std::shared_ptr<const StoreRead> open_snapshot_view() = 0;

    /// Observer invoked after each commit that appended log records,
    /// with the records in sequence order. Used by the harness and the
    /// benchmark; at most one observer.
    virtual void set_log_commit_observer(
        std::function<void(const std::vector<LogRecord>&)> observer) = 0;

protected:
    virtual std::unique_ptr<StoreTxn> begin_txn() = 0;
    virtual void commit_txn(std::unique_ptr<StoreTxn> txn) = 0;
    virtual void rollback_txn(std::unique_ptr<StoreTxn> txn) noexcept = 0;
};

/// Fully in-memory store (the harness default).
std::unique_ptr<Store> make_mem_store();

struct FileStoreOptions {
    bool fsync = false;
    /// When > 0, a checkpoint is written once the WAL exceeds this size.
    size_t auto_checkpoint_bytes = 0;
};

/// Durable store: checkpoint file plus append-only WAL of length-prefixed,
/// CRC-checked transaction records; a corrupted tail is truncated at
/// recovery.
class FileStore : public Store {
public:
    virtual ~FileStore() = default;
    /// Serialize the full state to the checkpoint file and reset the WAL.
    virtual void checkpoint() = 0;
    virtual size_t wal_size() const = 0;
};

std::unique_ptr<FileStore> make_file_store(const std::string& dir,
                                           const FileStoreOptions& options = {});

} // namespace metacat
