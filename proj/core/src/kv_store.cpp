// Copyright 2026 The metacat Authors
// SPDX-License-Identifier: Apache-2.0
//
// Shared in-memory engine for both store backends: serialized writers over
// an ordered-map state, with an overlay transaction object. The file
// backend adds a write-ahead log and checkpointing around the same engine.
#include "metacat/store.hpp"

#include <fcntl.h>
#include <sys/stat.h>
#include <unistd.h>
#include <zlib.h>

#include <cstring>
#include <filesystem>
#include <map>
#include <mutex>
#include <set>
#include <shared_mutex>

#include <fmt/format.h>

namespace metacat {

namespace {

struct KvState {
    std::map<std::string, std::map<std::string, std::string>> tables;
    std::map<uint64_t, LogRecord> log;
    uint64_t watermark = 0;
};

// One committed transaction, as applied to state and as persisted.
struct TxnOps {
    struct Put {
        std::string table, key, value;
    };
    struct Del {
        std::string table, key;
    };
    std::vector<Put> puts;
    std::vector<Del> dels;
    std::vector<LogRecord> appends; // final seqs already assigned
    std::vector<uint64_t> log_erases;

    bool empty() const {
        return puts.empty() && dels.empty() && appends.empty() &&
               log_erases.empty();
    }
};

class SnapshotView : public StoreRead {
public:
    explicit SnapshotView(KvState state) : state_(std::move(state)) {}

    std::optional<std::string> get(std::string_view table,
                                   std::string_view key) const override {
        auto t = state_.tables.find(std::string(table));
        if (t == state_.tables.end()) return std::nullopt;
        auto it = t->second.find(std::string(key));
        if (it == t->second.end()) return std::nullopt;
        return it->second;
    }

    std::vector<std::pair<std::string, std::string>> scan_prefix(
        std::string_view table, std::string_view prefix) const override {
        std::vector<std::pair<std::string, std::string>> out;
        auto t = state_.tables.find(std::string(table));
        if (t == state_.tables.end()) return out;
        for (auto it = t->second.lower_bound(std::string(prefix));
             it != t->second.end() && it->first.compare(0, prefix.size(), prefix) == 0;
             ++it) {
            out.emplace_back(it->first, it->second);
        }
        return out;
    }

    std::vector<LogRecord> scan_logs(uint64_t from_seq,
                                     size_t limit) const override {
        std::vector<LogRecord> out;
        for (auto it = state_.log.lower_bound(from_seq);
             it != state_.log.end() && out.size() < limit; ++it) {
            out.push_back(it->second);
        }
        return out;
    }

    uint64_t log_watermark() const override { return state_.watermark; }

private:
    KvState state_;
};

class Engine;

class KvTxn : public StoreTxn {
public:
    KvTxn(Engine& engine, std::unique_lock<std::mutex> writer_lock)
        : engine_(engine), writer_lock_(std::move(writer_lock)) {}

    std::optional<std::string> get(std::string_view table,
                                   std::string_view key) const override;
    std::vector<std::pair<std::string, std::string>> scan_prefix(
        std::string_view table, std::string_view prefix) const override;
    std::vector<LogRecord> scan_logs(uint64_t from_seq,
                                     size_t limit) const override;
    uint64_t log_watermark() const override;

    void put(std::string_view table, std::string_view key,
             std::string_view value) override {
        writes_[std::string(table)][std::string(key)] = std::string(value);
    }
    void erase(std::string_view table, std::string_view key) override {
        writes_[std::string(table)][std::string(key)] = std::nullopt;
    }
    uint64_t append_log(std::string_view dir, std::string_view command,
                        int64_t ts_ms) override;
    void erase_log(uint64_t seq) override { log_erases_.insert(seq); }

private:
    friend class Engine;

    Engine& engine_;
    std::unique_lock<std::mutex> writer_lock_;
    // overlay: nullopt marks a deletion
    std::map<std::string, std::map<std::string, std::optional<std::string>>> writes_;
    std::vector<LogRecord> appends_;
    std::set<uint64_t> log_erases_;
};

/// The backend-agnostic store machinery. Both store classes delegate here;
/// the file backend passes a persist hook that runs before ops are applied.
class Engine {
public:
    std::optional<std::string> get(std::string_view table,
                                   std::string_view key) const {
        std::shared_lock lock(state_mutex_);
        auto t = state_.tables.find(std::string(table));
        if (t == state_.tables.end()) return std::nullopt;
        auto it = t->second.find(std::string(key));
        if (it == t->second.end()) return std::nullopt;
        return it->second;
    }

    std::vector<std::pair<std::string, std::string>> scan_prefix(
        std::string_view table, std::string_view prefix) const {
        std::shared_lock lock(state_mutex_);
        std::vector<std::pair<std::string, std::string>> out;
        auto t = state_.tables.find(std::string(table));
        if (t == state_.tables.end()) return out;
        for (auto it = t->second.lower_bound(std::string(prefix));
             it != t->second.end() && it->first.compare(0, prefix.size(), prefix) == 0;
             ++it) {
            out.emplace_back(it->first, it->second);
        }
        return out;
    }

    std::vector<LogRecord> scan_logs(uint64_t from_seq, size_t limit) const {
        std::shared_lock lock(state_mutex_);
        std::vector<LogRecord> out;
        for (auto it = state_.log.lower_bound(from_seq);
             it != state_.log.end() && out.size() < limit; ++it) {
            out.push_back(it->second);
        }
        return out;
    }

    uint64_t log_watermark() const {
        std::shared_lock lock(state_mutex_);
        return state_.watermark;
    }

    std::shared_ptr<const StoreRead> open_snapshot_view() const {
        std::shared_lock lock(state_mutex_);
        return std::make_shared<SnapshotView>(state_);
    }

    void set_observer(std::function<void(const std::vector<LogRecord>&)> obs) {
        std::lock_guard lock(observer_mutex_);
        observer_ = std::move(obs);
    }

    std::unique_ptr<StoreTxn> begin() {
        std::unique_lock writer(writer_mutex_);
        return std::make_unique<KvTxn>(*this, std::move(writer));
    }

    using PersistFn = std::function<void(const TxnOps&)>;

    void commit(std::unique_ptr<StoreTxn> txn, const PersistFn& persist) {
        auto& kv = static_cast<KvTxn&>(*txn);
        TxnOps ops;
        for (auto& [table, keys] : kv.writes_) {
            for (auto& [key, value] : keys) {
                if (value) {
                    ops.puts.push_back({table, key, *value});
                } else {
                    ops.dels.push_back({table, key});
                }
            }
        }
        ops.appends = kv.appends_;
        ops.log_erases.assign(kv.log_erases_.begin(), kv.log_erases_.end());

        if (!ops.empty()) {
            if (persist) persist(ops); // throws -> nothing applied
            {
                std::unique_lock lock(state_mutex_);
                apply_ops(state_, ops);
            }
            if (!ops.appends.empty()) {
                std::lock_guard lock(observer_mutex_);
                if (observer_) observer_(ops.appends);
            }
        }
        // writer lock released when kv is destroyed
    }

    static void apply_ops(KvState& state, const TxnOps& ops) {
        for (const auto& p : ops.puts) state.tables[p.table][p.key] = p.value;
        for (const auto& d : ops.dels) {
            auto t = state.tables.find(d.table);
            if (t != state.tables.end()) t->second.erase(d.key);
        }
        for (const auto& rec : ops.appends) {
            state.log.emplace(rec.seq, rec);
            state.watermark = rec.seq;
        }
        for (uint64_t seq : ops.log_erases) state.log.erase(seq);
    }

    /// Runs fn with writers excluded (used by checkpointing).
    template <typename F>
    auto with_writers_excluded(F&& fn) {
        std::unique_lock writer(writer_mutex_);
        return fn();
    }

    KvState copy_state() const {
        std::shared_lock lock(state_mutex_);
        return state_;
    }

    void set_state(KvState state) {
        std::unique_lock lock(state_mutex_);
        state_ = std::move(state);
    }

private:
    friend class KvTxn;

    mutable std::shared_mutex state_mutex_;
    std::mutex writer_mutex_;
    std::mutex observer_mutex_;
    KvState state_;
    std::function<void(const std::vector<LogRecord>&)> observer_;
};

std::optional<std::string> KvTxn::get(std::string_view table,
                                      std::string_view key) const {
    auto t = writes_.find(std::string(table));
    if (t != writes_.end()) {
        auto it = t->second.find(std::string(key));
        if (it != t->second.end()) return it->second;
    }
    return engine_.get(table, key);
}

std::vector<std::pair<std::string, std::string>> KvTxn::scan_prefix(
    std::string_view table, std::string_view prefix) const {
    // base state merged with the overlay
    std::map<std::string, std::string> merged;
    for (auto& [k, v] : engine_.scan_prefix(table, prefix)) {
        merged[k] = std::move(v);
    }
    auto t = writes_.find(std::string(table));
    if (t != writes_.end()) {
        for (auto it = t->second.lower_bound(std::string(prefix));
             it != t->second.end() && it->first.compare(0, prefix.size(), prefix) == 0;
             ++it) {
            if (it->second) {
                merged[it->first] = *it->second;
            } else {
                merged.erase(it->first);
            }
        }
    }
    return {merged.begin(), merged.end()};
}

std::vector<LogRecord> KvTxn::scan_logs(uint64_t from_seq, size_t limit) const {
    std::vector<LogRecord> out;
    for (auto& rec : engine_.scan_logs(from_seq, SIZE_MAX)) {
        if (log_erases_.count(rec.seq)) continue;
        if (out.size() >= limit) return out;
        out.push_back(std::move(rec));
    }
    for (const auto& rec : appends_) {
        if (out.size() >= limit) break;
        if (rec.seq >= from_seq) out.push_back(rec);
    }
    return out;
}

uint64_t KvTxn::log_watermark() const {
    return engine_.log_watermark() + appends_.size();
}

uint64_t KvTxn::append_log(std::string_view dir, std::string_view command,
                           int64_t ts_ms) {
    // writers are serialized, so watermark + n is the final seq
    uint64_t seq = engine_.log_watermark() + appends_.size() + 1;
    appends_.push_back(LogRecord{seq, std::string(dir), std::string(command), ts_ms});
    return seq;
}

class MemStore final : public Store {
public:
    std::optional<std::string> get(std::string_view table,
                                   std::string_view key) const override {
        return engine_.get(table, key);
    }
    std::vector<std::pair<std::string, std::string>> scan_prefix(
        std::string_view table, std::string_view prefix) const override {
        return engine_.scan_prefix(table, prefix);
    }
    std::vector<LogRecord> scan_logs(uint64_t from_seq,
                                     size_t limit) const override {
        return engine_.scan_logs(from_seq, limit);
    }
    uint64_t log_watermark() const override { return engine_.log_watermark(); }
    std::shared_ptr<const StoreRead> open_snapshot_view() override {
        return engine_.open_snapshot_view();
    }
    void set_log_commit_observer(
        std::function<void(const std::vector<LogRecord>&)> observer) override {
        engine_.set_observer(std::move(observer));
    }

protected:
    std::unique_ptr<StoreTxn> begin_txn() override { return engine_.begin(); }
    void commit_txn(std::unique_ptr<StoreTxn> txn) override {
        engine_.commit(std::move(txn), {});
    }
    void rollback_txn(std::unique_ptr<StoreTxn> txn) noexcept override {
        txn.reset();
    }

private:
    Engine engine_;
};

// ---------------------------------------------------------------------------
// File backend: checkpoint + WAL of framed, CRC-checked transaction records.

namespace ser {

void put_u32(std::string& out, uint32_t v) {
    for (int i = 0; i < 4; ++i) out += static_cast<char>((v >> (8 * i)) & 0xff);
}

void put_u64(std::string& out, uint64_t v) {
    for (int i = 0; i < 8; ++i) out += static_cast<char>((v >> (8 * i)) & 0xff);
}

void put_str(std::string& out, std::string_view s) {
    put_u32(out, static_cast<uint32_t>(s.size()));
    out.append(s);
}

class Reader {
public:
    Reader(const char* data, size_t size) : data_(data), size_(size) {}

    bool done() const { return pos_ >= size_; }

    uint8_t u8() {
        need(1);
        return static_cast<uint8_t>(data_[pos_++]);
    }

    uint32_t u32() {
        need(4);
        uint32_t v = 0;
        for (int i = 0; i < 4; ++i) {
            v |= static_cast<uint32_t>(static_cast<unsigned char>(data_[pos_ + i]))
                 << (8 * i);
        }
        pos_ += 4;
        return v;
    }

    uint64_t u64() {
        need(8);
        uint64_t v = 0;
        for (int i = 0; i < 8; ++i) {
            v |= static_cast<uint64_t>(static_cast<unsigned char>(data_[pos_ + i]))
                 << (8 * i);
        }
        pos_ += 8;
        return v;
    }

    std::string str() {
        uint32_t n = u32();
        need(n);
        std::string s(data_ + pos_, n);
        pos_ += n;
        return s;
    }

private:
    void need(size_t n) {
        if (pos_ + n > size_) {
            throw Error(ErrorCode::StorageFailure, "truncated record");
        }
    }

    const char* data_;
    size_t size_;
    size_t pos_ = 0;
};

uint32_t crc(const std::string& payload) {
    return static_cast<uint32_t>(
        ::crc32(0L, reinterpret_cast<const Bytef*>(payload.data()),
                static_cast<uInt>(payload.size())));
}

constexpr uint8_t kOpPut = 1;
constexpr uint8_t kOpDel = 2;
constexpr uint8_t kOpLog = 3;
constexpr uint8_t kOpDelLog = 4;

std::string encode_ops(const TxnOps& ops) {
    std::string out;
    for (const auto& p : ops.puts) {
        out += static_cast<char>(kOpPut);
        put_str(out, p.table);
        put_str(out, p.key);
        put_str(out, p.value);
    }
    for (const auto& d : ops.dels) {
        out += static_cast<char>(kOpDel);
        put_str(out, d.table);
        put_str(out, d.key);
    }
    for (const auto& rec : ops.appends) {
        out += static_cast<char>(kOpLog);
        put_str(out, rec.dir);
        put_str(out, rec.command);
        put_u64(out, static_cast<uint64_t>(rec.ts_ms));
    }
    for (uint64_t seq : ops.log_erases) {
        out += static_cast<char>(kOpDelLog);
        put_u64(out, seq);
    }
    return out;
}

// Replays one WAL payload onto state; log seqs are reassigned densely.
void apply_encoded_ops(KvState& state, const std::string& payload) {
    Reader r(payload.data(), payload.size());
    while (!r.done()) {
        switch (r.u8()) {
        case kOpPut: {
            auto table = r.str();
            auto key = r.str();
            auto value = r.str();
            state.tables[table][key] = value;
            break;
        }
        case kOpDel: {
            auto table = r.str();
            auto key = r.str();
            auto t = state.tables.find(table);
            if (t != state.tables.end()) t->second.erase(key);
            break;
        }
        case kOpLog: {
            LogRecord rec;
            rec.dir = r.str();
            rec.command = r.str();
            rec.ts_ms = static_cast<int64_t>(r.u64());
            rec.seq = ++state.watermark;
            state.log.emplace(rec.seq, rec);
            break;
        }
        case kOpDelLog:
            state.log.erase(r.u64());
            break;
        default:
            throw Error(ErrorCode::StorageFailure, "unknown op in record");
        }
    }
}

std::string encode_checkpoint(const KvState& state) {
    std::string out;
    put_u64(out, state.watermark);
    put_u32(out, static_cast<uint32_t>(state.tables.size()));
    for (const auto& [name, keys] : state.tables) {
        put_str(out, name);
        put_u32(out, static_cast<uint32_t>(keys.size()));
        for (const auto& [k, v] : keys) {
            put_str(out, k);
            put_str(out, v);
        }
    }
    put_u64(out, state.log.size());
    for (const auto& [seq, rec] : state.log) {
        put_u64(out, seq);
        put_str(out, rec.dir);
        put_str(out, rec.command);
        put_u64(out, static_cast<uint64_t>(rec.ts_ms));
    }
    return out;
}

KvState decode_checkpoint(const std::string& payload) {
    KvState state;
    Reader r(payload.data(), payload.size());
    state.watermark = r.u64();
    uint32_t ntables = r.u32();
    for (uint32_t i = 0; i < ntables; ++i) {
        auto name = r.str();
        uint32_t nkeys = r.u32();
        auto& table = state.tables[name];
        for (uint32_t k = 0; k < nkeys; ++k) {
            auto key = r.str();
            table[key] = r.str();
        }
    }
    uint64_t nlogs = r.u64();
    for (uint64_t i = 0; i < nlogs; ++i) {
        LogRecord rec;
        rec.seq = r.u64();
        rec.dir = r.str();
        rec.command = r.str();
        rec.ts_ms = static_cast<int64_t>(r.u64());
        state.log.emplace(rec.seq, rec);
    }
    return state;
}

} // namespace ser

class FileStoreImpl final : public FileStore {
public:
    FileStoreImpl(const std::string& dir, const FileStoreOptions& options)
        : dir_(dir), options_(options) {
        std::filesystem::create_directories(dir_);
        recover();
        open_wal();
    }

    ~FileStoreImpl() override {
        if (wal_fd_ >= 0) ::close(wal_fd_);
    }

    std::optional<std::string> get(std::string_view table,
                                   std::string_view key) const override {
        return engine_.get(table, key);
    }
    std::vector<std::pair<std::string, std::string>> scan_prefix(
        std::string_view table, std::string_view prefix) const override {
        return engine_.scan_prefix(table, prefix);
    }
    std::vector<LogRecord> scan_logs(uint64_t from_seq,
                                     size_t limit) const override {
        return engine_.scan_logs(from_seq, limit);
    }
    uint64_t log_watermark() const override { return engine_.log_watermark(); }
    std::shared_ptr<const StoreRead> open_snapshot_view() override {
        return engine_.open_snapshot_view();
    }
    void set_log_commit_observer(
        std::function<void(const std::vector<LogRecord>&)> observer) override {
        engine_.set_observer(std::move(observer));
    }

    void checkpoint() override {
        engine_.with_writers_excluded([&] { checkpoint_unlocked(); });
    }

    size_t wal_size() const override { return wal_bytes_; }

protected:
    std::unique_ptr<StoreTxn> begin_txn() override { return engine_.begin(); }

    void commit_txn(std::unique_ptr<StoreTxn> txn) override {
        engine_.commit(std::move(txn), [this](const TxnOps& ops) {
            std::string payload = ser::encode_ops(ops);
            std::string frame;
            ser::put_u32(frame, static_cast<uint32_t>(payload.size()));
            ser::put_u32(frame, ser::crc(payload));
            frame += payload;
            write_all(frame);
            if (options_.fsync) ::fsync(wal_fd_);
        });
        if (options_.auto_checkpoint_bytes > 0 &&
            wal_bytes_ > options_.auto_checkpoint_bytes) {
            checkpoint();
        }
    }

    void rollback_txn(std::unique_ptr<StoreTxn> txn) noexcept override {
        txn.reset();
    }

private:
    std::string wal_path() const { return dir_ + "/wal.dat"; }
    std::string checkpoint_path() const { return dir_ + "/checkpoint.dat"; }

    void write_all(std::string_view data) {
        size_t off = 0;
        while (off < data.size()) {
            ssize_t n = ::write(wal_fd_, data.data() + off, data.size() - off);
            if (n < 0) {
                throw Error(ErrorCode::StorageFailure,
                            fmt::format("wal write failed: {}", std::strerror(errno)));
            }
            off += static_cast<size_t>(n);
        }
        wal_bytes_ += data.size();
    }

    void open_wal() {
        wal_fd_ = ::open(wal_path().c_str(), O_WRONLY | O_CREAT | O_APPEND, 0644);
        if (wal_fd_ < 0) {
            throw Error(ErrorCode::StorageFailure,
                        fmt::format("cannot open wal: {}", std::strerror(errno)));
        }
        struct stat st {};
        if (::fstat(wal_fd_, &st) == 0) {
            wal_bytes_ = static_cast<size_t>(st.st_size);
        }
    }

    static std::string read_file(const std::string& path) {
        std::string data;
        int fd = ::open(path.c_str(), O_RDONLY);
        if (fd < 0) return data;
        char buf[1 << 16];
        ssize_t n;
        while ((n = ::read(fd, buf, sizeof buf)) > 0) {
            data.append(buf, static_cast<size_t>(n));
        }
        ::close(fd);
        return data;
    }

    void recover() {
        KvState state;
        if (std::filesystem::exists(checkpoint_path())) {
            std::string raw = read_file(checkpoint_path());
            if (raw.size() < 8) {
                throw Error(ErrorCode::StorageFailure, "corrupt checkpoint header");
            }
            ser::Reader hdr(raw.data(), 8);
            uint32_t len = hdr.u32();
            uint32_t crc = hdr.u32();
            if (raw.size() != 8u + len) {
                throw Error(ErrorCode::StorageFailure, "corrupt checkpoint size");
            }
            std::string payload = raw.substr(8);
            if (ser::crc(payload) != crc) {
                throw Error(ErrorCode::StorageFailure, "corrupt checkpoint crc");
            }
            state = ser::decode_checkpoint(payload);
        }

        // replay the WAL; stop at the first incomplete or corrupt frame
        std::string wal = read_file(wal_path());
        size_t good = 0;
        size_t pos = 0;
        while (pos + 8 <= wal.size()) {
            ser::Reader hdr(wal.data() + pos, 8);
            uint32_t len = hdr.u32();
            uint32_t crc = hdr.u32();
            if (pos + 8 + len > wal.size()) break;
            std::string payload = wal.substr(pos + 8, len);
            if (ser::crc(payload) != crc) break;
            try {
                ser::apply_encoded_ops(state, payload);
            } catch (const Error&) {
                break;
            }
            pos += 8 + len;
            good = pos;
        }
        if (good != wal.size() && std::filesystem::exists(wal_path())) {
            std::filesystem::resize_file(wal_path(), good);
        }
        engine_.set_state(std::move(state));
    }

    void checkpoint_unlocked() {
        std::string payload = ser::encode_checkpoint(engine_.copy_state());
        std::string frame;
        ser::put_u32(frame, static_cast<uint32_t>(payload.size()));
        ser::put_u32(frame, ser::crc(payload));
        frame += payload;

        std::string tmp = checkpoint_path() + ".tmp";
        int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
        if (fd < 0) {
            throw Error(ErrorCode::StorageFailure, "cannot write checkpoint");
        }
        size_t off = 0;
        while (off < frame.size()) {
            ssize_t n = ::write(fd, frame.data() + off, frame.size() - off);
            if (n < 0) {
                ::close(fd);
                throw Error(ErrorCode::StorageFailure, "checkpoint write failed");
            }
            off += static_cast<size_t>(n);
        }
        if (options_.fsync) ::fsync(fd);
        ::close(fd);
        std::filesystem::rename(tmp, checkpoint_path());

        // reset the WAL
        if (wal_fd_ >= 0) ::close(wal_fd_);
        std::filesystem::resize_file(wal_path(), 0);
        wal_bytes_ = 0;
        open_wal();
    }

    Engine engine_;
    std::string dir_;
    FileStoreOptions options_;
    int wal_fd_ = -1;
    size_t wal_bytes_ = 0;
};

} // namespace

std::unique_ptr<Store> make_mem_store() { return std::make_unique<MemStore>(); }

std::unique_ptr<FileStore> make_file_store(const std::string& dir,
                                           const FileStoreOptions& options) {
    return std::make_unique<FileStoreImpl>(dir, options);
}

} // namespace metacat
