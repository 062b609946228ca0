// Copyright 2026 The metacat Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace metacat {

/// Stable wire error codes: 4xx client-side, 5xx server-side.
/// The numeric values are part of the protocol and must not change.
enum class ErrorCode : int {
    MalformedLine = 400,
    UnknownVerb = 401,
    BadName = 402,
    BadCondition = 403,
    NotFound = 404,
    ParentNotFound = 405,
    AlreadyExists = 406,
    DuplicateAttribute = 407,
    NoSuchAttribute = 408,
    NotEmpty = 409,
    CannotRemoveRoot = 410,
    ArityMismatch = 411,
    TypeMismatch = 412,
    DuplicateSubscription = 413,
    NoSuchSubscription = 414,
    RegressingAck = 415,
    SubscriptionExpired = 416,
    OverlappingRoots = 417,
    UnknownNode = 418,
    ReadOnlyReplica = 419,
    ForwardingLoop = 420,
    BadArgument = 421,
    StorageFailure = 500,
    Conflict = 501,
    ApplyFailed = 502,
    OwnerUnreachable = 503,
    MasterUnreachable = 504,
    SnapshotAborted = 505,
    GapDetected = 506,
};

/// Default human-readable message for a code, as sent on the wire.
std::string_view default_message(ErrorCode code);

class Error : public std::runtime_error {
public:
    explicit Error(ErrorCode code)
        : std::runtime_error(std::string(default_message(code))), code_(code) {}
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const { return code_; }
    int wire_code() const { return static_cast<int>(code_); }

private:
    ErrorCode code_;
};

} // namespace metacat
