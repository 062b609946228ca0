// Copyright 2026 The metacat Authors
// SPDX-License-Identifier: Apache-2.0
#include "metacat/error.hpp"

namespace metacat {

std::string_view default_message(ErrorCode code) {
    switch (code) {
    case ErrorCode::MalformedLine: return "malformed line";
    case ErrorCode::UnknownVerb: return "unknown verb";
    case ErrorCode::BadName: return "bad name";
    case ErrorCode::BadCondition: return "bad condition";
    case ErrorCode::NotFound: return "not found";
    case ErrorCode::ParentNotFound: return "parent not found";
    case ErrorCode::AlreadyExists: return "already exists";
    case ErrorCode::DuplicateAttribute: return "duplicate attribute";
    case ErrorCode::NoSuchAttribute: return "no such attribute";
    case ErrorCode::NotEmpty: return "not empty";
    case ErrorCode::CannotRemoveRoot: return "cannot remove root";
    case ErrorCode::ArityMismatch: return "arity mismatch";
    case ErrorCode::TypeMismatch: return "type mismatch";
    case ErrorCode::DuplicateSubscription: return "duplicate subscription";
    case ErrorCode::NoSuchSubscription: return "no such subscription";
    case ErrorCode::RegressingAck: return "regressing ack";
    case ErrorCode::SubscriptionExpired: return "subscription expired";
    case ErrorCode::OverlappingRoots: return "overlapping roots";
    case ErrorCode::UnknownNode: return "unknown node";
    case ErrorCode::ReadOnlyReplica: return "read-only replica";
    case ErrorCode::ForwardingLoop: return "forwarding loop";
    case ErrorCode::BadArgument: return "bad argument";
    case ErrorCode::StorageFailure: return "storage failure";
    case ErrorCode::Conflict: return "conflict";
    case ErrorCode::ApplyFailed: return "apply failed";
    case ErrorCode::OwnerUnreachable: return "owner unreachable";
    case ErrorCode::MasterUnreachable: return "master unreachable";
    case ErrorCode::SnapshotAborted: return "snapshot aborted";
    case ErrorCode::GapDetected: return "gap detected";
    }
    return "unknown error";
}

} // namespace metacat
